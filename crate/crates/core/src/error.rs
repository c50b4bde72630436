use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mode index {mode} out of range for {n_modes}-mode state")]
    ModeOutOfRange { mode: usize, n_modes: usize },
    #[error("repeated mode index {0} in operation target list")]
    RepeatedMode(usize),
    #[error("state must have at least one mode")]
    EmptyState,
    #[error("cannot trace out all modes")]
    TraceOutAll,
    #[error("parameter {name} = {value} outside valid range {range}")]
    ParameterRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("covariance matrix is not symmetric (max asymmetry {0:.3e})")]
    NotSymmetric(f64),
    #[error("matrix is not symplectic (residual {0:.3e})")]
    NotSymplectic(f64),
    #[error("eigenvalue solver failed: {0}")]
    EigenSolver(String),
    #[error("circuit must contain exactly one phase-shift placeholder, found {0}")]
    PhasePlaceholderCount(usize),
    #[error("route requires a pure state (largest symplectic eigenvalue deviation {0:.3e})")]
    NotPure(f64),
    #[error("two-mode route is singular for a pure state (|det A - 1| = {0:.3e}); use the pure or regularized route")]
    TwoModePure(f64),
    #[error("QFI route requires a {expected}-mode state, got {got}")]
    WrongModeCount { expected: usize, got: usize },
    #[error("QFI evaluated to {0:.3e}, below the negative-clamp tolerance; route bug")]
    NegativeQfi(f64),
    #[error("infeasible seeding: r1 = {r1:.6} exceeds r1_max = arcsinh(sqrt(N_phi)) = {r1_max:.6}")]
    InfeasibleSeeding { r1: f64, r1_max: f64 },
    #[error("seeding of mode c is only supported by the Mandel family")]
    GammaSeedUnsupported,
    #[error("objective returned non-finite value at {param} = {value}")]
    NonFiniteObjective { param: &'static str, value: f64 },
    #[error("Fock cutoff {cutoff} exceeds limit {limit}")]
    CutoffExceeded { cutoff: usize, limit: usize },
    #[error("Fock-space dimension overflow: {0} amplitudes requested")]
    DimensionOverflow(usize),
    #[error("finite-difference step {0:.3e} too small; derivative dominated by noise")]
    StepTooSmall(f64),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
