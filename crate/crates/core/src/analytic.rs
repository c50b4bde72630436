//! Closed-form quantum Fisher information benchmarks for the seeded
//! interferometers, plus the critical transmissions and optimal parameters
//! they imply. Every formula is cross-checked here against the numeric
//! Gaussian engine, and again at scale in the verification suite.
//!
//! Throughout, `n_phi` is the mean photon number through the sample, `r1`
//! and `r2` the two squeeze magnitudes, `t` the internal and `eta` the
//! external transmission, and `phase` the total phi + theta.

use crate::error::{Error, Result};

/// Guard for removable singularities in ratio-form expressions.
const SINGULAR_TOL: f64 = 1e-9;

/// Lossless seeded QFI at dose `n_phi` and squeezer setting `r1`:
/// 4 cosh^2(r1) N + 4 sinh^2(r1) N - 4 sinh^4(r1); monotone in r1 up to
/// the all-squeezing point sinh^2(r1) = N.
pub fn qfi_lossless(n_phi: f64, r1: f64) -> f64 {
    let s2 = r1.sinh().powi(2);
    let c2 = r1.cosh().powi(2);
    4.0 * c2 * n_phi + 4.0 * s2 * n_phi - 4.0 * s2 * s2
}

/// The lossless optimum 4 N (N + 1), reached when the entire dose comes
/// from the squeezer.
pub fn qfi_max_lossless(n_phi: f64) -> f64 {
    4.0 * n_phi * (n_phi + 1.0)
}

/// Seeded QFI with internal transmission `t` only (eta = 1); identical for
/// both nonlinear families and independent of r2, theta, and phi:
///
///   T^2 sinh^2(2 r1) / (1 + 2 T (1 - T) sinh^2 r1)
///   + 4 T (1 + 2 T sinh^2 r1) (N - sinh^2 r1) / (1 + 4 T (1 - T) sinh^2 r1).
pub fn qfi_internal(n_phi: f64, r1: f64, t: f64) -> f64 {
    let s2 = r1.sinh().powi(2);
    let term1 = t * t * (2.0 * r1).sinh().powi(2) / (1.0 + 2.0 * t * (1.0 - t) * s2);
    let term2 =
        4.0 * t * (1.0 + 2.0 * t * s2) * (n_phi - s2) / (1.0 + 4.0 * t * (1.0 - t) * s2);
    term1 + term2
}

/// True when the internally lossy QFI is maximized by r1 = 0 (all seeding):
/// N_phi <= (1 - T) / (2 T (2 T - 1)). The all-coherent value is then
/// 4 T N_phi, matching the lossy linear interferometer.
pub fn seeding_only_optimal(n_phi: f64, t: f64) -> bool {
    if t <= 0.5 {
        return true;
    }
    n_phi <= (1.0 - t) / (2.0 * t * (2.0 * t - 1.0))
}

/// Internal transmission at which nonlinearity stops helping:
/// T_C = ((2N - 1) / (8N)) (1 +/- sqrt(1 + 16 N / (2N - 1)^2)),
/// the + root above N = 1/2 and the - root below; the removable point
/// N = 1/2 has the limit sqrt(2)/2.
pub fn t_critical(n_phi: f64) -> f64 {
    let m = 2.0 * n_phi - 1.0;
    if m.abs() < 1e-12 {
        return std::f64::consts::FRAC_1_SQRT_2;
    }
    let pref = m / (8.0 * n_phi);
    let root = (1.0 + 16.0 * n_phi / (m * m)).sqrt();
    if n_phi > 0.5 {
        pref * (1.0 + root)
    } else {
        pref * (1.0 - root)
    }
}

/// gamma = cosh(2 r1) cosh(2 r2) + cos(phase) sinh(2 r1) sinh(2 r2), the
/// output-energy factor of the two-squeezer interferometer; >= 1 always,
/// with equality exactly at phase = pi, r1 = r2.
pub fn gamma_factor(r1: f64, r2: f64, phase: f64) -> f64 {
    (2.0 * r1).cosh() * (2.0 * r2).cosh() + phase.cos() * (2.0 * r1).sinh() * (2.0 * r2).sinh()
}

/// Seeded two-squeezer QFI with external transmission `eta` only (T = 1),
/// as a function of the total phase. Depends on the seeds only through the
/// dose. At the gamma = 1 point the first ratio is evaluated as its limit
/// along the phase direction, eta (2 - eta) sinh^2(2 r1), the relevant one
/// for phase optimization.
pub fn qfi_yurke_external(n_phi: f64, r1: f64, r2: f64, phase: f64, eta: f64) -> f64 {
    let g = gamma_factor(r1, r2, phase);
    let s1 = (2.0 * r1).sinh().powi(2);
    let term1 = if g - 1.0 < SINGULAR_TOL {
        eta * (2.0 - eta) * s1
    } else {
        let num = eta
            * s1
            * (2.0 * eta * g
                + (1.0 - eta)
                    * ((2.0 * r2).cosh().powi(2) - (2.0 * phase).cos() * (2.0 * r2).sinh().powi(2))
                - (eta + 1.0));
        num / (2.0 * (g - 1.0) * (eta * (1.0 - eta) * (g - 1.0) + 1.0))
    };
    let term2 = 4.0
        * eta
        * (eta * (2.0 * r1).cosh() + (1.0 - eta) * (2.0 * r2).cosh())
        * (n_phi - r1.sinh().powi(2))
        / (1.0 + 2.0 * eta * (1.0 - eta) * (g - 1.0));
    term1 + term2
}

/// Large-r2 optimal total phase of the externally lossy unseeded scheme:
/// cos(phase0) = -2 sqrt(N (N+1)) / (2N + 1)
///              + (1 - eta) sqrt(N (N+1)) / (2 (2N+1)^2 eta cosh^2 r2),
/// valid to order e^{-4 r2} / eta^2. The first solution lies in
/// [pi/2, pi]; the second is its reflection 2 pi - phase0.
pub fn phase_opt_yurke(n_phi: f64, r2: f64, eta: f64) -> (f64, f64) {
    let root = (n_phi * (n_phi + 1.0)).sqrt();
    let c = -2.0 * root / (2.0 * n_phi + 1.0)
        + (1.0 - eta) * root / (2.0 * (2.0 * n_phi + 1.0).powi(2) * eta * r2.cosh().powi(2));
    let p = c.clamp(-1.0, 1.0).acos();
    (p, 2.0 * std::f64::consts::PI - p)
}

/// Large-r2 optimum of the externally lossy unseeded two-squeezer scheme:
/// I_Qmax (1 - (1 - eta)(2N + 1) / (2 eta cosh^2 r2)).
pub fn qfi_yurke_external_opt(n_phi: f64, r2: f64, eta: f64) -> f64 {
    qfi_max_lossless(n_phi)
        * (1.0 - (1.0 - eta) * (2.0 * n_phi + 1.0) / (2.0 * eta * r2.cosh().powi(2)))
}

/// Lossless limit of the optimal total phase:
/// cos(phase0) = -2 sqrt(N (N+1)) / (2N + 1).
pub fn phase_opt_lossless(n_phi: f64) -> f64 {
    (-2.0 * (n_phi * (n_phi + 1.0)).sqrt() / (2.0 * n_phi + 1.0)).acos()
}

/// QFI of the three-mode scheme with mode a discarded before detection and
/// external transmission `eta` (T = 1); independent of all phases and of
/// the mode-c seed:
///
///   eta sinh^2(2 r1) sinh^2 r2 / (cosh^2 r1 cosh^2 r2 - 1)
///   + 4 eta sinh^2 r2 (1 - eta + eta cosh 2 r1)(N - sinh^2 r1)
///     / (1 + 2 eta (cosh^2 r1 cosh^2 r2 - 1)).
pub fn qfi_mandel_no_a(n_phi: f64, r1: f64, r2: f64, eta: f64) -> f64 {
    let cc = r1.cosh().powi(2) * r2.cosh().powi(2);
    let s2 = r2.sinh().powi(2);
    let term1 = if cc - 1.0 < SINGULAR_TOL {
        0.0
    } else {
        eta * (2.0 * r1).sinh().powi(2) * s2 / (cc - 1.0)
    };
    let term2 = 4.0 * eta * s2 * (1.0 - eta + eta * (2.0 * r1).cosh())
        * (n_phi - r1.sinh().powi(2))
        / (1.0 + 2.0 * eta * (cc - 1.0));
    term1 + term2
}

/// Crossover transmission of the discarded-a scheme: the dose gradient in
/// r1 flips sign at eta_0. Exact form:
///
///   eta_0 = (W + sqrt(W^2 + 16 (N+1) c1^2 c2^2 (c1^2 c2^2 - 1)^2
///            (c1^2 c2^2 - 2))) / (8 (N+1) c2^2 (c1^2 c2^2 - 1)^2),
///   W = 2 (N+1) c2^2 (c1^2 c2^2 - 1)^2 - 4 c1^4 c2^4 + 4 c1^2 c2^2,
///
/// with c_i = cosh r_i. `asymptotic` substitutes the large-r2 expansion
/// 1/2 - 1 / (2 (N+1) cosh^2 r2), which drops the r1 dependence.
pub fn eta_crossover(n_phi: f64, r1: f64, r2: f64, asymptotic: bool) -> Result<f64> {
    let c2sq = r2.cosh().powi(2);
    if asymptotic {
        return Ok(0.5 - 1.0 / (2.0 * (n_phi + 1.0) * c2sq));
    }
    let cc = r1.cosh().powi(2) * c2sq;
    let q = (cc - 1.0).powi(2);
    if q < SINGULAR_TOL {
        return Err(Error::Config(
            "eta crossover undefined at r1 = r2 = 0".into(),
        ));
    }
    let w = 2.0 * (n_phi + 1.0) * c2sq * q - 4.0 * cc * cc + 4.0 * cc;
    let disc = w * w + 16.0 * (n_phi + 1.0) * cc * q * (cc - 2.0);
    Ok((w + disc.max(0.0).sqrt()) / (8.0 * (n_phi + 1.0) * c2sq * q))
}

/// Optimal discarded-a QFI above the crossover (all squeezing,
/// sinh^2 r1 = N): 4 eta N (N+1) sinh^2 r2 / ((N+1) cosh^2 r2 - 1).
pub fn qfi_mandel_no_a_squeezing(n_phi: f64, r2: f64, eta: f64) -> f64 {
    4.0 * eta * n_phi * (n_phi + 1.0) * r2.sinh().powi(2)
        / ((n_phi + 1.0) * r2.cosh().powi(2) - 1.0)
}

/// Optimal discarded-a QFI below the crossover (all seeding, r1 = 0):
/// 4 eta N sinh^2 r2 / (1 + 2 eta sinh^2 r2).
pub fn qfi_mandel_no_a_seeding(n_phi: f64, r2: f64, eta: f64) -> f64 {
    let s2 = r2.sinh().powi(2);
    4.0 * eta * n_phi * s2 / (1.0 + 2.0 * eta * s2)
}

/// QFI of the three-mode scheme with every mode detected, external
/// transmission `eta` (T = 1); independent of all phases and of the
/// mode-c seed:
///
///   eta sinh^2(2 r1) (sinh^2 r2 (1 - eta)(1 + 2 eta (cc - 1)) + eta (cc - 1))
///     / ((cc - 1)(1 + 2 eta (1 - eta)(cc - 1)))
///   + 4 eta (1 - eta + eta cosh 2 r1)(eta + (1 - eta) cosh 2 r2)(N - sinh^2 r1)
///     / (1 + 4 eta (1 - eta)(cc - 1)),
///
/// with cc = cosh^2 r1 cosh^2 r2. The squeezing term was reconstructed by
/// exact rational interpolation of the Gaussian engine in eta and checked
/// against all its limits (eta = 1, r2 = 0, eta -> 0, and the interior r2
/// stationary point).
pub fn qfi_mandel_all(n_phi: f64, r1: f64, r2: f64, eta: f64) -> f64 {
    let cc = r1.cosh().powi(2) * r2.cosh().powi(2);
    let k = cc - 1.0;
    let term1 = if k < SINGULAR_TOL {
        0.0
    } else {
        let s2 = r2.sinh().powi(2);
        eta * (2.0 * r1).sinh().powi(2)
            * (s2 * (1.0 - eta) * (1.0 + 2.0 * eta * k) + eta * k)
            / (k * (1.0 + 2.0 * eta * (1.0 - eta) * k))
    };
    let term2 = 4.0 * eta * (1.0 - eta + eta * (2.0 * r1).cosh())
        * (eta + (1.0 - eta) * (2.0 * r2).cosh())
        * (n_phi - r1.sinh().powi(2))
        / (1.0 + 4.0 * eta * (1.0 - eta) * (cc - 1.0));
    term1 + term2
}

/// All-seeding (r1 = 0) value of the all-modes scheme:
/// 4 N eta (1 + 2 (1 - eta) sinh^2 r2) / (1 + 4 eta (1 - eta) sinh^2 r2);
/// monotone in r2 with sign (1 - 2 eta), so r2 -> infinity is optimal
/// below eta = 1/2 and r2 = 0 above it.
pub fn qfi_mandel_all_seeding(n_phi: f64, r2: f64, eta: f64) -> f64 {
    let s2 = r2.sinh().powi(2);
    4.0 * n_phi * eta * (1.0 + 2.0 * (1.0 - eta) * s2) / (1.0 + 4.0 * eta * (1.0 - eta) * s2)
}

/// True when the all-modes scheme at full squeezing prefers r2 = 0:
/// N > (2 (1 - 2 eta (1 - eta)) + sqrt(2 (1 - 2 eta (1 - eta))))
///     / (2 eta (2 eta - 1)) - 1. Only meaningful for eta > 1/2.
pub fn r2_zero_optimal(n_phi: f64, eta: f64) -> bool {
    if eta <= 0.5 {
        return false;
    }
    let u = 1.0 - 2.0 * eta * (1.0 - eta);
    n_phi > (2.0 * u + (2.0 * u).sqrt()) / (2.0 * eta * (2.0 * eta - 1.0)) - 1.0
}

/// Optimal (r2, QFI) of the all-modes scheme at full squeezing
/// (sinh^2 r1 = N) for eta > 1/2: either r2 = 0 with
/// 4 eta^2 N (N+1) / (1 + 2 N eta (1 - eta)), or the interior stationary
/// point cosh^2 r2 = (2 u + sqrt(2 u)) / (2 eta (2 eta - 1)(1 + N)),
/// u = 1 - 2 eta (1 - eta).
pub fn r2_opt_mandel_all(n_phi: f64, eta: f64) -> Result<(f64, f64)> {
    if eta <= 0.5 {
        return Err(Error::ParameterRange {
            name: "eta",
            value: eta,
            range: "(1/2, 1]",
        });
    }
    if r2_zero_optimal(n_phi, eta) {
        let q = 4.0 * eta * eta * n_phi * (n_phi + 1.0) / (1.0 + 2.0 * n_phi * eta * (1.0 - eta));
        return Ok((0.0, q));
    }
    let u = 1.0 - 2.0 * eta * (1.0 - eta);
    let c2sq = (2.0 * u + (2.0 * u).sqrt()) / (2.0 * eta * (2.0 * eta - 1.0) * (1.0 + n_phi));
    let r2 = c2sq.sqrt().acosh();
    let q = 4.0 * eta * n_phi
        * (1.0
            + eta * n_phi
                * (1.0
                    - 2.0 * (1.0 - eta) * (2.0 * eta - 1.0)
                    - 2.0 * (1.0 - eta) * (2.0 - 4.0 * eta * (1.0 - eta)).sqrt()));
    Ok((r2, q))
}

/// Equal-squeezer (r1 = r2 = r) two-squeezer QFI at the optimal total
/// phase pi: eta sinh^2(2 r) (2 - eta).
pub fn qfi_equal_squeezing(r: f64, eta: f64) -> f64 {
    eta * (2.0 * r).sinh().powi(2) * (2.0 - eta)
}

/// Unseeded optimum of the equal-squeezer scheme at dose N:
/// eta (2 - eta) 4 N (N + 1).
pub fn qfi_equal_squeezing_max(n_phi: f64, eta: f64) -> f64 {
    eta * (2.0 - eta) * qfi_max_lossless(n_phi)
}
