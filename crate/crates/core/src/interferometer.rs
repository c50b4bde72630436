//! The three interferometer circuits: Mach-Zehnder (linear), Yurke, and
//! Mandel, with coherent seeding, internal transmission T between the two
//! active elements, and external transmission eta before detection.
//!
//! Mode ordering: a = 0 (the mode that acquires the phase), b = 1, and for
//! the Mandel family c = 2.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{
    self, apply, apply_loss, displace, trace_out, vacuum_state, GaussianState, SymplecticOp,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Mzi,
    Yurke,
    Mandel,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Mzi => "mzi",
            Family::Yurke => "yurke",
            Family::Mandel => "mandel",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mzi" => Ok(Family::Mzi),
            "yurke" => Ok(Family::Yurke),
            "mandel" => Ok(Family::Mandel),
            other => Err(Error::Config(format!("unknown family '{other}'"))),
        }
    }
}

/// Full parameterization of one interferometer scenario.
///
/// The squeeze parameters are zeta1 = r1 (real by convention) and
/// zeta2 = r2 e^{i theta}. `t` is the internal transmission, `eta` the
/// external one. `gamma` seeds mode c and is Mandel-only.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub family: Family,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub r1: f64,
    pub r2: f64,
    pub theta: f64,
    pub t: f64,
    pub eta: f64,
    pub discard_a: bool,
    pub phi: f64,
}

impl ScenarioConfig {
    /// Unseeded lossless template for the given family.
    pub fn bare(family: Family) -> Self {
        Self {
            family,
            alpha: Complex64::new(0.0, 0.0),
            beta: Complex64::new(0.0, 0.0),
            gamma: Complex64::new(0.0, 0.0),
            r1: 0.0,
            r2: 0.0,
            theta: 0.0,
            t: 1.0,
            eta: 1.0,
            discard_a: false,
            phi: 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.r1 < 0.0 {
            return Err(Error::ParameterRange { name: "r1", value: self.r1, range: "[0, inf)" });
        }
        if self.r2 < 0.0 {
            return Err(Error::ParameterRange { name: "r2", value: self.r2, range: "[0, inf)" });
        }
        if !(0.0..=1.0).contains(&self.t) {
            return Err(Error::ParameterRange { name: "T", value: self.t, range: "[0, 1]" });
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(Error::ParameterRange { name: "eta", value: self.eta, range: "[0, 1]" });
        }
        if self.family != Family::Mandel && self.gamma.norm() > 0.0 {
            return Err(Error::GammaSeedUnsupported);
        }
        Ok(())
    }
}

/// One step of a circuit. `PhasePoint` marks where the unknown phase phi is
/// imparted; its value is supplied at evaluation time. Mode indices in a
/// `TraceOut` refer to the state as it exists at that step.
#[derive(Debug, Clone)]
pub enum Element {
    Op(SymplecticOp),
    Loss { mode: usize, transmission: f64 },
    PhasePoint { mode: usize },
    TraceOut { modes: Vec<usize> },
}

/// An ordered list of Gaussian operations with initial coherent seeds and
/// exactly one phase placeholder.
#[derive(Debug, Clone)]
pub struct Circuit {
    n_modes: usize,
    seeds: Vec<Complex64>,
    elements: Vec<Element>,
    detected_modes: Vec<usize>,
}

impl Circuit {
    pub fn new(
        n_modes: usize,
        seeds: Vec<Complex64>,
        elements: Vec<Element>,
        detected_modes: Vec<usize>,
    ) -> Result<Self> {
        let placeholders = elements
            .iter()
            .filter(|e| matches!(e, Element::PhasePoint { .. }))
            .count();
        if placeholders != 1 {
            return Err(Error::PhasePlaceholderCount(placeholders));
        }
        for e in &elements {
            if let Element::Loss { transmission, .. } = e {
                if !(0.0..=1.0).contains(transmission) {
                    return Err(Error::ParameterRange {
                        name: "transmission",
                        value: *transmission,
                        range: "[0, 1]",
                    });
                }
            }
        }
        Ok(Self { n_modes, seeds, elements, detected_modes })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn seeds(&self) -> &[Complex64] {
        &self.seeds
    }

    pub fn detected_modes(&self) -> &[usize] {
        &self.detected_modes
    }

    /// Initial state: coherent seed in each mode.
    pub fn input_state(&self) -> Result<GaussianState> {
        let mut s = vacuum_state(self.n_modes)?;
        for (m, &amp) in self.seeds.iter().enumerate() {
            s = displace(&s, m, amp)?;
        }
        Ok(s)
    }

    /// Evolves the input through every element with the phase set to `phi`.
    pub fn output_state(&self, phi: f64) -> Result<GaussianState> {
        let mut s = self.input_state()?;
        for e in &self.elements {
            s = match e {
                Element::Op(op) => apply(&s, op)?,
                Element::Loss { mode, transmission } => apply_loss(&s, *mode, *transmission)?,
                Element::PhasePoint { mode } => {
                    apply(&s, &SymplecticOp::phase_shift(phi, *mode))?
                }
                Element::TraceOut { modes } => trace_out(&s, modes)?,
            };
        }
        Ok(s)
    }

    /// State of mode a immediately after the phase shift; the photons counted
    /// here are the ones that interrogated the sample.
    pub fn photons_through_sample(&self, phi: f64) -> Result<f64> {
        let mut s = self.input_state()?;
        for e in &self.elements {
            match e {
                Element::Op(op) => s = apply(&s, op)?,
                Element::Loss { mode, transmission } => s = apply_loss(&s, *mode, *transmission)?,
                Element::PhasePoint { mode } => {
                    s = apply(&s, &SymplecticOp::phase_shift(phi, *mode))?;
                    return gaussian::mean_photon_number(&s, *mode);
                }
                Element::TraceOut { modes } => s = trace_out(&s, modes)?,
            }
        }
        unreachable!("circuit invariant guarantees one phase placeholder")
    }
}

/// Builds the circuit of the configured family.
///
/// MZI: seed, BS(1/2), phase on a, loss T on both arms, BS(1/2), loss eta.
/// Yurke: seed, TMS(r1), phase on a, loss T on both arms, TMS(r2, theta),
/// loss eta. Mandel: seed a/b/c, TMS(r1) on (a, b), phase on a, loss T on
/// a and b, TMS(r2, theta) on (a, c), BS(1/2) on (b, c), then loss eta on
/// every detected mode; with `discard_a` mode a is traced out first.
pub fn build(config: &ScenarioConfig) -> Result<Circuit> {
    config.validate()?;
    let mut el = Vec::new();
    match config.family {
        Family::Mzi => {
            el.push(Element::Op(SymplecticOp::beam_splitter(0.5, (0, 1))?));
            el.push(Element::PhasePoint { mode: 0 });
            el.push(Element::Loss { mode: 0, transmission: config.t });
            el.push(Element::Loss { mode: 1, transmission: config.t });
            el.push(Element::Op(SymplecticOp::beam_splitter(0.5, (0, 1))?));
            el.push(Element::Loss { mode: 0, transmission: config.eta });
            el.push(Element::Loss { mode: 1, transmission: config.eta });
            Circuit::new(2, vec![config.alpha, config.beta], el, vec![0, 1])
        }
        Family::Yurke => {
            el.push(Element::Op(SymplecticOp::two_mode_squeezer(config.r1, 0.0, (0, 1))?));
            el.push(Element::PhasePoint { mode: 0 });
            el.push(Element::Loss { mode: 0, transmission: config.t });
            el.push(Element::Loss { mode: 1, transmission: config.t });
            el.push(Element::Op(SymplecticOp::two_mode_squeezer(
                config.r2,
                config.theta,
                (0, 1),
            )?));
            el.push(Element::Loss { mode: 0, transmission: config.eta });
            el.push(Element::Loss { mode: 1, transmission: config.eta });
            Circuit::new(2, vec![config.alpha, config.beta], el, vec![0, 1])
        }
        Family::Mandel => {
            el.push(Element::Op(SymplecticOp::two_mode_squeezer(config.r1, 0.0, (0, 1))?));
            el.push(Element::PhasePoint { mode: 0 });
            el.push(Element::Loss { mode: 0, transmission: config.t });
            el.push(Element::Loss { mode: 1, transmission: config.t });
            el.push(Element::Op(SymplecticOp::two_mode_squeezer(
                config.r2,
                config.theta,
                (0, 2),
            )?));
            el.push(Element::Op(SymplecticOp::beam_splitter(0.5, (1, 2))?));
            if config.discard_a {
                el.push(Element::TraceOut { modes: vec![0] });
                // after the trace-out, b and c sit at indices 0 and 1
                el.push(Element::Loss { mode: 0, transmission: config.eta });
                el.push(Element::Loss { mode: 1, transmission: config.eta });
                Circuit::new(3, vec![config.alpha, config.beta, config.gamma], el, vec![0, 1])
            } else {
                for m in 0..3 {
                    el.push(Element::Loss { mode: m, transmission: config.eta });
                }
                Circuit::new(3, vec![config.alpha, config.beta, config.gamma], el, vec![0, 1, 2])
            }
        }
    }
}

/// Mean photon number through the sample for the nonlinear families:
/// cosh^2(r1)|alpha|^2 + sinh^2(r1)(|beta|^2 + 1)
/// - 2 cosh(r1) sinh(r1) Re(alpha beta).
///
/// For the MZI the sample sits after a 50:50 splitter instead, giving
/// |alpha + beta|^2 / 2.
pub fn n_phi(config: &ScenarioConfig) -> f64 {
    match config.family {
        Family::Mzi => 0.5 * (config.alpha + config.beta).norm_sqr(),
        Family::Yurke | Family::Mandel => {
            let (c, s) = (config.r1.cosh(), config.r1.sinh());
            c * c * config.alpha.norm_sqr()
                + s * s * (config.beta.norm_sqr() + 1.0)
                - 2.0 * c * s * (config.alpha * config.beta).re
        }
    }
}

/// Largest feasible r1 at a fixed photon dose: arcsinh(sqrt(N_phi)).
pub fn r1_max(n_phi_target: f64) -> f64 {
    n_phi_target.sqrt().asinh()
}

/// Coherent seed on mode a alone that fills the dose N_phi at squeezing r1.
/// For the squeezed families |alpha|^2 = (N_phi - sinh^2 r1) / cosh^2 r1;
/// the Mach-Zehnder sees only half the seed in its sample arm, so there
/// |alpha|^2 = 2 N_phi. Real phase either way.
pub fn seed_for_target(family: Family, n_phi_target: f64, r1: f64) -> Result<Complex64> {
    if family == Family::Mzi {
        return Ok(Complex64::new((2.0 * n_phi_target).sqrt(), 0.0));
    }
    let s2 = r1.sinh().powi(2);
    if s2 > n_phi_target + 1e-15 {
        return Err(Error::InfeasibleSeeding { r1, r1_max: r1_max(n_phi_target) });
    }
    let mag2 = ((n_phi_target - s2) / r1.cosh().powi(2)).max(0.0);
    Ok(Complex64::new(mag2.sqrt(), 0.0))
}
