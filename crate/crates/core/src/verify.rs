//! Randomized cross-validation of the closed-form Fisher-information
//! expressions against the numeric engine, and of the engine's routes
//! against each other. Sampling is seeded, so a report is reproducible
//! from its seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analytic;
use crate::error::Result;
use crate::fock::{cfi, fock_probabilities};
use crate::interferometer::{build, r1_max, seed_for_target, Family, ScenarioConfig};
use crate::qfi::{qfi_of_circuit, qfi_two_mode, qfi_vectorized, state_derivative};
use num_complex::Complex64;

/// Outcome of one randomized check: worst errors over all sampled points
/// and the number of points beyond tolerance.
#[derive(Debug, Clone)]
pub struct CheckSummary {
    pub name: &'static str,
    pub points: usize,
    pub failures: usize,
    pub max_abs_err: f64,
    pub max_rel_err: f64,
    pub tolerance: f64,
}

impl CheckSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<CheckSummary>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckSummary::passed)
    }
}

/// Accumulates |got - want| comparisons under a relative tolerance
/// (absolute for values near zero).
struct Tally {
    name: &'static str,
    tolerance: f64,
    points: usize,
    failures: usize,
    max_abs: f64,
    max_rel: f64,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self { name, tolerance, points: 0, failures: 0, max_abs: 0.0, max_rel: 0.0 }
    }

    fn compare(&mut self, got: f64, want: f64) {
        self.points += 1;
        let abs = (got - want).abs();
        let rel = abs / want.abs().max(1.0);
        self.max_abs = self.max_abs.max(abs);
        self.max_rel = self.max_rel.max(rel);
        if !(rel <= self.tolerance) {
            self.failures += 1;
        }
    }

    fn check(&mut self, ok: bool) {
        self.points += 1;
        if !ok {
            self.failures += 1;
        }
    }

    fn finish(self) -> CheckSummary {
        CheckSummary {
            name: self.name,
            points: self.points,
            failures: self.failures,
            max_abs_err: self.max_abs,
            max_rel_err: self.max_rel,
            tolerance: self.tolerance,
        }
    }
}

fn engine(cfg: &ScenarioConfig, phi: f64) -> Result<f64> {
    Ok(qfi_of_circuit(&build(cfg)?, phi)?.value)
}

/// Random dose in a metrologically interesting range.
fn sample_dose(rng: &mut ChaCha8Rng) -> f64 {
    10f64.powf(rng.gen_range(-1.5..0.8))
}

fn check_lossless(rng: &mut ChaCha8Rng, points: usize) -> Result<CheckSummary> {
    let mut t = Tally::new("lossless closed form", 1e-7);
    for _ in 0..points {
        let n = sample_dose(rng);
        let r1 = rng.gen_range(0.0..1.0) * r1_max(n);
        let phi = rng.gen_range(0.1..3.0);
        let mut cfg = ScenarioConfig::bare(Family::Yurke);
        cfg.r1 = r1;
        cfg.alpha = seed_for_target(cfg.family, n, r1)?;
        cfg.r2 = rng.gen_range(0.0..1.5);
        t.compare(engine(&cfg, phi)?, analytic::qfi_lossless(n, r1));
    }
    Ok(t.finish())
}

fn check_internal(rng: &mut ChaCha8Rng, points: usize) -> Result<CheckSummary> {
    let mut t = Tally::new("internal-loss closed form", 1e-7);
    for _ in 0..points {
        let n = sample_dose(rng);
        let r1 = rng.gen_range(0.0..1.0) * r1_max(n);
        let mut cfg = ScenarioConfig::bare(Family::Yurke);
        cfg.r1 = r1;
        cfg.alpha = seed_for_target(cfg.family, n, r1)?;
        cfg.t = rng.gen_range(0.05..1.0);
        cfg.r2 = rng.gen_range(0.0..2.0);
        cfg.theta = rng.gen_range(-3.0..3.0);
        t.compare(
            engine(&cfg, rng.gen_range(0.0..6.0))?,
            analytic::qfi_internal(n, r1, cfg.t),
        );
    }
    Ok(t.finish())
}

fn check_yurke_external(rng: &mut ChaCha8Rng, points: usize) -> Result<CheckSummary> {
    let mut t = Tally::new("external-loss closed form", 1e-6);
    for _ in 0..points {
        let n = sample_dose(rng);
        let r1 = rng.gen_range(0.0..1.0) * r1_max(n);
        let mut cfg = ScenarioConfig::bare(Family::Yurke);
        cfg.r1 = r1;
        cfg.alpha = seed_for_target(cfg.family, n, r1)?;
        cfg.r2 = rng.gen_range(0.0..2.5);
        cfg.theta = rng.gen_range(-3.0..3.0);
        cfg.eta = rng.gen_range(0.05..1.0);
        let phi = rng.gen_range(0.0..6.0);
        t.compare(
            engine(&cfg, phi)?,
            analytic::qfi_yurke_external(n, r1, cfg.r2, phi + cfg.theta, cfg.eta),
        );
    }
    Ok(t.finish())
}

fn check_mandel(rng: &mut ChaCha8Rng, points: usize, discard_a: bool) -> Result<CheckSummary> {
    let name = if discard_a {
        "discarded-mode closed form"
    } else {
        "all-modes closed form"
    };
    let mut t = Tally::new(name, 1e-6);
    for _ in 0..points {
        let n = sample_dose(rng);
        let r1 = rng.gen_range(0.0..1.0) * r1_max(n);
        let mut cfg = ScenarioConfig::bare(Family::Mandel);
        cfg.r1 = r1;
        cfg.alpha = seed_for_target(cfg.family, n, r1)?;
        cfg.r2 = rng.gen_range(0.0..2.0);
        cfg.theta = rng.gen_range(-3.0..3.0);
        cfg.eta = rng.gen_range(0.05..1.0);
        cfg.discard_a = discard_a;
        if discard_a {
            // the discarded-mode value is also blind to a mode-c seed
            cfg.gamma = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
        }
        let want = if discard_a {
            analytic::qfi_mandel_no_a(n, r1, cfg.r2, cfg.eta)
        } else {
            analytic::qfi_mandel_all(n, r1, cfg.r2, cfg.eta)
        };
        t.compare(engine(&cfg, rng.gen_range(0.0..6.0))?, want);
    }
    Ok(t.finish())
}

fn check_route_agreement(rng: &mut ChaCha8Rng, points: usize) -> Result<CheckSummary> {
    let mut t = Tally::new("two-mode route vs dense route", 1e-7);
    for _ in 0..points {
        let n = sample_dose(rng);
        let r1 = rng.gen_range(0.0..1.0) * r1_max(n);
        let mut cfg = ScenarioConfig::bare(Family::Yurke);
        cfg.r1 = r1;
        cfg.alpha = seed_for_target(cfg.family, n, r1)?;
        cfg.beta = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
        cfg.r2 = rng.gen_range(0.0..2.0);
        cfg.theta = rng.gen_range(-3.0..3.0);
        cfg.t = rng.gen_range(0.3..1.0);
        cfg.eta = rng.gen_range(0.3..0.99);
        let pair = state_derivative(&build(&cfg)?, rng.gen_range(0.0..6.0))?;
        let closed = qfi_two_mode(&pair)?.value;
        let dense = qfi_vectorized(&pair)?.value;
        t.compare(closed, dense);
    }
    Ok(t.finish())
}

fn check_photon_statistics(rng: &mut ChaCha8Rng, points: usize) -> Result<CheckSummary> {
    let mut t = Tally::new("photon statistics sanity", 1e-9);
    for i in 0..points {
        let mut cfg = ScenarioConfig::bare(Family::Yurke);
        cfg.r1 = rng.gen_range(0.0..0.5);
        cfg.alpha = Complex64::new(rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6));
        cfg.r2 = rng.gen_range(0.0..0.5);
        cfg.theta = rng.gen_range(-3.0..3.0);
        cfg.t = rng.gen_range(0.5..1.0);
        cfg.eta = rng.gen_range(0.5..1.0);
        let circuit = build(&cfg)?;
        let phi = rng.gen_range(0.0..6.0);
        let dist = fock_probabilities(&circuit.output_state(phi)?, 10)?;
        let nonneg = dist.probabilities.iter().all(|&p| p > -1e-12);
        t.check(nonneg && dist.captured_mass > 0.99 && dist.captured_mass < 1.0 + 1e-9);
        // measured information can never beat the quantum bound
        if i % 20 == 0 {
            let c = cfi(&circuit, phi, 10, 1e-4)?;
            let q = qfi_of_circuit(&circuit, phi)?.value;
            t.check(c.value <= q * (1.0 + 1e-6) + 1e-9);
        }
    }
    Ok(t.finish())
}

/// Runs every randomized suite with `points` samples each (at least 200),
/// deterministically derived from `seed`.
pub fn run_verification(seed: u64, points: usize) -> Result<VerifyReport> {
    let points = points.max(200);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = vec![
        check_lossless(&mut rng, points)?,
        check_internal(&mut rng, points)?,
        check_yurke_external(&mut rng, points)?,
        check_mandel(&mut rng, points, true)?,
        check_mandel(&mut rng, points, false)?,
        check_route_agreement(&mut rng, points)?,
        check_photon_statistics(&mut rng, points)?,
    ];
    Ok(VerifyReport { seed, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn randomized_suites_pass_and_are_reproducible() {
        let a = run_verification(7, 200).unwrap();
        for c in &a.checks {
            assert!(
                c.passed(),
                "{}: {}/{} beyond tolerance (max rel {:.3e})",
                c.name,
                c.failures,
                c.points,
                c.max_rel_err
            );
            assert!(c.points >= 200);
        }
        let b = run_verification(7, 200).unwrap();
        for (x, y) in a.checks.iter().zip(&b.checks) {
            assert_eq!(x.max_rel_err.to_bits(), y.max_rel_err.to_bits());
        }
    }
}
