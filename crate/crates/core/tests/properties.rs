//! Property tests of the structural invariants: symplecticity, uncertainty
//! preservation, loss composition and commutation, unitary invariance and
//! data-processing monotonicity of the QFI, seeding invariance through the
//! photon dose, and agreement of the two photon-statistics engines.

use gqfi::fock::{dense_fock_probabilities, fock_probabilities};
use gqfi::gaussian::{
    apply, apply_loss, omega, symplectic_eigenvalues, to_complex, SymplecticOp,
};
use gqfi::interferometer::{
    build, n_phi, r1_max, seed_for_target, Circuit, Element, Family, ScenarioConfig,
};
use gqfi::qfi::{qfi_auto, qfi_of_circuit, state_derivative};
use num_complex::Complex64;
use proptest::prelude::*;

fn max_abs_diff(a: &ndarray::Array2<f64>, b: &ndarray::Array2<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn engine(cfg: &ScenarioConfig, phi: f64) -> f64 {
    qfi_of_circuit(&build(cfg).unwrap(), phi).unwrap().value
}

/// A generic mixed two-mode scenario for state-level properties.
fn lossy_state(phi: f64) -> gqfi::gaussian::GaussianState {
    let mut cfg = ScenarioConfig::bare(Family::Yurke);
    cfg.alpha = Complex64::new(0.4, -0.2);
    cfg.beta = Complex64::new(0.1, 0.3);
    cfg.r1 = 0.3;
    cfg.r2 = 0.6;
    cfg.theta = 1.1;
    cfg.t = 0.8;
    build(&cfg).unwrap().output_state(phi).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    // Every constructed operation preserves the symplectic form:
    // F Omega F^T = Omega.
    #[test]
    fn ops_are_symplectic(
        phi in -7.0..7.0f64,
        r in 0.0..3.0f64,
        theta in -3.5..3.5f64,
        eta in 0.0..1.0f64,
    ) {
        let ops = [
            SymplecticOp::phase_shift(phi, 0).embed(2).unwrap(),
            SymplecticOp::two_mode_squeezer(r, theta, (0, 1)).unwrap().embed(2).unwrap(),
            SymplecticOp::beam_splitter(eta, (0, 1)).unwrap().embed(2).unwrap(),
        ];
        let w = omega(2);
        for f in &ops {
            let lhs = f.dot(&w).dot(&f.t());
            prop_assert!(max_abs_diff(&lhs, &w) < 1e-10);
        }
    }

    // Unitaries and loss both preserve the uncertainty relation
    // sigma + (i/2) Omega >= 0, measured as a non-positive defect.
    #[test]
    fn evolution_preserves_uncertainty(
        phi in 0.0..6.0f64,
        r in 0.0..1.5f64,
        theta in -3.0..3.0f64,
        t in 0.05..1.0f64,
    ) {
        let s = lossy_state(phi);
        let after_op = apply(&s, &SymplecticOp::two_mode_squeezer(r, theta, (0, 1)).unwrap()).unwrap();
        let after_loss = apply_loss(&after_op, 0, t).unwrap();
        prop_assert!(s.uncertainty_defect().unwrap() > -1e-9);
        prop_assert!(after_op.uncertainty_defect().unwrap() > -1e-9);
        prop_assert!(after_loss.uncertainty_defect().unwrap() > -1e-9);
    }

    // Purity <=> all symplectic eigenvalues equal 1: lossless outputs are
    // pure, and loss 0 < T < 1 on a non-vacuum mode makes them mixed.
    #[test]
    fn loss_is_the_only_source_of_mixedness(
        r1 in 0.05..1.0f64,
        t in 0.1..0.9f64,
        phi in 0.0..6.0f64,
    ) {
        let mut cfg = ScenarioConfig::bare(Family::Yurke);
        cfg.alpha = Complex64::new(0.5, 0.0);
        cfg.r1 = r1;
        cfg.r2 = 0.4;
        let pure = build(&cfg).unwrap().output_state(phi).unwrap();
        let nus = symplectic_eigenvalues(&to_complex(&pure).unwrap()).unwrap();
        prop_assert!(nus.iter().all(|v| (v - 1.0).abs() < 1e-9));

        cfg.t = t;
        let mixed = build(&cfg).unwrap().output_state(phi).unwrap();
        let nus = symplectic_eigenvalues(&to_complex(&mixed).unwrap()).unwrap();
        prop_assert!(nus.iter().any(|v| *v > 1.0 + 1e-9));
    }

    // Two consecutive losses compose multiplicatively: T1 then T2 = T1*T2.
    #[test]
    fn loss_composes_multiplicatively(
        t1 in 0.05..1.0f64,
        t2 in 0.05..1.0f64,
        phi in 0.0..6.0f64,
    ) {
        let s = lossy_state(phi);
        let seq = apply_loss(&apply_loss(&s, 0, t1).unwrap(), 0, t2).unwrap();
        let once = apply_loss(&s, 0, t1 * t2).unwrap();
        prop_assert!(max_abs_diff(seq.covariance(), once.covariance()) < 1e-12);
        let dd = seq.displacement().iter().zip(once.displacement())
            .map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(dd < 1e-12);
    }

    // Phase shifts commute with loss on the same mode.
    #[test]
    fn phase_commutes_with_loss(
        t in 0.05..1.0f64,
        phi in -6.0..6.0f64,
    ) {
        let s = lossy_state(0.4);
        let shift = SymplecticOp::phase_shift(phi, 0);
        let a = apply_loss(&apply(&s, &shift).unwrap(), 0, t).unwrap();
        let b = apply(&apply_loss(&s, 0, t).unwrap(), &shift).unwrap();
        prop_assert!(max_abs_diff(a.covariance(), b.covariance()) < 1e-12);
    }

    // Appending any phase-independent symplectic op after the phase point
    // leaves the QFI unchanged (unitary invariance).
    #[test]
    fn qfi_is_invariant_under_appended_unitaries(
        r in 0.0..1.2f64,
        theta in -3.0..3.0f64,
        eta_bs in 0.05..0.95f64,
        phi in 0.0..6.0f64,
    ) {
        let mut cfg = ScenarioConfig::bare(Family::Yurke);
        cfg.alpha = Complex64::new(0.4, 0.1);
        cfg.r1 = 0.3;
        cfg.r2 = 0.5;
        cfg.theta = 0.9;
        cfg.t = 0.85;
        let base = build(&cfg).unwrap();
        let mut elements = base.elements().to_vec();
        elements.push(Element::Op(SymplecticOp::two_mode_squeezer(r, theta, (0, 1)).unwrap()));
        elements.push(Element::Op(SymplecticOp::beam_splitter(eta_bs, (0, 1)).unwrap()));
        let extended = Circuit::new(2, base.seeds().to_vec(), elements, vec![0, 1]).unwrap();
        let q0 = qfi_auto(&state_derivative(&base, phi).unwrap()).unwrap().value;
        let q1 = qfi_auto(&state_derivative(&extended, phi).unwrap()).unwrap().value;
        prop_assert!((q0 - q1).abs() <= 1e-7 * q0.abs().max(1.0), "{q0} vs {q1}");
    }

    // Appending extra loss can only destroy information (data processing).
    #[test]
    fn qfi_is_monotone_under_loss(
        eta in 0.1..1.0f64,
        extra in 0.1..1.0f64,
        phi in 0.0..6.0f64,
    ) {
        let mut cfg = ScenarioConfig::bare(Family::Yurke);
        cfg.alpha = Complex64::new(0.5, 0.0);
        cfg.r1 = 0.3;
        cfg.r2 = 0.8;
        cfg.eta = eta;
        let before = engine(&cfg, phi);
        cfg.eta = eta * extra;
        let after = engine(&cfg, phi);
        prop_assert!(after <= before + 1e-9, "loss increased QFI: {before} -> {after}");
    }

    // The QFI depends on the coherent seeds only through the photon dose:
    // alpha-only, beta-only, and mixed seedings of equal N agree.
    #[test]
    fn qfi_depends_on_seeds_only_through_dose(
        n in 0.2..2.0f64,
        r1_frac in 0.2..0.9f64,
        split in 0.1..0.9f64,
        t in 0.4..1.0f64,
        eta in 0.4..1.0f64,
        phi in 0.0..6.0f64,
    ) {
        let r1 = r1_frac * r1_max(n);
        let (c2, s2) = (r1.cosh().powi(2), r1.sinh().powi(2));
        let budget = n - s2; // seed photons left after the squeezer's own dose

        let mut base = ScenarioConfig::bare(Family::Yurke);
        base.r1 = r1;
        base.r2 = 0.7;
        base.theta = 0.4;
        base.t = t;
        base.eta = eta;

        let mut alpha_only = base.clone();
        alpha_only.alpha = seed_for_target(Family::Yurke, n, r1).unwrap();

        let mut beta_only = base.clone();
        beta_only.beta = Complex64::new(0.0, (budget / s2).sqrt());

        // real alpha with imaginary beta keeps the alpha*beta cross term out
        // of the dose, so the budget splits cleanly
        let mut mixed = base.clone();
        mixed.alpha = Complex64::new((split * budget / c2).sqrt(), 0.0);
        mixed.beta = Complex64::new(0.0, ((1.0 - split) * budget / s2).sqrt());

        for cfg in [&alpha_only, &beta_only, &mixed] {
            prop_assert!((n_phi(cfg) - n).abs() < 1e-12);
        }
        let (qa, qb, qm) = (engine(&alpha_only, phi), engine(&beta_only, phi), engine(&mixed, phi));
        let scale = qa.abs().max(1.0);
        prop_assert!((qa - qb).abs() <= 1e-8 * scale, "{qa} vs {qb}");
        prop_assert!((qa - qm).abs() <= 1e-8 * scale, "{qa} vs {qm}");
    }

    // Round trip: the seed chosen for a target dose actually delivers it.
    #[test]
    fn seed_for_target_round_trips(
        n in 0.01..5.0f64,
        r1_frac in 0.0..1.0f64,
    ) {
        let r1 = r1_frac * r1_max(n);
        let mut cfg = ScenarioConfig::bare(Family::Yurke);
        cfg.r1 = r1;
        cfg.alpha = seed_for_target(Family::Yurke, n, r1).unwrap();
        prop_assert!((n_phi(&cfg) - n).abs() < 1e-12);
    }

    // The linear interferometer's QFI is exactly 4 T eta N.
    #[test]
    fn mzi_qfi_is_linear_in_transmissions(
        amp in 0.1..2.0f64,
        t in 0.05..1.0f64,
        eta in 0.05..1.0f64,
        phi in 0.0..6.0f64,
    ) {
        let mut cfg = ScenarioConfig::bare(Family::Mzi);
        cfg.alpha = Complex64::new(amp, 0.0);
        cfg.t = t;
        cfg.eta = eta;
        let want = 4.0 * t * eta * n_phi(&cfg);
        prop_assert!((engine(&cfg, phi) - want).abs() < 1e-10 * want.max(1.0));
    }

    // With perfect detection the two- and three-mode layouts carry the same
    // information, with or without internal loss.
    #[test]
    fn yurke_and_mandel_agree_at_perfect_detection(
        n in 0.05..1.5f64,
        r1_frac in 0.0..1.0f64,
        t in 0.3..1.0f64,
        phi in 0.0..6.0f64,
    ) {
        let r1 = r1_frac * r1_max(n);
        let mut y = ScenarioConfig::bare(Family::Yurke);
        y.r1 = r1;
        y.alpha = seed_for_target(Family::Yurke, n, r1).unwrap();
        y.r2 = 0.6;
        y.t = t;
        let mut m = y.clone();
        m.family = Family::Mandel;
        let (qy, qm) = (engine(&y, phi), engine(&m, phi));
        prop_assert!((qy - qm).abs() <= 1e-8 * qy.abs().max(1.0), "{qy} vs {qm}");
    }
}

proptest! {
    // The dense density-matrix oracle is expensive; a handful of random
    // scenarios at a converged cutoff is enough to pin the conventions.
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    // Parameter ranges stay inside the dense oracle's convergence envelope:
    // at its cutoff cap of 8 the truncation residual must sit below the
    // per-outcome tolerance, which bounds the tolerable photon content.
    #[test]
    fn photon_statistics_engines_agree(
        ar in -0.35..0.35f64,
        br in -0.35..0.35f64,
        r1 in 0.0..0.3f64,
        r2 in 0.0..0.3f64,
        theta in -3.0..3.0f64,
        t in 0.6..1.0f64,
        eta in 0.6..1.0f64,
        phi in 0.0..6.0f64,
    ) {
        let mut cfg = ScenarioConfig::bare(Family::Yurke);
        cfg.alpha = Complex64::new(ar, 0.1);
        cfg.beta = Complex64::new(br, -0.1);
        cfg.r1 = r1;
        cfg.r2 = r2;
        cfg.theta = theta;
        cfg.t = t;
        cfg.eta = eta;
        let circuit = build(&cfg).unwrap();
        let cutoff = 8;
        let gauss = fock_probabilities(&circuit.output_state(phi).unwrap(), cutoff).unwrap();
        let dense = dense_fock_probabilities(&circuit, phi, cutoff).unwrap();
        let diff = gauss
            .probabilities
            .iter()
            .zip(dense.probabilities.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        prop_assert!(diff < 1e-6, "engines disagree by {diff}");
    }
}
