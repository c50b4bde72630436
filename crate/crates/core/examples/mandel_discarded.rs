//! Discarded-mode metrology in the three-mode (Mandel) layout.
//!
//! The Mandel configuration splits the second squeezer's idler onto an
//! auxiliary mode c. If the phase-carrying mode a is discarded and only
//! modes b and c are detected, the Fisher information of the surviving
//! modes plateaus against detection loss instead of decaying linearly:
//! at low eta it approaches 2N rather than 4*eta*N.
//!
//! Run with: cargo run --example mandel_discarded

use gqfi::analytic;
use gqfi::interferometer::Family;
use gqfi::optimize::{optimize_scenario, OptimizeOptions};

fn main() -> gqfi::Result<()> {
    let n = 0.1;
    let opts = OptimizeOptions { r2_cap: 5.0, ..Default::default() };
    println!("dose N = {n}, mode a discarded before detection");
    println!(
        "{:>8} {:>14} {:>14} {:>14} {:>14}",
        "eta", "QFI (opt)", "closed form", "MZI 4*eta*N", "plateau 2N"
    );
    for &eta in &[0.05, 0.15, 0.25, 0.5, 0.7, 0.9] {
        let opt = optimize_scenario(Family::Mandel, n, 1.0, eta, true, &opts)?;
        let closed = analytic::qfi_mandel_no_a(n, opt.r1, opt.r2, eta);
        println!(
            "{:>8.3} {:>14.8} {:>14.8} {:>14.8} {:>14.8}",
            eta,
            opt.qfi,
            closed,
            4.0 * eta * n,
            2.0 * n
        );
        assert!((opt.qfi - closed).abs() <= 1e-3 * closed.max(1e-6));
    }
    let low = optimize_scenario(Family::Mandel, n, 1.0, 0.05, true, &opts)?;
    assert!(
        low.qfi > 4.0 * 0.05 * n,
        "at low eta the discarded-mode information should beat the linear bound"
    );
    println!("\ndiscarding the lossy phase mode trades peak sensitivity for loss immunity");
    Ok(())
}
