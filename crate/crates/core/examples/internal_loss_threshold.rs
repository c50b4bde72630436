//! Internal loss and the critical transmission.
//!
//! With loss between the two active elements, squeezing only helps above a
//! critical internal transmission T_C that depends on the dose N. Below it
//! the optimizer puts the whole dose into the coherent seed, and the
//! interferometer degenerates to linear (Mach-Zehnder) sensitivity.
//!
//! Run with: cargo run --example internal_loss_threshold

use gqfi::analytic;
use gqfi::interferometer::Family;
use gqfi::optimize::{optimize_scenario, OptimizeOptions};

fn main() -> gqfi::Result<()> {
    let opts = OptimizeOptions::default();
    for &n in &[0.1, 1.0] {
        let tc = analytic::t_critical(n);
        println!("dose N = {n}: critical transmission T_C = {tc:.6}");
        println!(
            "{:>8} {:>14} {:>14} {:>10} {:>12}",
            "T", "QFI (opt)", "MZI 4TN", "r1", "seeding-only"
        );
        for &t in &[0.5, 0.7, tc - 0.02, tc + 0.02, 0.95, 1.0] {
            let opt = optimize_scenario(Family::Yurke, n, t, 1.0, false, &opts)?;
            let mzi = 4.0 * t * n;
            let seeding_only = analytic::seeding_only_optimal(n, t);
            println!(
                "{:>8.4} {:>14.8} {:>14.8} {:>10.5} {:>12}",
                t, opt.qfi, mzi, opt.r1, seeding_only
            );
            if seeding_only {
                assert!(
                    opt.r1 < 1e-3 && (opt.qfi - mzi).abs() <= 1e-4 * mzi.max(1.0),
                    "below T_C the optimum should be seeding-only at T = {t}"
                );
            } else {
                assert!(
                    opt.qfi > mzi * (1.0 + 1e-6),
                    "above T_C squeezing should beat the linear bound at T = {t}"
                );
            }
        }
        println!();
    }
    println!("squeezing pays off exactly above the critical transmission");
    Ok(())
}
