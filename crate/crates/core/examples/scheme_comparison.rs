//! Head-to-head comparison of the detection schemes under external loss.
//!
//! At each detection efficiency eta the optimizer is run for the two-mode
//! (Yurke) readout, the three-mode (Mandel) readout with all modes
//! detected, and the Mandel readout with the phase mode discarded — all at
//! the same dose and the same cap on the second squeeze parameter.
//!
//! Run with: cargo run --example scheme_comparison

use gqfi::interferometer::Family;
use gqfi::optimize::{optimize_scenario, OptimizeOptions};

fn main() -> gqfi::Result<()> {
    let n = 0.1;
    let opts = OptimizeOptions { r2_cap: 1.7, ..Default::default() };
    println!("dose N = {n}, r2 capped at {}", opts.r2_cap);
    println!(
        "{:>8} {:>14} {:>14} {:>14} {:>12}",
        "eta", "yurke", "mandel all", "mandel no-a", "MZI 4*eta*N"
    );
    for &eta in &[0.1, 0.25, 0.5, 0.75, 1.0] {
        let yurke = optimize_scenario(Family::Yurke, n, 1.0, eta, false, &opts)?;
        let all = optimize_scenario(Family::Mandel, n, 1.0, eta, false, &opts)?;
        let no_a = optimize_scenario(Family::Mandel, n, 1.0, eta, true, &opts)?;
        println!(
            "{:>8.3} {:>14.8} {:>14.8} {:>14.8} {:>12.6}",
            eta,
            yurke.qfi,
            all.qfi,
            no_a.qfi,
            4.0 * eta * n
        );
        // detecting every output mode can never be worse than discarding one
        assert!(all.qfi >= no_a.qfi * (1.0 - 1e-9));
    }
    println!("\nthe preferred scheme depends on how lossy the detectors are");
    Ok(())
}
