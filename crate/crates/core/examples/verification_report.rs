//! Full randomized verification run, printed as a report.
//!
//! Seven seeded suites compare the numeric Gaussian engine against the
//! closed-form Fisher-information expressions, cross-check independent
//! numeric routes, and sanity-check the photon-number statistics. Every
//! suite draws at least 200 random scenarios; the report is reproducible
//! from the seed.
//!
//! Run with: cargo run --example verification_report

use gqfi::verify::run_verification;

fn main() -> gqfi::Result<()> {
    let seed = 42;
    let report = run_verification(seed, 200)?;
    println!("verification seed {seed}\n");
    println!(
        "{:<32} {:>7} {:>9} {:>12} {:>10}",
        "suite", "points", "failures", "max rel err", "tolerance"
    );
    for c in &report.checks {
        println!(
            "{:<32} {:>7} {:>9} {:>12.3e} {:>10.0e}",
            c.name, c.points, c.failures, c.max_rel_err, c.tolerance
        );
    }
    if report.passed() {
        println!("\nall suites passed");
        Ok(())
    } else {
        println!("\nVERIFICATION FAILED");
        std::process::exit(2);
    }
}
