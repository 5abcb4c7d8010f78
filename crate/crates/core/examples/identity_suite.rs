//! Runs every exact identity up to a bound, then again with one cyclotomic
//! number nudged, to show how failures are reported.

use dhm::suite::{run_identity_suite, run_identity_suite_with};

fn main() -> dhm::Result<()> {
    let report = run_identity_suite(197)?;
    println!(
        "{} checks over primes {:?}: passed = {}",
        report.checks,
        report.primes,
        report.passed()
    );

    let broken = run_identity_suite_with(13, |ctx| ctx.table.numbers[1][3] += 1)?;
    for f in broken.failures.iter().take(5) {
        println!("FAIL q={} {} {}", f.q, f.identity, f.detail);
    }
    println!("... {} failures in total", broken.failures.len());
    Ok(())
}
