//! The randomized invariant suite behind `mimocov validate`.
//!
//!     cargo run --release --example validate_suite

use mimo_covariance::validate::{format_table, run_validation, ValidationOptions};

fn main() -> mimo_covariance::Result<()> {
    let outcomes = run_validation(ValidationOptions { seed: 11, draws: 200 })?;
    print!("{}", format_table(&outcomes));
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} checks, {failed} failed", outcomes.len());
    Ok(())
}
