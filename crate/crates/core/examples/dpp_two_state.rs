//! The queue controller on the two-state channel with exact CSIT, compared with
//! the per-state optimum computed from the channel law.
//!
//!     cargo run --release --example dpp_two_state [-- OUT_DIR]

use std::path::PathBuf;

use mimo_covariance::harness::{emit_outputs, run_experiment, ExperimentConfig, OutputSpec};

fn main() -> mimo_covariance::Result<()> {
    let cfg = ExperimentConfig::preset("paper-two-state")?;
    let out = run_experiment(&cfg)?;
    let s = &out.summary;
    let r_opt = s.reference.as_ref().map(|r| r.r_opt).unwrap_or(f64::NAN);
    println!("slot  avg utility  avg power  queue");
    for rec in out.records.iter().filter(|r| (r.t + 1) % 500 == 0) {
        println!(
            "{:>5}  {:>11.5}  {:>9.5}  {:>6.2}",
            rec.t + 1,
            rec.runavg_r,
            rec.runavg_tr_q,
            rec.z.unwrap_or(0.0)
        );
    }
    println!("reference utility {r_opt:.5}, epsilon {:.3}", s.theory.as_ref().and_then(|t| t.epsilon).unwrap_or(0.0));
    for c in &s.certificates {
        println!("  {:<28} passed={} margin={:.3e}", c.name, c.passed, c.worst_margin);
    }
    if let Some(dir) = std::env::args().nth(1) {
        emit_outputs(&out.records, s, &OutputSpec::in_dir(&PathBuf::from(dir), &cfg.name))?;
    }
    Ok(())
}
