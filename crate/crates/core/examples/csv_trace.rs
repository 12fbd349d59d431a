//! Writing a run's trace, reloading it, and re-deriving the running averages
//! from the per-slot columns alone.
//!
//!     cargo run --release --example csv_trace

use mimo_covariance::harness::{emit_outputs, read_csv, run_experiment, ExperimentConfig, OutputSpec};

fn main() -> mimo_covariance::Result<()> {
    let mut cfg = ExperimentConfig::preset("paper-two-state")?;
    cfg.horizon = 1000;
    let out = run_experiment(&cfg)?;
    let dir = std::env::temp_dir().join("mimocov-csv-trace");
    let paths = OutputSpec::in_dir(&dir, &cfg.name);
    emit_outputs(&out.records, &out.summary, &paths)?;
    let csv = paths.csv.as_ref().expect("csv path");
    let back = read_csv(csv)?;
    let mut sum = 0.0;
    let mut worst: f64 = 0.0;
    for (i, r) in back.iter().enumerate() {
        sum += r.r;
        worst = worst.max((sum / (i + 1) as f64 - r.runavg_r).abs());
    }
    println!("wrote {} rows to {}", back.len(), csv.display());
    println!("largest running-average recompute error {worst:.2e}");
    println!("summary {}, plot {}", paths.summary.unwrap().display(), paths.svg.unwrap().display());
    Ok(())
}
