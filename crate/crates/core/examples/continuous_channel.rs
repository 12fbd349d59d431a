//! Continuous channel law: the queue controller against replayed empirical
//! baselines on the same channel path.
//!
//!     cargo run --release --example continuous_channel

use mimo_covariance::harness::{run_experiment, BaselineKind, ControllerSpec, ExperimentConfig};

fn main() -> mimo_covariance::Result<()> {
    let base = ExperimentConfig::preset("paper-continuous")?;
    let mut runs = vec![("queue controller V=100".to_string(), base.clone())];
    for (kind, samples) in [
        (BaselineKind::EmpiricalCsit, 100),
        (BaselineKind::EmpiricalNoCsit, 100),
    ] {
        let mut cfg = base.clone();
        cfg.controller = ControllerSpec::Baseline {
            policy: kind,
            samples,
            file: None,
        };
        runs.push((format!("{kind:?} ({samples} draws)"), cfg));
    }
    for (label, cfg) in &runs {
        let s = run_experiment(cfg)?.summary;
        println!(
            "{label:<32} avg utility {:.5}  avg power {:.5}  hard checks ok: {}",
            s.final_avg_utility,
            s.final_avg_power,
            s.all_hard_passed()
        );
    }
    Ok(())
}
