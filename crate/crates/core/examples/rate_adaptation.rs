//! Delivering a block of `N` nats without knowing each slot's rate in
//! advance: the ledger records when the block completes and how much of the
//! last slot is wasted.
//!
//!     cargo run --release --example rate_adaptation

use mimo_covariance::harness::{run_experiment, ExperimentConfig, RateAdaptSpec};
use mimo_covariance::rate_adapt::{decode_check, RateLedger};

fn main() -> mimo_covariance::Result<()> {
    let mut ledger = RateLedger::new(10.0)?;
    for r in [4.0, 3.0, 5.0] {
        ledger.step(r)?;
    }
    let report = decode_check(&ledger)?;
    println!(
        "N = 10 over rates (4, 3, 5): done after {:?} slots, overhead {:?}",
        ledger.completed_at, ledger.overhead
    );
    for s in &report.slots {
        println!("  slot {} carries {:.1} of {:.1} nats", s.slot, s.assigned, s.capacity);
    }

    let mut cfg = ExperimentConfig::preset("paper-two-state")?;
    for n_total in [100.0, 1000.0, 10000.0] {
        cfg.rate_adapt = Some(RateAdaptSpec { n_total });
        let s = run_experiment(&cfg)?.summary;
        let l = s.rate_adapt.expect("ledger requested");
        println!(
            "queue controller, N = {n_total}: {:?} slots, overhead {:.4} ({:.3}% of N), decodable {:?}",
            l.completed_at,
            l.overhead.unwrap_or(f64::NAN),
            100.0 * l.relative_overhead.unwrap_or(f64::NAN),
            l.decode_ok
        );
    }
    Ok(())
}
