//! Sweeping V in parallel: utility approaches the optimum as `O(1/V)` while
//! the queue bound grows as `O(V)`.
//!
//!     cargo run --release --example v_tradeoff

use mimo_covariance::harness::{run_experiment, ControllerSpec, ExperimentConfig};

fn main() -> mimo_covariance::Result<()> {
    let base = ExperimentConfig::preset("paper-two-state")?;
    let vs = [1.0, 10.0, 100.0, 1000.0];
    let results = std::thread::scope(|s| {
        let handles: Vec<_> = vs
            .iter()
            .map(|&v| {
                let mut cfg = base.clone();
                cfg.controller = ControllerSpec::Dpp { v, z0: 0.0 };
                s.spawn(move || run_experiment(&cfg))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("run thread")).collect::<Vec<_>>()
    });
    println!("     V  avg utility  reference  epsilon  avg power  max queue  queue bound");
    for (v, res) in vs.iter().zip(results) {
        let out = res?;
        let s = &out.summary;
        let th = s.theory.as_ref().expect("bounds");
        println!(
            "{v:>6}  {:>11.5}  {:>9.5}  {:>7.4}  {:>9.5}  {:>9.2}  {:>11.1}",
            s.final_avg_utility,
            s.reference.as_ref().map(|r| r.r_opt).unwrap_or(f64::NAN),
            th.epsilon.unwrap_or(f64::NAN),
            s.final_avg_power,
            out.records.iter().filter_map(|r| r.z).fold(0.0, f64::max),
            th.queue_bound.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
