//! The queue controller fed rounded channel observations: the utility loss
//! stays far inside the `epsilon + phi(delta)` allowance.
//!
//!     cargo run --release --example inaccurate_csit

use mimo_covariance::harness::{run_experiment, CsitSpec, ExperimentConfig};

fn main() -> mimo_covariance::Result<()> {
    let mut cfg = ExperimentConfig::preset("paper-two-state")?;
    println!("csit            delta   avg utility  allowed floor   queue bound  max queue");
    for csit in [CsitSpec::Exact, CsitSpec::ErrorCase1, CsitSpec::ErrorCase2] {
        cfg.csit = csit;
        let out = run_experiment(&cfg)?;
        let s = &out.summary;
        let theory = s.theory.as_ref().expect("queue controller reports bounds");
        let r_opt = s.reference.as_ref().expect("discrete channel has a reference").r_opt;
        let floor = r_opt - theory.epsilon.unwrap_or(0.0) - theory.phi_delta;
        let max_z = out.records.iter().filter_map(|r| r.z).fold(0.0, f64::max);
        println!(
            "{:<14} {:>6.3}  {:>11.5}  {:>13.3}  {:>12.1}  {:>9.2}",
            s.csit,
            s.channel_bounds.delta,
            s.final_avg_utility,
            floor,
            theory.queue_bound.unwrap_or(f64::NAN),
            max_z
        );
    }
    Ok(())
}
