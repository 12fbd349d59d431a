//! The distribution-aware benchmarks: per-state optimum, best constant
//! covariance, and their empirical versions fitted on training draws.
//!
//!     cargo run --release --example baselines

use mimo_covariance::channel::presets;
use mimo_covariance::harness::{compute_baseline, BaselineKind, ExperimentConfig};
use mimo_covariance::solvers::{cdi_optimal_policy, ergodic_constant_covariance, AscentOptions, CDI_POWER_TOL};

fn main() -> mimo_covariance::Result<()> {
    let model = presets::two_state();
    let adaptive = cdi_optimal_policy(&model, 2.0, 3.0, CDI_POWER_TOL)?;
    println!(
        "per-state optimum: utility {:.5}, price {:.5}, powers {:.4?}",
        adaptive.r_opt,
        adaptive.lambda,
        adaptive.covariances.iter().map(|q| q.trace_re()).collect::<Vec<_>>()
    );
    let fixed = ergodic_constant_covariance(&model, 2.0, AscentOptions::default())?;
    println!(
        "best constant covariance: utility {:.5} after {} iterations (converged {})\n{:?}",
        fixed.objective, fixed.iterations, fixed.converged, fixed.q
    );

    let cfg = ExperimentConfig::preset("paper-continuous")?;
    for samples in [10, 100, 400] {
        for kind in [BaselineKind::EmpiricalCsit, BaselineKind::EmpiricalNoCsit] {
            let pol = compute_baseline(&cfg, kind, samples)?;
            println!("continuous channel, {kind:?} on {samples} draws: fitted utility {:.5}", pol.fitted_utility());
        }
    }
    Ok(())
}
