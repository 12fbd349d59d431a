//! Per-slot optimum of `log det(I + H Q H^H) - (Z/V) tr Q` over `{Q >= 0, tr Q <= P}`.
//!
//!     cargo run --example waterfill

use mimo_covariance::channel::presets;
use mimo_covariance::linalg::capacity;
use mimo_covariance::solvers::{penalized_objective, waterfill_penalized};

fn main() -> mimo_covariance::Result<()> {
    let h = presets::h1();
    let cap = 3.0;
    println!("channel {h:?}");
    for z_over_v in [0.0, 0.1, 0.5, 2.0, 20.0] {
        let w = waterfill_penalized(&h, z_over_v, cap)?;
        println!(
            "Z/V = {z_over_v:<5} mu = {:.4}  powers = {:.4?}  tr Q = {:.4}  rate = {:.4} nats  objective = {:.4}",
            w.mu,
            w.theta,
            w.q.trace_re(),
            capacity(&h, &w.q)?,
            penalized_objective(&h, &w.q, z_over_v)?
        );
    }
    // A large price switches the transmitter off entirely.
    let off = waterfill_penalized(&h, 1e3, cap)?;
    assert_eq!(off.q.trace_re(), 0.0);
    Ok(())
}
