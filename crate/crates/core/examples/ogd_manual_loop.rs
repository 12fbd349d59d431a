//! Driving the controllers directly, without the harness: one queue-controller
//! slot and a few gradient steps on a fixed channel.
//!
//!     cargo run --example ogd_manual_loop

use mimo_covariance::channel::presets;
use mimo_covariance::controllers::{DppState, OgdState, StepPolicy};
use mimo_covariance::linalg::capacity;

fn main() -> mimo_covariance::Result<()> {
    let h = presets::h1();

    let mut dpp = DppState::new(100.0, 3.0, 2.0)?;
    for _ in 0..3 {
        let q = dpp.step(&h)?;
        println!("dpp: tr Q = {:.4}, rate = {:.4}, queue now {:.4}", q.trace_re(), capacity(&h, &q)?, dpp.z);
    }

    let mut ogd = OgdState::new(2, StepPolicy::Constant { gamma: 0.05 }, 2.0, 1)?;
    for t in 0..6 {
        // The first slot has no feedback yet.
        let obs = (t > 0).then_some(&h);
        let q = ogd.step(obs)?;
        println!("ogd slot {t}: tr Q = {:.4}, rate = {:.4}", q.trace_re(), capacity(&h, &q)?);
    }
    Ok(())
}
