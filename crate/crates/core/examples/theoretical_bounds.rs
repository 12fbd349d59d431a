//! The closed-form constants behind the certificates, for the two-state
//! channel under each CSIT case.
//!
//!     cargo run --example theoretical_bounds

use mimo_covariance::channel::{channel_bounds, presets, CsitErrorModel};
use mimo_covariance::controllers::{theoretical_bounds, StepPolicy, SystemConstants, Tuning};

fn main() -> mimo_covariance::Result<()> {
    let model = presets::two_state();
    let cases = [
        ("exact", CsitErrorModel::Exact),
        ("error-case-1", presets::error_case_1_model()),
        ("error-case-2", presets::error_case_2_model()),
    ];
    for (name, err) in cases {
        let cb = channel_bounds(&model, &err);
        let c = SystemConstants {
            b: cb.b,
            delta: cb.delta,
            p: 3.0,
            p_bar: 2.0,
            n_t: 2,
            n_r: 2,
        };
        let dpp = theoretical_bounds(&c, Tuning::Dpp { v: 100.0 }, 5000)?;
        let ogd = theoretical_bounds(
            &c,
            Tuning::Ogd {
                step: StepPolicy::Constant { gamma: 0.01 },
            },
            5000,
        )?;
        println!("{name}: B = {:.4}, delta = {:.4}", cb.b, cb.delta);
        println!(
            "  queue controller: epsilon {:.3}, phi {:.3}, queue bound {:.1}, power bound at t=5000 {:.4}",
            dpp.epsilon.unwrap_or(0.0),
            dpp.phi_delta,
            dpp.queue_bound.unwrap_or(0.0),
            dpp.power_bound(2.0, 5000).unwrap_or(0.0)
        );
        println!(
            "  gradient controller: psi {:.3}, |D| <= {:.3}, |D~| <= {:.3}, regret bound at t = 100/1000/5000: {:.3} / {:.3} / {:.3}",
            ogd.psi_delta,
            ogd.gradient_bound,
            ogd.inexact_gradient_bound,
            ogd.regret_at(100).unwrap_or(0.0),
            ogd.regret_at(1000).unwrap_or(0.0),
            ogd.regret_at(5000).unwrap_or(0.0)
        );
    }
    Ok(())
}
