//! Observation models for channel state: rounding, table lookup and bounded
//! random error, with the worst-case error each one reports.
//!
//!     cargo run --example csit_error_models

use mimo_covariance::channel::{
    channel_bounds, observe_csit, presets, sample_channel, stream_rng, CsitErrorModel, Stream,
};

fn main() {
    let model = presets::continuous();
    let errs = [
        ("phase pi/4", CsitErrorModel::PhaseQuantize { step: presets::PHASE_STEP_CASE_1 }),
        (
            "modulus 0.1, phase pi/2",
            CsitErrorModel::MagPhaseQuantize {
                mag_step: 0.1,
                phase_step: std::f64::consts::FRAC_PI_2,
            },
        ),
        ("ball 0.2", CsitErrorModel::BoundedBall { delta: 0.2 }),
    ];
    for (name, err) in &errs {
        let cb = channel_bounds(&model, err);
        let worst = (0..2000u64)
            .map(|k| {
                let h = sample_channel(&model, &mut stream_rng(9, Stream::Channel, k));
                let obs = observe_csit(&h, err, &mut stream_rng(9, Stream::Csit, k));
                (&obs - &h).frobenius()
            })
            .fold(0.0, f64::max);
        println!(
            "{name:<24} reported delta {:.4}, largest seen {worst:.4} (channel norm bounded: {})",
            cb.delta, !cb.unbounded_support
        );
    }
    let table = presets::error_case_2_model();
    let obs = observe_csit(&presets::h2(), &table, &mut stream_rng(0, Stream::Csit, 0));
    println!("table lookup of H2:\n{obs:?}");
}
