//! Block-fading channel models, CSIT corruption, and the norm bounds `B` and `delta`.
//!
//! Random draws come from ChaCha8 generators. A run owns one key (its seed);
//! each slot and purpose gets its own ChaCha stream, so slot `t` of a run is
//! reproducible on any platform without replaying earlier slots.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::random::{complex_normal, random_matrix, with_frobenius};
use crate::linalg::ComplexMatrix;

/// Independent random sources within one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Channel = 0,
    Csit = 1,
    Training = 2,
    Bounds = 3,
}

/// Generator for `(seed, stream, index)`; distinct triples give independent streams.
pub fn stream_rng(seed: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_mul(4).wrapping_add(stream as u64));
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ChannelModel {
    /// Finitely many channel states drawn i.i.d. with the given probabilities.
    Discrete {
        states: Vec<ComplexMatrix>,
        probs: Vec<f64>,
    },
    /// Entries `u v` with `u` complex normal (unit-variance parts) and `v ~ U[0, v_max]`.
    ContinuousProduct { n_r: usize, n_t: usize, v_max: f64 },
}

impl ChannelModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            ChannelModel::Discrete { states, probs } => {
                if states.is_empty() || states.len() != probs.len() {
                    return Err(Error::InvalidArgument(
                        "discrete model needs one probability per state".into(),
                    ));
                }
                if probs.iter().any(|&p| !(p >= 0.0)) {
                    return Err(Error::InvalidArgument("negative state probability".into()));
                }
                let total: f64 = probs.iter().sum();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidArgument(format!(
                        "state probabilities sum to {total}, not 1"
                    )));
                }
                let (r, c) = (states[0].rows(), states[0].cols());
                if states.iter().any(|s| s.rows() != r || s.cols() != c) {
                    return Err(Error::InvalidArgument(
                        "channel states have different dimensions".into(),
                    ));
                }
                Ok(())
            }
            ChannelModel::ContinuousProduct { n_r, n_t, v_max } => {
                if *n_r == 0 || *n_t == 0 {
                    return Err(Error::InvalidArgument("antenna counts must be positive".into()));
                }
                if !(*v_max > 0.0) {
                    return Err(Error::InvalidArgument("v_max must be positive".into()));
                }
                Ok(())
            }
        }
    }

    /// `(N_R, N_T)`.
    pub fn dims(&self) -> (usize, usize) {
        match self {
            ChannelModel::Discrete { states, .. } => (states[0].rows(), states[0].cols()),
            ChannelModel::ContinuousProduct { n_r, n_t, .. } => (*n_r, *n_t),
        }
    }

    pub fn uniform(states: Vec<ComplexMatrix>) -> Self {
        let p = 1.0 / states.len() as f64;
        let probs = vec![p; states.len()];
        ChannelModel::Discrete { states, probs }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CsitErrorModel {
    Exact,
    /// Phases rounded to the nearest multiple of `step` radians.
    PhaseQuantize { step: f64 },
    /// Moduli rounded to a multiple of `mag_step`, then phases to a multiple of `phase_step`.
    MagPhaseQuantize { mag_step: f64, phase_step: f64 },
    /// `H + E` with isotropic direction and `||E||_F = delta * u`, `u ~ U[0, 1]`.
    BoundedBall { delta: f64 },
    /// Fixed observed matrix per true state of a discrete model.
    Table {
        truth: Vec<ComplexMatrix>,
        observed: Vec<ComplexMatrix>,
    },
}

impl CsitErrorModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            CsitErrorModel::Exact => Ok(()),
            CsitErrorModel::PhaseQuantize { step } if *step > 0.0 => Ok(()),
            CsitErrorModel::MagPhaseQuantize {
                mag_step,
                phase_step,
            } if *mag_step > 0.0 && *phase_step > 0.0 => Ok(()),
            CsitErrorModel::BoundedBall { delta } if *delta >= 0.0 => Ok(()),
            CsitErrorModel::Table { truth, observed } => {
                if truth.len() != observed.len() || truth.is_empty() {
                    return Err(Error::InvalidArgument(
                        "CSIT table needs one observation per state".into(),
                    ));
                }
                for (h, o) in truth.iter().zip(observed) {
                    h.check_same_shape(o, "csit table")?;
                }
                Ok(())
            }
            other => Err(Error::InvalidArgument(format!(
                "invalid CSIT error parameters: {other:?}"
            ))),
        }
    }

    fn is_deterministic(&self) -> bool {
        !matches!(self, CsitErrorModel::BoundedBall { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DelayModel {
    Instantaneous,
    Delayed { t_slots: usize },
}

impl DelayModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            DelayModel::Delayed { t_slots: 0 } => Err(Error::InvalidArgument(
                "delayed CSIT needs t_slots >= 1".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// One i.i.d. channel realization.
pub fn sample_channel<R: Rng + ?Sized>(model: &ChannelModel, rng: &mut R) -> ComplexMatrix {
    match model {
        ChannelModel::Discrete { states, probs } => {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            for (state, &p) in states.iter().zip(probs) {
                acc += p;
                if u < acc {
                    return state.clone();
                }
            }
            states.last().expect("validated non-empty").clone()
        }
        ChannelModel::ContinuousProduct { n_r, n_t, v_max } => {
            let data = (0..n_r * n_t)
                .map(|_| {
                    let u = complex_normal(rng);
                    let v = rng.random_range(0.0..=*v_max);
                    u * v
                })
                .collect();
            ComplexMatrix::from_vec(*n_r, *n_t, data).expect("length matches")
        }
    }
}

/// Rounds `x` to the nearest multiple of `step`; exact midpoints go up.
fn round_up_half(x: f64, step: f64) -> f64 {
    (x / step + 0.5).floor() * step
}

fn quantize_phase(z: Complex64, step: f64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        return z;
    }
    Complex64::from_polar(r, round_up_half(z.arg(), step))
}

fn quantize_mag_phase(z: Complex64, mag_step: f64, phase_step: f64) -> Complex64 {
    // f64::round breaks ties away from zero.
    let r = (z.norm() / mag_step).round() * mag_step;
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::from_polar(r, round_up_half(z.arg(), phase_step))
}

fn lookup_table(h: &ComplexMatrix, truth: &[ComplexMatrix], observed: &[ComplexMatrix]) -> ComplexMatrix {
    let idx = truth
        .iter()
        .position(|t| t == h)
        .unwrap_or_else(|| nearest_index(truth, h));
    observed[idx].clone()
}

/// Index of the matrix in `set` closest to `query` in Frobenius norm; first wins on ties.
pub fn nearest_index(set: &[ComplexMatrix], query: &ComplexMatrix) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, m) in set.iter().enumerate() {
        let d = m
            .try_sub(query)
            .map(|diff| diff.frobenius())
            .unwrap_or(f64::INFINITY);
        if d < best.1 {
            best = (i, d);
        }
    }
    best.0
}

/// The transmitter's (possibly corrupted) view of `h`.
pub fn observe_csit<R: Rng + ?Sized>(h: &ComplexMatrix, err: &CsitErrorModel, rng: &mut R) -> ComplexMatrix {
    match err {
        CsitErrorModel::Exact => h.clone(),
        CsitErrorModel::PhaseQuantize { step } => h.map(|z| quantize_phase(z, *step)),
        CsitErrorModel::MagPhaseQuantize {
            mag_step,
            phase_step,
        } => h.map(|z| quantize_mag_phase(z, *mag_step, *phase_step)),
        CsitErrorModel::BoundedBall { delta } => {
            let e = random_matrix(rng, h.rows(), h.cols(), 1.0);
            let radius = delta * rng.random_range(0.0..=1.0);
            h + &with_frobenius(&e, radius)
        }
        CsitErrorModel::Table { truth, observed } => lookup_table(h, truth, observed),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelBounds {
    /// Bound on `||H||_F`.
    pub b: f64,
    /// Bound on `||H~ - H||_F`.
    pub delta: f64,
    /// Set when the channel law has unbounded support and `b` is an empirical quantile.
    pub unbounded_support: bool,
}

/// Draws used for the empirical norm quantile of unbounded channel laws.
pub const BOUND_SAMPLES: usize = 100_000;
pub const BOUND_QUANTILE: f64 = 0.99999;
const BOUND_SEED: u64 = 0x6d69_6d6f_626e_6473;

pub fn channel_bounds(model: &ChannelModel, err: &CsitErrorModel) -> ChannelBounds {
    match model {
        ChannelModel::Discrete { states, .. } => {
            let b = states.iter().map(ComplexMatrix::frobenius).fold(0.0, f64::max);
            let delta = match err {
                CsitErrorModel::BoundedBall { delta } => *delta,
                _ => {
                    debug_assert!(err.is_deterministic());
                    let mut unused = stream_rng(BOUND_SEED, Stream::Bounds, 0);
                    states
                        .iter()
                        .map(|h| (&observe_csit(h, err, &mut unused) - h).frobenius())
                        .fold(0.0, f64::max)
                }
            };
            ChannelBounds {
                b,
                delta,
                unbounded_support: false,
            }
        }
        ChannelModel::ContinuousProduct { n_r, n_t, .. } => {
            let mut rng = stream_rng(BOUND_SEED, Stream::Bounds, 0);
            let mut norms: Vec<f64> = (0..BOUND_SAMPLES)
                .map(|_| sample_channel(model, &mut rng).frobenius())
                .collect();
            norms.sort_by(f64::total_cmp);
            let idx = ((BOUND_QUANTILE * BOUND_SAMPLES as f64).ceil() as usize).min(BOUND_SAMPLES) - 1;
            let b = norms[idx];
            let entries = (n_r * n_t) as f64;
            // Worst-case per-entry error of each quantizer, summed in Frobenius norm.
            let chord = |step: f64| 2.0 * (step / 4.0).sin();
            let delta = match err {
                CsitErrorModel::Exact => 0.0,
                CsitErrorModel::PhaseQuantize { step } => chord(*step) * b,
                CsitErrorModel::MagPhaseQuantize {
                    mag_step,
                    phase_step,
                } => {
                    let half = mag_step / 2.0;
                    half * entries.sqrt() + chord(*phase_step) * (b + half * entries.sqrt())
                }
                CsitErrorModel::BoundedBall { delta } => *delta,
                CsitErrorModel::Table { truth, observed } => truth
                    .iter()
                    .zip(observed)
                    .map(|(h, o)| (o - h).frobenius())
                    .fold(0.0, f64::max),
            };
            ChannelBounds {
                b,
                delta,
                unbounded_support: true,
            }
        }
    }
}

/// Built-in channel matrices of the two-state 2x2 test system.
pub mod presets {
    use super::*;

    fn m(entries: &[(f64, f64)]) -> ComplexMatrix {
        ComplexMatrix::from_polar_pi(2, 2, entries).expect("2x2 preset")
    }

    pub fn h1() -> ComplexMatrix {
        m(&[(1.3131, 1.9590), (2.3880, 0.7104), (2.5567, 1.5259), (2.8380, 0.3845)])
    }

    pub fn h2() -> ComplexMatrix {
        m(&[(1.4781, 0.9674), (1.5291, 0.1396), (0.0601, 0.9849), (0.1842, 1.9126)])
    }

    /// Phases rounded to the nearest `pi / 4`, as printed.
    pub fn error_case_1() -> [ComplexMatrix; 2] {
        [
            m(&[(1.3131, 2.0), (2.3880, 0.75), (2.5567, 1.5), (2.8380, 0.5)]),
            m(&[(1.4781, 1.0), (1.5291, 0.25), (0.0601, 1.0), (0.1842, 2.0)]),
        ]
    }

    /// Moduli rounded to one decimal and phases to the nearest `pi / 2`, as printed.
    pub fn error_case_2() -> [ComplexMatrix; 2] {
        [
            m(&[(1.3, 2.0), (2.4, 0.5), (2.6, 1.5), (2.8, 0.5)]),
            m(&[(1.5, 1.0), (1.5, 0.0), (0.0, 1.0), (0.2, 2.0)]),
        ]
    }

    pub fn two_state() -> ChannelModel {
        ChannelModel::Discrete {
            states: vec![h1(), h2()],
            probs: vec![0.5, 0.5],
        }
    }

    pub fn continuous() -> ChannelModel {
        ChannelModel::ContinuousProduct {
            n_r: 2,
            n_t: 2,
            v_max: 0.5,
        }
    }

    pub fn error_case_1_model() -> CsitErrorModel {
        CsitErrorModel::Table {
            truth: vec![h1(), h2()],
            observed: error_case_1().to_vec(),
        }
    }

    pub fn error_case_2_model() -> CsitErrorModel {
        CsitErrorModel::Table {
            truth: vec![h1(), h2()],
            observed: error_case_2().to_vec(),
        }
    }

    pub const PHASE_STEP_CASE_1: f64 = PI / 4.0;
}
