//! Optimizers that know the channel distribution. They serve as reference
//! policies: the per-state optimum when instantaneous CSIT is available, and
//! the best constant covariance when it is not.

use serde::{Deserialize, Serialize};

use super::projection::psd_cap_project;
use super::waterfill::waterfill_penalized;
use crate::channel::{nearest_index, ChannelModel};
use crate::error::{Error, Result};
use crate::linalg::{capacity, capacity_gradient, ComplexMatrix};

pub const CDI_POWER_TOL: f64 = 1e-6;
pub const CDI_MAX_BISECTIONS: usize = 200;
pub const CDI_MAX_EXPANSIONS: usize = 60;

/// Optimal channel-adaptive policy for a discrete channel law under a long-term
/// budget `p_bar` and per-slot cap `p`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CdiPolicy {
    pub states: Vec<ComplexMatrix>,
    pub probs: Vec<f64>,
    pub covariances: Vec<ComplexMatrix>,
    /// Multiplier of the long-term power constraint.
    pub lambda: f64,
    /// Optimal average utility in nats.
    pub r_opt: f64,
    pub average_power: f64,
}

impl CdiPolicy {
    /// Covariance of the stored state nearest to `h` in Frobenius norm.
    pub fn lookup(&self, h: &ComplexMatrix) -> &ComplexMatrix {
        &self.covariances[nearest_index(&self.states, h)]
    }
}

fn discrete_parts(model: &ChannelModel) -> Result<(&[ComplexMatrix], &[f64])> {
    match model {
        ChannelModel::Discrete { states, probs } => Ok((states, probs)),
        ChannelModel::ContinuousProduct { .. } => Err(Error::InvalidArgument(
            "this baseline needs a discrete channel model".into(),
        )),
    }
}

struct Evaluation {
    covariances: Vec<ComplexMatrix>,
    power: f64,
}

fn evaluate(states: &[ComplexMatrix], probs: &[f64], lambda: f64, p: f64) -> Result<Evaluation> {
    let covariances = states
        .iter()
        .map(|h| waterfill_penalized(h, lambda, p).map(|w| w.q))
        .collect::<Result<Vec<_>>>()?;
    let power = covariances
        .iter()
        .zip(probs)
        .map(|(q, pr)| pr * q.trace_re())
        .sum();
    Ok(Evaluation { covariances, power })
}

/// Solves the channel-adaptive ergodic problem by Lagrangian decomposition:
/// each state is water-filled against a common power price `lambda`, which is
/// bisected until the average power meets `p_bar`.
pub fn cdi_optimal_policy(model: &ChannelModel, p_bar: f64, p: f64, tol: f64) -> Result<CdiPolicy> {
    model.validate()?;
    let (states, probs) = discrete_parts(model)?;
    if !(p_bar > 0.0) || !(p >= p_bar) {
        return Err(Error::InvalidArgument(format!(
            "need p >= p_bar > 0, got p = {p}, p_bar = {p_bar}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }

    let finish = |lambda: f64, eval: Evaluation| -> Result<CdiPolicy> {
        let r_opt = states
            .iter()
            .zip(&eval.covariances)
            .zip(probs)
            .map(|((h, q), pr)| capacity(h, q).map(|c| pr * c))
            .sum::<Result<f64>>()?;
        Ok(CdiPolicy {
            states: states.to_vec(),
            probs: probs.to_vec(),
            covariances: eval.covariances,
            lambda,
            r_opt,
            average_power: eval.power,
        })
    };

    let at_zero = evaluate(states, probs, 0.0, p)?;
    if at_zero.power <= p_bar {
        return finish(0.0, at_zero);
    }

    // No state loads power once lambda reaches max ||H_k||_F^2 >= sigma_max.
    let b = states.iter().map(ComplexMatrix::frobenius).fold(0.0, f64::max);
    let mut hi = (b * b).max(f64::MIN_POSITIVE);
    let mut hi_eval = evaluate(states, probs, hi, p)?;
    let mut expansions = 0;
    while hi_eval.power > p_bar {
        if expansions == CDI_MAX_EXPANSIONS {
            return Err(Error::NoConvergence {
                what: "CDI multiplier bracketing",
                iterations: expansions,
                residual: hi_eval.power - p_bar,
            });
        }
        hi *= 2.0;
        hi_eval = evaluate(states, probs, hi, p)?;
        expansions += 1;
    }

    let mut lo = 0.0;
    for _ in 0..CDI_MAX_BISECTIONS {
        if hi_eval.power >= p_bar - tol {
            return finish(hi, hi_eval);
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let mid_eval = evaluate(states, probs, mid, p)?;
        if mid_eval.power > p_bar {
            lo = mid;
        } else {
            hi = mid;
            hi_eval = mid_eval;
        }
    }
    if hi_eval.power >= p_bar - tol {
        return finish(hi, hi_eval);
    }
    Err(Error::NoConvergence {
        what: "CDI multiplier bisection",
        iterations: CDI_MAX_BISECTIONS,
        residual: p_bar - hi_eval.power,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AscentOptions {
    pub step: f64,
    pub tol: f64,
    pub iter_cap: usize,
}

impl Default for AscentOptions {
    fn default() -> Self {
        Self {
            step: 0.05,
            tol: 1e-9,
            iter_cap: 100_000,
        }
    }
}

/// Best constant covariance for a discrete channel law.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstantPolicy {
    pub q: ComplexMatrix,
    /// `capacity(H_k, q)` for each state.
    pub r_opt_per_state: Vec<f64>,
    /// `sum_k probs[k] capacity(H_k, q)`.
    pub objective: f64,
    /// Step in force when the iteration stopped.
    pub step: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn expected_capacity(states: &[ComplexMatrix], probs: &[f64], q: &ComplexMatrix) -> Result<f64> {
    states
        .iter()
        .zip(probs)
        .map(|(h, pr)| capacity(h, q).map(|c| pr * c))
        .sum()
}

fn expected_gradient(states: &[ComplexMatrix], probs: &[f64], q: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = q.rows();
    let mut g = ComplexMatrix::zeros(n, n);
    for (h, pr) in states.iter().zip(probs) {
        g = g.try_add(&capacity_gradient(h, q)?.scale(*pr))?;
    }
    Ok(g)
}

/// Projected gradient ascent on the expected capacity over `{Q >= 0, tr Q <= p_bar}`.
///
/// The step is halved whenever an update would lower the objective, so the
/// iteration is monotone. Hitting `iter_cap` returns the last iterate with
/// `converged = false`.
pub fn ergodic_constant_covariance(model: &ChannelModel, p_bar: f64, opts: AscentOptions) -> Result<ConstantPolicy> {
    model.validate()?;
    let (states, probs) = discrete_parts(model)?;
    if !(p_bar > 0.0) {
        return Err(Error::InvalidArgument("p_bar must be positive".into()));
    }
    if !(opts.step > 0.0) || !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument("step and tol must be positive".into()));
    }
    let n = model.dims().1;
    let mut q = ComplexMatrix::identity(n).scale(p_bar / n as f64);
    let mut value = expected_capacity(states, probs, &q)?;
    let mut step = opts.step;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.iter_cap {
        iterations += 1;
        let grad = expected_gradient(states, probs, &q)?;
        let next = psd_cap_project(&q.try_add(&grad.scale(step))?, p_bar)?;
        let next_value = expected_capacity(states, probs, &next)?;
        if next_value < value - 1e-15 * value.abs().max(1.0) {
            step *= 0.5;
            if step < 1e-12 {
                break;
            }
            continue;
        }
        let moved = next.try_sub(&q)?.frobenius();
        q = next;
        value = next_value;
        if moved <= opts.tol {
            converged = true;
            break;
        }
    }

    let r_opt_per_state = states
        .iter()
        .map(|h| capacity(h, &q))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConstantPolicy {
        q,
        r_opt_per_state,
        objective: value,
        step,
        iterations,
        converged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmpiricalMode {
    WithCsit,
    NoCsit,
}

/// Policy fitted to the uniform empirical law of observed channel samples.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EmpiricalPolicy {
    WithCsit(CdiPolicy),
    NoCsit(ConstantPolicy),
}

impl EmpiricalPolicy {
    /// Covariance to use when the (observed) channel is `h`.
    pub fn covariance_for(&self, h: &ComplexMatrix) -> &ComplexMatrix {
        match self {
            EmpiricalPolicy::WithCsit(p) => p.lookup(h),
            EmpiricalPolicy::NoCsit(c) => &c.q,
        }
    }
}

pub fn empirical_policy(
    samples: &[ComplexMatrix],
    p_bar: f64,
    p: f64,
    mode: EmpiricalMode,
    opts: AscentOptions,
) -> Result<EmpiricalPolicy> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no channel samples".into()));
    }
    let model = ChannelModel::uniform(samples.to_vec());
    match mode {
        EmpiricalMode::WithCsit => {
            cdi_optimal_policy(&model, p_bar, p, CDI_POWER_TOL).map(EmpiricalPolicy::WithCsit)
        }
        EmpiricalMode::NoCsit => ergodic_constant_covariance(&model, p_bar, opts).map(EmpiricalPolicy::NoCsit),
    }
}
