//! Closed-form performance constants of the two controllers.

use serde::{Deserialize, Serialize};

use super::ogd::StepPolicy;
use crate::error::{Error, Result};

/// System constants the bounds depend on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConstants {
    /// Bound on `||H||_F`.
    pub b: f64,
    /// Bound on the CSIT error `||H~ - H||_F`.
    pub delta: f64,
    pub p: f64,
    pub p_bar: f64,
    pub n_t: usize,
    pub n_r: usize,
}

impl SystemConstants {
    fn validate(&self) -> Result<()> {
        let ok = self.b >= 0.0
            && self.delta >= 0.0
            && self.p_bar > 0.0
            && self.p >= self.p_bar
            && self.n_t > 0
            && self.n_r > 0
            && [self.b, self.delta, self.p].iter().all(|x| x.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid system constants {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Tuning {
    Dpp { v: f64 },
    Ogd { step: StepPolicy },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// Utility gap from missing distribution knowledge: `max{P̄², (P-P̄)²}/(2V)`
    /// for the queue controller, `gamma` for constant-step gradient updates.
    /// `None` for the `1/sqrt(t)` schedule, whose gap shrinks with `t`.
    pub epsilon: Option<f64>,
    /// Utility loss from CSIT error in the queue controller.
    pub phi_delta: f64,
    /// Bound on the gradient error caused by CSIT error.
    pub psi_delta: f64,
    /// `V(B+δ)² + (P - P̄)`; queue controller only.
    pub queue_bound: Option<f64>,
    /// Bound on `||D||_F`.
    pub gradient_bound: f64,
    /// Bound on `||D~||_F`.
    pub inexact_gradient_bound: f64,
    /// Utility shortfall allowed at `t = 1..=horizon` (index `t - 1`);
    /// gradient controller only.
    #[serde(skip)]
    pub regret_bound: Vec<f64>,
}

impl BoundReport {
    /// Allowed running-average power at slot count `t`.
    pub fn power_bound(&self, p_bar: f64, t: u64) -> Option<f64> {
        self.queue_bound.map(|q| p_bar + q / t as f64)
    }

    /// Allowed utility shortfall after `t` slots; `None` outside `1..=horizon`.
    pub fn regret_at(&self, t: u64) -> Option<f64> {
        if t == 0 {
            return None;
        }
        self.regret_bound.get(t as usize - 1).copied()
    }
}

pub fn epsilon_for_v(p: f64, p_bar: f64, v: f64) -> f64 {
    p_bar.powi(2).max((p - p_bar).powi(2)) / (2.0 * v)
}

pub fn phi(b: f64, delta: f64, p: f64, n_t: usize) -> f64 {
    2.0 * p * (n_t as f64).sqrt() * (2.0 * b + delta) * delta
}

pub fn psi(b: f64, delta: f64, p_bar: f64, n_r: usize) -> f64 {
    let nr = n_r as f64;
    let bd = b + delta;
    (nr.sqrt() * b + nr.sqrt() * bd + bd * bd * nr * p_bar * (2.0 * b + delta)) * delta
}

pub fn queue_bound(v: f64, b: f64, delta: f64, p: f64, p_bar: f64) -> f64 {
    v * (b + delta).powi(2) + (p - p_bar)
}

/// Utility shortfall of the gradient controller after `t >= 1` slots.
pub fn ogd_regret(c: &SystemConstants, step: StepPolicy, t: u64) -> f64 {
    let t = t as f64;
    let psi = psi(c.b, c.delta, c.p_bar, c.n_r);
    let g = psi + (c.n_r as f64).sqrt() * c.b * c.b;
    let tail = 2.0 * psi * c.p_bar;
    match step {
        StepPolicy::Constant { gamma } => 2.0 * c.p_bar.powi(2) / (gamma * t) + gamma * g * g / 2.0 + tail,
        StepPolicy::InverseSqrt => 2.0 * c.p_bar.powi(2) / t.sqrt() + g * g / t.sqrt() + tail,
    }
}

pub fn theoretical_bounds(c: &SystemConstants, tuning: Tuning, horizon: u64) -> Result<BoundReport> {
    c.validate()?;
    let phi_delta = phi(c.b, c.delta, c.p, c.n_t);
    let psi_delta = psi(c.b, c.delta, c.p_bar, c.n_r);
    let gradient_bound = (c.n_r as f64).sqrt() * c.b * c.b;
    let (epsilon, queue, regret_bound) = match tuning {
        Tuning::Dpp { v } => {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!("V must be positive, got {v}")));
            }
            (
                Some(epsilon_for_v(c.p, c.p_bar, v)),
                Some(queue_bound(v, c.b, c.delta, c.p, c.p_bar)),
                Vec::new(),
            )
        }
        Tuning::Ogd { step } => {
            let eps = match step {
                StepPolicy::Constant { gamma } if gamma > 0.0 && gamma.is_finite() => Some(gamma),
                StepPolicy::Constant { gamma } => {
                    return Err(Error::InvalidArgument(format!(
                        "regret bound needs a positive step, got {gamma}"
                    )))
                }
                StepPolicy::InverseSqrt => None,
            };
            let table = (1..=horizon).map(|t| ogd_regret(c, step, t)).collect();
            (eps, None, table)
        }
    };
    Ok(BoundReport {
        epsilon,
        phi_delta,
        psi_delta,
        queue_bound: queue,
        gradient_bound,
        inexact_gradient_bound: psi_delta + gradient_bound,
        regret_bound,
    })
}
