use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{capacity_gradient, ComplexMatrix};
use crate::solvers::psd_cap_project;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepPolicy {
    Constant { gamma: f64 },
    /// `gamma(t) = 1 / sqrt(t)` at slot `t >= 1`.
    InverseSqrt,
}

impl StepPolicy {
    pub fn gamma(&self, t: u64) -> f64 {
        match self {
            StepPolicy::Constant { gamma } => *gamma,
            StepPolicy::InverseSqrt => 1.0 / (t.max(1) as f64).sqrt(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            StepPolicy::Constant { gamma } if !(*gamma >= 0.0) || !gamma.is_finite() => Err(
                Error::InvalidArgument(format!("step size must be finite and >= 0, got {gamma}")),
            ),
            _ => Ok(()),
        }
    }
}

/// Projected inexact-gradient controller for CSIT delayed by `delay` slots.
///
/// Slot `t >= delay` plays `P[Q(t - delay) + gamma(t) D~(t - delay)]`, where
/// `D~` is the capacity gradient evaluated on the stale observation. Slots
/// before the first observation arrives replay `Q(0)`.
#[derive(Debug, Clone, Serialize)]
pub struct OgdState {
    pub step_policy: StepPolicy,
    pub p_bar: f64,
    pub delay: usize,
    /// Slots processed so far.
    pub t: u64,
    q0: ComplexMatrix,
    /// The last `delay` emitted covariances, oldest first.
    history: VecDeque<ComplexMatrix>,
}

impl OgdState {
    /// Controller with `Q(0) = 0`.
    pub fn new(n_t: usize, step_policy: StepPolicy, p_bar: f64, delay: usize) -> Result<Self> {
        Self::with_initial(ComplexMatrix::zeros(n_t, n_t), step_policy, p_bar, delay)
    }

    pub fn with_initial(q0: ComplexMatrix, step_policy: StepPolicy, p_bar: f64, delay: usize) -> Result<Self> {
        step_policy.validate()?;
        if !(p_bar > 0.0) || !p_bar.is_finite() {
            return Err(Error::InvalidArgument(format!("p_bar must be positive, got {p_bar}")));
        }
        if delay == 0 {
            return Err(Error::InvalidArgument("delay must be at least one slot".into()));
        }
        q0.check_square("initial covariance")?;
        if !crate::linalg::is_psd(&q0) || q0.trace_re() > p_bar + 1e-9 {
            return Err(Error::InvalidArgument(
                "initial covariance must be PSD with trace <= p_bar".into(),
            ));
        }
        Ok(Self {
            step_policy,
            p_bar,
            delay,
            t: 0,
            q0,
            history: VecDeque::with_capacity(delay),
        })
    }

    /// Whether the current slot needs the observation from `delay` slots back.
    pub fn needs_observation(&self) -> bool {
        self.t >= self.delay as u64
    }

    /// `Q(t - delay)`, the covariance the next update starts from.
    pub fn lagged(&self) -> &ComplexMatrix {
        if self.needs_observation() {
            &self.history[0]
        } else {
            &self.q0
        }
    }

    /// Emits `Q(t)`. `h_tilde_delayed` is the CSIT of slot `t - delay` and is
    /// ignored (may be `None`) during warm-up.
    pub fn step(&mut self, h_tilde_delayed: Option<&ComplexMatrix>) -> Result<ComplexMatrix> {
        let q = if self.needs_observation() {
            let h = h_tilde_delayed.ok_or_else(|| {
                Error::Usage(format!("slot {} needs the CSIT from {} slots back", self.t, self.delay))
            })?;
            let base = self.lagged();
            let grad = capacity_gradient(h, base)?;
            let gamma = self.step_policy.gamma(self.t);
            psd_cap_project(&base.try_add(&grad.scale(gamma))?, self.p_bar)?
        } else {
            self.q0.clone()
        };
        if self.history.len() == self.delay {
            self.history.pop_front();
        }
        self.history.push_back(q.clone());
        self.t += 1;
        Ok(q)
    }
}

/// Value-style form of [`OgdState::step`].
pub fn ogd_step(state: &OgdState, h_tilde_delayed: Option<&ComplexMatrix>) -> Result<(ComplexMatrix, OgdState)> {
    let mut next = state.clone();
    let q = next.step(h_tilde_delayed)?;
    Ok((q, next))
}
