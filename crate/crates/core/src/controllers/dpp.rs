use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::solvers::waterfill_penalized;

/// Virtual-queue controller for instantaneous (possibly inaccurate) CSIT.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DppState {
    /// Virtual power queue `Z(t)`.
    pub z: f64,
    pub v: f64,
    pub p: f64,
    pub p_bar: f64,
    /// Slots processed so far.
    pub t: u64,
}

impl DppState {
    pub fn new(v: f64, p: f64, p_bar: f64) -> Result<Self> {
        Self::with_initial_queue(v, p, p_bar, 0.0)
    }

    /// Starts the queue at `z0` instead of zero.
    pub fn with_initial_queue(v: f64, p: f64, p_bar: f64, z0: f64) -> Result<Self> {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidArgument(format!("V must be positive, got {v}")));
        }
        if !(p_bar > 0.0) || !(p >= p_bar) || !p.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "need p >= p_bar > 0, got p = {p}, p_bar = {p_bar}"
            )));
        }
        if !(z0 >= 0.0) || !z0.is_finite() {
            return Err(Error::InvalidArgument(format!("z0 must be >= 0, got {z0}")));
        }
        Ok(Self {
            z: z0,
            v,
            p,
            p_bar,
            t: 0,
        })
    }

    /// Chooses `Q(t)` from the observed channel and advances the queue.
    pub fn step(&mut self, h_tilde: &ComplexMatrix) -> Result<ComplexMatrix> {
        let q = waterfill_penalized(h_tilde, self.z / self.v, self.p)?.q;
        self.z = (self.z + q.trace_re() - self.p_bar).max(0.0);
        self.t += 1;
        Ok(q)
    }
}

/// Value-style form of [`DppState::step`].
pub fn dpp_step(state: &DppState, h_tilde: &ComplexMatrix) -> Result<(ComplexMatrix, DppState)> {
    let mut next = state.clone();
    let q = next.step(h_tilde)?;
    Ok((q, next))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::presets;
    use crate::linalg::capacity;

    #[test]
    fn zero_queue_is_plain_waterfilling() {
        let s = DppState::new(100.0, 3.0, 2.0).unwrap();
        let (q, next) = dpp_step(&s, &presets::h1()).unwrap();
        let plain = waterfill_penalized(&presets::h1(), 0.0, 3.0).unwrap().q;
        assert_eq!(q, plain);
        assert!((q.trace_re() - 3.0).abs() < 1e-12);
        assert!((next.z - 1.0).abs() < 1e-12);
        assert_eq!(next.t, 1);
        assert_eq!(s.t, 0);
    }

    #[test]
    fn large_queue_switches_off() {
        let h = presets::h1();
        let b = h.frobenius();
        let v = 100.0;
        let mut s = DppState::with_initial_queue(v, 3.0, 2.0, v * b * b).unwrap();
        let q = s.step(&h).unwrap();
        assert_eq!(q.frobenius(), 0.0);
        assert!((s.z - (v * b * b - 2.0)).abs() < 1e-9);
    }

    #[test]
    fn queue_arithmetic() {
        // tr(Q) = 3 with z = 1 and p_bar = 2 gives z = 2. A scalar channel with
        // a tiny penalty loads the full cap.
        let h = ComplexMatrix::identity(1).scale(10.0);
        let mut s = DppState::with_initial_queue(1e6, 3.0, 2.0, 1.0).unwrap();
        let q = s.step(&h).unwrap();
        assert!((q.trace_re() - 3.0).abs() < 1e-12);
        assert!((s.z - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(DppState::new(0.0, 3.0, 2.0).is_err());
        assert!(DppState::new(1.0, 1.0, 2.0).is_err());
        assert!(DppState::with_initial_queue(1.0, 3.0, 2.0, -1.0).is_err());
    }

    #[test]
    fn alternating_states_keep_power_near_budget() {
        let mut s = DppState::new(100.0, 3.0, 2.0).unwrap();
        let states = [presets::h1(), presets::h2()];
        let mut power = 0.0;
        let mut rate = 0.0;
        let n = 2000;
        for t in 0..n {
            let h = &states[t % 2];
            let q = s.step(h).unwrap();
            power += q.trace_re();
            rate += capacity(h, &q).unwrap();
            assert!(q.trace_re() <= 3.0 + 1e-9);
        }
        assert!(power / n as f64 <= 2.0 + s.z / n as f64 + 1e-9);
        assert!(rate > 0.0);
    }
}
