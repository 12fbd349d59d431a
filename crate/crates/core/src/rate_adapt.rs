//! Accounting for rateless transmission of a fixed block of source data.
//!
//! The transmitter keeps sending until the per-slot capacities it is told
//! about add up to the block size. Units are whatever the capacities use
//! (nats in this crate).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateLedger {
    pub n_total: f64,
    pub n_residual: f64,
    pub capacities: Vec<f64>,
    /// Number of slots used, once the block is delivered.
    pub completed_at: Option<usize>,
    /// `sum R - N` on completion.
    pub overhead: Option<f64>,
    cumulative: f64,
}

impl RateLedger {
    pub fn new(n_total: f64) -> Result<Self> {
        if !(n_total > 0.0) || !n_total.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "block size must be positive, got {n_total}"
            )));
        }
        Ok(Self {
            n_total,
            n_residual: n_total,
            capacities: Vec::new(),
            completed_at: None,
            overhead: None,
            cumulative: 0.0,
        })
    }

    pub fn is_complete(&self) -> bool {
        self.completed_at.is_some()
    }

    pub fn delivered(&self) -> f64 {
        self.cumulative
    }

    /// Records the capacity of one more slot.
    pub fn step(&mut self, r_t: f64) -> Result<()> {
        if self.is_complete() {
            return Err(Error::Usage("ledger already completed".into()));
        }
        if !(r_t >= 0.0) || !r_t.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "slot capacity must be finite and >= 0, got {r_t}"
            )));
        }
        self.capacities.push(r_t);
        self.cumulative += r_t;
        self.n_residual = (self.n_total - self.cumulative).max(0.0);
        if self.cumulative >= self.n_total {
            self.completed_at = Some(self.capacities.len());
            self.overhead = Some(self.cumulative - self.n_total);
        }
        Ok(())
    }

    /// `overhead / N`.
    pub fn relative_overhead(&self) -> Option<f64> {
        self.overhead.map(|o| o / self.n_total)
    }
}

/// Value-style form of [`RateLedger::step`].
pub fn ledger_step(ledger: &RateLedger, r_t: f64) -> Result<RateLedger> {
    let mut next = ledger.clone();
    next.step(r_t)?;
    Ok(next)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodeSlot {
    pub slot: usize,
    pub capacity: f64,
    pub assigned: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodeReport {
    /// In decoding order: last slot first.
    pub slots: Vec<DecodeSlot>,
    pub total_assigned: f64,
}

/// Replays successive decoding from the last slot backwards. Every slot but
/// the last carries exactly its capacity; the last carries the remainder.
pub fn decode_check(ledger: &RateLedger) -> Result<DecodeReport> {
    let t_end = ledger
        .completed_at
        .ok_or_else(|| Error::Usage("decode check needs a completed ledger".into()))?;
    let caps = &ledger.capacities[..t_end];
    let before_last: f64 = caps[..t_end - 1].iter().sum();
    let mut slots = Vec::with_capacity(t_end);
    // The remainder is computed by subtraction, so allow round-off relative to N.
    let slack = 1e-12 * ledger.n_total.max(1.0);
    let mut total = 0.0;
    for tau in (0..t_end).rev() {
        let assigned = if tau == t_end - 1 {
            ledger.n_total - before_last
        } else {
            caps[tau]
        };
        if assigned > caps[tau] + slack || assigned < 0.0 {
            return Err(Error::Internal(format!(
                "slot {tau} assigned {assigned} exceeds capacity {}",
                caps[tau]
            )));
        }
        total += assigned;
        slots.push(DecodeSlot {
            slot: tau,
            capacity: caps[tau],
            assigned,
        });
    }
    Ok(DecodeReport {
        slots,
        total_assigned: total,
    })
}
