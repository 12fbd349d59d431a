use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::config::{BaselineKind, ControllerSpec, ExperimentConfig};
use crate::channel::{channel_bounds, observe_csit, sample_channel, stream_rng, ChannelBounds, ChannelModel, DelayModel, Stream};
use crate::controllers::{theoretical_bounds, BoundReport, DppState, OgdState, StepPolicy, SystemConstants, Tuning};
use crate::error::{Error, Result};
use crate::linalg::{capacity, ComplexMatrix};
use crate::rate_adapt::{decode_check, RateLedger};
use crate::solvers::{
    cdi_optimal_policy, empirical_policy, ergodic_constant_covariance, AscentOptions, CdiPolicy, ConstantPolicy,
    EmpiricalMode, EmpiricalPolicy, CDI_POWER_TOL,
};

/// Slack granted to every hard inequality.
pub const CERT_SLACK: f64 = 1e-9;
/// Allowance for sampling noise when comparing a finite run with an expected value.
pub const UTILITY_ALLOWANCE: f64 = 0.05;

/// One slot of a run. Running averages are prefix means over slots `0..=t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotRecord {
    pub t: u64,
    /// Utility `log det(I + H Q H^H)` on the true channel, in nats.
    pub r: f64,
    pub runavg_r: f64,
    pub tr_q: f64,
    pub runavg_tr_q: f64,
    /// Virtual queue after this slot's update (queue controller only).
    pub z: Option<f64>,
    /// Utility of the fixed reference covariance on this slot's channel.
    pub r_ref: Option<f64>,
}

/// A precomputed policy replayed by the baseline controller.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BaselinePolicy {
    /// Per-state covariances with nearest-state lookup.
    Adaptive(CdiPolicy),
    Constant(ConstantPolicy),
}

impl BaselinePolicy {
    pub fn covariance_for(&self, h: &ComplexMatrix) -> &ComplexMatrix {
        match self {
            BaselinePolicy::Adaptive(p) => p.lookup(h),
            BaselinePolicy::Constant(c) => &c.q,
        }
    }

    /// Expected utility under the law the policy was fitted to.
    pub fn fitted_utility(&self) -> f64 {
        match self {
            BaselinePolicy::Adaptive(p) => p.r_opt,
            BaselinePolicy::Constant(c) => c.objective,
        }
    }
}

impl From<EmpiricalPolicy> for BaselinePolicy {
    fn from(p: EmpiricalPolicy) -> Self {
        match p {
            EmpiricalPolicy::WithCsit(c) => BaselinePolicy::Adaptive(c),
            EmpiricalPolicy::NoCsit(c) => BaselinePolicy::Constant(c),
        }
    }
}

/// The baseline matching a controller: the per-state optimum for the queue
/// controller, the best constant covariance for the gradient controller.
pub fn default_baseline_kind(cfg: &ExperimentConfig) -> BaselineKind {
    match &cfg.controller {
        ControllerSpec::Baseline { policy, .. } => *policy,
        ControllerSpec::Dpp { .. } => BaselineKind::CdiOptimal,
        ControllerSpec::Ogd { .. } => BaselineKind::Constant,
    }
}

/// `n` accurate channel draws from the run's training stream.
pub fn training_samples(model: &ChannelModel, seed: u64, n: usize) -> Vec<ComplexMatrix> {
    (0..n as u64)
        .map(|k| sample_channel(model, &mut stream_rng(seed, Stream::Training, k)))
        .collect()
}

pub fn compute_baseline(cfg: &ExperimentConfig, kind: BaselineKind, samples: usize) -> Result<BaselinePolicy> {
    let model = cfg.channel.resolve()?;
    match kind {
        BaselineKind::CdiOptimal => Ok(BaselinePolicy::Adaptive(cdi_optimal_policy(
            &model,
            cfg.p_bar,
            cfg.p,
            CDI_POWER_TOL,
        )?)),
        BaselineKind::Constant => Ok(BaselinePolicy::Constant(ergodic_constant_covariance(
            &model,
            cfg.p_bar,
            AscentOptions::default(),
        )?)),
        BaselineKind::EmpiricalCsit | BaselineKind::EmpiricalNoCsit => {
            let mode = if kind == BaselineKind::EmpiricalCsit {
                EmpiricalMode::WithCsit
            } else {
                EmpiricalMode::NoCsit
            };
            let train = training_samples(&model, cfg.seed, samples);
            empirical_policy(&train, cfg.p_bar, cfg.p, mode, AscentOptions::default()).map(Into::into)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceKind {
    CdiOptimal,
    ConstantCovariance,
}

/// Distribution-aware benchmark the run is compared against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub kind: ReferenceKind,
    /// Expected utility of the benchmark, in nats.
    pub r_opt: f64,
    /// Average of the per-slot benchmark utilities over the run, when tracked.
    pub realized_avg: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertKind {
    /// A deterministic sample-path inequality; failure is a bug.
    Hard,
    /// Holds in expectation or with high probability; failure is reported only.
    Statistical,
    /// Recorded for inspection without a proved guarantee.
    Informational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub kind: CertKind,
    pub passed: bool,
    /// Smallest `bound - value` over the checked slots; the check fails below `-CERT_SLACK`.
    pub worst_margin: f64,
    /// Slot at which the worst margin occurred.
    pub worst_slot: Option<u64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerSummary {
    pub n_total: f64,
    pub delivered: f64,
    /// Slots used to deliver the block.
    pub completed_at: Option<usize>,
    pub overhead: Option<f64>,
    pub relative_overhead: Option<f64>,
    pub decode_ok: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub name: String,
    pub controller: String,
    pub csit: String,
    pub horizon: u64,
    pub seed: u64,
    pub n_r: usize,
    pub n_t: usize,
    pub p: f64,
    pub p_bar: f64,
    pub final_avg_utility: f64,
    pub final_avg_power: f64,
    pub final_queue: Option<f64>,
    pub channel_bounds: ChannelBounds,
    pub theory: Option<BoundReport>,
    pub reference: Option<Reference>,
    pub certificates: Vec<Certificate>,
    pub rate_adapt: Option<LedgerSummary>,
    pub hard_failures: usize,
}

impl RunSummary {
    pub fn certificate(&self, name: &str) -> Option<&Certificate> {
        self.certificates.iter().find(|c| c.name == name)
    }

    pub fn all_hard_passed(&self) -> bool {
        self.hard_failures == 0
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub records: Vec<SlotRecord>,
    pub summary: RunSummary,
}

enum Controller {
    Dpp(DppState),
    Ogd {
        state: OgdState,
        /// Observations not yet delivered, oldest first.
        pending: VecDeque<ComplexMatrix>,
    },
    Replay(BaselinePolicy),
}

fn build_controller(cfg: &ExperimentConfig, n_t: usize) -> Result<Controller> {
    Ok(match &cfg.controller {
        ControllerSpec::Dpp { v, z0 } => Controller::Dpp(DppState::with_initial_queue(*v, cfg.p, cfg.p_bar, *z0)?),
        ControllerSpec::Ogd { .. } => {
            let step = cfg.controller.step_policy()?.expect("ogd has a step policy");
            let delay = match cfg.delay_model() {
                DelayModel::Delayed { t_slots } => t_slots,
                DelayModel::Instantaneous => unreachable!("validated"),
            };
            Controller::Ogd {
                state: OgdState::new(n_t, step, cfg.p_bar, delay)?,
                pending: VecDeque::with_capacity(delay + 1),
            }
        }
        ControllerSpec::Baseline { policy, samples, file } => {
            let policy = match file {
                Some(path) => load_baseline(path)?,
                None => compute_baseline(cfg, *policy, *samples)?,
            };
            Controller::Replay(policy)
        }
    })
}

pub fn load_baseline(path: &std::path::Path) -> Result<BaselinePolicy> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Fixed covariance whose per-slot utility the gradient controller is compared against.
fn regret_reference(cfg: &ExperimentConfig, model: &ChannelModel) -> Result<Option<ConstantPolicy>> {
    match (&cfg.controller, model) {
        (ControllerSpec::Ogd { .. }, ChannelModel::Discrete { .. }) => {
            Ok(Some(ergodic_constant_covariance(model, cfg.p_bar, AscentOptions::default())?))
        }
        _ => Ok(None),
    }
}

/// Runs one experiment. The result is a pure function of `cfg`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let model = cfg.channel.resolve()?;
    let err = cfg.csit.resolve()?;
    let (n_r, n_t) = model.dims();
    let bounds = channel_bounds(&model, &err);
    let mut controller = build_controller(cfg, n_t)?;
    let fixed_ref = regret_reference(cfg, &model)?;
    let mut ledger = cfg.rate_adapt.map(|ra| RateLedger::new(ra.n_total)).transpose()?;

    let mut records = Vec::with_capacity(cfg.horizon as usize);
    let (mut sum_r, mut sum_tr) = (0.0, 0.0);
    for t in 0..cfg.horizon {
        let slot = || move |e: Error| e.at_slot(t);
        let h = sample_channel(&model, &mut stream_rng(cfg.seed, Stream::Channel, t));
        let h_obs = observe_csit(&h, &err, &mut stream_rng(cfg.seed, Stream::Csit, t));

        let (q, z) = match &mut controller {
            Controller::Dpp(state) => {
                let q = state.step(&h_obs).map_err(slot())?;
                (q, Some(state.z))
            }
            Controller::Ogd { state, pending } => {
                let q = if state.needs_observation() {
                    let stale = pending.pop_front().expect("one observation per elapsed slot");
                    state.step(Some(&stale))
                } else {
                    state.step(None)
                }
                .map_err(slot())?;
                // This slot's CSIT becomes available `delay` slots later.
                pending.push_back(h_obs);
                (q, None)
            }
            Controller::Replay(policy) => (policy.covariance_for(&h_obs).clone(), None),
        };

        let r = capacity(&h, &q).map_err(slot())?;
        let r_ref = match &fixed_ref {
            Some(c) => Some(capacity(&h, &c.q).map_err(slot())?),
            None => None,
        };
        if let Some(l) = ledger.as_mut().filter(|l| !l.is_complete()) {
            l.step(r).map_err(slot())?;
        }
        let tr_q = q.trace_re();
        sum_r += r;
        sum_tr += tr_q;
        let n = (t + 1) as f64;
        records.push(SlotRecord {
            t,
            r,
            runavg_r: sum_r / n,
            tr_q,
            runavg_tr_q: sum_tr / n,
            z,
            r_ref,
        });
    }

    let theory = match &cfg.controller {
        ControllerSpec::Dpp { v, .. } => Some(Tuning::Dpp { v: *v }),
        ControllerSpec::Ogd { .. } => cfg.controller.step_policy()?.map(|step| Tuning::Ogd { step }),
        ControllerSpec::Baseline { .. } => None,
    }
    .map(|tuning| {
        let consts = SystemConstants {
            b: bounds.b,
            delta: bounds.delta,
            p: cfg.p,
            p_bar: cfg.p_bar,
            n_t,
            n_r,
        };
        theoretical_bounds(&consts, tuning, cfg.horizon)
    })
    .transpose()?;

    let reference = match (&cfg.controller, &model) {
        (ControllerSpec::Dpp { .. }, ChannelModel::Discrete { .. }) => Some(Reference {
            kind: ReferenceKind::CdiOptimal,
            r_opt: cdi_optimal_policy(&model, cfg.p_bar, cfg.p, CDI_POWER_TOL)?.r_opt,
            realized_avg: None,
        }),
        (ControllerSpec::Ogd { .. }, _) => fixed_ref.as_ref().map(|c| Reference {
            kind: ReferenceKind::ConstantCovariance,
            r_opt: c.objective,
            realized_avg: Some(records.iter().filter_map(|r| r.r_ref).sum::<f64>() / records.len() as f64),
        }),
        _ => None,
    };

    let rate_adapt = ledger.map(|l| LedgerSummary {
        n_total: l.n_total,
        delivered: l.delivered(),
        completed_at: l.completed_at,
        overhead: l.overhead,
        relative_overhead: l.relative_overhead(),
        decode_ok: l.is_complete().then(|| decode_check(&l).is_ok()),
    });

    let ctx = CertContext {
        cfg,
        bounds,
        theory: theory.as_ref(),
        reference: reference.as_ref(),
    };
    let mut certificates = certify(&records, &ctx);
    if let Some(ls) = &rate_adapt {
        if let Some(ok) = ls.decode_ok {
            certificates.push(Certificate {
                name: "rate-ledger-decodable".into(),
                kind: CertKind::Hard,
                passed: ok,
                worst_margin: ls.overhead.unwrap_or(0.0),
                worst_slot: ls.completed_at.map(|t| t as u64 - 1),
                detail: "reverse successive decoding assigns at most R(tau) to every slot".into(),
            });
        }
    }
    let hard_failures = certificates
        .iter()
        .filter(|c| c.kind == CertKind::Hard && !c.passed)
        .count();

    let last = records.last().expect("horizon >= 1");
    let summary = RunSummary {
        name: cfg.name.clone(),
        controller: cfg.controller.label().into(),
        csit: cfg.csit.label().into(),
        horizon: cfg.horizon,
        seed: cfg.seed,
        n_r,
        n_t,
        p: cfg.p,
        p_bar: cfg.p_bar,
        final_avg_utility: last.runavg_r,
        final_avg_power: last.runavg_tr_q,
        final_queue: last.z,
        channel_bounds: bounds,
        theory,
        reference,
        certificates,
        rate_adapt,
        hard_failures,
    };
    Ok(RunOutput { records, summary })
}

/// Everything besides the records that certification needs.
pub struct CertContext<'a> {
    pub cfg: &'a ExperimentConfig,
    pub bounds: ChannelBounds,
    pub theory: Option<&'a BoundReport>,
    pub reference: Option<&'a Reference>,
}

/// Tracks the worst margin of a per-slot inequality `value <= bound`.
struct Worst {
    margin: f64,
    slot: Option<u64>,
}

impl Worst {
    fn new() -> Self {
        Self {
            margin: f64::INFINITY,
            slot: None,
        }
    }

    fn see(&mut self, t: u64, bound: f64, value: f64) {
        let m = bound - value;
        if m < self.margin || self.slot.is_none() {
            self.margin = m;
            self.slot = Some(t);
        }
    }

    fn finish(self, name: &str, kind: CertKind, detail: String) -> Certificate {
        Certificate {
            name: name.into(),
            kind,
            passed: self.margin >= -CERT_SLACK,
            worst_margin: self.margin,
            worst_slot: self.slot,
            detail,
        }
    }
}

/// Re-derives every certificate from the slot records and run constants.
pub fn certify(records: &[SlotRecord], ctx: &CertContext<'_>) -> Vec<Certificate> {
    let cfg = ctx.cfg;
    let bounded = !ctx.bounds.unbounded_support;
    // Bounds that use B are only proved when the channel norm is truly bounded.
    let b_kind = if bounded { CertKind::Hard } else { CertKind::Statistical };
    let mut out = Vec::new();

    match &cfg.controller {
        ControllerSpec::Dpp { v, z0 } => {
            let theory = ctx.theory.expect("dpp has bounds");
            let qb = theory.queue_bound.expect("dpp has a queue bound").max(*z0);

            let mut w = Worst::new();
            for r in records {
                w.see(r.t, cfg.p, r.tr_q);
            }
            out.push(w.finish("per-slot-power-cap", CertKind::Hard, format!("tr Q(t) <= P = {}", cfg.p)));

            let mut w = Worst::new();
            for r in records {
                w.see(r.t, qb, r.z.unwrap_or(f64::NAN));
            }
            out.push(w.finish(
                "queue-bound",
                b_kind,
                format!("Z(t) <= V(B+delta)^2 + (P - P_bar) = {qb}"),
            ));

            let mut w = Worst::new();
            for r in records {
                let n = (r.t + 1) as f64;
                w.see(r.t, cfg.p_bar + r.z.unwrap_or(f64::NAN) / n, r.runavg_tr_q);
            }
            out.push(w.finish(
                "running-power-vs-queue",
                CertKind::Hard,
                "running-average power <= P_bar + Z(t)/t".into(),
            ));

            let mut w = Worst::new();
            for r in records {
                w.see(r.t, cfg.p_bar + qb / (r.t + 1) as f64, r.runavg_tr_q);
            }
            out.push(w.finish(
                "running-power-bound",
                b_kind,
                format!("running-average power <= P_bar + {qb}/t"),
            ));

            if let (Some(reference), Some(last)) = (ctx.reference, records.last()) {
                let eps = theory.epsilon.unwrap_or(0.0);
                let n = (last.t + 1) as f64;
                let warm = z0 * z0 / (2.0 * v * n);
                let bound = reference.r_opt - eps - theory.phi_delta - warm - UTILITY_ALLOWANCE;
                let mut w = Worst::new();
                w.see(last.t, last.runavg_r, bound);
                out.push(w.finish(
                    "utility-within-epsilon-phi",
                    CertKind::Statistical,
                    format!(
                        "final running-average utility >= R_opt - eps - phi(delta) - {UTILITY_ALLOWANCE} = {bound}"
                    ),
                ));
            }
        }
        ControllerSpec::Ogd { .. } => {
            let mut w = Worst::new();
            for r in records {
                w.see(r.t, cfg.p_bar, r.tr_q);
            }
            out.push(w.finish(
                "per-slot-power-budget",
                CertKind::Hard,
                format!("tr Q(t) <= P_bar = {}", cfg.p_bar),
            ));

            let delay = match cfg.delay_model() {
                DelayModel::Delayed { t_slots } => t_slots,
                DelayModel::Instantaneous => 0,
            };
            let theory = ctx.theory.expect("ogd has bounds");
            if records.iter().all(|r| r.r_ref.is_some()) && !records.is_empty() {
                let kind = if delay == 1 { b_kind } else { CertKind::Informational };
                let mut w = Worst::new();
                let mut sum_ref = 0.0;
                for r in records {
                    sum_ref += r.r_ref.expect("checked");
                    let n = r.t + 1;
                    let regret = theory.regret_at(n).unwrap_or(f64::INFINITY);
                    w.see(r.t, r.runavg_r, sum_ref / n as f64 - regret);
                }
                let schedule = match cfg.controller.step_policy().ok().flatten() {
                    Some(StepPolicy::InverseSqrt) => "1/sqrt(t) steps",
                    _ => "constant step",
                };
                out.push(w.finish(
                    "regret-bound",
                    kind,
                    format!("running-average utility >= running-average reference - regret bound ({schedule})"),
                ));
            }
        }
        ControllerSpec::Baseline { .. } => {
            let mut w = Worst::new();
            for r in records {
                w.see(r.t, cfg.p, r.tr_q);
            }
            out.push(w.finish("per-slot-power-cap", CertKind::Hard, format!("tr Q(t) <= P = {}", cfg.p)));
        }
    }

    let mut w = Worst::new();
    let (mut sr, mut sq) = (0.0, 0.0);
    for r in records {
        sr += r.r;
        sq += r.tr_q;
        let n = (r.t + 1) as f64;
        let dev = (sr / n - r.runavg_r).abs().max((sq / n - r.runavg_tr_q).abs());
        w.see(r.t, 1e-12, dev);
    }
    out.push(w.finish(
        "running-averages-consistent",
        CertKind::Hard,
        "running-average columns equal prefix means".into(),
    ));
    out
}
