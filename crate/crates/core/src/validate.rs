//! Randomized invariant suite behind `mimocov validate`.
//!
//! Every check draws fresh random instances and records the smallest margin
//! `bound + slack - value` it sees; a check passes when that margin is >= 0.

use std::fmt::Write;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channel::{channel_bounds, observe_csit, presets, sample_channel, stream_rng, CsitErrorModel, Stream};
use crate::controllers::bounds::psi;
use crate::error::Result;
use crate::linalg::random::{random_feasible_covariance, random_hermitian, random_matrix, random_psd, rng, with_frobenius};
use crate::linalg::{capacity, capacity_gradient, herm_eig, Cholesky, ComplexMatrix};
use crate::rate_adapt::{decode_check, RateLedger};
use crate::solvers::{cdi_optimal_policy, penalized_objective, psd_cap_project, waterfill_penalized, CDI_POWER_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationOptions {
    pub seed: u64,
    /// Random instances per check (the gradient-error suite uses ten times as many).
    pub draws: usize,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self { seed: 7, draws: 1000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub worst_margin: f64,
    pub passed: bool,
}

struct Tracker {
    name: &'static str,
    cases: usize,
    worst: f64,
}

impl Tracker {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            worst: f64::INFINITY,
        }
    }

    /// Records `value <= bound + slack`.
    fn le(&mut self, value: f64, bound: f64, slack: f64) {
        self.cases += 1;
        let m = bound + slack - value;
        // NaN must count as a failure.
        self.worst = if m.is_nan() { f64::NEG_INFINITY } else { self.worst.min(m) };
    }

    fn done(self) -> CheckOutcome {
        CheckOutcome {
            name: self.name,
            cases: self.cases,
            worst_margin: self.worst,
            passed: self.worst >= 0.0,
        }
    }
}

fn dim(r: &mut ChaCha8Rng, max: usize) -> usize {
    r.random_range(1..=max)
}

fn inverse_identity_plus(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = x.rows();
    Cholesky::new(&(&ComplexMatrix::identity(n) + x))?.inverse()
}

fn eigen_reconstruction(r: &mut ChaCha8Rng, draws: usize) -> Result<CheckOutcome> {
    let mut t = Tracker::new("eigendecomposition reconstructs input");
    for _ in 0..draws {
        let n = dim(r, 8);
        let a = random_hermitian(r, n, 2.0);
        let e = herm_eig(&a)?;
        t.le((&e.reconstruct()? - &a).frobenius(), 0.0, 1e-10);
        let uu = &e.u * &e.u.adjoint();
        t.le((&uu - &ComplexMatrix::identity(n)).frobenius(), 0.0, 1e-10);
    }
    Ok(t.done())
}

fn gradient_finite_difference(r: &mut ChaCha8Rng, draws: usize) -> Result<CheckOutcome> {
    let mut t = Tracker::new("capacity gradient matches finite differences");
    let eps = 1e-5;
    for _ in 0..draws {
        let (nr, nt) = (dim(r, 4), dim(r, 4));
        let h = random_matrix(r, nr, nt, 1.0);
        let mut q = random_psd(r, nt, 2.0);
        for i in 0..nt {
            q[(i, i)] += 0.1;
        }
        let dir = random_hermitian(r, nt, 1.0);
        let plus = capacity(&h, &(&q + &dir.scale(eps)))?;
        let minus = capacity(&h, &(&q - &dir.scale(eps)))?;
        let analytic = capacity_gradient(&h, &q)?.inner(&dir)?.re;
        t.le(((plus - minus) / (2.0 * eps) - analytic).abs(), 0.0, 1e-5);
    }
    Ok(t.done())
}

fn capacity_concavity(r: &mut ChaCha8Rng, draws: usize) -> Result<CheckOutcome> {
    let mut t = Tracker::new("capacity is concave in Q");
    for _ in 0..draws {
        let (nr, nt) = (dim(r, 4), dim(r, 4));
        let h = random_matrix(r, nr, nt, 1.0);
        let q1 = random_psd(r, nt, 3.0);
        let q2 = random_psd(r, nt, 3.0);
        let mid = (&q1 + &q2).scale(0.5);
        let avg = 0.5 * (capacity(&h, &q1)? + capacity(&h, &q2)?);
        t.le(avg, capacity(&h, &mid)?, 1e-9);
    }
    Ok(t.done())
}

fn frobenius_facts(r: &mut ChaCha8Rng, draws: usize) -> Result<CheckOutcome> {
    let mut t = Tracker::new("Frobenius norm: adjoint, triangle, product, trace inner product");
    for _ in 0..draws {
        let (m, n, k) = (dim(r, 5), dim(r, 5), dim(r, 5));
        let a = random_matrix(r, m, n, 1.5);
        let b = random_matrix(r, m, n, 1.5);
        let c = random_matrix(r, n, k, 1.5);
        let (fa, fb, fc) = (a.frobenius(), b.frobenius(), c.frobenius());
        t.le((a.adjoint().frobenius() - fa).abs(), 0.0, 1e-9);
        t.le((&a + &b).frobenius(), fa + fb, 1e-9);
        t.le((&a * &c).frobenius(), fa * fc, 1e-9);
        t.le(a.inner(&b)?.norm(), fa * fb, 1e-9);
    }
    Ok(t.done())
}

fn psd_norm_below_trace(r: &mut ChaCha8Rng, draws: usize) -> Result<CheckOutcome> {
    let mut t = Tracker::new("PSD matrices have Frobenius norm <= trace");
    for _ in 0..draws {
        let n = dim(r, 5);
        let a = random_psd(r, n, 3.0);
        t.le(a.frobenius(), a.trace_re(), 1e-9);
    }
    Ok(t.done())
}

fn inverse_norm_bound(r: &mut ChaCha8Rng, draws: usize) -> Result<CheckOutcome> {
    let mut t = Tracker::new("||(I + X)^-1||_F <= sqrt(n) for PSD X");
    for _ in 0..draws {
        let n = dim(r, 6);
        let x = random_psd(r, n, 3.0);
        t.le(inverse_identity_plus(&x)?.frobenius(), (n as f64).sqrt(), 1e-9);
    }
    Ok(t.done())
}

/// `(H, H~)` with `||H||_F <= b` and `||H~ - H||_F <= delta`.
fn perturbed_pair(r: &mut ChaCha8Rng, nr: usize, nt: usize, b: f64, delta: f64) -> (ComplexMatrix, ComplexMatrix) {
    let h = with_frobenius(&random_matrix(r, nr, nt, 1.0), b * r.random_range(0.0..=1.0));
    let e = with_frobenius(&random_matrix(r, nr, nt, 1.0), delta * r.random_range(0.0..=1.0));
    let ht = &h + &e;
    (h, ht)
}

fn gram_difference(r: &mut ChaCha8Rng, draws: usize) -> Result<CheckOutcome> {
    let mut t = Tracker::new("||H^H H - H~^H H~||_F <= (2B + delta) delta");
    for _ in 0..draws {
        let (b, delta) = (r.random_range(0.1..5.0), r.random_range(0.0..2.0));
        let (nr, nt) = (dim(r, 4), dim(r, 4));
        let (h, ht) = perturbed_pair(r, nr, nt, b, delta);
        let diff = (&(&h.adjoint() * &h) - &(&ht.adjoint() * &ht)).frobenius();
        t.le(diff, (2.0 * b + delta) * delta, 1e-9);
    }
    Ok(t.done())
}

fn inverse_lipschitz(r: &mut ChaCha8Rng, draws: usize) -> Result<CheckOutcome> {
    let mut t = Tracker::new("||(I+Y)^-1 - (I+X)^-1||_F <= n ||Y - X||_F");
    for _ in 0..draws {
        let n = dim(r, 4);
        let x = random_psd(r, n, 3.0);
        let y = random_psd(r, n, 3.0);
        let lhs = (&inverse_identity_plus(&y)? - &inverse_identity_plus(&x)?).frobenius();
        t.le(lhs, n as f64 * (&y - &x).frobenius(), 1e-9);
    }
    Ok(t.done())
}

fn gradient_error_bounds(r: &mut ChaCha8Rng, draws: usize) -> Result<CheckOutcome> {
    let mut t = Tracker::new("gradient norm and CSIT gradient-error bounds");
    let p_bar = 2.0;
    for _ in 0..draws {
        let (nr, nt) = (dim(r, 4), dim(r, 4));
        let (b, delta) = (r.random_range(0.1..5.0), r.random_range(0.0..1.0));
        let (h, ht) = perturbed_pair(r, nr, nt, b, delta);
        let q = random_feasible_covariance(r, nt, p_bar);
        let d = capacity_gradient(&h, &q)?;
        let dt = capacity_gradient(&ht, &q)?;
        let base = (nr as f64).sqrt() * b * b;
        let ps = psi(b, delta, p_bar, nr);
        t.le(d.frobenius(), base, 1e-9);
        t.le((&d - &dt).frobenius(), ps, 1e-9);
        t.le(dt.frobenius(), ps + base, 1e-9);
    }
    Ok(t.done())
}

fn waterfill_optimality(r: &mut ChaCha8Rng, draws: usize) -> Result<CheckOutcome> {
    let mut t = Tracker::new("water-filling beats random feasible covariances");
    let competitors = 50;
    for _ in 0..draws {
        let (nr, nt) = (dim(r, 4), dim(r, 4));
        let h = random_matrix(r, nr, nt, 1.0);
        let sigma_max = herm_eig(&(&h.adjoint() * &h))?.sigma.into_iter().fold(0.0, f64::max);
        let zv = r.random_range(0.0..=2.0 * sigma_max.max(1e-3));
        let cap = r.random_range(0.5..=5.0);
        let w = waterfill_penalized(&h, zv, cap)?;
        let best = penalized_objective(&h, &w.q, zv)?;
        t.le(w.q.trace_re(), cap, 1e-9);
        for _ in 0..competitors {
            let q = psd_cap_project(&random_hermitian(r, nt, cap), cap)?;
            t.le(penalized_objective(&h, &q, zv)?, best, 1e-9);
        }
    }
    Ok(t.done())
}

fn projection_properties(r: &mut ChaCha8Rng, draws: usize) -> Result<CheckOutcome> {
    let mut t = Tracker::new("projection is non-expansive and satisfies the variational inequality");
    for _ in 0..draws {
        let n = dim(r, 4);
        let cap = r.random_range(0.5..=4.0);
        let x = random_hermitian(r, n, 3.0);
        let y = random_hermitian(r, n, 3.0);
        let px = psd_cap_project(&x, cap)?;
        let py = psd_cap_project(&y, cap)?;
        t.le((&px - &py).frobenius(), (&x - &y).frobenius(), 1e-9);
        for _ in 0..10 {
            let q = random_feasible_covariance(r, n, cap);
            t.le((&x - &px).inner(&(&q - &px))?.re, 0.0, 1e-8);
        }
    }
    Ok(t.done())
}

fn csit_error_within_delta(seed: u64, draws: usize) -> Result<CheckOutcome> {
    let mut t = Tracker::new("CSIT error never exceeds the reported delta");
    let model = presets::two_state();
    let errs = [
        CsitErrorModel::Exact,
        CsitErrorModel::PhaseQuantize {
            step: presets::PHASE_STEP_CASE_1,
        },
        presets::error_case_1_model(),
        presets::error_case_2_model(),
        CsitErrorModel::BoundedBall { delta: 0.3 },
    ];
    for err in &errs {
        let delta = channel_bounds(&model, err).delta;
        for k in 0..draws as u64 {
            let h = sample_channel(&model, &mut stream_rng(seed, Stream::Channel, k));
            let ht = observe_csit(&h, err, &mut stream_rng(seed, Stream::Csit, k));
            t.le((&ht - &h).frobenius(), delta, 1e-9);
        }
    }
    Ok(t.done())
}

fn cdi_policy_kkt() -> Result<CheckOutcome> {
    let mut t = Tracker::new("per-state optimum is water-filling at the power price");
    let model = presets::two_state();
    let pol = cdi_optimal_policy(&model, 2.0, 3.0, CDI_POWER_TOL)?;
    for (h, q) in pol.states.iter().zip(&pol.covariances) {
        let again = waterfill_penalized(h, pol.lambda, 3.0)?.q;
        t.le((&again - q).frobenius(), 0.0, 0.0);
        t.le(q.trace_re(), 3.0, 1e-9);
    }
    t.le(pol.average_power, 2.0, 0.0);
    t.le(2.0 - CDI_POWER_TOL, pol.average_power, 0.0);
    Ok(t.done())
}

fn ledger_overhead(r: &mut ChaCha8Rng, draws: usize) -> Result<CheckOutcome> {
    let mut t = Tracker::new("rate ledger overhead below last slot and decodable");
    let mut completed = 0;
    while completed < draws {
        let n = r.random_range(0.5..50.0);
        let mut l = RateLedger::new(n)?;
        while !l.is_complete() {
            l.step(r.random_range(0.0..4.0))?;
        }
        completed += 1;
        let last = *l.capacities.last().expect("completed ledger has slots");
        let overhead = l.overhead.expect("completed");
        t.le(-overhead, 0.0, 0.0);
        // strict: overhead < R(T-1) unless the last slot alone covers everything
        t.le(overhead, last, 0.0);
        let ok = decode_check(&l).map(|rep| (rep.total_assigned - n).abs() <= 1e-9).unwrap_or(false);
        t.le(if ok { 0.0 } else { 1.0 }, 0.0, 0.0);
    }
    Ok(t.done())
}

pub fn run_validation(opts: ValidationOptions) -> Result<Vec<CheckOutcome>> {
    let d = opts.draws.max(1);
    let mut r = rng(opts.seed);
    Ok(vec![
        eigen_reconstruction(&mut r, d)?,
        gradient_finite_difference(&mut r, d)?,
        capacity_concavity(&mut r, d)?,
        frobenius_facts(&mut r, d)?,
        psd_norm_below_trace(&mut r, d)?,
        inverse_norm_bound(&mut r, d)?,
        gram_difference(&mut r, d)?,
        inverse_lipschitz(&mut r, d)?,
        gradient_error_bounds(&mut r, 10 * d)?,
        waterfill_optimality(&mut r, d)?,
        projection_properties(&mut r, d)?,
        csit_error_within_delta(opts.seed, d)?,
        cdi_policy_kkt()?,
        ledger_overhead(&mut r, d)?,
    ])
}

/// Plain-text pass/fail table.
pub fn format_table(outcomes: &[CheckOutcome]) -> String {
    let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
    let mut s = String::new();
    for o in outcomes {
        let _ = writeln!(
            s,
            "{}  {:<width$}  cases={:<6} worst_margin={:.3e}",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.cases,
            o.worst_margin
        );
    }
    s
}
