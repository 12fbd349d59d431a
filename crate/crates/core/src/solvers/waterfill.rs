use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, ComplexMatrix};

/// Exact maximizer of `log det(I + H Q H^H) - (Z/V) tr(Q)` over `{Q >= 0, tr Q <= cap}`.
#[derive(Debug, Clone, Serialize)]
pub struct WaterfillResult {
    pub q: ComplexMatrix,
    /// Multiplier of the trace cap.
    pub mu: f64,
    /// Power per eigenmode, aligned with `sigma`.
    pub theta: Vec<f64>,
    /// Eigenvalues of `H^H H`, in the eigensolver's order.
    pub sigma: Vec<f64>,
}

impl WaterfillResult {
    /// `1 / (mu + z_over_v)`, infinite when both vanish.
    pub fn water_level(&self, z_over_v: f64) -> f64 {
        1.0 / (self.mu + z_over_v)
    }
}

/// Relative floor under which an eigenvalue of `H^H H` is treated as a null direction.
const NULL_EIGEN_TOL: f64 = 1e-12;

/// Solves the penalized, trace-capped covariance problem in closed form.
///
/// `H^H H` is diagonalized, then the multiplier of the trace cap is found by
/// first testing `mu = 0` and otherwise sweeping the eigenvalues in decreasing
/// order until the active set is consistent.
pub fn waterfill_penalized(h_tilde: &ComplexMatrix, z_over_v: f64, cap: f64) -> Result<WaterfillResult> {
    if !(z_over_v >= 0.0) || !z_over_v.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "z_over_v must be finite and >= 0, got {z_over_v}"
        )));
    }
    if !(cap > 0.0) || !cap.is_finite() {
        return Err(Error::InvalidArgument(format!("cap must be positive, got {cap}")));
    }

    let gram = (&h_tilde.adjoint() * h_tilde).hermitian_part();
    let eig = herm_eig(&gram)?;
    let n = eig.sigma.len();
    let floor = NULL_EIGEN_TOL * eig.sigma.iter().fold(1.0_f64, |m, s| m.max(s.abs()));
    // Null directions get 1/sigma = +inf and therefore no power.
    let inv_sigma: Vec<f64> = eig
        .sigma
        .iter()
        .map(|&s| if s > floor { 1.0 / s } else { f64::INFINITY })
        .collect();
    let loading = |level: f64| -> Vec<f64> {
        inv_sigma
            .iter()
            .map(|&inv| if inv.is_infinite() { 0.0 } else { (level - inv).max(0.0) })
            .collect()
    };

    let (mu, theta) = 'found: {
        // Step 1: is mu = 0 feasible? With z_over_v = 0 the level is infinite and it never is.
        if z_over_v > 0.0 {
            let theta = loading(1.0 / z_over_v);
            if theta.iter().sum::<f64>() <= cap {
                break 'found (0.0, theta);
            }
        }

        let mut order: Vec<usize> = (0..n).filter(|&i| inv_sigma[i].is_finite()).collect();
        if order.is_empty() {
            // No usable direction: the objective is -(Z/V) tr Q (or constant), so Q = 0.
            break 'found (0.0, vec![0.0; n]);
        }
        // Stable sort keeps ties in eigensolver order.
        order.sort_by(|&a, &b| eig.sigma[b].total_cmp(&eig.sigma[a]));

        let mut partial = 0.0;
        for (pos, &idx) in order.iter().enumerate() {
            let i = (pos + 1) as f64;
            partial += inv_sigma[idx];
            let level = (partial + cap) / i;
            let mu = 1.0 / level - z_over_v;
            let next_inactive = match order.get(pos + 1) {
                Some(&next) => level - inv_sigma[next] <= 0.0,
                None => true,
            };
            // Round-off can leave mu a hair below zero right at the mu = 0 boundary.
            if mu >= -1e-12 * z_over_v.max(1.0) && level - inv_sigma[idx] > 0.0 && next_inactive {
                let mu = mu.max(0.0);
                break 'found (mu, loading(1.0 / (mu + z_over_v)));
            }
        }
        return Err(Error::Internal(
            "water-filling sweep found no consistent active set".into(),
        ));
    };

    let q = eig.reconstruct_with(&theta)?;
    Ok(WaterfillResult {
        q,
        mu,
        theta,
        sigma: eig.sigma,
    })
}

/// Objective value `log det(I + H Q H^H) - z_over_v tr(Q)`.
pub fn penalized_objective(h: &ComplexMatrix, q: &ComplexMatrix, z_over_v: f64) -> Result<f64> {
    Ok(crate::linalg::capacity(h, q)? - z_over_v * q.trace_re())
}
