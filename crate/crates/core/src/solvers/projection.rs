use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, ComplexMatrix};

/// Euclidean projection onto `{Q >= 0, tr Q <= cap}` with its multiplier.
#[derive(Debug, Clone, Serialize)]
pub struct CapProjection {
    pub q: ComplexMatrix,
    pub mu: f64,
    pub theta: Vec<f64>,
    pub sigma: Vec<f64>,
}

/// Nearest (Frobenius) PSD matrix with trace at most `cap`.
pub fn psd_cap_project(x: &ComplexMatrix, cap: f64) -> Result<ComplexMatrix> {
    psd_cap_project_full(x, cap).map(|p| p.q)
}

/// Eigenvalue soft-thresholding `theta_i = max(0, sigma_i - mu)`, where `mu = 0`
/// if the positive part already fits under `cap` and otherwise comes from a
/// sorted sweep over the eigenvalues.
pub fn psd_cap_project_full(x: &ComplexMatrix, cap: f64) -> Result<CapProjection> {
    if !(cap > 0.0) || !cap.is_finite() {
        return Err(Error::InvalidArgument(format!("cap must be positive, got {cap}")));
    }
    let eig = herm_eig(x)?;
    let n = eig.sigma.len();
    let shrink = |mu: f64| -> Vec<f64> { eig.sigma.iter().map(|&s| (s - mu).max(0.0)).collect() };

    let (mu, theta) = 'found: {
        let positive = shrink(0.0);
        if positive.iter().sum::<f64>() <= cap {
            break 'found (0.0, positive);
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.sigma[b].total_cmp(&eig.sigma[a]));
        let mut partial = 0.0;
        for (pos, &idx) in order.iter().enumerate() {
            partial += eig.sigma[idx];
            let mu = (partial - cap) / (pos + 1) as f64;
            let next_inactive = match order.get(pos + 1) {
                Some(&next) => eig.sigma[next] - mu <= 0.0,
                None => true,
            };
            if mu >= 0.0 && eig.sigma[idx] - mu > 0.0 && next_inactive {
                break 'found (mu, shrink(mu));
            }
        }
        return Err(Error::Internal(
            "projection sweep found no consistent threshold".into(),
        ));
    };

    let q = eig.reconstruct_with(&theta)?;
    Ok(CapProjection {
        q,
        mu,
        theta,
        sigma: eig.sigma,
    })
}
