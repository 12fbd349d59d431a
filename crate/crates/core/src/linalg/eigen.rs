//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Results follow the `A = U^H diag(sigma) U` convention: the rows of `U` are
//! the (conjugated) eigenvectors. Eigenvalues come out in the order the sweeps
//! leave them and are not sorted.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Off-diagonal Frobenius mass below which the iteration stops, relative to
/// `max(1, ||A||_F)`.
pub const JACOBI_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct HermEigen {
    /// Unitary; row `k` is the conjugate of the eigenvector for `sigma[k]`.
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
}

impl HermEigen {
    /// `U^H diag(values) U` with the stored basis.
    pub fn reconstruct_with(&self, values: &[f64]) -> Result<ComplexMatrix> {
        ComplexMatrix::congruence_diag(&self.u, values)
    }

    pub fn reconstruct(&self) -> Result<ComplexMatrix> {
        self.reconstruct_with(&self.sigma)
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is checked to be Hermitian and symmetrized before rotating.
pub fn herm_eig(a: &ComplexMatrix) -> Result<HermEigen> {
    let mut a = a.require_hermitian("herm_eig")?;
    let n = a.rows();
    // Columns of `v` accumulate the eigenvectors: A_in = V diag V^H.
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_TOL * a.frobenius().max(1.0);

    let mut off = off_diagonal_norm(&a);
    let mut sweeps = 0;
    while off >= threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                what: "Jacobi eigensolver",
                iterations: sweeps,
                residual: off,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a);
    }

    let sigma = (0..n).map(|i| a[(i, i)].re).collect();
    Ok(HermEigen {
        u: v.adjoint(),
        sigma,
    })
}

/// Annihilates `a[p][q]` with a unitary plane rotation `G`: `A <- G^H A G`, `V <- V G`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    // The phase factor diag(1, e^{-i phi}) makes the (p, q) entry real and
    // positive, after which the real Jacobi rotation applies.
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let pc = phase.conj();
    // G restricted to (p, q):
    //   [ g_pp g_pq ]   [ c          s       ]
    //   [ g_qp g_qq ] = [ -s pc      c pc    ]
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -pc * s;
    let g_qq = pc * c;

    let n = a.rows();
    // A <- A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    // A <- G^H A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}
