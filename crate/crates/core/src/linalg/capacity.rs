use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Lower-triangular Cholesky factor `L` with `A = L L^H`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: ComplexMatrix,
}

impl Cholesky {
    /// Factorizes a Hermitian positive-definite matrix. Only the lower triangle is read.
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        a.check_square("cholesky")?;
        let n = a.rows();
        let mut l = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            let mut d = a[(j, j)].re;
            for k in 0..j {
                d -= l[(j, k)].norm_sqr();
            }
            if !(d > 0.0) {
                return Err(Error::NotPositiveDefinite { pivot: j });
            }
            let ljj = d.sqrt();
            l[(j, j)] = Complex64::new(ljj, 0.0);
            for i in (j + 1)..n {
                let mut s = a[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / ljj;
            }
        }
        Ok(Self { l })
    }

    pub fn factor(&self) -> &ComplexMatrix {
        &self.l
    }

    pub fn log_det(&self) -> f64 {
        (0..self.l.rows()).map(|i| 2.0 * self.l[(i, i)].re.ln()).sum()
    }

    /// Solves `A X = B` for `X`.
    pub fn solve(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.l.rows();
        if b.rows() != n {
            return Err(Error::DimensionMismatch {
                op: "cholesky solve",
                expected: format!("{n} rows"),
                found: format!("{}x{}", b.rows(), b.cols()),
            });
        }
        let mut x = b.clone();
        for c in 0..b.cols() {
            // L y = b
            for i in 0..n {
                let mut s = x[(i, c)];
                for k in 0..i {
                    s -= self.l[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s / self.l[(i, i)].re;
            }
            // L^H x = y
            for i in (0..n).rev() {
                let mut s = x[(i, c)];
                for k in (i + 1)..n {
                    s -= self.l[(k, i)].conj() * x[(k, c)];
                }
                x[(i, c)] = s / self.l[(i, i)].re;
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<ComplexMatrix> {
        Ok(self.solve(&ComplexMatrix::identity(self.l.rows()))?.hermitian_part())
    }
}

fn check_channel_and_covariance(h: &ComplexMatrix, q: &ComplexMatrix, op: &'static str) -> Result<()> {
    if !q.is_square() || q.rows() != h.cols() {
        return Err(Error::DimensionMismatch {
            op,
            expected: format!("{n}x{n} covariance", n = h.cols()),
            found: format!("{}x{}", q.rows(), q.cols()),
        });
    }
    Ok(())
}

/// `I + H Q H^H`, symmetrized.
fn gram_plus_identity(h: &ComplexMatrix, q: &ComplexMatrix) -> Result<ComplexMatrix> {
    let hqh = h.matmul(q)?.matmul(&h.adjoint())?;
    let mut m = hqh.hermitian_part();
    for i in 0..m.rows() {
        m[(i, i)] += 1.0;
    }
    Ok(m)
}

/// Instantaneous capacity `log det(I + H Q H^H)` in nats.
pub fn capacity(h: &ComplexMatrix, q: &ComplexMatrix) -> Result<f64> {
    check_channel_and_covariance(h, q, "capacity")?;
    let chol = Cholesky::new(&gram_plus_identity(h, q)?)?;
    Ok(chol.log_det().max(0.0))
}

/// Gradient of [`capacity`] with respect to `Q`: `H^H (I + H Q H^H)^{-1} H`.
pub fn capacity_gradient(h: &ComplexMatrix, q: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_channel_and_covariance(h, q, "capacity_gradient")?;
    let chol = Cholesky::new(&gram_plus_identity(h, q)?)?;
    let x = chol.solve(h)?;
    Ok(h.adjoint().matmul(&x)?.hermitian_part())
}

pub fn frobenius(a: &ComplexMatrix) -> f64 {
    a.frobenius()
}
