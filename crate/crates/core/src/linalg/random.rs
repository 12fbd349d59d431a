//! Seeded random matrix generators used by the property checks and examples.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::ComplexMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex normal sample with independent `N(0, 1)` real and imaginary parts.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix with i.i.d. complex-normal entries times `scale`.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, scale: f64) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| complex_normal(rng) * scale).collect();
    ComplexMatrix::from_vec(rows, cols, data).expect("length matches")
}

/// Random Hermitian matrix, generally indefinite.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> ComplexMatrix {
    random_matrix(rng, n, n, scale).hermitian_part()
}

/// Random PSD matrix `A A^H / n` with rank drawn uniformly from `1..=n`.
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> ComplexMatrix {
    let rank = rng.random_range(1..=n);
    let a = random_matrix(rng, n, rank, scale);
    (&a * &a.adjoint()).scale(1.0 / n as f64).hermitian_part()
}

/// Random PSD matrix whose trace is uniform on `[0, cap]`.
pub fn random_feasible_covariance<R: Rng + ?Sized>(rng: &mut R, n: usize, cap: f64) -> ComplexMatrix {
    let q = random_psd(rng, n, 1.0);
    let tr = q.trace_re();
    let target = rng.random_range(0.0..=cap);
    if tr <= 0.0 {
        return ComplexMatrix::zeros(n, n);
    }
    q.scale(target / tr)
}

/// Rescales `a` so that its Frobenius norm is exactly `norm` (zero stays zero).
pub fn with_frobenius(a: &ComplexMatrix, norm: f64) -> ComplexMatrix {
    let f = a.frobenius();
    if f == 0.0 {
        return a.clone();
    }
    a.scale(norm / f)
}
