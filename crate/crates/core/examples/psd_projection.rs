//! Euclidean projection onto `{Q >= 0, tr Q <= cap}`.
//!
//!     cargo run --example psd_projection

use mimo_covariance::linalg::random::{random_hermitian, rng};
use mimo_covariance::linalg::ComplexMatrix;
use mimo_covariance::solvers::psd_cap_project_full;
use num_complex::Complex64;

fn main() -> mimo_covariance::Result<()> {
    let x = ComplexMatrix::from_rows(&[
        vec![Complex64::new(3.0, 0.0), Complex64::new(1.0, 1.0)],
        vec![Complex64::new(1.0, -1.0), Complex64::new(-1.0, 0.0)],
    ])?;
    for cap in [10.0, 2.0, 0.5] {
        let p = psd_cap_project_full(&x, cap)?;
        println!(
            "cap {cap:<4} eigenvalues {:.4?} -> {:.4?} (shift {:.4}), distance {:.4}",
            p.sigma,
            p.theta,
            p.mu,
            (&x - &p.q).frobenius()
        );
    }

    let mut r = rng(3);
    let y = random_hermitian(&mut r, 4, 2.0);
    let p = psd_cap_project_full(&y, 1.0)?;
    println!("random 4x4 input, projected trace {:.6}\n{:?}", p.q.trace_re(), p.q);
    Ok(())
}
