//! Reference arithmetic for the integration tests. Nothing here calls the
//! library's linear algebra: products, determinants and inverses are plain
//! Gaussian elimination on row-major complex arrays.
#![allow(dead_code)]

use mimo_covariance::linalg::ComplexMatrix;
use num_complex::Complex64 as C;
use rand::Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone, PartialEq)]
pub struct M {
    pub r: usize,
    pub c: usize,
    pub a: Vec<C>,
}

impl M {
    pub fn zeros(r: usize, c: usize) -> Self {
        Self {
            r,
            c,
            a: vec![C::new(0.0, 0.0); r * c],
        }
    }

    pub fn eye(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.a[i * n + i] = C::new(1.0, 0.0);
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> C {
        self.a[i * self.c + j]
    }

    pub fn from_lib(x: &ComplexMatrix) -> Self {
        Self {
            r: x.rows(),
            c: x.cols(),
            a: x.entries().to_vec(),
        }
    }

    pub fn to_lib(&self) -> ComplexMatrix {
        ComplexMatrix::from_vec(self.r, self.c, self.a.clone()).unwrap()
    }

    /// Entries `mag * exp(i pi phase)`, row-major.
    pub fn polar_pi(r: usize, c: usize, e: &[(f64, f64)]) -> Self {
        Self {
            r,
            c,
            a: e.iter()
                .map(|&(m, ph)| C::from_polar(m, std::f64::consts::PI * ph))
                .collect(),
        }
    }

    pub fn mul(&self, o: &M) -> M {
        assert_eq!(self.c, o.r);
        let mut out = M::zeros(self.r, o.c);
        for i in 0..self.r {
            for k in 0..self.c {
                let x = self.at(i, k);
                for j in 0..o.c {
                    out.a[i * o.c + j] += x * o.at(k, j);
                }
            }
        }
        out
    }

    pub fn adj(&self) -> M {
        let mut out = M::zeros(self.c, self.r);
        for i in 0..self.r {
            for j in 0..self.c {
                out.a[j * self.r + i] = self.at(i, j).conj();
            }
        }
        out
    }

    fn zip(&self, o: &M, f: impl Fn(C, C) -> C) -> M {
        assert_eq!((self.r, self.c), (o.r, o.c));
        M {
            r: self.r,
            c: self.c,
            a: self.a.iter().zip(&o.a).map(|(x, y)| f(*x, *y)).collect(),
        }
    }

    pub fn add(&self, o: &M) -> M {
        self.zip(o, |x, y| x + y)
    }

    pub fn sub(&self, o: &M) -> M {
        self.zip(o, |x, y| x - y)
    }

    pub fn scale(&self, s: f64) -> M {
        M {
            r: self.r,
            c: self.c,
            a: self.a.iter().map(|x| x * s).collect(),
        }
    }

    pub fn fro(&self) -> f64 {
        self.a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace_re(&self) -> f64 {
        (0..self.r).map(|i| self.at(i, i).re).sum()
    }

    /// `Re tr(self^H o)`.
    pub fn inner_re(&self, o: &M) -> f64 {
        self.a.iter().zip(&o.a).map(|(x, y)| (x.conj() * y).re).sum()
    }
}

/// Determinant by elimination with partial pivoting.
pub fn det(m: &M) -> C {
    assert_eq!(m.r, m.c);
    let n = m.r;
    let mut a = m.a.clone();
    let mut d = C::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i * n + k].norm().total_cmp(&a[j * n + k].norm()))
            .unwrap();
        if a[p * n + k].norm() == 0.0 {
            return C::new(0.0, 0.0);
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            d = -d;
        }
        let piv = a[k * n + k];
        d *= piv;
        for i in k + 1..n {
            let f = a[i * n + k] / piv;
            for j in k..n {
                let v = a[k * n + j];
                a[i * n + j] -= f * v;
            }
        }
    }
    d
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn inverse(m: &M) -> M {
    assert_eq!(m.r, m.c);
    let n = m.r;
    let mut a = m.a.clone();
    let mut inv = M::eye(n).a;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i * n + k].norm().total_cmp(&a[j * n + k].norm()))
            .unwrap();
        for j in 0..n {
            a.swap(k * n + j, p * n + j);
            inv.swap(k * n + j, p * n + j);
        }
        let piv = a[k * n + k];
        for j in 0..n {
            a[k * n + j] /= piv;
            inv[k * n + j] /= piv;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = a[i * n + k];
            for j in 0..n {
                let (x, y) = (a[k * n + j], inv[k * n + j]);
                a[i * n + j] -= f * x;
                inv[i * n + j] -= f * y;
            }
        }
    }
    M { r: n, c: n, a: inv }
}

/// `ln det(I + H Q H^H)`.
pub fn capacity(h: &M, q: &M) -> f64 {
    let k = M::eye(h.r).add(&h.mul(q).mul(&h.adj()));
    det(&k).norm().ln()
}

/// `H^H (I + H Q H^H)^{-1} H`.
pub fn gradient(h: &M, q: &M) -> M {
    let k = M::eye(h.r).add(&h.mul(q).mul(&h.adj()));
    h.adj().mul(&inverse(&k)).mul(h)
}

pub fn penalized(h: &M, q: &M, z_over_v: f64) -> f64 {
    capacity(h, q) - z_over_v * q.trace_re()
}

/// Hermitian and `x^H (q + tol I) x > 0`, tested through the pivots of an
/// unpivoted elimination.
pub fn is_psd(q: &M, tol: f64) -> bool {
    let n = q.r;
    let herm = q.sub(&q.adj()).fro() <= 1e-9 * q.fro().max(1.0);
    let mut a = q.add(&M::eye(n).scale(tol)).a;
    for k in 0..n {
        let piv = a[k * n + k].re;
        if piv.is_nan() || piv <= 0.0 {
            return false;
        }
        for i in k + 1..n {
            let f = a[i * n + k] / piv;
            for j in k..n {
                let v = a[k * n + j];
                a[i * n + j] -= f * v;
            }
        }
    }
    herm
}

/// Eigenvalues of a 2x2 Hermitian matrix, ascending.
pub fn eig2(m: &M) -> [f64; 2] {
    let (a, d, b) = (m.at(0, 0).re, m.at(1, 1).re, m.at(0, 1));
    let mid = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mid - rad, mid + rad]
}

pub fn gaussian<R: Rng>(rng: &mut R, r: usize, c: usize, scale: f64) -> M {
    M {
        r,
        c,
        a: (0..r * c)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                C::new(re, im) * scale
            })
            .collect(),
    }
}

pub fn hermitian<R: Rng>(rng: &mut R, n: usize, scale: f64) -> M {
    let g = gaussian(rng, n, n, scale);
    g.add(&g.adj()).scale(0.5)
}

/// Random PSD matrix with trace at most `cap`, mixing full-rank, rank-one,
/// boundary (trace exactly `cap`) and zero cases.
pub fn feasible<R: Rng>(rng: &mut R, n: usize, cap: f64) -> M {
    let kind = rng.random_range(0..8);
    if kind == 0 {
        return M::zeros(n, n);
    }
    let cols = if kind == 1 { 1 } else { rng.random_range(1..=n) };
    let g = gaussian(rng, n, cols, 1.0);
    let a = g.mul(&g.adj());
    let tr = a.trace_re();
    let target = if kind <= 3 { cap } else { cap * rng.random::<f64>() };
    a.scale(target / tr)
}

/// Rescales `m` to Frobenius norm `norm`.
pub fn with_norm(m: &M, norm: f64) -> M {
    let f = m.fro();
    if f == 0.0 {
        m.clone()
    } else {
        m.scale(norm / f)
    }
}

/// Maximizes `f(s * w, s * (1 - w))` over `s in [0, cap]`, `w in [0, 1]` with
/// a 400 x 400 grid, then re-grids twice around the best cell.
pub fn grid_max_simplex(cap: f64, f: impl Fn(f64, f64) -> f64) -> (f64, f64, f64) {
    const N: usize = 400;
    let (mut s_lo, mut s_hi, mut w_lo, mut w_hi) = (0.0, cap, 0.0, 1.0);
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for _ in 0..3 {
        let ds = (s_hi - s_lo) / (N - 1) as f64;
        let dw = (w_hi - w_lo) / (N - 1) as f64;
        for i in 0..N {
            let s = s_lo + ds * i as f64;
            for j in 0..N {
                let w = w_lo + dw * j as f64;
                let v = f(s * w, s * (1.0 - w));
                if v > best.0 {
                    best = (v, s * w, s * (1.0 - w));
                }
            }
        }
        let s = best.1 + best.2;
        let w = if s > 0.0 { best.1 / s } else { 0.5 };
        s_lo = (s - 2.0 * ds).max(0.0);
        s_hi = (s + 2.0 * ds).min(cap);
        w_lo = (w - 2.0 * dw).max(0.0);
        w_hi = (w + 2.0 * dw).min(1.0);
    }
    best
}

pub fn h1() -> M {
    M::polar_pi(2, 2, &[(1.3131, 1.9590), (2.3880, 0.7104), (2.5567, 1.5259), (2.8380, 0.3845)])
}

pub fn h2() -> M {
    M::polar_pi(2, 2, &[(1.4781, 0.9674), (1.5291, 0.1396), (0.0601, 0.9849), (0.1842, 1.9126)])
}

pub fn error_case_1() -> [M; 2] {
    [
        M::polar_pi(2, 2, &[(1.3131, 2.0), (2.3880, 0.75), (2.5567, 1.5), (2.8380, 0.5)]),
        M::polar_pi(2, 2, &[(1.4781, 1.0), (1.5291, 0.25), (0.0601, 1.0), (0.1842, 2.0)]),
    ]
}

pub fn error_case_2() -> [M; 2] {
    [
        M::polar_pi(2, 2, &[(1.3, 2.0), (2.4, 0.5), (2.6, 1.5), (2.8, 0.5)]),
        M::polar_pi(2, 2, &[(1.5, 1.0), (1.5, 0.0), (0.0, 1.0), (0.2, 2.0)]),
    ]
}

/// `(B, delta)` for the two-state channel observed through `observed`.
pub fn two_state_constants(observed: Option<&[M; 2]>) -> (f64, f64) {
    let truth = [h1(), h2()];
    let b = truth.iter().map(M::fro).fold(0.0, f64::max);
    let delta = observed
        .map(|o| o.iter().zip(&truth).map(|(x, h)| x.sub(h).fro()).fold(0.0, f64::max))
        .unwrap_or(0.0);
    (b, delta)
}

pub fn psi(b: f64, delta: f64, p_bar: f64, n_r: usize) -> f64 {
    let sr = (n_r as f64).sqrt();
    (sr * b + sr * (b + delta) + (b + delta).powi(2) * n_r as f64 * p_bar * (2.0 * b + delta)) * delta
}

pub fn phi(b: f64, delta: f64, p: f64, n_t: usize) -> f64 {
    2.0 * p * (n_t as f64).sqrt() * (2.0 * b + delta) * delta
}
