//! Dense and matrix-free linear algebra used by the operator and estimate
//! modules: symmetric eigen-decompositions (through `nalgebra`), a Cholesky
//! factorization that yields a negative-direction certificate when it breaks
//! down, Lanczos with full reorthogonalization and conjugate gradients.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type DMat = DMatrix<f64>;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Eigenvalues in ascending order with matching eigenvector columns.
pub fn symmetric_eigen(m: &DMat) -> (Vec<f64>, DMat) {
    let n = m.nrows();
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn symmetric_eigenvalues(m: &DMat) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Lower-triangular Cholesky factor `M = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: DMat,
}

/// A failed factorization: the pivot that went non-positive and a vector `x`
/// with `xᵀ M x = schur_pivot ≤ 0`.
#[derive(Debug, Clone)]
pub struct Indefinite {
    pub pivot: usize,
    pub schur_pivot: f64,
    pub certificate: Vec<f64>,
}

impl Cholesky {
    /// Right-looking factorization of a symmetric matrix (only the lower
    /// triangle is read).
    pub fn factor(mut a: DMat) -> core::result::Result<Self, Indefinite> {
        let n = a.nrows();
        assert_eq!(n, a.ncols());
        for k in 0..n {
            let pivot = a[(k, k)];
            if !(pivot > 0.0) {
                let certificate = breakdown_certificate(&a, k);
                return Err(Indefinite {
                    pivot: k,
                    schur_pivot: pivot,
                    certificate,
                });
            }
            let lkk = pivot.sqrt();
            a[(k, k)] = lkk;
            {
                let mut col = a.column_mut(k);
                for i in k + 1..n {
                    col[i] /= lkk;
                }
            }
            for j in k + 1..n {
                let ljk = a[(j, k)];
                if ljk == 0.0 {
                    continue;
                }
                let (src, mut dst) = a.columns_range_pair_mut(k, j);
                let src = src.as_slice();
                let dst = dst.as_mut_slice();
                for i in j..n {
                    dst[i] -= src[i] * ljk;
                }
            }
        }
        for j in 1..n {
            for i in 0..j {
                a[(i, j)] = 0.0;
            }
        }
        Ok(Self { l: a })
    }

    pub fn l(&self) -> &DMat {
        &self.l
    }

    pub fn dim(&self) -> usize {
        self.l.nrows()
    }

    /// Solves `L y = b` in place.
    pub fn solve_lower(&self, b: &mut [f64]) {
        let n = self.dim();
        for j in 0..n {
            let col = self.l.column(j);
            b[j] /= col[j];
            let bj = b[j];
            for i in j + 1..n {
                b[i] -= col[i] * bj;
            }
        }
    }

    /// Solves `Lᵀ x = b` in place.
    pub fn solve_upper(&self, b: &mut [f64]) {
        let n = self.dim();
        for j in (0..n).rev() {
            let col = self.l.column(j);
            let mut s = b[j];
            for i in j + 1..n {
                s -= col[i] * b[i];
            }
            b[j] = s / col[j];
        }
    }

    /// Solves `M x = b` in place.
    pub fn solve(&self, b: &mut [f64]) {
        self.solve_lower(b);
        self.solve_upper(b);
    }
}

// After a right-looking elimination stopped at pivot k, rows 0..k of the lower
// triangle hold L11 and row k holds L11^{-1} M[0..k, k]. The vector
// x = [-L11^{-T} L[k, 0..k]; 1; 0...] satisfies xᵀ M x = S_kk.
fn breakdown_certificate(a: &DMat, k: usize) -> Vec<f64> {
    let n = a.nrows();
    let mut x = vec![0.0; n];
    x[k] = 1.0;
    for j in 0..k {
        x[j] = -a[(k, j)];
    }
    for j in (0..k).rev() {
        let mut s = x[j];
        for i in j + 1..k {
            s -= a[(i, j)] * x[i];
        }
        x[j] = s / a[(j, j)];
    }
    x
}

/// Which end of the spectrum [`lanczos_extreme`] targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extreme {
    Smallest,
    Largest,
}

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

/// Lanczos iteration with full reorthogonalization for one extreme eigenpair
/// of a symmetric operator given by its action `apply(x, y)` (`y ← A x`).
///
/// Converges when the Ritz residual `‖A v − θ v‖` drops below
/// `tol · max(1, |θ|)`. A Krylov space that becomes invariant is accepted as
/// converged.
pub fn lanczos_extreme<F>(
    n: usize,
    mut apply: F,
    which: Extreme,
    max_iter: usize,
    tol: f64,
    seed: u64,
) -> Result<Eigenpair>
where
    F: FnMut(&[f64], &mut [f64]),
{
    if n == 0 {
        return Err(Error::Domain("empty operator".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x /= nv);

    let max_iter = max_iter.min(n).max(1);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_iter);
    let mut alphas: Vec<f64> = Vec::with_capacity(max_iter);
    let mut betas: Vec<f64> = Vec::with_capacity(max_iter);
    let mut w = vec![0.0; n];
    let mut last_residual = f64::INFINITY;

    for it in 0..max_iter {
        apply(&v, &mut w);
        let alpha = dot(&v, &w);
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi -= alpha * vi;
        }
        if let (Some(prev), Some(&beta)) = (basis.last(), betas.last()) {
            for (wi, pi) in w.iter_mut().zip(prev) {
                *wi -= beta * pi;
            }
        }
        basis.push(v.clone());
        alphas.push(alpha);
        // two passes of classical Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let beta = norm(&w);

        let m = alphas.len();
        let check = m == max_iter || beta <= f64::EPSILON * alpha.abs().max(1.0) || m.is_multiple_of(5) || m < 5;
        if check {
            let t = DMat::from_fn(m, m, |i, j| {
                if i == j {
                    alphas[i]
                } else if i + 1 == j {
                    betas[i]
                } else if j + 1 == i {
                    betas[j]
                } else {
                    0.0
                }
            });
            let (vals, vecs) = symmetric_eigen(&t);
            let idx = match which {
                Extreme::Smallest => 0,
                Extreme::Largest => m - 1,
            };
            let theta = vals[idx];
            let residual = (beta * vecs[(m - 1, idx)]).abs();
            last_residual = residual;
            if residual <= tol * theta.abs().max(1.0) || beta <= f64::EPSILON * alpha.abs().max(1.0) || m == n {
                let mut x = vec![0.0; n];
                for (k, b) in basis.iter().enumerate() {
                    let c = vecs[(k, idx)];
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi += c * bi;
                    }
                }
                let nx = norm(&x);
                x.iter_mut().for_each(|xi| *xi /= nx);
                return Ok(Eigenpair {
                    value: theta,
                    vector: x,
                    iterations: it + 1,
                    residual,
                });
            }
        }
        betas.push(beta);
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / beta;
        }
    }
    Err(Error::Breakdown {
        iterations: max_iter,
        residual: last_residual,
    })
}

/// Conjugate gradients for a symmetric positive definite operator.
pub fn conjugate_gradient<F>(mut apply: F, b: &[f64], tol: f64, max_iter: usize) -> Result<Vec<f64>>
where
    F: FnMut(&[f64], &mut [f64]),
{
    let n = b.len();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let bnorm = norm(b).max(f64::MIN_POSITIVE);
    let mut rr = dot(&r, &r);
    for _ in 0..max_iter {
        if rr.sqrt() <= tol * bnorm {
            return Ok(x);
        }
        apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::NotPositiveDefinite);
        }
        let alpha = rr / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
    }
    if rr.sqrt() <= tol * bnorm {
        Ok(x)
    } else {
        Err(Error::Breakdown {
            iterations: max_iter,
            residual: rr.sqrt() / bnorm,
        })
    }
}

pub fn matvec(m: &DMat, x: &[f64]) -> Vec<f64> {
    let y = m * DVector::from_column_slice(x);
    y.as_slice().to_vec()
}

/// `xᵀ M x`.
pub fn quadratic_form(m: &DMat, x: &[f64]) -> f64 {
    dot(x, &matvec(m, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(n: usize) -> DMat {
        DMat::from_fn(n, n, |i, j| {
            if i == j {
                2.0
            } else if i.abs_diff(j) == 1 {
                -1.0
            } else {
                0.0
            }
        })
    }

    #[test]
    fn cholesky_solves() {
        let m = laplacian(20);
        let c = Cholesky::factor(m.clone()).unwrap();
        let b: Vec<f64> = (0..20).map(|i| (i as f64).sin()).collect();
        let mut x = b.clone();
        c.solve(&mut x);
        let r = matvec(&m, &x);
        for (ri, bi) in r.iter().zip(&b) {
            assert!((ri - bi).abs() < 1e-12);
        }
    }

    #[test]
    fn cholesky_breakdown_gives_negative_direction() {
        let mut m = laplacian(12);
        for i in 0..12 {
            m[(i, i)] -= 0.5;
        }
        // smallest eigenvalue of the shifted Laplacian is 2 - 2cos(pi/13) - 0.5 < 0
        let err = Cholesky::factor(m.clone()).unwrap_err();
        let val = quadratic_form(&m, &err.certificate);
        assert!(val < 0.0);
        assert!((val - err.schur_pivot).abs() < 1e-10);
    }

    #[test]
    fn lanczos_matches_dense() {
        let m = laplacian(60);
        let exact = symmetric_eigenvalues(&m);
        let lo = lanczos_extreme(60, |x, y| y.copy_from_slice(&matvec(&m, x)), Extreme::Smallest, 60, 1e-10, 1).unwrap();
        let hi = lanczos_extreme(60, |x, y| y.copy_from_slice(&matvec(&m, x)), Extreme::Largest, 60, 1e-10, 1).unwrap();
        assert!((lo.value - exact[0]).abs() < 1e-8);
        assert!((hi.value - exact[59]).abs() < 1e-8);
    }

    #[test]
    fn cg_converges() {
        let m = laplacian(30);
        let b = vec![1.0; 30];
        let x = conjugate_gradient(|x, y| y.copy_from_slice(&matvec(&m, x)), &b, 1e-12, 200).unwrap();
        let r = matvec(&m, &x);
        assert!(r.iter().zip(&b).all(|(a, b)| (a - b).abs() < 1e-9));
    }
}
