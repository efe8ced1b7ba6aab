use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::Csr;
use crate::error::{Error, Result};
use crate::linalg::{conjugate_gradient, lanczos_extreme, symmetric_eigenvalues, Cholesky, Extreme};

/// Above this dimension the default path avoids dense factorizations.
pub const DENSE_LIMIT: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverPath {
    /// Dense up to [`DENSE_LIMIT`], iterative beyond.
    #[default]
    Auto,
    /// Cholesky factor of `(K+sI)ᵀ(K+sI)` plus Lanczos on its inverse.
    Dense,
    /// Lanczos on the inverse with conjugate-gradient inner solves.
    Iterative,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularValue {
    pub value: f64,
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    pub path: SolverPath,
}

/// `σ_min(K + shift·I)` by the default path and relative tolerance `1e−10`
/// on the Ritz residual.
pub fn smallest_singular_value(k: &Csr, shift: f64) -> Result<f64> {
    Ok(smallest_singular_value_with(k, shift, SolverPath::Auto, 1e-10, 0)?.value)
}

/// `σ_min(K + shift·I)` by inverse Lanczos on `G = (K+sI)ᵀ(K+sI)`; the
/// largest eigenvalue `μ` of `G^{−1}` gives `σ_min = μ^{−1/2}`.
pub fn smallest_singular_value_with(
    k: &Csr,
    shift: f64,
    path: SolverPath,
    tol: f64,
    seed: u64,
) -> Result<SingularValue> {
    let n = k.ncols();
    if k.nrows() != n {
        return Err(Error::DimensionMismatch {
            expected: k.nrows(),
            found: n,
        });
    }
    let ks = if shift != 0.0 { k.shifted(shift) } else { k.clone() };
    let path = match path {
        SolverPath::Auto if n > DENSE_LIMIT => SolverPath::Iterative,
        SolverPath::Auto => SolverPath::Dense,
        p => p,
    };
    let max_iter = 300.min(n);
    let pair = match path {
        SolverPath::Dense => {
            let g = ks.gram_dense();
            let chol = match Cholesky::factor(g.clone()) {
                Ok(c) => c,
                Err(_) => {
                    // numerically singular: fall back to the full spectrum
                    let ev = symmetric_eigenvalues(&g);
                    return Ok(SingularValue {
                        value: ev[0].max(0.0).sqrt(),
                        vector: Vec::new(),
                        iterations: 0,
                        residual: 0.0,
                        path,
                    });
                }
            };
            lanczos_extreme(
                n,
                |x, y| {
                    y.copy_from_slice(x);
                    chol.solve(y);
                },
                Extreme::Largest,
                max_iter,
                tol,
                seed,
            )?
        }
        _ => {
            let kt = ks.transpose();
            let mut tmp = vec![0.0; n];
            let mut failure: Option<Error> = None;
            let result = lanczos_extreme(
                n,
                |x, y| {
                    let sol = conjugate_gradient(
                        |a, b| {
                            ks.apply(a, &mut tmp);
                            kt.apply(&tmp, b);
                        },
                        x,
                        1e-13,
                        20 * n,
                    );
                    match sol {
                        Ok(s) => y.copy_from_slice(&s),
                        Err(e) => {
                            failure.get_or_insert(e);
                            y.iter_mut().for_each(|v| *v = 0.0);
                        }
                    }
                },
                Extreme::Largest,
                max_iter,
                tol,
                seed,
            );
            if let Some(e) = failure {
                return Err(e);
            }
            result?
        }
    };
    if !(pair.value > 0.0) {
        return Err(Error::Breakdown {
            iterations: pair.iterations,
            residual: pair.residual,
        });
    }
    Ok(SingularValue {
        value: pair.value.powf(-0.5),
        vector: pair.vector,
        iterations: pair.iterations,
        residual: pair.residual,
        path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{assemble_kv, assemble_op, Boundary, Discretization};
    use crate::poly::{Monomial, Polynomial};

    #[test]
    fn oscillator_and_identity() {
        let d = Discretization::new(1, 8, 6, 2.0, Boundary::Periodic).unwrap();
        let op = assemble_op(&d);
        assert!((smallest_singular_value(&op.matrix, 0.0).unwrap() - 0.5).abs() < 1e-9);
        let id = Csr::identity(10);
        assert!((smallest_singular_value(&id, 1.0).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn dense_and_iterative_paths_agree() {
        let v = Polynomial::new(1, vec![Monomial::new(1.0, vec![4])]).unwrap();
        let d = Discretization::new(1, 24, 12, 2.5, Boundary::Periodic).unwrap();
        let k = assemble_kv(&v, &d).unwrap();
        let a = smallest_singular_value_with(&k.matrix, 0.0, SolverPath::Dense, 1e-10, 3).unwrap();
        let b = smallest_singular_value_with(&k.matrix, 0.0, SolverPath::Iterative, 1e-10, 3).unwrap();
        assert!((a.value - b.value).abs() < 1e-6 * a.value, "{} vs {}", a.value, b.value);
        // oracle: full singular value decomposition
        let sv = k.matrix.to_dense().singular_values();
        let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
        assert!((a.value - smin).abs() < 1e-7 * smin);
    }
}
