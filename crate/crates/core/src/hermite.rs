//! Normalized Hermite functions `ψ_n(p)`, Gauss-Hermite quadrature and the
//! ladder matrices of multiplication by `p` and of `∂_p` in the `ψ_n` basis.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::symmetric_eigen;

/// Values `ψ_0(p), …, ψ_{n−1}(p)` via the three-term recurrence
/// `ψ_{k+1} = √(2/(k+1)) p ψ_k − √(k/(k+1)) ψ_{k−1}`.
pub fn hermite_functions(n: usize, p: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    out.push(PI.powf(-0.25) * (-0.5 * p * p).exp());
    if n > 1 {
        out.push(2f64.sqrt() * p * out[0]);
    }
    for k in 1..n.saturating_sub(1) {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * p * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// Gauss-Hermite rule for the weight `e^{−x²}` by the Golub-Welsch method:
/// nodes are the eigenvalues of the Jacobi matrix with off-diagonal `√(k/2)`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == j {
            (j as f64 / 2.0).sqrt()
        } else if j + 1 == i {
            (i as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let (nodes, vectors) = symmetric_eigen(&jacobi);
    let weights = (0..n).map(|k| PI.sqrt() * vectors[(0, k)].powi(2)).collect();
    (nodes, weights)
}

/// Quadrature weights for integrating products of Hermite functions
/// directly, `∫ f ≈ Σ_i w̃_i f(x_i)` with `w̃_i = w_i e^{x_i²}`. They are
/// computed through the Christoffel function `1/Σ_k ψ_k(x_i)²`, which avoids
/// the overflow of `e^{x²}` at the outer nodes.
pub fn hermite_function_weights(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    nodes
        .iter()
        .map(|&x| 1.0 / hermite_functions(n, x).iter().map(|v| v * v).sum::<f64>())
        .collect()
}

/// `max_{m,n<np} |∫ψ_mψ_n − δ_{mn}|` with an `np`-point rule.
pub fn orthonormality_defect(np: usize) -> f64 {
    let (nodes, _) = gauss_hermite(np);
    let w = hermite_function_weights(&nodes);
    let table: Vec<Vec<f64>> = nodes.iter().map(|&x| hermite_functions(np, x)).collect();
    let mut worst = 0.0_f64;
    for m in 0..np {
        for n in 0..np {
            let s: f64 = (0..np).map(|i| w[i] * table[i][m] * table[i][n]).sum();
            let target = if m == n { 1.0 } else { 0.0 };
            worst = worst.max((s - target).abs());
        }
    }
    worst
}

/// Matrix element `⟨ψ_m, p ψ_n⟩`.
pub fn position_entry(m: usize, n: usize) -> f64 {
    if m + 1 == n {
        (n as f64 / 2.0).sqrt()
    } else if n + 1 == m {
        (m as f64 / 2.0).sqrt()
    } else {
        0.0
    }
}

/// Matrix element `⟨ψ_m, ∂_p ψ_n⟩`.
pub fn derivative_entry(m: usize, n: usize) -> f64 {
    if m + 1 == n {
        (n as f64 / 2.0).sqrt()
    } else if n + 1 == m {
        -(m as f64 / 2.0).sqrt()
    } else {
        0.0
    }
}

pub fn position_matrix(np: usize) -> DMatrix<f64> {
    DMatrix::from_fn(np, np, position_entry)
}

pub fn derivative_matrix(np: usize) -> DMatrix<f64> {
    DMatrix::from_fn(np, np, derivative_entry)
}

/// Tensor Hermite basis in `d` velocity variables, `np` modes per axis, with
/// multi-indices enumerated row-major (first axis slowest).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HermiteBasis {
    pub dim: usize,
    pub np: usize,
}

impl HermiteBasis {
    pub fn len(&self) -> usize {
        self.np.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn multi_index(&self, mut k: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        for a in (0..self.dim).rev() {
            idx[a] = k % self.np;
            k /= self.np;
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &n| acc * self.np + n)
    }

    /// Eigenvalue of `O_p = ½(D_p² + p²)` on the basis function `k`.
    pub fn oscillator_eigenvalue(&self, k: usize) -> f64 {
        self.multi_index(k).iter().map(|&n| n as f64 + 0.5).sum()
    }
}
