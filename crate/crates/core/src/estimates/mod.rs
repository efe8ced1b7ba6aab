//! Numerical checks of the subelliptic estimates on a fixed discretization.
//!
//! Every constant reported here is measured on the finite-dimensional
//! operator. It says nothing rigorous about the continuum operator; the
//! discretization metadata travels with each report for that reason.

mod bnv;
mod inf;
mod main_theorem;
mod pipeline;

use alloc::vec::Vec;

pub use bnv::{verify_bnv_lower, verify_bnv_remainder};
pub use inf::{inf_over_t, verify_inf_inequality, InfReport, InfSample};
pub use main_theorem::{quadratic_form_value, verify_main_theorem, MainTheoremOptions};
pub use pipeline::{
    localization_pipeline_trace, ChainTerm, LocalizationChain, PatchCase, PatchInfo, PipelineOptions, PipelineTrace,
};

use crate::error::Result;
use crate::linalg::{lanczos_extreme, symmetric_eigen, Cholesky, DMat, Extreme};
use crate::operator::{Boundary, Discretization};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inequality {
    /// `‖K_V u‖² + A_V‖u‖² ≥ c(‖O_p u‖² + ‖X_V u‖² + ‖⟨∇V⟩^{2/3}u‖² + ‖⟨D_q⟩^{2/3}u‖²)`.
    BnvRemainder,
    /// `‖K_V u‖² ≥ c B_V ‖u‖²`.
    BnvLower,
    /// `‖K_V u‖² + C‖u‖² ≥ C^{−1} Σ_i ‖Λ_i u‖²` with the four log-corrected weights.
    MainTheorem,
}

impl Inequality {
    pub fn name(self) -> &'static str {
        match self {
            Inequality::BnvRemainder => "bnv_remainder",
            Inequality::BnvLower => "bnv_lower",
            Inequality::MainTheorem => "main_theorem",
        }
    }
}

/// Discretization parameters recorded with a report.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscMeta {
    pub dim: usize,
    pub nq: usize,
    pub np: usize,
    pub half_width: f64,
    pub center: Vec<f64>,
    pub boundary: Boundary,
}

impl From<&Discretization> for DiscMeta {
    fn from(d: &Discretization) -> Self {
        Self {
            dim: d.dim(),
            nq: d.nq(),
            np: d.np(),
            half_width: d.half_width(),
            center: d.center().to_vec(),
            boundary: d.boundary(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub inequality: Inequality,
    /// `c*` for the two lower bounds, `C*` for the main estimate.
    pub constant: f64,
    /// Unit state realizing the extremal ratio; empty when the search ended
    /// at its lower endpoint.
    pub certificate: Vec<f64>,
    pub disc: DiscMeta,
    /// Squared norms `‖T u‖²` of the right-hand-side terms on the certificate.
    pub per_term: Vec<(&'static str, f64)>,
    /// Form values on the certificate just below and just above `C*`.
    pub certificate_forms: Option<(f64, f64)>,
    /// Whether the form is positive definite at `(1 + tol)·C*`.
    pub psd_above: Option<bool>,
    pub iterations: usize,
    pub seed: u64,
}

/// Largest `c` with `A ⪰ c B` for symmetric `A ≻ 0`, `B ⪰ 0`, together with
/// the generalized eigenvector.
pub(crate) fn generalized_min_ratio(a: DMat, b: &DMat, seed: u64) -> Result<(f64, Vec<f64>, usize)> {
    let n = a.nrows();
    let chol = Cholesky::factor(a).map_err(|_| crate::Error::NotPositiveDefinite)?;
    let apply = |x: &[f64], y: &mut [f64]| {
        let mut t = x.to_vec();
        chol.solve_upper(&mut t);
        let s = b * nalgebra::DVector::from_column_slice(&t);
        y.copy_from_slice(s.as_slice());
        chol.solve_lower(y);
    };
    let (lambda, v, iters) = match lanczos_extreme(n, apply, Extreme::Largest, 400, 1e-10, seed) {
        Ok(p) => (p.value, p.vector, p.iterations),
        Err(_) => {
            let mut c = DMat::zeros(n, n);
            for j in 0..n {
                let mut e = alloc::vec![0.0; n];
                e[j] = 1.0;
                let mut y = alloc::vec![0.0; n];
                apply(&e, &mut y);
                c.column_mut(j).copy_from_slice(&y);
            }
            let c = (&c + c.transpose()) * 0.5;
            let (vals, vecs) = symmetric_eigen(&c);
            (vals[n - 1], vecs.column(n - 1).iter().copied().collect(), n)
        }
    };
    let mut u = v;
    chol.solve_upper(&mut u);
    let nu = crate::linalg::norm(&u);
    u.iter_mut().for_each(|x| *x /= nu);
    Ok((1.0 / lambda, u, iters))
}
