use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{DyadicPartition, FinePartition};
use crate::linalg::dot;
use crate::operator::{multiply_by_position, velocity_multiplier, Discretization, OperatorMatrix};

/// A cutoff sampled on the position grid together with its exact gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCutoff {
    /// Dyadic level `j` (0 for fine-partition patches, which share one scale).
    pub level: i32,
    /// Patch index for fine-partition cutoffs.
    pub patch: Option<usize>,
    pub values: Vec<f64>,
    pub gradient: Vec<Vec<f64>>,
}

impl GridCutoff {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0) && self.gradient.iter().all(|g| g.iter().all(|&x| x == 0.0))
    }
}

/// Dyadic cutoffs that do not vanish identically on the grid.
pub fn dyadic_cutoffs(p: &DyadicPartition, disc: &Discretization) -> Vec<GridCutoff> {
    let pts = disc.q_points();
    p.levels()
        .map(|j| GridCutoff {
            level: j,
            patch: None,
            values: pts.iter().map(|q| p.eval(j, q)).collect(),
            gradient: pts.iter().map(|q| p.gradient(j, q)).collect(),
        })
        .filter(|c| !c.is_zero())
        .collect()
}

/// Fine-partition cutoffs that do not vanish identically on the grid.
pub fn fine_cutoffs(p: &FinePartition, disc: &Discretization) -> Vec<GridCutoff> {
    let pts = disc.q_points();
    let mut touched: Vec<usize> = pts.iter().flat_map(|q| p.active(q).into_iter().map(|(k, _)| k)).collect();
    touched.sort_unstable();
    touched.dedup();
    touched
        .into_iter()
        .map(|k| GridCutoff {
            level: 0,
            patch: Some(k),
            values: pts.iter().map(|q| p.theta(k, q)).collect(),
            gradient: pts.iter().map(|q| p.theta_gradient(k, q)).collect(),
        })
        .collect()
}

/// Both sides of the localization identity
/// `‖Ku‖² = Σ_j ‖K(χ_j u)‖² − ‖(a·p·∂_qχ_j)u‖²`, where `a` is the
/// transport coefficient of `K`, and the constants of its inequality form
/// `(1+4c)‖Ku‖² + c‖u‖² ≥ Σ_j ‖K(χ_j u)‖²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImsReport {
    /// `‖Ku‖²`.
    pub lhs: f64,
    /// `Σ_j ‖K(χ_j u)‖²`.
    pub localized: f64,
    /// `Σ_j ‖(a·p·∂_qχ_j)u‖²`.
    pub commutator: f64,
    /// `|lhs − (localized − commutator)| / lhs`.
    pub relative_residual: f64,
    /// Smallest `c` for which the inequality form holds on this state.
    pub required_c: f64,
    /// Ratio `Σ_j‖(p∂χ_j)u‖² / Σ_j 4^{−j}‖pχ_j u‖²`.
    pub commutator_level_ratio: f64,
    /// Slack of the inequality form at `c = commutator_level_ratio`.
    pub inequality_slack: f64,
}

pub fn ims_residual(k: &OperatorMatrix, transport: f64, cutoffs: &[GridCutoff], u: &[f64]) -> ImsReport {
    let disc = &k.disc;
    let ku = k.apply(u);
    let lhs = dot(&ku, &ku);
    let mut localized = 0.0;
    let mut commutator = 0.0;
    let mut level_weighted = 0.0;
    let unit_p: Vec<Vec<f64>> = (0..disc.n_q_points()).map(|_| alloc::vec![1.0; disc.dim()]).collect();
    let p_only = velocity_multiplier(&unit_p, disc);
    for c in cutoffs {
        let cu = multiply_by_position(&c.values, disc, u);
        let kcu = k.apply(&cu);
        localized += dot(&kcu, &kcu);
        let field: Vec<Vec<f64>> = c
            .gradient
            .iter()
            .map(|g| g.iter().map(|x| transport * x).collect())
            .collect();
        let m = velocity_multiplier(&field, disc);
        let mu = m.apply(u);
        commutator += dot(&mu, &mu);
        let pcu = p_only.apply(&cu);
        level_weighted += 4f64.powi(-c.level) * dot(&pcu, &pcu);
    }
    let unorm = dot(u, u);
    let relative_residual = (lhs - (localized - commutator)).abs() / lhs;
    let required_c = (localized - lhs).max(0.0) / (4.0 * lhs + unorm);
    let commutator_level_ratio = if level_weighted > 0.0 { commutator / level_weighted } else { 0.0 };
    let c = commutator_level_ratio;
    let inequality_slack = (1.0 + 4.0 * c) * lhs + c * unorm - localized;
    ImsReport {
        lhs,
        localized,
        commutator,
        relative_residual,
        required_c,
        commutator_level_ratio,
        inequality_slack,
    }
}

/// `exp(−1/(1 − s²))` for `|s| < 1`, used as the position profile of test
/// states.
pub fn bump(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

/// Smooth compactly supported state `b(|q − c|/w)·ψ-profile`, where
/// `hermite(k)` gives the velocity coefficient of basis function `k`.
pub fn bump_state<F: Fn(usize) -> f64>(disc: &Discretization, center: &[f64], width: f64, hermite: F) -> Vec<f64> {
    disc.state_from_fn(|q, k| {
        let r = q.iter().zip(center).map(|(x, c)| (x - c) * (x - c)).sum::<f64>().sqrt();
        bump(r / width) * hermite(k)
    })
}
