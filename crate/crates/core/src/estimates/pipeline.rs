use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assumption::AssumptionReport;
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::operator::{assemble_kfp, assemble_kj, multiply_by_position, rescaled_coefficients, Discretization};
use crate::partition::{
    bump_state, error_domination_ratios, fine_cutoffs, ims_residual, select_nu, semiclassical, ErrorRatios,
    FinePartition, ImsReport, Shell,
};
use crate::potential::{HomogeneousPotential, TaylorSurrogate};

/// Which surrogate a fine patch uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatchCase {
    /// Support meets the `ε₁`-neighbourhood of the critical cone: quadratic
    /// Taylor surrogate.
    NearCritical,
    /// Away from the critical cone: linear Taylor surrogate.
    Regular,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatchInfo {
    pub index: usize,
    pub center: Vec<f64>,
    pub case: PatchCase,
    /// Distance from the center to the critical cone within the shell.
    pub distance: f64,
    /// The support lies on both sides of the `ε₁` boundary.
    pub straddles: bool,
    /// `sup_{|q−c|=ρ} |∇V − ∇Ṽ| / ρ^order` for the patch surrogate.
    pub taylor_constant: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineOptions {
    pub seed: u64,
    /// Sphere resolution for the Taylor constants.
    pub resolution: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            resolution: 5e-2,
        }
    }
}

/// Per-patch terms of `‖K w‖² ≥ ½‖K̃ w‖² − ‖(K − K̃)w‖²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainTerm {
    pub patch: usize,
    pub case: PatchCase,
    pub exact: f64,
    pub surrogate: f64,
    pub error: f64,
    pub slack: f64,
}

/// `‖K v‖² ≥ Σ_k ¾‖K w_k‖² − 2 e_h ‖w_k‖²`, `e_h = |ln h|^{−2} h^{1/(r−1)−2ν}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationChain {
    pub lhs: f64,
    pub localized: f64,
    pub penalty: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineTrace {
    pub level: i32,
    pub h: f64,
    pub big_h: f64,
    pub nu: f64,
    pub radius: f64,
    pub epsilon1: f64,
    pub patches: Vec<PatchInfo>,
    pub near_critical: usize,
    pub regular: usize,
    pub straddling: usize,
    pub ratios: ErrorRatios,
    pub max_taylor_near: f64,
    pub max_taylor_regular: f64,
    pub seed: u64,
    /// Center and width of the test state bump.
    pub state_center: Vec<f64>,
    pub state_width: f64,
    pub ims: ImsReport,
    pub localization: LocalizationChain,
    pub chain: Vec<ChainTerm>,
}

fn surrogate(v: &HomogeneousPotential, case: PatchCase, center: &[f64]) -> TaylorSurrogate {
    match case {
        PatchCase::NearCritical => v.taylor_quadratic(center),
        PatchCase::Regular => v.taylor_linear(center),
    }
}

/// Builds the fine partition of level `j`, classifies its patches and
/// evaluates the two localization chains on a seeded test state living on
/// `disc` (rescaled coordinates, inside the shell).
pub fn localization_pipeline_trace(
    v: &HomogeneousPotential,
    assumption: &AssumptionReport,
    j: i32,
    disc: &Discretization,
    opts: PipelineOptions,
) -> Result<PipelineTrace> {
    if j < 1 {
        return Err(Error::Domain(alloc::format!(
            "level {j} gives h = 1 and a degenerate patch radius; need j ≥ 1"
        )));
    }
    if !assumption.holds {
        return Err(Error::AssumptionFailed {
            points: assumption.failures.clone(),
        });
    }
    if disc.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            found: disc.dim(),
        });
    }
    let r = v.degree() as f64;
    let sc = semiclassical(j, r);
    let nu = select_nu(r)?;
    let shell = Shell::STANDARD;
    let part = FinePartition::new(sc.h, nu, v.dim(), shell)?;
    let rho = part.radius();
    let eps1 = assumption.epsilon1;
    let set = &assumption.critical_set;

    let mut patches = Vec::with_capacity(part.len());
    for k in 0..part.len() {
        let center = part.center(k);
        let distance = set.cone_distance(&center, shell);
        let near = distance - rho <= eps1;
        let straddles = near && distance + rho > eps1;
        let case = if near { PatchCase::NearCritical } else { PatchCase::Regular };
        let taylor_constant = surrogate(v, case, &center).error_ratio(v, rho, opts.resolution)?;
        patches.push(PatchInfo {
            index: k,
            center,
            case,
            distance,
            straddles,
            taylor_constant,
        });
    }
    let straddling = patches.iter().filter(|p| p.straddles).count();
    if straddling > 0 {
        log::info!("{straddling} patch(es) straddle the ε₁ boundary; treated as near-critical");
    }
    let near_critical = patches.iter().filter(|p| p.case == PatchCase::NearCritical).count();
    let max_of = |case| {
        patches
            .iter()
            .filter(|p| p.case == case)
            .map(|p| p.taylor_constant)
            .fold(0.0, f64::max)
    };

    // seeded test state: a bump inside both the grid and the shell
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let width = 0.3 * disc.half_width();
    let nh = disc.n_hermite();
    let coeffs: Vec<f64> = (0..nh).map(|k| if k < 4 { rng.random::<f64>() - 0.5 } else { 0.0 }).collect();
    let mut state_center = None;
    for _ in 0..1000 {
        let c: Vec<f64> = disc
            .center()
            .iter()
            .map(|&x| x + (rng.random::<f64>() - 0.5) * 0.6 * disc.half_width())
            .collect();
        let rc = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        if rc - width >= shell.inner && rc + width <= shell.outer {
            state_center = Some(c);
            break;
        }
    }
    let state_center = state_center.ok_or_else(|| {
        Error::SupportViolation("the discretization box does not reach far enough into the shell".into())
    })?;
    let u = bump_state(disc, &state_center, width, |k| coeffs[k]);

    let k = assemble_kj(v.polynomial(), v.degree(), j, disc)?;
    let coef = rescaled_coefficients(v.degree(), j);
    let cutoffs = fine_cutoffs(&part, disc);
    let ims = ims_residual(&k, coef.transport, &cutoffs, &u);

    let ku = k.apply(&u);
    let lhs = dot(&ku, &ku);
    let e_h = sc.h.powf(1.0 / (r - 1.0) - 2.0 * nu) / sc.h.ln().powi(2);
    let mut localized = 0.0;
    let mut penalty = 0.0;
    let mut chain = Vec::new();
    for c in &cutoffs {
        let w = multiply_by_position(&c.values, disc, &u);
        let w_sq = dot(&w, &w);
        if w_sq == 0.0 {
            continue;
        }
        let kw = k.apply(&w);
        let exact = dot(&kw, &kw);
        localized += exact;
        penalty += w_sq;

        let idx = c.patch.expect("fine cutoffs carry patch indices");
        let info = &patches[idx];
        let sur = surrogate(v, info.case, &info.center);
        let kt = assemble_kfp(&sur.poly.gradient(), disc, coef)?;
        let mut ktw = vec![0.0; w.len()];
        kt.apply(&w, &mut ktw);
        let surrogate_sq = dot(&ktw, &ktw);
        let diff: Vec<f64> = kw.iter().zip(&ktw).map(|(a, b)| a - b).collect();
        let error = dot(&diff, &diff);
        chain.push(ChainTerm {
            patch: idx,
            case: info.case,
            exact,
            surrogate: surrogate_sq,
            error,
            slack: exact - (0.5 * surrogate_sq - error),
        });
    }
    let localized = 0.75 * localized;
    let penalty = 2.0 * e_h * penalty;
    let localization = LocalizationChain {
        lhs,
        localized,
        penalty,
        slack: lhs - (localized - penalty),
    };

    Ok(PipelineTrace {
        level: j,
        h: sc.h,
        big_h: sc.big_h,
        nu,
        radius: rho,
        epsilon1: eps1,
        near_critical,
        regular: patches.len() - near_critical,
        straddling,
        max_taylor_near: max_of(PatchCase::NearCritical),
        max_taylor_regular: max_of(PatchCase::Regular),
        patches,
        ratios: error_domination_ratios(r, nu, j)?,
        seed: opts.seed,
        state_center,
        state_width: width,
        ims,
        localization,
        chain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assumption::{check_assumption, SearchOptions};
    use crate::operator::Boundary;
    use crate::poly::Monomial;
    use crate::potential::HessianNorm;

    fn abstract_n1() -> HomogeneousPotential {
        HomogeneousPotential::new(
            2,
            4,
            vec![Monomial::new(-1.0, vec![4, 0]), Monomial::new(-1.0, vec![2, 2])],
        )
        .unwrap()
    }

    #[test]
    fn patches_near_the_critical_cone_use_the_quadratic_surrogate() {
        let v = abstract_n1();
        let rep = check_assumption(
            &v,
            SearchOptions {
                resolution: 1e-2,
                refine_tol: 1e-10,
            },
            HessianNorm::Operator,
        )
        .unwrap();
        let disc = Discretization::new(2, 16, 3, 0.3, Boundary::Periodic)
            .unwrap()
            .with_center(vec![0.0, 1.6])
            .unwrap();
        let trace = localization_pipeline_trace(&v, &rep, 4, &disc, PipelineOptions::default()).unwrap();
        assert_eq!(trace.near_critical + trace.regular, trace.patches.len());
        for p in &trace.patches {
            let r = (p.center[0].powi(2) + p.center[1].powi(2)).sqrt();
            let angle_to_axis = (p.center[0] / r).abs().asin();
            if angle_to_axis < 0.05 {
                assert_eq!(p.case, PatchCase::NearCritical, "{p:?}");
            }
            if p.center[1].abs() < 0.05 && r > 1.0 {
                assert_eq!(p.case, PatchCase::Regular, "{p:?}");
            }
        }
        assert!(trace.max_taylor_near.is_finite() && trace.max_taylor_regular.is_finite());
        for t in &trace.chain {
            assert!(t.slack >= -1e-9 * t.exact.max(1.0), "{t:?}");
        }
        assert!(trace.ims.relative_residual < 1e-2, "{:?}", trace.ims);
    }

    #[test]
    fn level_zero_is_rejected() {
        let v = abstract_n1();
        let rep = check_assumption(
            &v,
            SearchOptions {
                resolution: 1e-2,
                refine_tol: 1e-10,
            },
            HessianNorm::Operator,
        )
        .unwrap();
        let disc = Discretization::new(2, 8, 2, 0.3, Boundary::Periodic).unwrap();
        assert!(matches!(
            localization_pipeline_trace(&v, &rep, 0, &disc, PipelineOptions::default()),
            Err(Error::Domain(_))
        ));
    }
}
