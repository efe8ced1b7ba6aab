//! The critical-set hypothesis: wherever `∇V` vanishes, the Hessian must
//! have a strictly negative part (`Tr_−(q) > 0`).
//!
//! By homogeneity the zeros of `∇V` form cones, so the search runs on the
//! unit sphere: a deterministic sample set is screened for small gradients,
//! flagged samples are refined by damped Gauss-Newton on the sphere, and the
//! converged points are clustered into the representative set `K₀`. The
//! separation constants `ε₀, ε₁, ε₂` are measured on the unit sphere and
//! `ε₃` on the outer radius of the shell `{3/4 ≤ |q| ≤ 8/3}`.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::partition::Shell;
use crate::potential::{HessianNorm, HomogeneousPotential};
use crate::sphere::{self, distance, minimize_on_sphere, retract, sample_sphere, tangent_basis};

/// Upper bound on Gauss-Newton steps per flagged sample.
const MAX_NEWTON: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Angular spacing of the sphere samples.
    pub resolution: f64,
    /// Relative gradient tolerance for accepting a refined point.
    pub refine_tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            resolution: 1e-3,
            refine_tol: 1e-10,
        }
    }
}

/// Zeros of `∇V` on the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalSet {
    pub points: Vec<Vec<f64>>,
    /// `|∇V|` at each point.
    pub residuals: Vec<f64>,
    pub resolution: f64,
    /// `max |∇V|` over the sphere samples.
    pub sup_gradient: f64,
    /// `max ‖Hess V‖` over the sphere samples.
    pub sup_hessian: f64,
}

impl CriticalSet {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Distance from `q` to the representative set (`+∞` when empty).
    pub fn distance(&self, q: &[f64]) -> f64 {
        self.points.iter().map(|k| distance(q, k)).fold(f64::INFINITY, f64::min)
    }

    /// Distance from `q` to the cone over the set, truncated to the shell.
    pub fn cone_distance(&self, q: &[f64], shell: Shell) -> f64 {
        self.points
            .iter()
            .map(|k| {
                let t = k.iter().zip(q).map(|(a, b)| a * b).sum::<f64>().clamp(shell.inner, shell.outer);
                let p: Vec<f64> = k.iter().map(|x| t * x).collect();
                distance(q, &p)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

enum Refined {
    Converged(Vec<f64>, f64),
    /// Settled on a positive local minimum of `|∇V|`.
    Stagnated,
    Diverged,
}

fn refine(v: &HomogeneousPotential, start: &[f64], accept: f64) -> Refined {
    let d = v.dim();
    let mut q = start.to_vec();
    let mut f = v.gradient(&q);
    let mut res = sphere::norm(&f);
    for _ in 0..MAX_NEWTON {
        let basis = tangent_basis(&q);
        let hess = v.hessian(&q);
        let h = DMatrix::from_row_slice(d, d, &hess);
        let e = DMatrix::from_fn(d, d - 1, |i, k| basis[k][i]);
        let jac = &h * &e;
        let Ok(pinv) = jac.clone().pseudo_inverse(1e-14 * jac.norm().max(1e-300)) else {
            break;
        };
        let step_t = -(pinv * DVector::from_column_slice(&f));
        let mut step: Vec<f64> = (0..d).map(|i| (0..d - 1).map(|k| e[(i, k)] * step_t[k]).sum()).collect();
        let mut alpha = 1.0;
        let mut moved = false;
        while alpha > 1e-6 {
            let cand = retract(&q, &step);
            let fc = v.gradient(&cand);
            let rc = sphere::norm(&fc);
            if rc < res {
                let shift = distance(&cand, &q);
                q = cand;
                f = fc;
                res = rc;
                moved = shift > 1e-15;
                break;
            }
            alpha *= 0.5;
            step.iter_mut().for_each(|s| *s *= 0.5);
        }
        if !moved {
            return if res < accept { Refined::Converged(q, res) } else { Refined::Stagnated };
        }
    }
    if res < accept {
        Refined::Converged(q, res)
    } else {
        Refined::Diverged
    }
}

/// Locates `{∇V = 0} ∩ S^{d−1}` for `d ≤ 3`.
pub fn find_critical_points(v: &HomogeneousPotential, opts: SearchOptions) -> Result<CriticalSet> {
    let d = v.dim();
    let samples = sample_sphere(d, opts.resolution)?;
    let grads: Vec<f64> = samples.iter().map(|q| v.gradient_norm(q)).collect();
    let hess: Vec<f64> = samples.iter().map(|q| v.hessian_norm(q, HessianNorm::Operator)).collect();
    let sup_gradient = grads.iter().copied().fold(0.0, f64::max);
    let sup_hessian = hess.iter().copied().fold(0.0, f64::max);
    let accept = opts.refine_tol * sup_gradient.max(1.0);

    let mut found: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut failed: Vec<Vec<f64>> = Vec::new();
    if d == 1 {
        for (q, &g) in samples.iter().zip(&grads) {
            if g < accept {
                found.push((q.clone(), g));
            }
        }
    } else {
        for (i, q) in samples.iter().enumerate() {
            let threshold = 2.0 * opts.resolution * hess[i].max(0.25 * sup_hessian);
            if grads[i] > threshold {
                continue;
            }
            match refine(v, q, accept) {
                Refined::Converged(p, r) => {
                    let anti: Vec<f64> = p.iter().map(|x| -x).collect();
                    let ra = v.gradient_norm(&anti);
                    found.push((p, r));
                    found.push((anti, ra));
                }
                Refined::Stagnated => {}
                Refined::Diverged => failed.push(q.clone()),
            }
        }
    }
    if !failed.is_empty() {
        return Err(Error::NonConvergence { cells: failed });
    }
    found.sort_by(|a, b| {
        a.0.iter()
            .zip(&b.0)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let radius = 10.0 * opts.refine_tol;
    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut residuals: Vec<f64> = Vec::new();
    for (mut p, r) in found {
        p.iter_mut().for_each(|x| *x += 0.0);
        if let Some(i) = points.iter().position(|k| distance(k, &p) <= radius) {
            if r < residuals[i] {
                points[i] = p;
                residuals[i] = r;
            }
        } else {
            points.push(p);
            residuals.push(r);
        }
    }
    Ok(CriticalSet {
        points,
        residuals,
        resolution: opts.resolution,
        sup_gradient,
        sup_hessian,
    })
}

/// Verdict and separation constants.
#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionReport {
    pub holds: bool,
    pub critical_set: CriticalSet,
    /// `min_{K₀} Tr_−/(1+Tr_+)`; `+∞` when `K₀` is empty.
    pub epsilon0: f64,
    /// Largest dyadic radius keeping the ratio above `ε₀/2` near `K₀`.
    pub epsilon1: f64,
    /// `min |∇V|` on the sphere at distance `≥ ε₁` from `K₀`.
    pub epsilon2: f64,
    /// `max Tr_−` over the shell.
    pub epsilon3: f64,
    /// Critical points with `Tr_− = 0`.
    pub failures: Vec<Vec<f64>>,
    pub convention: HessianNorm,
}

/// Decides the hypothesis and measures `ε₀…ε₃`.
pub fn check_assumption(v: &HomogeneousPotential, opts: SearchOptions, convention: HessianNorm) -> Result<AssumptionReport> {
    if v.degree() <= 2 {
        return Err(Error::Domain(alloc::format!(
            "the hypothesis check needs degree above 2, got {}",
            v.degree()
        )));
    }
    let set = find_critical_points(v, opts)?;
    let zero_trace = 1e-9 * set.sup_hessian.max(1.0);
    let failures: Vec<Vec<f64>> = set
        .points
        .iter()
        .filter(|q| v.trace_split(q).tr_minus <= zero_trace)
        .cloned()
        .collect();
    let holds = failures.is_empty();
    let ratio = |q: &[f64]| v.trace_split(q).negativity_ratio();
    let samples = sample_sphere(v.dim(), opts.resolution)?;
    let step = opts.resolution.max(1e-3);

    let epsilon0 = set.points.iter().map(|q| ratio(q)).fold(f64::INFINITY, f64::min);

    let epsilon1 = if set.is_empty() {
        2.0 * Shell::STANDARD.outer
    } else if !holds {
        0.0
    } else {
        let mut chosen = 0.0;
        for k in 0..=40 {
            let rho = 2f64.powi(-k);
            let m = constrained_min(&samples, &ratio, |q| set.distance(q) <= rho, step);
            if m >= 0.5 * epsilon0 {
                chosen = rho;
                break;
            }
        }
        chosen
    };

    let epsilon2 = constrained_min(&samples, &|q: &[f64]| v.gradient_norm(q), |q| set.distance(q) >= epsilon1, step);

    let outer = Shell::STANDARD.outer;
    let neg_tr = |q: &[f64]| -v.trace_split(q).tr_minus;
    let max_tr = -constrained_min(&samples, &neg_tr, |_| true, step);
    let epsilon3 = outer.powi(v.degree() as i32 - 2) * max_tr;

    Ok(AssumptionReport {
        holds,
        critical_set: set,
        epsilon0,
        epsilon1,
        epsilon2,
        epsilon3,
        failures,
        convention,
    })
}

/// Minimum of `f` over sphere samples satisfying `admissible`, refined by a
/// compass search that stays inside the admissible region. Returns `+∞` when
/// no sample is admissible.
fn constrained_min<F, A>(samples: &[Vec<f64>], f: &F, admissible: A, step: f64) -> f64
where
    F: Fn(&[f64]) -> f64,
    A: Fn(&[f64]) -> bool,
{
    let mut ranked: Vec<(f64, usize)> = samples
        .iter()
        .enumerate()
        .filter(|(_, q)| admissible(q))
        .map(|(i, q)| (f(q), i))
        .collect();
    if ranked.is_empty() {
        return f64::INFINITY;
    }
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = ranked[0].0;
    if samples[0].len() == 1 {
        return best;
    }
    for &(_, i) in ranked.iter().take(6) {
        let guarded = |q: &[f64]| if admissible(q) { f(q) } else { f64::INFINITY };
        let (_, val) = minimize_on_sphere(guarded, &samples[i], step, 1e-12);
        best = best.min(val);
    }
    best
}

/// Outcome of the growth check `f_δ(λq) ≥ m_δ λ^κ`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorReport {
    pub exponent: f64,
    pub m_delta: f64,
    /// `min f_δ(λq)/λ^κ` over the sampled directions and scales.
    pub worst_ratio: f64,
    pub scales: Vec<f64>,
    pub directions: usize,
    /// `(q, λ)` pairs where `f_δ(λq) < m_δ λ^κ (1 − tol)`.
    pub violations: Vec<(Vec<f64>, f64)>,
}

impl IndicatorReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that `f_δ` grows at the rate of the growth exponent along rays.
pub fn compact_resolvent_indicator(
    v: &HomogeneousPotential,
    report: &AssumptionReport,
    delta: f64,
    resolution: f64,
) -> Result<IndicatorReport> {
    if !report.holds {
        return Err(Error::AssumptionFailed {
            points: report.failures.clone(),
        });
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(alloc::format!("δ must lie in (0,1), got {delta}")));
    }
    let convention = report.convention;
    let growth = v.growth_exponent_with_resolution(delta, convention, resolution)?;
    let tol = 1e-6;
    let scales = vec![2.0, 4.0, 8.0, 16.0];
    let dirs = sample_sphere(v.dim(), resolution)?;
    let mut worst = f64::INFINITY;
    let mut violations = Vec::new();
    for q in &dirs {
        for &lambda in &scales {
            let y: Vec<f64> = q.iter().map(|x| lambda * x).collect();
            let r = v.f_delta(&y, delta, convention)? / lambda.powf(growth.exponent);
            worst = worst.min(r);
            if r < growth.m_delta * (1.0 - tol) {
                violations.push((q.clone(), lambda));
            }
        }
    }
    Ok(IndicatorReport {
        exponent: growth.exponent,
        m_delta: growth.m_delta,
        worst_ratio: worst,
        scales,
        directions: dirs.len(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    fn pot(dim: usize, degree: u32, terms: &[(f64, &[u32])]) -> HomogeneousPotential {
        HomogeneousPotential::new(dim, degree, terms.iter().map(|(c, e)| Monomial::new(*c, e.to_vec())).collect()).unwrap()
    }

    fn coarse() -> SearchOptions {
        SearchOptions {
            resolution: 1e-2,
            refine_tol: 1e-10,
        }
    }

    #[test]
    fn abstract_family_member() {
        let v = pot(2, 4, &[(-1.0, &[4, 0]), (-1.0, &[2, 2])]);
        let rep = check_assumption(&v, coarse(), HessianNorm::Operator).unwrap();
        assert!(rep.holds);
        let pts = &rep.critical_set.points;
        assert_eq!(pts.len(), 2, "{pts:?}");
        assert!(pts.iter().any(|p| distance(p, &[0.0, 1.0]) < 1e-8));
        assert!(pts.iter().any(|p| distance(p, &[0.0, -1.0]) < 1e-8));
        assert!((rep.epsilon0 - 2.0).abs() < 1e-6);
        assert!(rep.epsilon1 > 0.0 && rep.epsilon2 > 0.0);
    }

    #[test]
    fn degenerate_quartic_fails() {
        let v = pot(2, 4, &[(1.0, &[4, 0])]);
        let rep = check_assumption(&v, coarse(), HessianNorm::Operator).unwrap();
        assert!(!rep.holds);
        assert_eq!(rep.failures.len(), 2, "{:?}", rep.failures);
    }

    #[test]
    fn harmonic_cubic_has_no_critical_points() {
        let v = pot(2, 3, &[(1.0, &[3, 0]), (-3.0, &[1, 2])]);
        let rep = check_assumption(&v, coarse(), HessianNorm::Operator).unwrap();
        assert!(rep.holds && rep.critical_set.is_empty());
        assert_eq!(rep.epsilon0, f64::INFINITY);
        assert!((rep.epsilon2 - 3.0).abs() < 1e-9);
    }

    #[test]
    fn one_dimensional_sphere() {
        let v = pot(1, 4, &[(-1.0, &[4])]);
        let rep = check_assumption(&v, coarse(), HessianNorm::Operator).unwrap();
        assert!(rep.holds && rep.critical_set.is_empty());
        assert_eq!(rep.epsilon2, 4.0);
    }

    #[test]
    fn growth_indicator_for_abstract_member() {
        let v = pot(2, 4, &[(-1.0, &[4, 0]), (-1.0, &[2, 2])]);
        let rep = check_assumption(&v, coarse(), HessianNorm::Operator).unwrap();
        let ind = compact_resolvent_indicator(&v, &rep, 0.5, 1e-2).unwrap();
        assert_eq!(ind.exponent, 1.0);
        assert!(ind.m_delta > 0.0);
        assert!(ind.passed());
        let bad = pot(2, 4, &[(1.0, &[4, 0])]);
        let rep = check_assumption(&bad, coarse(), HessianNorm::Operator).unwrap();
        assert!(compact_resolvent_indicator(&bad, &rep, 0.5, 1e-2).is_err());
    }
}
