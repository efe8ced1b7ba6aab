//! Homogeneous polynomial potentials `V` and the quantities built from them:
//! Hessian trace splits, the constants `A_V`, `B_V` for quadratic symbols,
//! the log weight `L`, the growth function `f_δ` and Taylor surrogates.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};
use crate::sphere;

/// How `|Hess V(q)|` is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HessianNorm {
    /// Largest absolute eigenvalue; homogeneous of degree `r − 2`.
    #[default]
    Operator,
    /// Absolute value of the determinant; homogeneous of degree `d(r − 2)`.
    Determinant,
}

impl HessianNorm {
    pub fn name(self) -> &'static str {
        match self {
            HessianNorm::Operator => "opnorm",
            HessianNorm::Determinant => "det",
        }
    }

    /// Homogeneity degree of `|Hess V|` for a degree-`r` potential in `d`
    /// variables.
    pub fn scaling_degree(self, d: usize, r: u32) -> f64 {
        let base = r as f64 - 2.0;
        match self {
            HessianNorm::Operator => base,
            HessianNorm::Determinant => d as f64 * base,
        }
    }
}

impl core::str::FromStr for HessianNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "opnorm" | "operator" => Ok(HessianNorm::Operator),
            "det" | "determinant" => Ok(HessianNorm::Determinant),
            other => Err(Error::Domain(alloc::format!("unknown Hessian norm convention `{other}`"))),
        }
    }
}

/// Hessian spectrum at a point split by sign. Zero eigenvalues belong to the
/// non-positive branch and contribute nothing to either trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceSplit {
    pub point: Vec<f64>,
    pub hessian_eigenvalues: Vec<f64>,
    pub tr_plus: f64,
    pub tr_minus: f64,
}

impl TraceSplit {
    pub fn from_hessian(point: Vec<f64>, hessian: &[f64]) -> Self {
        let d = point.len();
        let eigenvalues = symmetric_eigenvalues(d, hessian);
        let tr_plus = eigenvalues.iter().filter(|&&v| v > 0.0).sum::<f64>() + 0.0;
        let tr_minus = 0.0 - eigenvalues.iter().filter(|&&v| v <= 0.0).sum::<f64>();
        Self {
            point,
            hessian_eigenvalues: eigenvalues,
            tr_plus,
            tr_minus,
        }
    }

    /// `Tr_−/(1 + Tr_+)`, the ratio controlling the near-critical region.
    pub fn negativity_ratio(&self) -> f64 {
        self.tr_minus / (1.0 + self.tr_plus)
    }

    pub fn operator_norm(&self) -> f64 {
        self.hessian_eigenvalues
            .iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `|H|` for a row-major symmetric `d × d` matrix under the given convention.
pub fn hessian_norm_of(d: usize, hessian: &[f64], convention: HessianNorm) -> f64 {
    match convention {
        HessianNorm::Operator => symmetric_eigenvalues(d, hessian)
            .iter()
            .fold(0.0, |m, v| m.max(v.abs())),
        HessianNorm::Determinant => DMatrix::from_row_slice(d, d, hessian).determinant().abs(),
    }
}

fn symmetric_eigenvalues(d: usize, m: &[f64]) -> Vec<f64> {
    let mat = DMatrix::from_row_slice(d, d, m);
    // symmetrize against rounding in the polynomial evaluation
    let sym = (&mat + mat.transpose()) * 0.5;
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// A polynomial in which every monomial has total degree exactly `r ≥ 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPotential {
    poly: Polynomial,
    degree: u32,
    gradient: Vec<Polynomial>,
    hessian: Vec<Polynomial>,
}

impl HomogeneousPotential {
    /// Builds `V` from monomials declared to have degree `degree`.
    pub fn new(dim: usize, degree: u32, terms: Vec<Monomial>) -> Result<Self> {
        if degree < 2 {
            return Err(Error::Domain(alloc::format!(
                "homogeneous potentials need degree at least 2, got {degree}"
            )));
        }
        for (index, m) in terms.iter().enumerate() {
            if m.exponents.len() == dim && m.degree() != degree {
                return Err(Error::NotHomogeneous {
                    index,
                    found: m.degree(),
                    expected: degree,
                });
            }
        }
        let poly = Polynomial::new(dim, terms)?;
        if poly.is_zero() {
            return Err(Error::Domain("potential is identically zero".into()));
        }
        Ok(Self::from_parts(poly, degree))
    }

    /// Infers the degree from a non-zero homogeneous polynomial.
    pub fn from_polynomial(poly: Polynomial) -> Result<Self> {
        let Some(first) = poly.terms().first() else {
            return Err(Error::Domain("potential is identically zero".into()));
        };
        let degree = first.degree();
        Self::new(poly.dim(), degree, poly.terms().to_vec())
    }

    fn from_parts(poly: Polynomial, degree: u32) -> Self {
        let gradient = poly.gradient();
        let hessian = poly.hessian();
        Self {
            poly,
            degree,
            gradient,
            hessian,
        }
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn eval(&self, q: &[f64]) -> f64 {
        self.poly.eval(q)
    }

    pub fn gradient(&self, q: &[f64]) -> Vec<f64> {
        self.gradient.iter().map(|p| p.eval(q)).collect()
    }

    pub fn gradient_norm(&self, q: &[f64]) -> f64 {
        sphere::norm(&self.gradient(q))
    }

    /// Row-major `d × d` Hessian.
    pub fn hessian(&self, q: &[f64]) -> Vec<f64> {
        self.hessian.iter().map(|p| p.eval(q)).collect()
    }

    pub fn trace_split(&self, q: &[f64]) -> TraceSplit {
        TraceSplit::from_hessian(q.to_vec(), &self.hessian(q))
    }

    pub fn hessian_norm(&self, q: &[f64], convention: HessianNorm) -> f64 {
        hessian_norm_of(self.dim(), &self.hessian(q), convention)
    }

    /// `f_δ(q) = |∇V(q)|^{4(1−δ)/3} + |Hess V(q)|^{1−δ}`.
    pub fn f_delta(&self, q: &[f64], delta: f64, convention: HessianNorm) -> Result<f64> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::Domain(alloc::format!("δ must lie in (0,1), got {delta}")));
        }
        Ok(self.f_delta_unchecked(q, delta, convention))
    }

    fn f_delta_unchecked(&self, q: &[f64], delta: f64, convention: HessianNorm) -> f64 {
        let g = self.gradient_norm(q);
        let h = self.hessian_norm(q, convention);
        g.powf(4.0 * (1.0 - delta) / 3.0) + h.powf(1.0 - delta)
    }

    /// Growth exponent `(1−δ)·min{4(r−1)/3, s}` where `s` is the scaling
    /// degree of the active Hessian norm, together with the minimum `m_δ` of
    /// `f_δ` over the unit sphere.
    pub fn growth_exponent(&self, delta: f64, convention: HessianNorm) -> Result<GrowthExponent> {
        self.growth_exponent_with_resolution(delta, convention, 1e-2)
    }

    pub fn growth_exponent_with_resolution(
        &self,
        delta: f64,
        convention: HessianNorm,
        resolution: f64,
    ) -> Result<GrowthExponent> {
        if self.degree <= 2 {
            return Err(Error::Domain(alloc::format!(
                "growth exponent needs degree above 2, got {}",
                self.degree
            )));
        }
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::Domain(alloc::format!("δ must lie in [0,1), got {delta}")));
        }
        let r = self.degree as f64;
        let exponent = (1.0 - delta)
            * (4.0 * (r - 1.0) / 3.0).min(convention.scaling_degree(self.dim(), self.degree));
        let f = |q: &[f64]| self.f_delta_unchecked(q, delta, convention);
        let samples = sphere::sample_sphere(self.dim(), resolution)?;
        let mut ranked: Vec<(f64, usize)> = samples.iter().enumerate().map(|(i, q)| (f(q), i)).collect();
        ranked.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut best = (f64::INFINITY, samples[0].clone());
        for &(_, i) in ranked.iter().take(8) {
            let (q, v) = sphere::minimize_on_sphere(f, &samples[i], resolution, 1e-12);
            if v < best.0 {
                best = (v, q);
            }
        }
        Ok(GrowthExponent {
            exponent,
            m_delta: best.0,
            argmin: best.1,
        })
    }

    /// First-order Taylor part `Σ_{|α|=1} ∂^αV(q0) (q − q0)^α` (no constant).
    pub fn taylor_linear(&self, q0: &[f64]) -> TaylorSurrogate {
        TaylorSurrogate::new(self.poly.taylor_range(q0, 1, 1), q0, 1)
    }

    /// Second-order Taylor polynomial including the constant `V(q0)`; the
    /// constant does not affect `∇V` or the operator.
    pub fn taylor_quadratic(&self, q0: &[f64]) -> TaylorSurrogate {
        TaylorSurrogate::new(self.poly.taylor(q0, 2), q0, 2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthExponent {
    pub exponent: f64,
    pub m_delta: f64,
    pub argmin: Vec<f64>,
}

/// A Taylor polynomial of `V` around `center` whose gradient approximates
/// `∇V` to order `order` in `|q − center|`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSurrogate {
    pub poly: Polynomial,
    pub center: Vec<f64>,
    pub order: u32,
    gradient: Vec<Polynomial>,
}

impl TaylorSurrogate {
    fn new(poly: Polynomial, center: &[f64], order: u32) -> Self {
        let gradient = poly.gradient();
        Self {
            poly,
            center: center.to_vec(),
            order,
            gradient,
        }
    }

    pub fn gradient(&self, q: &[f64]) -> Vec<f64> {
        self.gradient.iter().map(|p| p.eval(q)).collect()
    }

    /// `|∇V(q) − ∇Ṽ(q)|`.
    pub fn gradient_error(&self, v: &HomogeneousPotential, q: &[f64]) -> f64 {
        let a = v.gradient(q);
        let b = self.gradient(q);
        sphere::distance(&a, &b)
    }

    /// Empirical `sup |∇V − ∇Ṽ| / ρ^order` over points at distance `ρ` from
    /// the center (`ρ` times a sphere sample of the given resolution).
    pub fn error_ratio(&self, v: &HomogeneousPotential, rho: f64, resolution: f64) -> Result<f64> {
        let dirs = sphere::sample_sphere(v.dim(), resolution)?;
        let scale = rho.powi(self.order as i32);
        Ok(dirs
            .iter()
            .map(|u| {
                let q: Vec<f64> = self.center.iter().zip(u).map(|(c, x)| c + rho * x).collect();
                self.gradient_error(v, &q) / scale
            })
            .fold(0.0, f64::max))
    }
}

/// `L(s) = (s + 1)/log(s + 1)` for `s ≥ 1`.
pub fn log_weight(s: f64) -> Result<f64> {
    if !(s >= 1.0) {
        return Err(Error::Domain(alloc::format!("L(s) needs s ≥ 1, got {s}")));
    }
    Ok(log_weight_unchecked(s))
}

/// `L(max(s, 1))`: the clamped weight used for multipliers whose spectrum may
/// start below 1.
pub fn log_weight_clamped(s: f64) -> f64 {
    log_weight_unchecked(s.max(1.0))
}

fn log_weight_unchecked(s: f64) -> f64 {
    (s + 1.0) / (s + 1.0).ln()
}

/// `⟨x⟩ = √(1 + x²)`.
pub fn japanese_bracket(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

/// Constants attached to a polynomial of degree at most two, for which the
/// Hessian and hence `Tr_±` are constant.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialConstants {
    pub a_v: f64,
    pub b_v: f64,
    pub tr_plus: f64,
    pub tr_minus: f64,
    pub min_gradient: f64,
    pub hypothesis_nondegenerate: bool,
}

/// `A_V = max{(1+Tr_+)^{2/3}, 1+Tr_−}` and
/// `B_V = max{min|∇V|^{4/3}, (1+Tr_−)/log(2+Tr_−)²}`.
///
/// With `∇V(q) = Aq + g`, `min|∇V|` is the norm of the component of `g` in
/// the kernel of the symmetric matrix `A`.
pub fn potential_constants(v: &Polynomial) -> Result<PotentialConstants> {
    if v.degree() > 2 {
        return Err(Error::DegreeTooHigh(v.degree()));
    }
    let d = v.dim();
    let origin = vec![0.0; d];
    let g: Vec<f64> = v.gradient().iter().map(|p| p.eval(&origin)).collect();
    let hess: Vec<f64> = v.hessian().iter().map(|p| p.eval(&origin)).collect();
    let a = DMatrix::from_row_slice(d, d, &hess);
    let eig = a.clone().symmetric_eigen();
    let scale = eig.eigenvalues.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let mut kernel_sq = 0.0;
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() <= 1e-12 * scale {
            let c: f64 = eig.eigenvectors.column(k).iter().zip(&g).map(|(x, y)| x * y).sum();
            kernel_sq += c * c;
        }
    }
    let min_gradient = kernel_sq.sqrt();
    let split = TraceSplit::from_hessian(origin, &hess);
    let (tp, tm) = (split.tr_plus, split.tr_minus);
    let a_v = (1.0 + tp).powf(2.0 / 3.0).max(1.0 + tm);
    let b_v = min_gradient
        .powf(4.0 / 3.0)
        .max((1.0 + tm) / (2.0 + tm).ln().powi(2));
    Ok(PotentialConstants {
        a_v,
        b_v,
        tr_plus: tp,
        tr_minus: tm,
        min_gradient,
        hypothesis_nondegenerate: tm + min_gradient > 1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pot(dim: usize, terms: &[(f64, &[u32])]) -> HomogeneousPotential {
        let ms = terms.iter().map(|(c, e)| Monomial::new(*c, e.to_vec())).collect();
        HomogeneousPotential::from_polynomial(Polynomial::new(dim, ms).unwrap()).unwrap()
    }

    fn abstract_n1() -> HomogeneousPotential {
        pot(2, &[(-1.0, &[4, 0]), (-1.0, &[2, 2])])
    }

    fn poly(dim: usize, terms: &[(f64, &[u32])]) -> Polynomial {
        Polynomial::new(dim, terms.iter().map(|(c, e)| Monomial::new(*c, e.to_vec())).collect()).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(pot(2, &[(1.0, &[4, 0])]).eval(&[2.0, 0.0]), 16.0);
        assert_eq!(abstract_n1().eval(&[1.0, 0.0]), -1.0);
        assert_eq!(abstract_n1().eval(&[0.0, 0.0]), 0.0);
    }

    #[test]
    fn rejects_inhomogeneous_terms() {
        let err = HomogeneousPotential::new(
            2,
            4,
            vec![Monomial::new(1.0, vec![4, 0]), Monomial::new(1.0, vec![1, 2])],
        )
        .unwrap_err();
        assert_eq!(err, Error::NotHomogeneous { index: 1, found: 3, expected: 4 });
    }

    #[test]
    fn trace_split_sign_convention() {
        let s = abstract_n1().trace_split(&[0.0, 1.0]);
        assert_eq!(s.hessian_eigenvalues, vec![-2.0, 0.0]);
        assert_eq!((s.tr_plus, s.tr_minus), (0.0, 2.0));
        let s = pot(2, &[(1.0, &[4, 0])]).trace_split(&[1.0, 0.0]);
        assert_eq!(s.hessian_eigenvalues, vec![0.0, 12.0]);
        assert_eq!((s.tr_plus, s.tr_minus), (12.0, 0.0));
    }

    #[test]
    fn log_weight_values() {
        assert!((log_weight(1.0).unwrap() - 2.0 / 2f64.ln()).abs() < 1e-15);
        let e = core::f64::consts::E;
        assert!((log_weight(e - 1.0).unwrap() - e).abs() < 1e-14);
        assert!((log_weight(10.0).unwrap() - 4.587_356).abs() < 1e-6);
        assert!(log_weight(0.5).is_err());
    }

    #[test]
    fn f_delta_examples() {
        let v = abstract_n1();
        let val = v.f_delta(&[0.0, 1.0], 0.5, HessianNorm::Operator).unwrap();
        assert!((val - 2f64.sqrt()).abs() < 1e-14);
        let w = pot(2, &[(1.0, &[3, 0]), (-3.0, &[1, 2])]);
        let val = w.f_delta(&[1.0, 0.0], 0.25, HessianNorm::Operator).unwrap();
        assert!((val - (3.0 + 6f64.powf(0.75))).abs() < 1e-12);
        assert_eq!(v.f_delta(&[0.0, 0.0], 0.5, HessianNorm::Operator).unwrap(), 0.0);
        assert!(v.f_delta(&[1.0, 0.0], 1.0, HessianNorm::Operator).is_err());
    }

    #[test]
    fn growth_exponent_by_convention() {
        let v = abstract_n1();
        let g = v.growth_exponent(0.0, HessianNorm::Determinant).unwrap();
        assert_eq!(g.exponent, 4.0);
        let g = v.growth_exponent(0.5, HessianNorm::Operator).unwrap();
        assert_eq!(g.exponent, 1.0);
        assert!(g.m_delta > 0.0);
        let w = pot(2, &[(1.0, &[3, 0]), (-3.0, &[1, 2])]);
        assert_eq!(w.growth_exponent(0.5, HessianNorm::Determinant).unwrap().exponent, 1.0);
        let quad = pot(1, &[(1.0, &[2])]);
        assert!(quad.growth_exponent(0.5, HessianNorm::Operator).is_err());
    }

    #[test]
    fn constants_for_quadratic_symbols() {
        let c = potential_constants(&poly(2, &[(1.0, &[1, 0])])).unwrap();
        assert_eq!(c.a_v, 1.0);
        assert!((c.b_v - 1.0 / 2f64.ln().powi(2)).abs() < 1e-14);
        assert!(c.hypothesis_nondegenerate);

        let c = potential_constants(&poly(1, &[(-0.5, &[2])])).unwrap();
        assert_eq!(c.tr_minus, 1.0);
        assert_eq!(c.a_v, 2.0);
        assert!((c.b_v - 2.0 / 3f64.ln().powi(2)).abs() < 1e-14);

        let c = potential_constants(&Polynomial::zero(1)).unwrap();
        assert!(!c.hypothesis_nondegenerate);

        assert_eq!(
            potential_constants(&poly(1, &[(1.0, &[3])])).unwrap_err(),
            Error::DegreeTooHigh(3)
        );
    }

    #[test]
    fn min_gradient_projects_onto_kernel() {
        // V = q1^2/2 + 3 q2: gradient (q1, 3), never zero, minimum 3
        let c = potential_constants(&poly(2, &[(0.5, &[2, 0]), (3.0, &[0, 1])])).unwrap();
        assert!((c.min_gradient - 3.0).abs() < 1e-14);
        // V = q1^2/2 + 3 q1: solvable, minimum 0
        let c = potential_constants(&poly(2, &[(0.5, &[2, 0]), (3.0, &[1, 0])])).unwrap();
        assert_eq!(c.min_gradient, 0.0);
    }

    #[test]
    fn taylor_surrogates() {
        let v = abstract_n1();
        let lin = v.taylor_linear(&[0.0, 1.0]);
        assert_eq!(lin.gradient(&[0.3, 0.7]), vec![0.0, 0.0]);
        let err = lin.gradient_error(&v, &[0.1, 1.0]);
        assert!((err - v.gradient_norm(&[0.1, 1.0])).abs() < 1e-15);
        assert!((err - (0.204f64.powi(2) + 0.02f64.powi(2)).sqrt()).abs() < 1e-15);

        let cube = pot(1, &[(1.0, &[3])]);
        let quad = cube.taylor_quadratic(&[1.0]);
        for t in [0.1, -0.3, 0.7] {
            let q = [1.0 + t];
            assert!((quad.gradient(&q)[0] - (3.0 + 6.0 * t)).abs() < 1e-13);
            assert!((quad.gradient_error(&cube, &q) - 3.0 * t * t).abs() < 1e-13);
        }
    }
}
