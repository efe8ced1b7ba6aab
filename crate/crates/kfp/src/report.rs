//! JSON shapes of the command reports.
//!
//! serde_json writes non-finite floats as `null`; `ε₀ = +∞` for an empty
//! critical set appears that way.

use std::collections::BTreeMap;

use kfp_core::assumption::{AssumptionReport, IndicatorReport};
use kfp_core::estimates::{DiscMeta, EstimateReport};
use kfp_core::potential::PotentialConstants;
use kfp_core::Polynomial;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct TermJson {
    pub coeff: f64,
    pub exponents: Vec<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PotentialJson {
    pub dim: usize,
    pub degree: u32,
    pub homogeneous: bool,
    pub terms: Vec<TermJson>,
}

impl From<&Polynomial> for PotentialJson {
    fn from(p: &Polynomial) -> Self {
        Self {
            dim: p.dim(),
            degree: p.degree(),
            homogeneous: p.homogeneous_degree().is_some(),
            terms: p
                .terms()
                .iter()
                .map(|t| TermJson {
                    coeff: t.coeff,
                    exponents: t.exponents.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IndicatorJson {
    pub delta: f64,
    pub exponent: f64,
    pub m_delta: f64,
    pub worst_ratio: f64,
    pub scales: Vec<f64>,
    pub directions: usize,
    pub violations: usize,
    pub passed: bool,
}

impl IndicatorJson {
    pub fn new(delta: f64, r: &IndicatorReport) -> Self {
        Self {
            delta,
            exponent: r.exponent,
            m_delta: r.m_delta,
            worst_ratio: r.worst_ratio,
            scales: r.scales.clone(),
            directions: r.directions,
            violations: r.violations.len(),
            passed: r.passed(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AssumptionJson {
    pub holds: bool,
    pub convention: &'static str,
    pub resolution: f64,
    pub critical_points: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub failures: Vec<Vec<f64>>,
    pub epsilon0: f64,
    pub epsilon1: f64,
    pub epsilon2: f64,
    pub epsilon3: f64,
    pub sup_gradient: f64,
    pub sup_hessian: f64,
}

impl From<&AssumptionReport> for AssumptionJson {
    fn from(r: &AssumptionReport) -> Self {
        Self {
            holds: r.holds,
            convention: r.convention.name(),
            resolution: r.critical_set.resolution,
            critical_points: r.critical_set.points.clone(),
            residuals: r.critical_set.residuals.clone(),
            failures: r.failures.clone(),
            epsilon0: r.epsilon0,
            epsilon1: r.epsilon1,
            epsilon2: r.epsilon2,
            epsilon3: r.epsilon3,
            sup_gradient: r.critical_set.sup_gradient,
            sup_hessian: r.critical_set.sup_hessian,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckJson {
    pub command: &'static str,
    pub potential: PotentialJson,
    pub assumption: AssumptionJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub indicator: Option<IndicatorJson>,
    pub runtime_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiscJson {
    pub dim: usize,
    pub nq: usize,
    pub np: usize,
    pub half_width: f64,
    pub center: Vec<f64>,
    pub boundary: &'static str,
}

impl From<&DiscMeta> for DiscJson {
    fn from(d: &DiscMeta) -> Self {
        Self {
            dim: d.dim,
            nq: d.nq,
            np: d.np,
            half_width: d.half_width,
            center: d.center.clone(),
            boundary: d.boundary.name(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FormsJson {
    pub below: f64,
    pub above: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyJson {
    pub command: &'static str,
    pub potential: PotentialJson,
    pub inequality: &'static str,
    pub constant: f64,
    pub disc: DiscJson,
    pub per_term: BTreeMap<&'static str, f64>,
    pub certificate_forms: Option<FormsJson>,
    pub psd_above: Option<bool>,
    pub iterations: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assumption: Option<AssumptionJson>,
    pub certificate: Vec<f64>,
    pub runtime_ms: u128,
}

impl VerifyJson {
    pub fn new(p: &Polynomial, r: &EstimateReport, assumption: Option<AssumptionJson>) -> Self {
        Self {
            command: "verify",
            potential: p.into(),
            inequality: r.inequality.name(),
            constant: r.constant,
            disc: (&r.disc).into(),
            per_term: r.per_term.iter().copied().collect(),
            certificate_forms: r.certificate_forms.map(|(below, above)| FormsJson { below, above }),
            psd_above: r.psd_above,
            iterations: r.iterations,
            seed: r.seed,
            assumption,
            certificate: r.certificate.clone(),
            runtime_ms: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NotFoundJson {
    pub command: &'static str,
    pub status: &'static str,
    pub c_max: f64,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuadraticConstantsJson {
    pub a_v: f64,
    pub b_v: f64,
    pub tr_plus: f64,
    pub tr_minus: f64,
    pub min_gradient: f64,
    pub hypothesis_nondegenerate: bool,
}

impl From<&PotentialConstants> for QuadraticConstantsJson {
    fn from(c: &PotentialConstants) -> Self {
        Self {
            a_v: c.a_v,
            b_v: c.b_v,
            tr_plus: c.tr_plus,
            tr_minus: c.tr_minus,
            min_gradient: c.min_gradient,
            hypothesis_nondegenerate: c.hypothesis_nondegenerate,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HomogeneousConstantsJson {
    pub nu: f64,
    pub nu_bounds: (f64, f64),
    pub delta: f64,
    pub growth_exponent: f64,
    pub m_delta: f64,
    pub assumption: AssumptionJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstantsJson {
    pub command: &'static str,
    pub potential: PotentialJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadratic: Option<QuadraticConstantsJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homogeneous: Option<HomogeneousConstantsJson>,
    pub runtime_ms: u128,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinite_values_become_null() {
        let forms = FormsJson {
            below: f64::INFINITY,
            above: f64::NAN,
        };
        assert_eq!(serde_json::to_string(&forms).unwrap(), r#"{"below":null,"above":null}"#);
    }
}
