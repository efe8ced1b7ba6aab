use alloc::vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{generalized_min_ratio, DiscMeta, EstimateReport, Inequality};
use crate::error::{Error, Result};
use crate::linalg::{dot, DMat};
use crate::operator::{
    assemble_kv, assemble_xv, frequency_multiplier, oscillator_multiplier, position_multiplier,
    smallest_singular_value_with, Discretization, SolverPath,
};
use crate::poly::Polynomial;
use crate::potential::{japanese_bracket, potential_constants};

const SEED: u64 = 0x6b66_7031;

/// Largest `c` with
/// `‖K_V u‖² + A_V‖u‖² ≥ c(‖O_p u‖² + ‖X_V u‖² + ‖⟨∇V⟩^{2/3}u‖² + ‖⟨D_q⟩^{2/3}u‖²)`
/// on the discretization, for a polynomial of degree at most two.
pub fn verify_bnv_remainder(v: &Polynomial, disc: &Discretization) -> Result<EstimateReport> {
    let consts = potential_constants(v)?;
    let k = assemble_kv(v, disc)?;
    let xv = assemble_xv(v, disc)?;
    let n = disc.total_dim();

    let mut a = k.matrix.gram_dense();
    for i in 0..n {
        a[(i, i)] += consts.a_v;
    }

    let op = oscillator_multiplier(disc, |s| s);
    let grad = v.gradient();
    let gw = position_multiplier(disc, |q| {
        let g = grad.iter().map(|p| p.eval(q).powi(2)).sum::<f64>().sqrt();
        japanese_bracket(g).powf(2.0 / 3.0)
    });
    let dq = frequency_multiplier(disc, |xi| japanese_bracket(xi).powf(2.0 / 3.0));
    let mut b: DMat = xv.matrix.gram_dense();
    op.add_square_to(&mut b, 1.0);
    gw.add_square_to(&mut b, 1.0);
    dq.add_square_to(&mut b, 1.0);
    let b = (&b + b.transpose()) * 0.5;

    let (c, u, iterations) = generalized_min_ratio(a, &b, SEED)?;
    let xu = xv.apply(&u);
    let per_term = vec![
        ("Op", op.norm_sq(&u)),
        ("XV", dot(&xu, &xu)),
        ("grad", gw.norm_sq(&u)),
        ("Dq", dq.norm_sq(&u)),
    ];
    Ok(EstimateReport {
        inequality: Inequality::BnvRemainder,
        constant: c,
        certificate: u,
        disc: DiscMeta::from(disc),
        per_term,
        certificate_forms: None,
        psd_above: None,
        iterations,
        seed: SEED,
    })
}

/// `σ_min(K_V)² / B_V` for a polynomial of degree at most two with
/// `Tr_− + min|∇V| > 0`.
pub fn verify_bnv_lower(v: &Polynomial, disc: &Discretization) -> Result<EstimateReport> {
    let consts = potential_constants(v)?;
    if !consts.hypothesis_nondegenerate {
        return Err(Error::HypothesisViolated);
    }
    let k = assemble_kv(v, disc)?;
    let sv = smallest_singular_value_with(&k.matrix, 0.0, SolverPath::Auto, 1e-10, SEED)?;
    Ok(EstimateReport {
        inequality: Inequality::BnvLower,
        constant: sv.value * sv.value / consts.b_v,
        certificate: sv.vector,
        disc: DiscMeta::from(disc),
        per_term: vec![("B_V", consts.b_v), ("sigma_min", sv.value)],
        certificate_forms: None,
        psd_above: None,
        iterations: sv.iterations,
        seed: SEED,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::symmetric_eigenvalues;
    use crate::operator::Boundary;
    use crate::poly::Monomial;

    fn poly(terms: &[(f64, u32)]) -> Polynomial {
        Polynomial::new(1, terms.iter().map(|&(c, e)| Monomial::new(c, vec![e])).collect()).unwrap()
    }

    #[test]
    fn remainder_constant_for_free_and_linear_potentials() {
        let disc = Discretization::new(1, 16, 6, 4.0, Boundary::Periodic).unwrap();
        for v in [Polynomial::zero(1), poly(&[(1.0, 1)])] {
            let rep = verify_bnv_remainder(&v, &disc).unwrap();
            assert!(rep.constant > 0.0 && rep.constant <= 1.0, "{}", rep.constant);
            // the certificate attains the ratio
            let k = assemble_kv(&v, &disc).unwrap();
            let ku = k.apply(&rep.certificate);
            let lhs = dot(&ku, &ku) + potential_constants(&v).unwrap().a_v;
            let rhs: f64 = rep.per_term.iter().map(|t| t.1).sum();
            assert!((lhs / rhs - rep.constant).abs() < 1e-7 * rep.constant);
        }
    }

    #[test]
    fn lower_bound_matches_dense_singular_values() {
        let disc = Discretization::new(1, 16, 8, 4.0, Boundary::Periodic).unwrap();
        let v = poly(&[(-0.5, 2)]);
        let rep = verify_bnv_lower(&v, &disc).unwrap();
        let k = assemble_kv(&v, &disc).unwrap().matrix.to_dense();
        let s2 = symmetric_eigenvalues(&(k.transpose() * &k))[0];
        let bv = 2.0 / 3f64.ln().powi(2);
        assert!((rep.constant - s2 / bv).abs() < 1e-8 * (s2 / bv).max(1e-3));
        assert!(matches!(verify_bnv_lower(&poly(&[(0.5, 2)]), &disc), Err(Error::HypothesisViolated)));
    }
}
