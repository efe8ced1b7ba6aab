use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::operator::{assemble_kj, assemble_kv, Discretization};
use crate::potential::HomogeneousPotential;

/// Support tolerance relative to the largest entry of the state.
const SUPPORT_TOL: f64 = 1e-13;

/// The dilation `v_j(q, p) = 2^{jd/2} u_j(2^j q, p)`.
///
/// On a grid for `u_j` with box center `c` and half-width `L`, `v_j` lives on
/// the grid with center `2^{−j}c` and half-width `2^{−j}L`. Sampled values
/// pick up the factor `2^{jd/2}` while the quadrature weight `√(Δq^d)`
/// loses it, so the coefficient vector is unchanged and the dilation is
/// exactly unitary.
pub fn scale_state(u: &[f64], j: i32, disc_u: &Discretization) -> Result<(Vec<f64>, Discretization)> {
    if u.len() != disc_u.total_dim() {
        return Err(Error::DimensionMismatch {
            expected: disc_u.total_dim(),
            found: u.len(),
        });
    }
    check_shell_support(u, j, disc_u)?;
    Ok((u.to_vec(), disc_u.dilated(2f64.powi(-j))))
}

fn check_shell_support(u: &[f64], j: i32, disc: &Discretization) -> Result<()> {
    let s = 2f64.powi(j);
    let (inner, outer) = (0.75 * s, 8.0 / 3.0 * s);
    let nh = disc.n_hermite();
    let scale = u.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    for iq in 0..disc.n_q_points() {
        let q = disc.q_point(iq);
        let r = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r >= inner && r <= outer {
            continue;
        }
        let big = u[iq * nh..(iq + 1) * nh].iter().any(|x| x.abs() > SUPPORT_TOL * scale);
        if big {
            return Err(Error::SupportViolation(alloc::format!(
                "state is non-zero at |q| = {r}, outside the shell [{inner}, {outer}]"
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    /// `‖K_V u_j‖`.
    pub norm_kv: f64,
    /// `‖K_{j,V} v_j‖`.
    pub norm_kj: f64,
    pub relative_mismatch: f64,
    pub norm_u: f64,
    pub norm_v: f64,
}

/// Compares `‖K_V u_j‖` on the grid of `u_j` with `‖K_{j,V} v_j‖` on the
/// dilated grid.
pub fn scaled_norm_check(v: &HomogeneousPotential, j: i32, u: &[f64], disc_u: &Discretization) -> Result<ScalingReport> {
    let (vj, disc_v) = scale_state(u, j, disc_u)?;
    let kv = assemble_kv(v.polynomial(), disc_u)?;
    let kj = assemble_kj(v.polynomial(), v.degree(), j, &disc_v)?;
    let a = kv.apply(u);
    let b = kj.apply(&vj);
    let norm_kv = dot(&a, &a).sqrt();
    let norm_kj = dot(&b, &b).sqrt();
    Ok(ScalingReport {
        norm_kv,
        norm_kj,
        relative_mismatch: (norm_kv - norm_kj).abs() / norm_kv,
        norm_u: dot(u, u).sqrt(),
        norm_v: dot(&vj, &vj).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Boundary;
    use crate::partition::bump_state;
    use crate::poly::Monomial;
    use alloc::vec;

    #[test]
    fn level_zero_is_trivial_and_support_is_checked() {
        let v = HomogeneousPotential::new(1, 4, vec![Monomial::new(1.0, vec![4])]).unwrap();
        let disc = Discretization::new(1, 32, 6, 1.0, Boundary::Periodic)
            .unwrap()
            .with_center(vec![1.7])
            .unwrap();
        let u = bump_state(&disc, &[1.7], 0.8, |k| 1.0 / (1.0 + k as f64));
        let rep = scaled_norm_check(&v, 0, &u, &disc).unwrap();
        assert_eq!(rep.relative_mismatch, 0.0);
        assert_eq!(rep.norm_u, rep.norm_v);

        let wide = bump_state(&disc, &[1.0], 0.6, |_| 1.0);
        assert!(matches!(scale_state(&wide, 0, &disc), Err(Error::SupportViolation(_))));
    }
}
