use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{Csr, Discretization};
use crate::error::{Error, Result};
use crate::hermite::{derivative_entry, position_entry};
use crate::poly::Polynomial;

/// Which operator an [`OperatorMatrix`] represents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorKind {
    /// `O_p = ½(D_p² + p²)`.
    Oscillator,
    /// `X_V = p·∂_q − ∇V·∂_p`.
    Transport,
    /// `K_V = X_V + O_p`.
    Kramers,
    /// `K_{j,V} = 2^{−j} p·∂_q − 2^{j(r−1)} ∇V·∂_p + O_p`.
    Rescaled { j: i32 },
    /// `Σ_a p_a f_a(q)`, a velocity-weighted position multiplier.
    VelocityMultiplier,
}

/// An assembled operator together with the space it acts on.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub kind: OperatorKind,
    pub matrix: Csr,
    pub disc: Discretization,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matrix.matvec(x)
    }
}

/// Coefficients of the general Kramers-Fokker-Planck form
/// `a·p·∂_q − b·∇W(q)·∂_p + c·O_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KfpCoefficients {
    pub transport: f64,
    pub drift: f64,
    pub oscillator: f64,
}

fn check_dim(grad: &[Polynomial], disc: &Discretization) -> Result<()> {
    if grad.len() != disc.dim() {
        return Err(Error::DimensionMismatch {
            expected: disc.dim(),
            found: grad.len(),
        });
    }
    Ok(())
}

/// Assembles `a·p·∂_q − b·∇W·∂_p + c·O_p` where `grad` holds the components
/// of `∇W` as polynomials.
pub fn assemble_kfp(grad: &[Polynomial], disc: &Discretization, coef: KfpCoefficients) -> Result<Csr> {
    check_dim(grad, disc)?;
    let d = disc.dim();
    let nq = disc.nq();
    let np = disc.np();
    let herm = disc.hermite();
    let nh = disc.n_hermite();
    let dq = disc.derivative_1d();
    let drift: Vec<Vec<f64>> = disc
        .q_points()
        .iter()
        .map(|q| grad.iter().map(|g| g.eval(q)).collect())
        .collect();
    let n = disc.total_dim();
    Ok(Csr::from_rows(n, n, |row, push| {
        let iq = row / nh;
        let ip = row % nh;
        let qi = disc.q_multi_index(iq);
        let pi = herm.multi_index(ip);
        for a in 0..d {
            let na = pi[a];
            for nb in [na.wrapping_sub(1), na + 1] {
                if nb >= np {
                    continue;
                }
                let mut pj = pi.clone();
                pj[a] = nb;
                let jp = herm.flat_index(&pj);
                let pos = position_entry(na, nb);
                if coef.transport != 0.0 {
                    let mut qj = qi.clone();
                    for m in 0..nq {
                        let dv = dq[(qi[a], m)];
                        if dv == 0.0 {
                            continue;
                        }
                        qj[a] = m;
                        let jq = disc.q_flat_index(&qj);
                        push(jq * nh + jp, coef.transport * pos * dv);
                    }
                }
                let g = drift[iq][a];
                if coef.drift != 0.0 && g != 0.0 {
                    push(iq * nh + jp, -coef.drift * g * derivative_entry(na, nb));
                }
            }
        }
        if coef.oscillator != 0.0 {
            push(row, coef.oscillator * herm.oscillator_eigenvalue(ip));
        }
    }))
}

/// `O_p`, diagonal in the Hermite basis with entries `Σ_a (n_a + ½)`.
pub fn assemble_op(disc: &Discretization) -> OperatorMatrix {
    let herm = disc.hermite();
    let nh = disc.n_hermite();
    let n = disc.total_dim();
    let matrix = Csr::from_rows(n, n, |row, push| push(row, herm.oscillator_eigenvalue(row % nh)));
    OperatorMatrix {
        kind: OperatorKind::Oscillator,
        matrix,
        disc: disc.clone(),
    }
}

/// `X_V = p·∂_q − ∇V·∂_p`.
pub fn assemble_xv(v: &Polynomial, disc: &Discretization) -> Result<OperatorMatrix> {
    let matrix = assemble_kfp(
        &v.gradient(),
        disc,
        KfpCoefficients {
            transport: 1.0,
            drift: 1.0,
            oscillator: 0.0,
        },
    )?;
    Ok(OperatorMatrix {
        kind: OperatorKind::Transport,
        matrix,
        disc: disc.clone(),
    })
}

/// `K_V = p·∂_q − ∇V·∂_p + O_p`.
pub fn assemble_kv(v: &Polynomial, disc: &Discretization) -> Result<OperatorMatrix> {
    let matrix = assemble_kfp(
        &v.gradient(),
        disc,
        KfpCoefficients {
            transport: 1.0,
            drift: 1.0,
            oscillator: 1.0,
        },
    )?;
    Ok(OperatorMatrix {
        kind: OperatorKind::Kramers,
        matrix,
        disc: disc.clone(),
    })
}

/// `K_{j,V}` for a potential homogeneous of degree `r`; the dyadic level `j`
/// enters through `2^{−j}` on transport and `2^{j(r−1)}` on the drift.
pub fn assemble_kj(v: &Polynomial, degree: u32, j: i32, disc: &Discretization) -> Result<OperatorMatrix> {
    let matrix = assemble_kfp(&v.gradient(), disc, rescaled_coefficients(degree, j))?;
    Ok(OperatorMatrix {
        kind: OperatorKind::Rescaled { j },
        matrix,
        disc: disc.clone(),
    })
}

pub fn rescaled_coefficients(degree: u32, j: i32) -> KfpCoefficients {
    KfpCoefficients {
        transport: 2f64.powi(-j),
        drift: 2f64.powi(j * (degree as i32 - 1)),
        oscillator: 1.0,
    }
}

/// `Σ_a p_a f_a(q)` where `field[iq][a]` is `f_a` at grid point `iq`; used
/// for the commutator terms `p·∂_qχ` of the localization formula.
pub fn velocity_multiplier(field: &[Vec<f64>], disc: &Discretization) -> OperatorMatrix {
    let herm = disc.hermite();
    let nh = disc.n_hermite();
    let np = disc.np();
    let n = disc.total_dim();
    let matrix = Csr::from_rows(n, n, |row, push| {
        let iq = row / nh;
        let ip = row % nh;
        let pi = herm.multi_index(ip);
        for (a, &fa) in field[iq].iter().enumerate() {
            if fa == 0.0 {
                continue;
            }
            let na = pi[a];
            for nb in [na.wrapping_sub(1), na + 1] {
                if nb >= np {
                    continue;
                }
                let mut pj = pi.clone();
                pj[a] = nb;
                push(iq * nh + herm.flat_index(&pj), fa * position_entry(na, nb));
            }
        }
    });
    OperatorMatrix {
        kind: OperatorKind::VelocityMultiplier,
        matrix,
        disc: disc.clone(),
    }
}

/// Multiplies a state by a function of position.
pub fn multiply_by_position(values: &[f64], disc: &Discretization, u: &[f64]) -> Vec<f64> {
    let nh = disc.n_hermite();
    u.iter()
        .enumerate()
        .map(|(k, x)| x * values[k / nh])
        .collect()
}

/// Complex eigenvalues `(re, im)` of a (small) operator, sorted by real part
/// and then imaginary part.
pub fn spectrum(op: &Csr) -> Vec<(f64, f64)> {
    let dense = op.to_dense();
    let mut ev: Vec<(f64, f64)> = dense
        .complex_eigenvalues()
        .iter()
        .map(|z| (z.re, z.im))
        .collect();
    ev.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    ev
}

/// `⟨x, A x⟩`.
pub fn quadratic_form(a: &Csr, x: &[f64]) -> f64 {
    crate::linalg::dot(x, &a.matvec(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Boundary;
    use crate::poly::Monomial;
    use alloc::vec;

    fn quartic() -> Polynomial {
        Polynomial::new(1, vec![Monomial::new(1.0, vec![4])]).unwrap()
    }

    #[test]
    fn oscillator_is_exact() {
        let d = Discretization::new(1, 4, 4, 1.0, Boundary::Periodic).unwrap();
        let op = assemble_op(&d);
        let diag: Vec<f64> = (0..4).map(|i| op.matrix.get(i, i)).collect();
        assert_eq!(diag, vec![0.5, 1.5, 2.5, 3.5]);
        let d2 = Discretization::new(2, 4, 3, 1.0, Boundary::Periodic).unwrap();
        assert_eq!(assemble_op(&d2).matrix.get(0, 0), 1.0);
    }

    #[test]
    fn transport_is_antisymmetric() {
        for bc in [Boundary::Periodic, Boundary::Dirichlet] {
            let d = Discretization::new(1, 16, 8, 3.0, bc).unwrap();
            let x = assemble_xv(&quartic(), &d).unwrap();
            assert!(x.matrix.symmetric_part_max() < 1e-10);
            let x0 = assemble_xv(&Polynomial::zero(1), &d).unwrap();
            assert!(x0.matrix.symmetric_part_max() < 1e-12);
        }
        let v2 = Polynomial::new(2, vec![Monomial::new(-1.0, vec![4, 0]), Monomial::new(-1.0, vec![2, 2])]).unwrap();
        let d = Discretization::new(2, 8, 4, 2.0, Boundary::Periodic).unwrap();
        assert!(assemble_xv(&v2, &d).unwrap().matrix.symmetric_part_max() < 1e-10);
    }

    #[test]
    fn rescaled_at_level_zero_is_kv() {
        let d = Discretization::new(1, 12, 6, 2.0, Boundary::Periodic).unwrap();
        let a = assemble_kj(&quartic(), 4, 0, &d).unwrap();
        let b = assemble_kv(&quartic(), &d).unwrap();
        assert_eq!(a.matrix, b.matrix);
    }

    #[test]
    fn oscillator_spectrum_matches_finite_differences() {
        // FD discretization of ½(−∂_p² + p²) on [−10, 10]
        let n = 800;
        let h = 20.0 / (n + 1) as f64;
        let m = crate::linalg::DMat::from_fn(n, n, |i, j| {
            let p = -10.0 + (i + 1) as f64 * h;
            if i == j {
                1.0 / (h * h) + 0.5 * p * p
            } else if i.abs_diff(j) == 1 {
                -0.5 / (h * h)
            } else {
                0.0
            }
        });
        let ev = crate::linalg::symmetric_eigenvalues(&m);
        let d = Discretization::new(1, 4, 4, 1.0, Boundary::Periodic).unwrap();
        let op = assemble_op(&d);
        for (k, e) in ev.iter().take(4).enumerate() {
            assert!((e - op.matrix.get(k, k)).abs() < 1e-3);
        }
    }
}
