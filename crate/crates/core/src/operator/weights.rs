use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::Discretization;
use crate::error::{Error, Result};
use crate::linalg::DMat;
use crate::poly::Polynomial;
use crate::potential::{hessian_norm_of, japanese_bracket, log_weight_clamped, HessianNorm};

/// The four multipliers on the right of the main subelliptic estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    /// `L(O_p)`.
    Oscillator,
    /// `L(⟨∇V(q)⟩^{2/3})`.
    Gradient,
    /// `L(⟨Hess V(q)⟩^{1/2})`.
    Hessian,
    /// `L(⟨D_q⟩^{2/3})`.
    Frequency,
}

impl WeightKind {
    pub const ALL: [WeightKind; 4] = [
        WeightKind::Oscillator,
        WeightKind::Gradient,
        WeightKind::Hessian,
        WeightKind::Frequency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WeightKind::Oscillator => "Op",
            WeightKind::Gradient => "grad",
            WeightKind::Hessian => "hess",
            WeightKind::Frequency => "Dq",
        }
    }
}

/// A symmetric multiplier stored in the basis where it is simplest.
#[derive(Debug, Clone, PartialEq)]
pub enum Multiplier {
    /// Diagonal in the state basis (Hermite or position multipliers).
    Diagonal(Vec<f64>),
    /// `Q ⊗ I_p` with a dense symmetric position-space block `Q`.
    PositionBlock(DMat),
}

#[derive(Debug, Clone)]
pub struct WeightedMultiplier {
    pub kind: Option<WeightKind>,
    pub multiplier: Multiplier,
    pub disc: Discretization,
}

impl WeightedMultiplier {
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        match &self.multiplier {
            Multiplier::Diagonal(d) => {
                for ((yi, xi), di) in y.iter_mut().zip(x).zip(d) {
                    *yi = xi * di;
                }
            }
            Multiplier::PositionBlock(q) => {
                let nh = self.disc.n_hermite();
                let nqp = self.disc.n_q_points();
                y.iter_mut().for_each(|v| *v = 0.0);
                for j in 0..nqp {
                    let col = q.column(j);
                    let xs = &x[j * nh..(j + 1) * nh];
                    for i in 0..nqp {
                        let c = col[i];
                        if c == 0.0 {
                            continue;
                        }
                        let ys = &mut y[i * nh..(i + 1) * nh];
                        for (a, b) in ys.iter_mut().zip(xs) {
                            *a += c * b;
                        }
                    }
                }
            }
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; x.len()];
        self.apply(x, &mut y);
        y
    }

    /// `‖Λx‖²`.
    pub fn norm_sq(&self, x: &[f64]) -> f64 {
        self.matvec(x).iter().map(|v| v * v).sum()
    }

    /// Adds `s·Λ²` to a dense matrix on the full state space.
    pub fn add_square_to(&self, target: &mut DMat, s: f64) {
        match &self.multiplier {
            Multiplier::Diagonal(d) => {
                for (i, di) in d.iter().enumerate() {
                    target[(i, i)] += s * di * di;
                }
            }
            Multiplier::PositionBlock(q) => {
                let q2 = q * q;
                let nh = self.disc.n_hermite();
                let nqp = self.disc.n_q_points();
                for j in 0..nqp {
                    for i in 0..nqp {
                        let c = s * q2[(i, j)];
                        for k in 0..nh {
                            target[(i * nh + k, j * nh + k)] += c;
                        }
                    }
                }
            }
        }
    }

    pub fn to_dense(&self) -> DMat {
        match &self.multiplier {
            Multiplier::Diagonal(d) => DMat::from_diagonal(&nalgebra::DVector::from_column_slice(d)),
            Multiplier::PositionBlock(q) => q.kronecker(&DMat::identity(self.disc.n_hermite(), self.disc.n_hermite())),
        }
    }

    /// Smallest eigenvalue of the multiplier.
    pub fn min_eigenvalue(&self) -> f64 {
        match &self.multiplier {
            Multiplier::Diagonal(d) => d.iter().copied().fold(f64::INFINITY, f64::min),
            Multiplier::PositionBlock(q) => crate::linalg::symmetric_eigenvalues(q)[0],
        }
    }
}

/// Diagonal multiplier `f(O_p eigenvalue)` in the Hermite basis.
pub fn oscillator_multiplier<F: Fn(f64) -> f64>(disc: &Discretization, f: F) -> WeightedMultiplier {
    let herm = disc.hermite();
    let nh = disc.n_hermite();
    let vals = (0..disc.total_dim())
        .map(|k| f(herm.oscillator_eigenvalue(k % nh)))
        .collect();
    WeightedMultiplier {
        kind: None,
        multiplier: Multiplier::Diagonal(vals),
        disc: disc.clone(),
    }
}

/// Diagonal multiplier by a function of position.
pub fn position_multiplier<F: Fn(&[f64]) -> f64>(disc: &Discretization, f: F) -> WeightedMultiplier {
    let nh = disc.n_hermite();
    let per_q: Vec<f64> = disc.q_points().iter().map(|q| f(q)).collect();
    let vals = (0..disc.total_dim()).map(|k| per_q[k / nh]).collect();
    WeightedMultiplier {
        kind: None,
        multiplier: Multiplier::Diagonal(vals),
        disc: disc.clone(),
    }
}

/// Fourier multiplier `f(|ξ|)` in position, identity in velocity.
pub fn frequency_multiplier<F: Fn(f64) -> f64>(disc: &Discretization, f: F) -> WeightedMultiplier {
    WeightedMultiplier {
        kind: None,
        multiplier: Multiplier::PositionBlock(disc.fourier_multiplier(f)),
        disc: disc.clone(),
    }
}

/// Builds one of the log-corrected weights. Arguments below 1 (only the
/// lowest oscillator levels in dimension one) are clamped to 1 before `L`
/// is applied.
pub fn assemble_weight(
    kind: WeightKind,
    v: &Polynomial,
    disc: &Discretization,
    convention: HessianNorm,
) -> Result<WeightedMultiplier> {
    if v.dim() != disc.dim() {
        return Err(Error::DimensionMismatch {
            expected: disc.dim(),
            found: v.dim(),
        });
    }
    let d = disc.dim();
    let mut w = match kind {
        WeightKind::Oscillator => oscillator_multiplier(disc, log_weight_clamped),
        WeightKind::Gradient => {
            let grad = v.gradient();
            position_multiplier(disc, |q| {
                let g = grad.iter().map(|p| p.eval(q).powi(2)).sum::<f64>().sqrt();
                log_weight_clamped(japanese_bracket(g).powf(2.0 / 3.0))
            })
        }
        WeightKind::Hessian => {
            let hess = v.hessian();
            position_multiplier(disc, |q| {
                let h: Vec<f64> = hess.iter().map(|p| p.eval(q)).collect();
                let n = hessian_norm_of(d, &h, convention);
                log_weight_clamped(japanese_bracket(n).sqrt())
            })
        }
        WeightKind::Frequency => frequency_multiplier(disc, |xi| log_weight_clamped(japanese_bracket(xi).powf(2.0 / 3.0))),
    };
    w.kind = Some(kind);
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Boundary;
    use crate::poly::Monomial;

    fn l1() -> f64 {
        2.0 / 2f64.ln()
    }

    #[test]
    fn frequency_weight_on_constant_state() {
        let d = Discretization::new(1, 16, 2, 4.0, Boundary::Periodic).unwrap();
        let w = assemble_weight(WeightKind::Frequency, &Polynomial::zero(1), &d, HessianNorm::Operator).unwrap();
        let u = d.state_from_fn(|_, k| if k == 0 { 1.0 } else { 0.0 });
        let y = w.matvec(&u);
        for (a, b) in y.iter().zip(&u) {
            assert!((a - l1() * b).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_weight_at_critical_point_and_oscillator_clamp() {
        let v = Polynomial::new(1, vec![Monomial::new(1.0, vec![4])]).unwrap();
        let d = Discretization::new(1, 8, 4, 1.0, Boundary::Periodic).unwrap();
        let w = assemble_weight(WeightKind::Gradient, &v, &d, HessianNorm::Operator).unwrap();
        // q = -1 + 4·0.25 = 0 is grid point 4
        let iq = 4;
        assert_eq!(d.q_point(iq), vec![0.0]);
        if let Multiplier::Diagonal(vals) = &w.multiplier {
            assert!((vals[d.index(iq, 0)] - l1()).abs() < 1e-15);
        }
        let o = assemble_weight(WeightKind::Oscillator, &v, &d, HessianNorm::Operator).unwrap();
        // in d = 1 the levels 1/2, 3/2, 5/2, ... are clamped to 1, 3/2, 5/2, ...
        // and L is smallest at e − 1, so level 1 is the minimum
        assert!((o.min_eigenvalue() - 2.5 / 2.5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn all_weights_bounded_below() {
        let v = Polynomial::new(2, vec![Monomial::new(-1.0, vec![4, 0]), Monomial::new(-1.0, vec![2, 2])]).unwrap();
        let d = Discretization::new(2, 6, 3, 2.0, Boundary::Periodic).unwrap();
        for kind in WeightKind::ALL {
            for conv in [HessianNorm::Operator, HessianNorm::Determinant] {
                let w = assemble_weight(kind, &v, &d, conv).unwrap();
                assert!(w.min_eigenvalue() >= core::f64::consts::E - 1e-12, "{kind:?}");
            }
        }
    }

    #[test]
    fn dense_square_matches_application() {
        let d = Discretization::new(1, 6, 3, 2.0, Boundary::Dirichlet).unwrap();
        let w = frequency_multiplier(&d, |x| 1.0 + x);
        let dense = w.to_dense();
        let mut sq = DMat::zeros(d.total_dim(), d.total_dim());
        w.add_square_to(&mut sq, 1.0);
        assert!((&dense * &dense - sq).abs().max() < 1e-10);
        let x: Vec<f64> = (0..d.total_dim()).map(|i| (i as f64).cos()).collect();
        let y1 = w.matvec(&x);
        let y2 = &dense * nalgebra::DVector::from_column_slice(&x);
        for i in 0..x.len() {
            assert!((y1[i] - y2[i]).abs() < 1e-12);
        }
    }
}
