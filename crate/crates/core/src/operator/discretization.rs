use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::hermite::HermiteBasis;
use crate::linalg::DMat;

/// Boundary treatment of the position box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Periodic box with spectral (Fourier) differentiation.
    #[default]
    Periodic,
    /// Homogeneous Dirichlet box with central differences.
    Dirichlet,
}

impl Boundary {
    pub fn name(self) -> &'static str {
        match self {
            Boundary::Periodic => "periodic",
            Boundary::Dirichlet => "dirichlet",
        }
    }
}

impl core::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(Boundary::Periodic),
            "dirichlet" => Ok(Boundary::Dirichlet),
            other => Err(Error::Domain(alloc::format!("unknown boundary condition `{other}`"))),
        }
    }
}

/// Position grid times Hermite truncation: the finite-dimensional space on
/// which the operators act.
///
/// The box is `∏_a [c_a − L, c_a + L]` with `N_q` points per axis. A state is
/// stored q-major (position index outer, Hermite multi-index inner) and its
/// entries are `√(Δq^d)` times the Hermite coefficients at each grid point,
/// so the Euclidean inner product of coefficient vectors is the `L²`
/// inner product on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Discretization {
    dim: usize,
    nq: usize,
    np: usize,
    half_width: f64,
    center: Vec<f64>,
    boundary: Boundary,
}

impl Discretization {
    pub fn new(dim: usize, nq: usize, np: usize, half_width: f64, boundary: Boundary) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::Unsupported(alloc::format!(
                "operator discretization in dimension {dim}"
            )));
        }
        if nq < 4 {
            return Err(Error::Domain(alloc::format!("need at least 4 grid points, got {nq}")));
        }
        if np == 0 {
            return Err(Error::Domain("Hermite truncation must be positive".into()));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::Domain(alloc::format!("box half-width must be positive, got {half_width}")));
        }
        Ok(Self {
            dim,
            nq,
            np,
            half_width,
            center: vec![0.0; dim],
            boundary,
        })
    }

    /// Moves the box center.
    pub fn with_center(mut self, center: Vec<f64>) -> Result<Self> {
        if center.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: center.len(),
            });
        }
        self.center = center;
        Ok(self)
    }

    /// The same discretization with every length multiplied by `factor`.
    pub fn dilated(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.half_width *= factor;
        out.center.iter_mut().for_each(|c| *c *= factor);
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nq(&self) -> usize {
        self.nq
    }

    pub fn np(&self) -> usize {
        self.np
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn hermite(&self) -> HermiteBasis {
        HermiteBasis {
            dim: self.dim,
            np: self.np,
        }
    }

    pub fn spacing(&self) -> f64 {
        match self.boundary {
            Boundary::Periodic => 2.0 * self.half_width / self.nq as f64,
            Boundary::Dirichlet => 2.0 * self.half_width / (self.nq + 1) as f64,
        }
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Grid coordinates along axis `a`.
    pub fn axis(&self, a: usize) -> Vec<f64> {
        let h = self.spacing();
        let start = self.center[a] - self.half_width;
        let offset = match self.boundary {
            Boundary::Periodic => 0.0,
            Boundary::Dirichlet => 1.0,
        };
        (0..self.nq).map(|k| start + (k as f64 + offset) * h).collect()
    }

    pub fn n_q_points(&self) -> usize {
        self.nq.pow(self.dim as u32)
    }

    pub fn n_hermite(&self) -> usize {
        self.np.pow(self.dim as u32)
    }

    pub fn total_dim(&self) -> usize {
        self.n_q_points() * self.n_hermite()
    }

    pub fn index(&self, iq: usize, ip: usize) -> usize {
        iq * self.n_hermite() + ip
    }

    /// Per-axis grid indices of the flat position index `iq`.
    pub fn q_multi_index(&self, mut iq: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        for a in (0..self.dim).rev() {
            idx[a] = iq % self.nq;
            iq /= self.nq;
        }
        idx
    }

    pub fn q_flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &k| acc * self.nq + k)
    }

    pub fn q_point(&self, iq: usize) -> Vec<f64> {
        let h = self.spacing();
        let offset = match self.boundary {
            Boundary::Periodic => 0.0,
            Boundary::Dirichlet => 1.0,
        };
        self.q_multi_index(iq)
            .iter()
            .enumerate()
            .map(|(a, &k)| self.center[a] - self.half_width + (k as f64 + offset) * h)
            .collect()
    }

    pub fn q_points(&self) -> Vec<Vec<f64>> {
        (0..self.n_q_points()).map(|iq| self.q_point(iq)).collect()
    }

    /// Samples `f(q, hermite_index)` into a state vector, visiting entries
    /// in storage order.
    pub fn state_from_fn<F: FnMut(&[f64], usize) -> f64>(&self, mut f: F) -> Vec<f64> {
        let w = self.cell_volume().sqrt();
        let nh = self.n_hermite();
        let mut out = vec![0.0; self.total_dim()];
        for iq in 0..self.n_q_points() {
            let q = self.q_point(iq);
            for ip in 0..nh {
                out[iq * nh + ip] = w * f(&q, ip);
            }
        }
        out
    }

    /// Whether `q` lies in the box shrunk by `fraction` around its center.
    pub fn is_interior(&self, q: &[f64], fraction: f64) -> bool {
        q.iter()
            .zip(&self.center)
            .all(|(x, c)| (x - c).abs() <= fraction * self.half_width)
    }

    /// One-dimensional derivative matrix on an axis: the Fourier
    /// differentiation matrix for periodic boxes, central differences with
    /// zero ghost values for Dirichlet boxes. Both are antisymmetric.
    pub fn derivative_1d(&self) -> DMat {
        let n = self.nq;
        match self.boundary {
            Boundary::Periodic => {
                let scale = PI / self.half_width;
                DMat::from_fn(n, n, |i, j| {
                    if i == j {
                        return 0.0;
                    }
                    let k = i as i64 - j as i64;
                    let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    let arg = PI * k as f64 / n as f64;
                    let trig = if n.is_multiple_of(2) { 1.0 / arg.tan() } else { 1.0 / arg.sin() };
                    scale * 0.5 * sign * trig
                })
            }
            Boundary::Dirichlet => {
                let h = self.spacing();
                DMat::from_fn(n, n, |i, j| {
                    if j == i + 1 {
                        0.5 / h
                    } else if i == j + 1 {
                        -0.5 / h
                    } else {
                        0.0
                    }
                })
            }
        }
    }

    /// Real orthonormal basis diagonalizing `−∂²` on one axis (columns) and
    /// the matching frequencies `|ξ|`: cosines and sines for periodic boxes,
    /// sines for Dirichlet boxes.
    pub fn frequency_basis_1d(&self) -> (DMat, Vec<f64>) {
        let n = self.nq;
        let l = self.half_width;
        let mut basis = DMat::zeros(n, n);
        let mut freqs = Vec::with_capacity(n);
        match self.boundary {
            Boundary::Periodic => {
                let nf = n as f64;
                let mut col = 0;
                basis.column_mut(col).fill(1.0 / nf.sqrt());
                freqs.push(0.0);
                col += 1;
                let mut k = 1;
                while 2 * k < n {
                    let c = (2.0 / nf).sqrt();
                    for m in 0..n {
                        let t = 2.0 * PI * (k * m) as f64 / nf;
                        basis[(m, col)] = c * t.cos();
                        basis[(m, col + 1)] = c * t.sin();
                    }
                    let xi = PI * k as f64 / l;
                    freqs.push(xi);
                    freqs.push(xi);
                    col += 2;
                    k += 1;
                }
                if n.is_multiple_of(2) {
                    for m in 0..n {
                        basis[(m, col)] = if m % 2 == 0 { 1.0 } else { -1.0 } / nf.sqrt();
                    }
                    freqs.push(PI * (n / 2) as f64 / l);
                }
            }
            Boundary::Dirichlet => {
                let c = (2.0 / (n + 1) as f64).sqrt();
                for k in 1..=n {
                    for m in 0..n {
                        basis[(m, k - 1)] = c * (PI * (k * (m + 1)) as f64 / (n + 1) as f64).sin();
                    }
                    freqs.push(PI * k as f64 / (2.0 * l));
                }
            }
        }
        (basis, freqs)
    }

    /// Symmetric position-space matrix of the Fourier multiplier `f(|ξ|)`
    /// acting on all `d` axes (`N_q^d × N_q^d`).
    pub fn fourier_multiplier<F: Fn(f64) -> f64>(&self, f: F) -> DMat {
        let (b1, xi1) = self.frequency_basis_1d();
        let (basis, xi): (DMat, Vec<f64>) = if self.dim == 1 {
            (b1, xi1)
        } else {
            let n = self.nq;
            let b = b1.kronecker(&b1);
            let mut xi = Vec::with_capacity(n * n);
            for a in &xi1 {
                for c in &xi1 {
                    xi.push((a * a + c * c).sqrt());
                }
            }
            (b, xi)
        };
        let mut scaled = basis.clone();
        for (k, &x) in xi.iter().enumerate() {
            let fx = f(x);
            scaled.column_mut(k).iter_mut().for_each(|v| *v *= fx);
        }
        let m = scaled * basis.transpose();
        (&m + m.transpose()) * 0.5
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourier_derivative_is_exact_on_trig_polynomials() {
        let d = Discretization::new(1, 32, 1, 2.0, Boundary::Periodic).unwrap();
        let x = d.axis(0);
        let k = PI / 2.0 * 3.0; // three periods over the box
        let f: Vec<f64> = x.iter().map(|&t| (k * t).sin()).collect();
        let df = &d.derivative_1d() * nalgebra::DVector::from_vec(f);
        for (i, &t) in x.iter().enumerate() {
            assert!((df[i] - k * (k * t).cos()).abs() < 1e-11);
        }
    }

    #[test]
    fn derivative_is_antisymmetric() {
        for bc in [Boundary::Periodic, Boundary::Dirichlet] {
            for n in [8, 9] {
                let d = Discretization::new(1, n, 1, 1.5, bc).unwrap();
                let m = d.derivative_1d();
                assert!((&m + m.transpose()).abs().max() < 1e-13);
            }
        }
    }

    #[test]
    fn frequency_basis_is_orthonormal_and_diagonalizes_second_derivative() {
        for bc in [Boundary::Periodic, Boundary::Dirichlet] {
            let d = Discretization::new(1, 12, 1, 1.0, bc).unwrap();
            let (b, xi) = d.frequency_basis_1d();
            let id = b.transpose() * &b;
            assert!((id - DMat::identity(12, 12)).abs().max() < 1e-13);
            if bc == Boundary::Periodic {
                // D² equals −ξ² on every mode except Nyquist, which D annihilates
                let dd = d.derivative_1d();
                let lap = &dd * &dd;
                let diag = b.transpose() * lap * &b;
                for k in 0..11 {
                    assert!((diag[(k, k)] + xi[k] * xi[k]).abs() < 1e-9, "mode {k}");
                }
            }
        }
    }

    #[test]
    fn zero_frequency_multiplier_on_constants() {
        let d = Discretization::new(1, 16, 1, 3.0, Boundary::Periodic).unwrap();
        let m = d.fourier_multiplier(|x| 2.0 + x);
        let ones = nalgebra::DVector::from_element(16, 1.0);
        let y = &m * &ones;
        assert!(y.iter().all(|v| (v - 2.0).abs() < 1e-12));
    }

    #[test]
    fn offsets_and_dimensions() {
        let d = Discretization::new(2, 4, 3, 1.0, Boundary::Periodic)
            .unwrap()
            .with_center(vec![1.0, -1.0])
            .unwrap();
        assert_eq!(d.total_dim(), 16 * 9);
        assert_eq!(d.q_point(0), vec![0.0, -2.0]);
        assert_eq!(d.q_point(1), vec![0.0, -1.5]);
        assert!(Discretization::new(3, 4, 3, 1.0, Boundary::Periodic).is_err());
    }
}
