use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::RadialCutoffPair;

/// Normalized dyadic cutoffs `χ_j`, `j ≥ −1`, with `Σ_j χ_j² = 1`.
///
/// With `Φ_{−1}(q) = χ(|q|)` and `Φ_j(q) = φ(2^{−j}|q|)` the cutoffs are
/// `χ_j = Φ_j / (Σ_k Φ_k²)^{1/2}`. Since `Σ_k Φ_k = 1` and at most three
/// terms are non-zero, the denominator is at least `1/√3`. For `j ≥ 1` the
/// family is exactly scale covariant: `χ_j(q) = χ_0(2^{−j}q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicPartition {
    pair: RadialCutoffPair,
    max_level: i32,
}

pub fn normalize_dyadic(pair: RadialCutoffPair, radius: f64) -> DyadicPartition {
    DyadicPartition::new(pair, radius)
}

impl DyadicPartition {
    /// Instantiates the levels needed to cover `|q| ≤ radius`.
    pub fn new(pair: RadialCutoffPair, radius: f64) -> Self {
        let max_level = Self::levels_at(radius.max(1.0)).1;
        Self { pair, max_level }
    }

    pub fn pair(&self) -> RadialCutoffPair {
        self.pair
    }

    /// Levels `−1..=max_level`.
    pub fn levels(&self) -> core::ops::RangeInclusive<i32> {
        -1..=self.max_level
    }

    pub fn max_level(&self) -> i32 {
        self.max_level
    }

    /// Range of levels `j ≥ 0` whose shell can contain radius `r`.
    fn levels_at(r: f64) -> (i32, i32) {
        if r <= 0.75 {
            return (0, -1);
        }
        let lo = ((3.0 * r / 8.0).log2().floor() as i32).max(0);
        let hi = (4.0 * r / 3.0).log2().ceil() as i32;
        (lo, hi.max(lo))
    }

    fn raw(&self, j: i32, r: f64) -> f64 {
        if j < 0 {
            self.pair.chi(r)
        } else {
            self.pair.phi(r * 2f64.powi(-j))
        }
    }

    fn raw_derivative(&self, j: i32, r: f64) -> f64 {
        if j < 0 {
            self.pair.chi_derivative(r)
        } else {
            let s = 2f64.powi(-j);
            s * self.pair.phi_derivative(r * s)
        }
    }

    fn nonzero_raw(&self, r: f64) -> impl Iterator<Item = i32> + '_ {
        let (lo, hi) = Self::levels_at(r);
        core::iter::once(-1).chain(lo..=hi).filter(move |&j| self.raw(j, r) != 0.0)
    }

    fn denominator(&self, r: f64) -> (f64, f64) {
        // (Σ Φ_k², Σ Φ_k Φ_k')
        let mut s = 0.0;
        let mut ds = 0.0;
        for k in self.nonzero_raw(r) {
            let f = self.raw(k, r);
            s += f * f;
            ds += f * self.raw_derivative(k, r);
        }
        (s, ds)
    }

    pub fn eval(&self, j: i32, q: &[f64]) -> f64 {
        let r = norm(q);
        let f = self.raw(j, r);
        if f == 0.0 {
            return 0.0;
        }
        f / self.denominator(r).0.sqrt()
    }

    /// `∇χ_j(q)`.
    pub fn gradient(&self, j: i32, q: &[f64]) -> Vec<f64> {
        let r = norm(q);
        let f = self.raw(j, r);
        let df = self.raw_derivative(j, r);
        if r == 0.0 || (f == 0.0 && df == 0.0) {
            return q.iter().map(|_| 0.0).collect();
        }
        let (s, ds) = self.denominator(r);
        let radial = df / s.sqrt() - f * ds / (s * s.sqrt());
        q.iter().map(|x| radial * x / r).collect()
    }

    /// Non-zero cutoffs at `q` as `(j, χ_j(q))`.
    pub fn active(&self, q: &[f64]) -> Vec<(i32, f64)> {
        let r = norm(q);
        let s = self.denominator(r).0.sqrt();
        self.nonzero_raw(r).map(|j| (j, self.raw(j, r) / s)).collect()
    }

    /// Support of `χ_j` as radii `(inner, outer)`.
    pub fn support(&self, j: i32) -> (f64, f64) {
        if j < 0 {
            (0.0, RadialCutoffPair::CHI_SUPPORT)
        } else {
            let s = 2f64.powi(j);
            let (a, b) = RadialCutoffPair::PHI_SUPPORT;
            (a * s, b * s)
        }
    }
}

fn norm(q: &[f64]) -> f64 {
    q.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::build_radial_pair;

    #[test]
    fn squares_sum_to_one() {
        let p = normalize_dyadic(build_radial_pair(), 100.0);
        for k in 0..2000 {
            let r = 0.05 * k as f64;
            let q = [r * 0.6, -r * 0.8];
            let s: f64 = p.active(&q).iter().map(|(_, v)| v * v).sum();
            assert!((s - 1.0).abs() < 1e-12, "r = {r}");
            assert!(p.active(&q).len() <= 3);
        }
    }

    #[test]
    fn single_term_normalizes_to_one() {
        let p = normalize_dyadic(build_radial_pair(), 10.0);
        // at |q| = 3 only φ(q/2) is active: χ(3)=0, φ(3)=0, φ(3/4)=0
        assert_eq!(p.active(&[3.0]).len(), 1);
        assert_eq!(p.eval(1, &[3.0]), 1.0);
    }

    #[test]
    fn scale_covariance() {
        let p = normalize_dyadic(build_radial_pair(), 1000.0);
        for j in 1..6 {
            for k in 0..300 {
                let r = 0.7 + 0.01 * k as f64;
                let s = 2f64.powi(j);
                let a = p.eval(j, &[r * s]);
                let b = p.eval(0, &[r]);
                assert!((a - b).abs() < 1e-14, "j = {j}, r = {r}");
            }
        }
    }

    #[test]
    fn gradient_matches_differences() {
        let p = normalize_dyadic(build_radial_pair(), 20.0);
        let h = 1e-6;
        for j in -1..3 {
            for k in 0..80 {
                let q = [0.1 + 0.07 * k as f64, 0.3];
                let g = p.gradient(j, &q);
                let fx = (p.eval(j, &[q[0] + h, q[1]]) - p.eval(j, &[q[0] - h, q[1]])) / (2.0 * h);
                let fy = (p.eval(j, &[q[0], q[1] + h]) - p.eval(j, &[q[0], q[1] - h])) / (2.0 * h);
                assert!((g[0] - fx).abs() < 1e-6 && (g[1] - fy).abs() < 1e-6, "j={j} q={q:?}");
            }
        }
    }
}
