use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

#[allow(unused_imports)]
use num_traits::Float;

use super::profile::{smooth_step, smooth_step_derivative};
use super::scales::patch_radius;
use crate::error::{Error, Result};

/// Radial shell `{inner ≤ |q| ≤ outer}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shell {
    pub inner: f64,
    pub outer: f64,
}

impl Shell {
    /// The fixed shell `{3/4 ≤ |q| ≤ 8/3}` of the dyadic decomposition.
    pub const STANDARD: Shell = Shell {
        inner: 0.75,
        outer: 8.0 / 3.0,
    };

    pub fn width(&self) -> f64 {
        self.outer - self.inner
    }

    pub fn contains(&self, q: &[f64]) -> bool {
        let r = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        r >= self.inner && r <= self.outer
    }
}

/// Partition `Σ_k θ_{k,h}² = 1` at scale `ρ = |ln h|·h^ν`.
///
/// Patches are translates of a tensor product of one-dimensional profiles on
/// the lattice `s·Z^d`. Per axis the profile equals 1 on `[−b, b]` with
/// `b = ρ/2`, vanishes outside `(−a, a)` with `a = ρ/√d`, and on the ramp is
/// `cos(π/2·S((|t| − b)/(a − b)))` for the smooth step `S`; the lattice step
/// `s = a + b` makes neighbouring ramps complementary (`cos² + sin² = 1`).
/// The support cube lies in `B(q_k, ρ)` and the plateau cube contains
/// `B(q_k, ρ/2)`. This needs `a > b`, i.e. `d ≤ 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct FinePartition {
    dim: usize,
    h: f64,
    nu: f64,
    radius: f64,
    support: f64,
    plateau: f64,
    spacing: f64,
    shell: Shell,
    patches: Vec<Vec<i64>>,
    lookup: BTreeMap<Vec<i64>, usize>,
    gradient_constant: f64,
}

pub fn build_fine_partition(h: f64, nu: f64, dim: usize, shell: Shell) -> Result<FinePartition> {
    FinePartition::new(h, nu, dim, shell)
}

impl FinePartition {
    pub fn new(h: f64, nu: f64, dim: usize, shell: Shell) -> Result<Self> {
        if !(h > 0.0 && h < 1.0) {
            return Err(Error::Domain(alloc::format!("h must lie in (0,1), got {h}")));
        }
        if !(1..=3).contains(&dim) {
            return Err(Error::Unsupported(alloc::format!("fine partition in dimension {dim}")));
        }
        let radius = patch_radius(h, nu);
        if !(radius > 0.0) || radius > shell.width() {
            return Err(Error::DegeneratePartition(alloc::format!(
                "patch radius {radius} exceeds the shell width {}",
                shell.width()
            )));
        }
        let support = radius / (dim as f64).sqrt();
        let plateau = 0.5 * radius;
        let spacing = support + plateau;

        let reach = ((shell.outer + support) / spacing).ceil() as i64;
        let mut patches = Vec::new();
        let side = (2 * reach + 1) as usize;
        for flat in 0..side.pow(dim as u32) {
            let mut rest = flat;
            let mut idx = vec![0i64; dim];
            for a in (0..dim).rev() {
                idx[a] = (rest % side) as i64 - reach;
                rest /= side;
            }
            let center: Vec<f64> = idx.iter().map(|&k| k as f64 * spacing).collect();
            let (near, far) = cube_distance_range(&center, support);
            if near <= shell.outer && far >= shell.inner {
                patches.push(idx);
            }
        }
        let lookup = patches.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let mut out = Self {
            dim,
            h,
            nu,
            radius,
            support,
            plateau,
            spacing,
            shell,
            patches,
            lookup,
            gradient_constant: 0.0,
        };
        out.gradient_constant = out.profile_gradient_sup() * radius * (dim as f64).sqrt();
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `ρ = |ln h|·h^ν`.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn support_half_width(&self) -> f64 {
        self.support
    }

    pub fn plateau_half_width(&self) -> f64 {
        self.plateau
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn shell(&self) -> Shell {
        self.shell
    }

    pub fn len(&self) -> usize {
        self.patches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patches.is_empty()
    }

    /// Lattice index of patch `k`.
    pub fn lattice_index(&self, k: usize) -> &[i64] {
        &self.patches[k]
    }

    pub fn center(&self, k: usize) -> Vec<f64> {
        self.patches[k].iter().map(|&i| i as f64 * self.spacing).collect()
    }

    /// `G` with `|∇θ_{k,h}| ≤ G/ρ` everywhere.
    pub fn gradient_constant(&self) -> f64 {
        self.gradient_constant
    }

    fn profile_1d(&self, t: f64) -> f64 {
        let t = t.abs();
        if t <= self.plateau {
            1.0
        } else if t >= self.support {
            0.0
        } else {
            (FRAC_PI_2 * smooth_step((t - self.plateau) / (self.support - self.plateau))).cos()
        }
    }

    fn profile_1d_derivative(&self, t: f64) -> f64 {
        let a = t.abs();
        if a <= self.plateau || a >= self.support {
            return 0.0;
        }
        let w = self.support - self.plateau;
        let x = (a - self.plateau) / w;
        let d = -(FRAC_PI_2 * smooth_step(x)).sin() * FRAC_PI_2 * smooth_step_derivative(x) / w;
        d * t.signum()
    }

    fn profile_gradient_sup(&self) -> f64 {
        let n = 20_000;
        (0..=n)
            .map(|i| {
                let t = self.plateau + (self.support - self.plateau) * i as f64 / n as f64;
                self.profile_1d_derivative(t).abs()
            })
            .fold(0.0, f64::max)
            * 1.001
    }

    pub fn theta(&self, k: usize, q: &[f64]) -> f64 {
        let c = self.center(k);
        q.iter()
            .zip(&c)
            .map(|(x, y)| self.profile_1d(x - y))
            .product()
    }

    pub fn theta_gradient(&self, k: usize, q: &[f64]) -> Vec<f64> {
        let c = self.center(k);
        let vals: Vec<f64> = q.iter().zip(&c).map(|(x, y)| self.profile_1d(x - y)).collect();
        (0..self.dim)
            .map(|a| {
                let mut g = self.profile_1d_derivative(q[a] - c[a]);
                for (b, v) in vals.iter().enumerate() {
                    if b != a {
                        g *= v;
                    }
                }
                g
            })
            .collect()
    }

    /// Patches with `θ_k(q) ≠ 0`, as `(patch, θ_k(q))`.
    pub fn active(&self, q: &[f64]) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        let base: Vec<i64> = q.iter().map(|x| (x / self.spacing).floor() as i64).collect();
        let mut offs = vec![0i64; self.dim];
        for mask in 0..(1usize << self.dim) {
            for (a, o) in offs.iter_mut().enumerate() {
                *o = base[a] + ((mask >> a) & 1) as i64;
            }
            if let Some(&k) = self.lookup.get(&offs) {
                let v = self.theta(k, q);
                if v != 0.0 {
                    out.push((k, v));
                }
            }
        }
        out
    }

    /// Smallest and largest distance to the origin over the support of
    /// patch `k`.
    pub fn support_distance_range(&self, k: usize) -> (f64, f64) {
        cube_distance_range(&self.center(k), self.support)
    }
}

fn cube_distance_range(center: &[f64], half: f64) -> (f64, f64) {
    let mut near = 0.0;
    let mut far = 0.0;
    for &c in center {
        let lo = c - half;
        let hi = c + half;
        let n = if lo > 0.0 {
            lo
        } else if hi < 0.0 {
            -hi
        } else {
            0.0
        };
        near += n * n;
        far += lo.abs().max(hi.abs()).powi(2);
    }
    (near.sqrt(), far.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg(state: &mut u64) -> f64 {
        *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (*state >> 11) as f64 / (1u64 << 53) as f64
    }

    #[test]
    fn squares_sum_to_one_on_the_shell() {
        for dim in 1..=3 {
            let p = build_fine_partition(2f64.powi(-12), 11.0 / 32.0, dim, Shell::STANDARD).unwrap();
            let mut s = 7u64;
            let mut checked = 0;
            while checked < 2000 {
                let q: Vec<f64> = (0..dim).map(|_| 6.0 * lcg(&mut s) - 3.0).collect();
                if !Shell::STANDARD.contains(&q) {
                    continue;
                }
                checked += 1;
                let act = p.active(&q);
                let sum: f64 = act.iter().map(|(_, v)| v * v).sum();
                assert!((sum - 1.0).abs() < 1e-12, "dim {dim} q {q:?}: {sum}");
                assert!(act.len() <= 3usize.pow(dim as u32));
            }
        }
    }

    #[test]
    fn plateau_and_support_radii() {
        let p = build_fine_partition(2f64.powi(-12), 11.0 / 32.0, 2, Shell::STANDARD).unwrap();
        let rho = p.radius();
        let k = 0;
        let c = p.center(k);
        assert_eq!(p.theta(k, &c), 1.0);
        for i in 0..64 {
            let t = i as f64 * core::f64::consts::PI / 32.0;
            let inside = [c[0] + 0.499 * rho * t.cos(), c[1] + 0.499 * rho * t.sin()];
            assert_eq!(p.theta(k, &inside), 1.0);
            let outside = [c[0] + 1.001 * rho * t.cos(), c[1] + 1.001 * rho * t.sin()];
            assert_eq!(p.theta(k, &outside), 0.0);
        }
    }

    #[test]
    fn gradient_bound_and_accuracy() {
        let p = build_fine_partition(2f64.powi(-6), 11.0 / 32.0, 2, Shell::STANDARD).unwrap();
        let g = p.gradient_constant() / p.radius();
        let mut s = 3u64;
        let h = 1e-6;
        for _ in 0..500 {
            let q = [5.0 * lcg(&mut s) - 2.5, 5.0 * lcg(&mut s) - 2.5];
            for (k, _) in p.active(&q) {
                let grad = p.theta_gradient(k, &q);
                let n = (grad[0] * grad[0] + grad[1] * grad[1]).sqrt();
                assert!(n <= g, "{n} > {g}");
                let fx = (p.theta(k, &[q[0] + h, q[1]]) - p.theta(k, &[q[0] - h, q[1]])) / (2.0 * h);
                assert!((fx - grad[0]).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn rejects_degenerate_scales() {
        assert!(matches!(
            build_fine_partition(0.5, 0.0, 1, Shell { inner: 1.0, outer: 1.1 }),
            Err(Error::DegeneratePartition(_))
        ));
        assert!(build_fine_partition(1.0, 0.3, 1, Shell::STANDARD).is_err());
    }
}
