//! Deterministic point sets on the unit sphere in dimensions 1 to 3 and a
//! derivative-free local minimizer constrained to the sphere.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Largest point set we are willing to generate for one sweep.
const MAX_POINTS: usize = 4_000_000;

/// Samples the unit sphere of `R^dim` with roughly `resolution` spacing.
///
/// `dim = 1` gives `{-1, +1}`, `dim = 2` an even number of equally spaced
/// angles (so the set is closed under `q ↦ −q`), `dim = 3` a Fibonacci
/// lattice with `≈ 4π/resolution²` points.
pub fn sample_sphere(dim: usize, resolution: f64) -> Result<Vec<Vec<f64>>> {
    if !(resolution > 0.0) || !resolution.is_finite() {
        return Err(Error::Domain("sphere resolution must be positive".into()));
    }
    match dim {
        1 => Ok(vec![vec![-1.0], vec![1.0]]),
        2 => {
            let mut n = (2.0 * PI / resolution).ceil() as usize;
            n = n.max(8);
            n += n % 2;
            if n > MAX_POINTS {
                return Err(Error::Domain("sphere resolution too fine".into()));
            }
            Ok((0..n)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / n as f64;
                    vec![t.cos(), t.sin()]
                })
                .collect())
        }
        3 => {
            let n = ((4.0 * PI / (resolution * resolution)).ceil() as usize).max(32);
            if n > MAX_POINTS {
                return Err(Error::Domain("sphere resolution too fine".into()));
            }
            let golden = PI * (3.0 - 5.0.sqrt());
            Ok((0..n)
                .map(|k| {
                    let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
                    let rho = (1.0 - z * z).max(0.0).sqrt();
                    let t = golden * k as f64;
                    vec![rho * t.cos(), rho * t.sin(), z]
                })
                .collect())
        }
        _ => Err(Error::Unsupported(alloc::format!(
            "sphere sampling in dimension {dim}"
        ))),
    }
}

pub fn norm(q: &[f64]) -> f64 {
    q.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn normalize(q: &[f64]) -> Vec<f64> {
    let n = norm(q);
    q.iter().map(|x| x / n).collect()
}

/// Orthonormal basis of the tangent space `q^⊥` (`dim − 1` vectors).
pub fn tangent_basis(q: &[f64]) -> Vec<Vec<f64>> {
    let d = q.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d.saturating_sub(1));
    let mut frame = vec![normalize(q)];
    for axis in 0..d {
        if basis.len() + 1 == d {
            break;
        }
        let mut v = vec![0.0; d];
        v[axis] = 1.0;
        for f in &frame {
            let c: f64 = v.iter().zip(f).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(f).for_each(|(a, b)| *a -= c * b);
        }
        let n = norm(&v);
        if n > 1e-8 {
            v.iter_mut().for_each(|a| *a /= n);
            frame.push(v.clone());
            basis.push(v);
        }
    }
    basis
}

/// Moves from `q` along the tangent vector `t` and projects back.
pub fn retract(q: &[f64], t: &[f64]) -> Vec<f64> {
    let moved: Vec<f64> = q.iter().zip(t).map(|(a, b)| a + b).collect();
    normalize(&moved)
}

/// Compass search for a local minimum of `f` on the sphere starting at
/// `start`, with initial step `step` (radians), stopping once the step falls
/// below `min_step`.
pub fn minimize_on_sphere<F>(f: F, start: &[f64], step: f64, min_step: f64) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let mut q = normalize(start);
    let mut best = f(&q);
    if q.len() == 1 {
        return (q, best);
    }
    let mut s = step;
    while s > min_step {
        let mut improved = false;
        for t in tangent_basis(&q) {
            for sign in [1.0, -1.0] {
                let dir: Vec<f64> = t.iter().map(|x| sign * s * x).collect();
                let cand = retract(&q, &dir);
                let val = f(&cand);
                if val < best {
                    best = val;
                    q = cand;
                    improved = true;
                    break;
                }
            }
            if improved {
                break;
            }
        }
        if !improved {
            s *= 0.5;
        }
    }
    (q, best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_are_unit_and_antipodal_in_2d() {
        let pts = sample_sphere(2, 0.01).unwrap();
        assert_eq!(pts.len() % 2, 0);
        let half = pts.len() / 2;
        for (k, p) in pts.iter().enumerate() {
            assert!((norm(p) - 1.0).abs() < 1e-14);
            let anti = &pts[(k + half) % pts.len()];
            assert!(distance(&[-p[0], -p[1]], anti) < 1e-12);
        }
    }

    #[test]
    fn fibonacci_covers_the_sphere() {
        let pts = sample_sphere(3, 0.1).unwrap();
        // every axis direction has a sample within ~resolution
        for axis in 0..3 {
            for sign in [-1.0, 1.0] {
                let mut e = [0.0; 3];
                e[axis] = sign;
                let best = pts.iter().map(|p| distance(p, &e)).fold(f64::INFINITY, f64::min);
                assert!(best < 0.1, "axis {axis} sign {sign}: {best}");
            }
        }
    }

    #[test]
    fn tangent_basis_is_orthonormal() {
        let q = normalize(&[0.3, -0.4, 0.8]);
        let b = tangent_basis(&q);
        assert_eq!(b.len(), 2);
        let dot = |a: &[f64], c: &[f64]| a.iter().zip(c).map(|(x, y)| x * y).sum::<f64>();
        assert!(dot(&b[0], &q).abs() < 1e-14);
        assert!(dot(&b[1], &q).abs() < 1e-14);
        assert!(dot(&b[0], &b[1]).abs() < 1e-14);
    }

    #[test]
    fn compass_search_finds_pole() {
        let (q, val) = minimize_on_sphere(|q| -q[1], &[1.0, 0.2], 0.1, 1e-10);
        assert!((val + 1.0).abs() < 1e-12);
        assert!((q[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_high_dimension() {
        assert!(matches!(sample_sphere(4, 0.1), Err(Error::Unsupported(_))));
    }
}
