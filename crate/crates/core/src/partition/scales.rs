#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Open interval `(max(1/6, 1/8 + 3/(8(r−1))), 1/4 + 1/(4(r−1)))` of
/// admissible fine-partition exponents.
pub fn nu_bounds(r: f64) -> (f64, f64) {
    let lo = (1.0 / 6.0_f64).max(1.0 / 8.0 + 3.0 / (8.0 * (r - 1.0)));
    let hi = 0.25 + 1.0 / (4.0 * (r - 1.0));
    (lo, hi)
}

/// `ν = 3/16 + 5/(16(r−1))` for `2 < r < 10`, and `5/24` for `r ≥ 10`.
pub fn select_nu(r: f64) -> Result<f64> {
    if !(r > 2.0) || !r.is_finite() {
        return Err(Error::Domain(alloc::format!("ν selection needs r > 2, got {r}")));
    }
    let nu = if r < 10.0 {
        3.0 / 16.0 + 5.0 / (16.0 * (r - 1.0))
    } else {
        5.0 / 24.0
    };
    let (lo, hi) = nu_bounds(r);
    assert!(lo < nu && nu < hi, "ν = {nu} outside ({lo}, {hi}) for r = {r}");
    Ok(nu)
}

/// Semiclassical parameters of dyadic level `j` for degree `r`:
/// `h = 2^{−2(r−1)j}` and `H = h^{−1/2 + 1/(2(r−1))} = 2^{j(r−2)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Semiclassical {
    pub h: f64,
    pub big_h: f64,
}

pub fn semiclassical(j: i32, r: f64) -> Semiclassical {
    let h = 2f64.powf(-2.0 * (r - 1.0) * j as f64);
    let big_h = h.powf(-0.5 + 1.0 / (2.0 * (r - 1.0)));
    Semiclassical { h, big_h }
}

/// Patch radius `|ln h|·h^ν` of the fine partition.
pub fn patch_radius(h: f64, nu: f64) -> f64 {
    h.ln().abs() * h.powf(nu)
}

/// The two error terms of the fine localization, each divided by the gain
/// `H/log(H)²`:
/// `((|ln h|² h^{2ν})²/h) / (H/log²H)` (Taylor error in the near-critical
/// patches) and `(|ln h|^{−2} h^{1/(r−1)−2ν}) / (H/log²H)` (commutator of
/// the fine partition).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRatios {
    pub taylor: f64,
    pub commutator: f64,
}

pub fn error_domination_ratios(r: f64, nu: f64, j: i32) -> Result<ErrorRatios> {
    if j < 1 {
        return Err(Error::Domain(alloc::format!("error ratios need j ≥ 1, got {j}")));
    }
    let s = semiclassical(j, r);
    let (h, big_h) = (s.h, s.big_h);
    let lnh = h.ln().abs();
    let gain = big_h / big_h.ln().powi(2);
    let taylor = (lnh * lnh * h.powf(2.0 * nu)).powi(2) / h / gain;
    let commutator = h.powf(1.0 / (r - 1.0) - 2.0 * nu) / (lnh * lnh) / gain;
    Ok(ErrorRatios { taylor, commutator })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nu_examples() {
        assert_eq!(select_nu(3.0).unwrap(), 11.0 / 32.0);
        let (lo, hi) = nu_bounds(3.0);
        assert_eq!((lo, hi), (0.3125, 0.375));
        assert_eq!(select_nu(10.0).unwrap(), 5.0 / 24.0);
        assert!(select_nu(2.0).is_err());
        assert!((nu_bounds(1e9).1 - 0.25).abs() < 1e-9);
    }

    #[test]
    fn big_h_is_a_power_of_two() {
        for r in [3.0, 4.0, 6.0] {
            for j in 0..8 {
                let s = semiclassical(j, r);
                let expect = 2f64.powi(j * (r as i32 - 2));
                assert!((s.big_h - expect).abs() <= 1e-12 * expect);
            }
        }
    }

    #[test]
    fn patch_radius_examples() {
        let nu = 11.0 / 32.0;
        let rho = patch_radius(2f64.powi(-6), nu);
        assert!((rho - 6.0 * 2f64.ln() * 2f64.powf(-33.0 / 16.0)).abs() < 1e-12);
        assert!((rho - 0.99).abs() < 0.01);
        let rho = patch_radius(2f64.powi(-12), nu);
        assert!((rho - 0.477).abs() < 0.01);
    }
}
