#[allow(unused_imports)]
use num_traits::Float;

/// `e^{−1/t}` for `t > 0`, zero otherwise; smooth with all derivatives
/// vanishing at 0.
fn flat(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

fn flat_derivative(t: f64) -> f64 {
    if t > 0.0 {
        flat(t) / (t * t)
    } else {
        0.0
    }
}

/// Smooth step: 0 for `t ≤ 0`, 1 for `t ≥ 1`, with `S(1 − t) = 1 − S(t)`.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = flat(t);
        a / (a + flat(1.0 - t))
    }
}

pub fn smooth_step_derivative(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        return 0.0;
    }
    let a = flat(t);
    let b = flat(1.0 - t);
    (flat_derivative(t) * b + a * flat_derivative(1.0 - t)) / ((a + b) * (a + b))
}

const INNER: f64 = 0.75;
const OUTER: f64 = 4.0 / 3.0;

/// The radial pair `(χ, φ)` of the dyadic decomposition.
///
/// `χ(r) = 1` for `r ≤ 3/4`, `χ(r) = 0` for `r ≥ 4/3`, decreasing smoothly
/// in between, and `φ(r) = χ(r/2) − χ(r)`. The sum `χ(r) + Σ_{j≥0} φ(2^{−j}r)`
/// telescopes to 1, `φ ≥ 0` is supported in `[3/4, 8/3]` and both functions
/// take values in `[0, 1]`. Profiles are evaluated in closed form.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RadialCutoffPair;

impl RadialCutoffPair {
    pub const CHI_SUPPORT: f64 = OUTER;
    pub const PHI_SUPPORT: (f64, f64) = (INNER, 2.0 * OUTER);

    pub fn chi(&self, r: f64) -> f64 {
        smooth_step((OUTER - r) / (OUTER - INNER))
    }

    pub fn chi_derivative(&self, r: f64) -> f64 {
        -smooth_step_derivative((OUTER - r) / (OUTER - INNER)) / (OUTER - INNER)
    }

    pub fn phi(&self, r: f64) -> f64 {
        self.chi(0.5 * r) - self.chi(r)
    }

    pub fn phi_derivative(&self, r: f64) -> f64 {
        0.5 * self.chi_derivative(0.5 * r) - self.chi_derivative(r)
    }
}

pub fn build_radial_pair() -> RadialCutoffPair {
    RadialCutoffPair
}
