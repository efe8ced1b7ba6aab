//! Finite-dimensional Kramers-Fokker-Planck operators on a position grid
//! tensored with a Hermite velocity basis.
//!
//! With a periodic Fourier derivative in `q` and the exact ladder matrices in
//! `p`, the transport part `X_V` is an exactly antisymmetric matrix and
//! `O_p` is diagonal, so `Re⟨u, K_V u⟩ = ⟨u, O_p u⟩` holds to rounding.

mod assemble;
mod discretization;
mod sparse;
mod svd;
mod weights;

pub use assemble::{
    assemble_kfp, assemble_kj, assemble_kv, assemble_op, assemble_xv, multiply_by_position,
    quadratic_form, rescaled_coefficients, spectrum, velocity_multiplier, KfpCoefficients,
    OperatorKind, OperatorMatrix,
};
pub use discretization::{Boundary, Discretization};
pub use sparse::Csr;
pub use svd::{smallest_singular_value, smallest_singular_value_with, SingularValue, SolverPath, DENSE_LIMIT};
pub use weights::{
    assemble_weight, frequency_multiplier, oscillator_multiplier, position_multiplier, Multiplier,
    WeightKind, WeightedMultiplier,
};
