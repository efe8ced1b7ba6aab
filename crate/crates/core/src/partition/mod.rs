//! Partitions of unity in position space.
//!
//! * the dyadic decomposition `Σ_{j≥−1} χ_j² = 1` built from a radial pair
//!   `(χ, φ)`,
//! * the fine partition `Σ_k θ_{k,h}² = 1` at scale `|ln h|·h^ν`,
//! * the exponent selector for `ν` and the semiclassical parameters `h`, `H`,
//! * numerical checks of the localization identity and of the dyadic
//!   rescaling of the operator.

mod dyadic;
mod fine;
mod ims;
mod profile;
mod scales;
mod scaling;

pub use dyadic::{normalize_dyadic, DyadicPartition};
pub use fine::{build_fine_partition, FinePartition, Shell};
pub use ims::{bump, bump_state, dyadic_cutoffs, fine_cutoffs, ims_residual, GridCutoff, ImsReport};
pub use profile::{build_radial_pair, smooth_step, smooth_step_derivative, RadialCutoffPair};
pub use scales::{
    error_domination_ratios, nu_bounds, patch_radius, select_nu, semiclassical, ErrorRatios, Semiclassical,
};
pub use scaling::{scale_state, scaled_norm_check, ScalingReport};
