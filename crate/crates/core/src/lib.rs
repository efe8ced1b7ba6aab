//! Numerical toolkit for Kramers-Fokker-Planck operators
//!
//! ```text
//! K_V = p·∂_q − ∇V(q)·∂_p + ½(−Δ_p + p²)
//! ```
//!
//! with homogeneous polynomial potentials `V`. The crate is `no_std` and only
//! needs an allocator. It covers:
//!
//! - exact polynomial calculus for the potential ([`poly`], [`potential`]),
//! - the critical-set hypothesis on the unit sphere and the constants derived
//!   from it ([`assumption`]),
//! - dyadic and fine partitions of unity and the localization identities
//!   ([`partition`]),
//! - a Fourier × Hermite discretization of the operator and its weighted
//!   multipliers ([`operator`]),
//! - numerical verification of the subelliptic lower bounds ([`estimates`]).
//!
//! File formats, reports and the command-line front end live in the `kfp`
//! companion crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod assumption;
pub mod error;
pub mod estimates;
pub mod hermite;
pub mod linalg;
pub mod operator;
pub mod partition;
pub mod poly;
pub mod potential;
pub mod sphere;

pub use error::{Error, Result};
pub use poly::{Monomial, Polynomial};
pub use potential::{HessianNorm, HomogeneousPotential, TraceSplit};
