//! Dirichlet spectrum of the unit disk and its lattice-point model.
//!
//! The eigenvalues of the Dirichlet Laplacian on the unit disk are the
//! squares of the positive zeros `x_k(n)` of the Bessel functions `J_n`.
//! This crate enumerates those zeros with certified brackets, counts them,
//! counts the shifted lattice `{(n, k - 1/4)}` inside the dilated cusp
//! domain `mu D`, and measures how both counts deviate from the two-term
//! law `mu^2/4 - mu/2`.

// `!(x > 0.0)` style guards are kept on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod bessel_zeros;
pub mod error;
pub mod geometry;
pub mod lattice_count;
pub mod quad;
mod roots;
pub mod special_fn;
pub mod spectral_count;
pub mod verify;

pub use asymptotics::{FitResult, OscIntegralSpec, OscKind, Summation};
pub use bessel_zeros::{BesselZero, OlverPhase};
pub use error::{Error, Result};
pub use geometry::{CuspDomain, LatticePoint, Point};
pub use lattice_count::{MollifyConfig, SandwichResult, Side};
pub use special_fn::{AiryZero, EvalAccuracy};
pub use spectral_count::{CountSample, Spectrum};
