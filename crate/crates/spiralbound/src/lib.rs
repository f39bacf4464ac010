//! Spectral geometry and eigenvalue-moment bounds for shrinking spiral
//! domains.
//!
//! The crate has four layers:
//!
//! * [`geometry`] — spiral profiles r(θ), arc length, curvature, Fermi
//!   (parallel) coordinates, the inward normal width d(s), and the cached
//!   geometry used everywhere else;
//! * [`bound`] — the Lieb-Thirring-type moment bound for the Dirichlet
//!   Laplacian on such domains, its asymptotic and small-power variants, the
//!   sharpness comparison, and the multi-arm extension;
//! * [`horn`] — Weyl-type eigenvalue counting for horn-shaped regions;
//! * [`eig`] — an independent sparse finite-difference eigensolver used to
//!   validate the bounds numerically.
//!
//! [`report`] orchestrates full runs from a single config file and is what
//! the `spiralbound` CLI drives.

// NaN-rejecting guards of the form `!(x > 0.0)` and full-precision
// tabulated quadrature constants are used deliberately throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod numerics;

pub mod geometry;

pub mod bound;
pub mod horn;

pub mod eig;

pub mod report;

pub use error::{Error, Result};
