//! Small self-contained numerical kernels used across the crate:
//! adaptive quadrature, monotone interpolation, bracketed root finding,
//! Richardson-extrapolated finite differences, log-gamma, and a dense
//! symmetric eigensolver for the small projected problems inside the
//! sparse solver.

pub mod derivative;
pub mod interp;
pub mod quadrature;
pub mod rootfind;
pub mod special;
pub mod symeig;
