//! Geometric invariants, effective spectra and spectral flow of magnetic links.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod config;
pub mod curves;
pub mod effective_spectrum;
pub mod error;
pub mod flux_torus;
pub mod hopf;
pub mod invariants;
pub mod io;
pub mod quadrature;
pub mod spectral;
pub mod spectral_flow;
pub mod vec3;

pub use error::{LinkError, Result};
