//! Spectra of quantum rings (annular Dirichlet drums) of arbitrary shape.
//!
//! A ring is described as the image of the rectangle
//! `[-lx, lx] x [-pi, pi]` under a conformal map that is a polynomial in
//! `exp(z - lx)`. The Helmholtz problem on the ring becomes
//! `-(1/Sigma) Laplacian psi = E psi` on the rectangle with Dirichlet
//! conditions in `x` and periodic conditions in `y`.
//!
//! Four independent engines compute the spectrum:
//!
//! * [`exact`]: circular annulus energies from cross-product Bessel zeros.
//! * [`ccm`]: sinc collocation on the rectangle, valid for any map.
//! * [`analytic`]: the resummed formula `E = eps / <Sigma>` and Weyl's law.
//! * [`variational`]: inverse-operator ground-state estimates.
//!
//! [`berry`] recovers area, perimeter and the constant term of the counting
//! function from a truncated spectrum.

// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod berry;
pub mod ccm;
pub mod conformal;
pub mod error;
pub mod exact;
pub mod linalg;
pub mod lsf;
pub mod special;
pub mod spectrum;
pub mod variational;

pub use error::{Error, Result};
pub use spectrum::{Engine, LabeledLevel, Spectrum};

/// Version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
