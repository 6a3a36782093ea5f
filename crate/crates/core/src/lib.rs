//! Numerical toolkit for the fixed-radius spherical mean transform
//! `f ↦ f ∗ δ_R` on uniform grids in two and three dimensions.
//!
//! The crate is organised by subsystem:
//!
//! * [`specfun`]: Bessel functions of the first kind, normalized Bessel
//!   functions `j_p`, their zeros and the complex lower-bound geometry.
//! * [`field`]: sampled grid fields, FFTs, sphere quadrature, radialization
//!   and spherical-harmonic projection.
//! * [`transform`]: spherical means by quadrature and by the Bessel Fourier
//!   multiplier, the volume representation and zero-ring checks.
//! * [`abel`]: the Abel-type pair linking ridge profiles with radializations,
//!   and the local support-propagation pipeline.
//! * [`geometry`]: voxel masks, ball morphology and the R-convexity predicate.
//! * [`inversion`]: regularized deconvolution, the Zalcman family and the
//!   support-theorem harnesses.
//! * [`verify`] and [`report`]: reproducible verification suites emitting
//!   stable JSON reports.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod abel;
pub mod error;
pub mod field;
pub mod geometry;
pub mod inversion;
pub mod phantom;
pub mod report;
pub mod specfun;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
