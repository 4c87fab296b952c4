//! Pseudo-Riemannian surfaces, their unit tangent bundles with the Sasaki
//! contact metric structure, and the classification of lifted curves as
//! Legendre, slant, Ñ-Legendre or Ñ-slant.

pub mod bundle;
pub mod curve;
pub mod error;
pub mod expr;
pub mod frenet;
pub mod lorentz;
pub mod numeric;
pub mod report;
pub mod scene;
pub mod slant;
pub mod surface;

pub use error::{GeomError, Result};
