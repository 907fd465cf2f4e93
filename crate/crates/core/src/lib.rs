//! Exact evaluation of sinc-product integrals and their Poisson-summation
//! counterparts.
//!
//! A product `f(t) = prod_k sinc(beta_k * pi * t)` has a compactly supported,
//! piecewise-polynomial Fourier transform. Working in the normalized frequency
//! `x = omega / pi` keeps every breakpoint and coefficient rational, so
//! integrals, cosine-weighted integrals and their deficits come out as exact
//! fractions. A floating-point oracle in [`oracle`] checks the same quantities
//! by quadrature and truncated summation.

pub mod engine;
pub mod error;
pub mod exact;
pub mod oracle;
pub mod spline;
pub mod verify;

pub use error::{Error, Result};
