//! Planar potential theory and certified holomorphic extension of power
//! series `f(z₁, z₂) = Σ Pₙ(z₂) z₁ⁿ` whose coefficients are polynomials of
//! linearly bounded degree.
//!
//! The modules build on each other:
//!
//! - [`set_model`]: compact sets in ℂ, predicates in ℂᵐ, discretization.
//! - [`capacity`]: Fekete points, logarithmic capacity, Green functions.
//! - [`bernstein`]: polynomial sup-norms and the Bernstein growth bound.
//! - [`gamma`]: Γ-projections and Γ-capacity of sets in ℂᵐ.
//! - [`extension`]: the certification pipeline producing an
//!   [`extension::ExtensionCertificate`] and a tail-bounded evaluator.
//! - [`commands`]: file-based command layer used by the `holext` binary.

pub mod bernstein;
pub mod capacity;
pub mod commands;
pub mod error;
pub mod extension;
pub mod gamma;
pub mod json;
pub mod set_model;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use set_model::{CompactSet, ComplexPoint};
