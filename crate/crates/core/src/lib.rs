//! Traveling edge states of the two-component massive Dirac equation
//!
//! ```text
//! i∂t β + [[i∂₂, m − ∂₁], [m + ∂₁, −i∂₂]] β = 0
//! ```
//!
//! with an edge-admissible mass `m(f(x))` that changes sign across a curve.
//! The crate provides the closed-form edge states (exact for straight
//! edges, asymptotic for circles and slowly curved edges), a unitary
//! split-step propagator, a 1D spectral solver for the transverse operator,
//! and the diagnostics used to measure how the asymptotic states degrade
//! with curvature.

pub mod analysis;
pub mod ansatz;
pub mod cli;
pub mod config;
pub mod error;
pub mod fields;
pub mod mass;
pub mod propagator;
pub mod snapshot;
pub mod spectrum;

pub use error::{Error, Result};
