//! Pseudospectral laboratory for the fifth-order KdV-BBM equation on the
//! 2π-periodic torus.
//!
//! The equation is integrated in its bounded-multiplier normal form
//!
//! ```text
//! i η_t = φ(∂x) η + τ(∂x) η² − (1/8) ψ(∂x) η³ − (7/48) ψ(∂x) (η_x)²
//! ```
//!
//! where φ, ψ, τ are Fourier multipliers built from the model coefficients
//! (see [`symbols`]). On top of the solver the crate provides numerical
//! probes for the analytical structure of the model: multiplier-estimate
//! ratios and their sharpness counterexample ([`estimates`]), the explicit
//! second Picard iterate with its resonance bookkeeping, and the
//! ill-posedness / norm-inflation experiment families ([`pathology`]).

// `!(x > 0.0)`-style guards are deliberate: they reject NaN along with
// the out-of-range value.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod estimates;
pub mod pathology;
pub mod report;
pub mod rng;
pub mod spectral;
pub mod symbols;

pub use error::{Error, Result};
pub use spectral::{SobolevIndex, SpectralField};
pub use symbols::{Frame, ModelParams, Preset, Symbol, SymbolTable};
