//! Limiting entropy and free-energy surfaces for directed graphs whose edge
//! density `e` and outward p-star density `s` are constrained or tilted.
//!
//! The crate is organised around the scalar mean-field function
//!
//! ```text
//! ℓ(x) = β₁x + β₂x^p − x log x − (1 − x) log(1 − x),   0 < x < 1
//! ```
//!
//! whose maximizers determine every surface computed here:
//!
//! | module | computes |
//! |--------|----------|
//! | [`scalar`] | `I(x)`, derivatives of `ℓ`, all stationary points of `ℓ` |
//! | [`curve`] | the transition curve `β₂ = q(β₁)` with its critical endpoint and sensitivities |
//! | [`entropy`] | `ψ(e, s)`, its gradient, the rate function `J = −ψ`, and the bipodal optimizer |
//! | [`free_energy`] | `ψ(e, β₂)`, `ψ(β₁, s)`, their U-shaped bipodal regions, and `ψ(β₁, β₂)` |
//! | [`oracle`] | exact finite-`n` joint law of `(e(X), s(X))` by a row-sum dynamic program |
//! | [`grid`] | rectangular surface grids and their CSV/JSON encoding |
//! | [`cli`] | the `pstar` command-line front end |
//!
//! Most entry points hang off [`Model`], which fixes the star order `p` and
//! the numerical [`Settings`]:
//!
//! ```
//! use digraph_pstar::Model;
//!
//! let model = Model::new(2).unwrap();
//! let psi = model.entropy(0.5, 0.3).unwrap();
//! assert!((psi + 0.103_632_694_824_897).abs() < 1e-10);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod curve;
pub mod emit;
pub mod entropy;
mod error;
pub mod free_energy;
pub mod grid;
pub mod oracle;
mod roots;
pub mod scalar;
mod settings;

pub use curve::{CriticalPoint, CurvePoint};
pub use entropy::{BipodalProfile, RegionES, SolveMethod};
pub use error::{Error, Result};
pub use free_energy::{ErgmSolution, RegionU};
pub use oracle::{ConditionalRowLaw, FiniteLaw};
pub use scalar::{ModelParams, StationaryKind, StationaryPoint};
pub use settings::Settings;

/// Star order `p` together with the solver settings used by every
/// surface computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Model {
    p: u32,
    settings: Settings,
}

impl Model {
    /// Model with default [`Settings`]. Fails when `p < 2`.
    pub fn new(p: u32) -> Result<Self> {
        Self::with_settings(p, Settings::default())
    }

    pub fn with_settings(p: u32, settings: Settings) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidParams(format!("star order p must be >= 2, got {p}")));
        }
        settings.validate()?;
        Ok(Model { p, settings })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    /// `ModelParams` for this star order at `(β₁, β₂)`.
    pub fn params(&self, beta1: f64, beta2: f64) -> Result<ModelParams> {
        ModelParams::new(self.p, beta1, beta2)
    }
}
