//! Resonance widths and shifts of a bound state of a 1D Schrodinger operator
//! under a time-periodic perturbation.
//!
//! The crate computes the width of the metastable quasi-energy ladder by two
//! independent routes — limiting absorption (boundary values of resolvent
//! matrix elements) and a golden-rule sum over open-channel scattering
//! states — and validates both against the exponential decay of the
//! period-averaged survival amplitude obtained from direct Crank-Nicolson
//! propagation.
//!
//! Entry points:
//! - [`grid`]: uniform-grid discretization, tridiagonal solves, eigensolves
//! - [`spectral`]: bound states, scattering states, resolvent boundary values
//! - [`floquet`]: temporal Fourier modes, the function `F`, the width by both
//!   routes, the resonance ladder, genericity sampling
//! - [`propagation`]: driven time stepping, period-averaged survival, decay fits
//! - [`config`] / [`report`]: experiment configuration and result persistence
//!
//! Run `cargo run --release --example golden_rule_width` for the central
//! cross-check, or see the `examples/` directory for one runnable example per
//! capability.

pub mod config;
pub mod floquet;
pub mod grid;
pub mod propagation;
pub mod report;
pub mod spectral;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// A shifted solve hit a numerically singular pivot; `z` is the shift.
    #[error("shift {re}+{im}i is numerically on the spectrum")]
    NearSpectrum { re: f64, im: f64 },

    #[error("problem size {n} exceeds the dense-solve cap {cap}")]
    SizeCap { n: usize, cap: usize },

    /// Wronskian of the matching solutions vanished.
    #[error("degenerate energy: scattering match failed at k = {k}")]
    DegenerateEnergy { k: f64 },

    #[error("sampling: {0}")]
    Sampling(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
