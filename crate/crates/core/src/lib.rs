//! Numerics for the polar part of the separated central-field Schrödinger
//! equation.
//!
//! The polar equation
//!
//! ```text
//! (1/sin θ) d/dθ (sin θ dΘ/dθ) − m²/sin²θ Θ = −l(l+1) Θ
//! ```
//!
//! becomes, after the substitution `y = sin^½θ · Θ`, the one-dimensional
//! Schrödinger-like problem
//!
//! ```text
//! −½ y'' + (m² − ¼)/(2 sin²θ) y = W y,   y(0) = y(π) = 0,
//! ```
//!
//! whose eigenvalues are `W = ½(l + ½)² = ½(n + |m| + ½)²`.
//!
//! Modules:
//!
//! - [`liouville`]: the weight-generic Liouville transformation.
//! - [`tridiag`]: Sturm-sequence bisection and inverse iteration for
//!   symmetric tridiagonal matrices.
//! - [`polar`]: the discretized operator `−½ d²/dθ² + λ/sin²θ`, its spectrum,
//!   and Richardson extrapolation.
//! - [`legendre`]: associated Legendre functions, Gauss–Legendre rules and
//!   normalized polar probability densities.
//! - [`hft`]: three-way Hellmann–Feynman check of `dW/dλ = ⟨sin⁻²θ⟩`.
//!
//! The crate is `no_std` (it needs `alloc`); transcendental functions come
//! from `libm`, so results are bit-reproducible across platforms.

#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
pub mod hft;
pub mod legendre;
pub mod liouville;
pub mod polar;
pub mod tridiag;

pub use error::{Error, Result};
pub use hft::{hft_verify, HftReport};
pub use legendre::{GaussRule, LegendreIndex, PolarDensity};
pub use liouville::{DerivativeMode, EffectivePotential, SturmLiouvilleProblem, WeightSpec};
pub use polar::{GridSpec, QuantumNumbers, Scheme, SpectrumOptions, SpectrumResult};
pub use tridiag::{EigenPair, SymTridiag};
