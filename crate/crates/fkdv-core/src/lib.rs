//! A pseudo-spectral laboratory for the fractional Korteweg–de Vries equation
//!
//! ```text
//!     u_t + u u_x - |D|^alpha u_x = 0,        -1 < alpha < 1,  alpha != 0,
//! ```
//!
//! on a periodic domain. The crate implements, and numerically certifies,
//! the machinery behind the normal-form / modified-energy analysis of this
//! equation:
//!
//! - [`spectral`] — periodic real fields stored as Hermitian-symmetric
//!   Fourier coefficients, multiplier calculus, Sobolev norms, and
//!   alias-exact quadratic products;
//! - [`symbols`] — scalar evaluation of the bilinear symbols `m` and `n`,
//!   their growth envelopes and polar factorization, and the commutator
//!   symbols used in the quartic estimates;
//! - [`regions`] — the frequency-region decomposition of `(xi, eta, sigma)`
//!   space and the change of variables `eta -> xi - eta + sigma`;
//! - [`pseudo_product`] — the bilinear operators `P` (symbol `m`) and `Q`
//!   (symbol `n`) on discrete fields, the normal form `w = u + P(u, u)`,
//!   and exact residual verification of the transformed equation;
//! - [`energy`] — modified energies `E^(k)`, the quartic expression for
//!   their time derivative, and a brute-force triple-frequency integrator
//!   for region-restricted quartic integrals;
//! - [`evolution`] — integrating-factor RK4 time stepping with conservation
//!   monitoring and principled stopping;
//! - [`experiments`] — configuration, the verification suite, scaling and
//!   lifespan sweeps, and report emission.

pub mod energy;
pub mod error;
pub mod evolution;
pub mod experiments;
pub mod pseudo_product;
pub mod regions;
pub mod spectral;
pub mod symbols;

pub use error::{FkdvError, Result};
pub use spectral::{Multiplier, RealField, SpectralGrid, ZeroModePolicy};
pub use symbols::{SymbolParams, SymbolValue};
