//! Reconstruction of planar simply connected domains from the interior normal
//! derivative of their Green's function, and numerical verification of the
//! associated stability estimates.
//!
//! A domain `Ω` with pole `ζ_o` is represented by its Riemann map
//! `f: D → Ω` normalized by `f(0) = ζ_o`, `f(1) = ζ_b`. The forward operator
//! sends `f` to `φ(s) = 1 / (2π |f'(e^{iθ})|)` as a function of arclength; the
//! inverse operator rebuilds `f` from `φ` through a Schwarz integral.
//!
//! Module map:
//! - [`norms`]: sup norms and Hölder (semi)norms of sampled functions.
//! - [`boundary`]: boundary data `φ`, the cumulative map `Φ` and its inverse.
//! - [`conformal`]: truncated power-series maps and the forward operator.
//! - [`reconstruct`]: the inverse operator.
//! - [`geometry`]: radii, Hausdorff distance, rotation alignment.
//! - [`stability`]: explicit constants and inequality checks.
//! - [`sweep`] / [`cli`]: parameter sweeps and the command-line front end.

pub mod boundary;
pub mod cli;
pub mod conformal;
pub mod error;
pub mod families;
pub mod geometry;
pub mod io;
pub mod norms;
pub mod reconstruct;
pub mod solve;
pub mod spectral;
pub mod stability;
pub mod sweep;

pub use error::{Error, Result};
pub use num_complex::Complex64;
