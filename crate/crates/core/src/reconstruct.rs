//! The inverse operator: rebuild `f` from boundary data `φ`.
//!
//! With `ψ = φ ∘ Φ⁻¹` on the circle and `g = log(1/(2πψ))`, the derivative of
//! the map is
//!
//! ```text
//! f'(z) = e^{iγ} exp{ (1/2π) ∫ (e^{it}+z)/(e^{it}−z) g(t) dt }
//!       = e^{iγ} exp{ c_0 + 2 Σ_{k≥1} c_k z^k },
//! ```
//!
//! `c_k` being the Fourier coefficients of `g` (the Schwarz kernel is diagonal
//! in the Fourier basis). `γ` is fixed by `∫₀¹ f'(t) dt = ζ_b − ζ_o`.

use crate::boundary::{self, BoundaryFunction, CumulativeOptions};
use crate::conformal::ConformalMap;
use crate::error::{Error, Result};
use crate::geometry::{self, AlignmentMode};
use crate::spectral::FourierSeries;
use num_complex::Complex64;
use std::f64::consts::PI;

const TWO_PI: f64 = 2.0 * PI;
/// Default tolerance on the normalization residual, relative to `|ζ_b − ζ_o|`.
pub const NORMALIZATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
pub struct ReconstructOptions {
    pub normalization_tol: f64,
    pub renormalize: bool,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        ReconstructOptions { normalization_tol: NORMALIZATION_TOL, renormalize: false }
    }
}

#[derive(Debug, Clone)]
pub struct ReconstructionResult {
    pub map: ConformalMap,
    pub gamma: f64,
    /// `∫φ − 1`.
    pub compatibility_residual: f64,
    /// `|∫₀¹ F| − |ζ_b − ζ_o|` for the unrotated series `F`.
    pub normalization_residual: f64,
    /// `Σ_{|k| > n/4} |c_k|²` of the log-modulus spectrum.
    pub tail_energy: f64,
    /// The normalization residual exceeded its tolerance: no map in the class
    /// has this datum together with the prescribed `|ζ_b − ζ_o|`.
    pub inconsistent: bool,
}

/// Exponential of a power series truncated at `degree`:
/// `b_0 = e^{g_0}`, `k b_k = Σ_{j=1}^{k} j g_j b_{k−j}`.
pub fn exp_series(g: &[Complex64], degree: usize) -> Vec<Complex64> {
    let mut b = vec![Complex64::new(0.0, 0.0); degree + 1];
    b[0] = g.first().copied().unwrap_or_default().exp();
    for k in 1..=degree {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=k.min(g.len().saturating_sub(1)) {
            acc += g[j] * (j as f64) * b[k - j];
        }
        b[k] = acc / k as f64;
    }
    b
}

/// Term-by-term antiderivative with constant `ζ_o`: `a_0 = ζ_o`,
/// `a_k = f'_{k−1} / k`.
pub fn integrate_series(fprime: &[Complex64], zeta_o: Complex64) -> Result<ConformalMap> {
    let mut coeffs = Vec::with_capacity(fprime.len() + 1);
    coeffs.push(zeta_o);
    coeffs.extend(fprime.iter().enumerate().map(|(k, c)| c / (k + 1) as f64));
    ConformalMap::new(coeffs)
}

pub fn reconstruct_fprime(
    phi: &BoundaryFunction,
    zeta_o: Complex64,
    zeta_b: Complex64,
    n: usize,
) -> Result<ReconstructionResult> {
    reconstruct_fprime_with(phi, zeta_o, zeta_b, n, ReconstructOptions::default())
}

pub fn reconstruct_fprime_with(
    phi: &BoundaryFunction,
    zeta_o: Complex64,
    zeta_b: Complex64,
    n: usize,
    opts: ReconstructOptions,
) -> Result<ReconstructionResult> {
    let chord = zeta_b - zeta_o;
    if !(chord.norm() > 0.0) {
        return Err(Error::invalid("zeta_b must differ from zeta_o"));
    }
    if n < 4 || n % 2 != 0 {
        return Err(Error::invalid(format!("circle grid must be even and >= 4, got {n}")));
    }
    let cm = boundary::build_cumulative_with(phi, CumulativeOptions { renormalize: opts.renormalize })?;
    let psi = boundary::pushforward(phi, &cm, n)?;

    let g: Vec<f64> = psi.values().iter().map(|&v| -(TWO_PI * v).ln()).collect();
    let spectrum = FourierSeries::from_samples(&g, TWO_PI);
    let c = spectrum.coefficients();

    // exponent degree n/2 − 1 keeps deg f = n/2, so f is alias-free on n nodes
    let degree = n / 2 - 1;
    let mut exponent = Vec::with_capacity(degree + 1);
    exponent.push(Complex64::new(c[0].re, 0.0));
    exponent.extend(c.iter().take(degree + 1).skip(1).map(|ck| ck * 2.0));
    let unrotated = exp_series(&exponent, degree);

    // ∫₀¹ F(t) dt = Σ b_k / (k+1)
    let radial: Complex64 = unrotated.iter().enumerate().map(|(k, b)| b / (k + 1) as f64).sum();
    let gamma = (chord / radial).arg();
    let normalization_residual = radial.norm() - chord.norm();
    let inconsistent = normalization_residual.abs() > opts.normalization_tol * chord.norm();

    let rotation = Complex64::from_polar(1.0, gamma);
    let fprime: Vec<Complex64> = unrotated.iter().map(|b| b * rotation).collect();
    let map = integrate_series(&fprime, zeta_o)?;

    Ok(ReconstructionResult {
        map,
        gamma,
        compatibility_residual: cm.integral() - 1.0,
        normalization_residual,
        tail_energy: spectrum.tail_energy(n / 4),
        inconsistent,
    })
}

/// `‖f − 𝒯⁻¹(𝒯 f)‖_{1,0,∂D}` on the `n`-point boundary grid, after
/// rotation alignment.
pub fn roundtrip_error(f: &ConformalMap, n: usize) -> Result<f64> {
    roundtrip_error_with(f, n, AlignmentMode::ProofFaithful)
}

pub fn roundtrip_error_with(f: &ConformalMap, n: usize, mode: AlignmentMode) -> Result<f64> {
    let phi = f.forward_operator(n)?;
    let rec = reconstruct_fprime(&phi, f.zeta_o(), f.zeta_b(), n)?;
    let aligned = geometry::align_rotation(f, &rec.map, mode, n)?;
    boundary_c1_distance(f, &aligned.rotated, n)
}

/// `sup_k |f₁ − f₂| + sup_k |f₁' − f₂'|` over `θ_k = 2πk/n`.
pub fn boundary_c1_distance(f1: &ConformalMap, f2: &ConformalMap, n: usize) -> Result<f64> {
    let (a, b) = (f1.eval_boundary(n)?, f2.eval_boundary(n)?);
    let (da, db) = (f1.eval_fprime(n)?, f2.eval_fprime(n)?);
    let sup0 = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let sup1 = da.values.iter().zip(&db.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    Ok(sup0 + sup1)
}
