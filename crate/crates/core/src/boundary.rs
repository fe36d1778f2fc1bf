//! Boundary data `φ` as a function of arclength, the cumulative map
//! `Φ(s) = 2π ∫₀^s φ`, its inverse, and the pushforward `ψ = φ ∘ Φ⁻¹` onto the
//! circle.

use crate::error::{Error, Result};
use crate::norms::{self, SampledFunction};
use crate::solve;
use crate::spectral::FourierSeries;
use std::f64::consts::PI;

const TWO_PI: f64 = 2.0 * PI;

/// Tolerance on `∫₀^L φ ds = 1`.
pub const COMPATIBILITY_TOL: f64 = 1e-8;
/// Absolute tolerance in `θ` for `Φ⁻¹`.
pub const INVERSION_TOL: f64 = 1e-12 * TWO_PI;
pub const INVERSION_MAX_ITER: usize = 100;
pub const DEFAULT_ALPHA: f64 = 0.5;

/// Samples of `φ` at `N` uniform arclength points `s_j = j L / N` of `[0, L)`.
#[derive(Debug, Clone)]
pub struct BoundaryFunction {
    samples: Vec<f64>,
    derivative: Option<Vec<f64>>,
    length: f64,
    alpha: f64,
}

impl BoundaryFunction {
    pub fn new(samples: Vec<f64>, length: f64, alpha: f64) -> Result<Self> {
        let n = samples.len();
        if n < 16 || n % 2 != 0 {
            return Err(Error::invalid(format!("boundary data needs an even N >= 16 samples, got {n}")));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::invalid(format!("perimeter must be positive, got {length}")));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::invalid(format!("Hölder exponent {alpha} outside (0, 1]")));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("boundary samples must be finite"));
        }
        Ok(BoundaryFunction { samples, derivative: None, length, alpha })
    }

    /// Attaches analytic derivative samples `φ'(s_j)`; these take precedence
    /// over spectral differentiation.
    pub fn with_derivative(mut self, derivative: Vec<f64>) -> Result<Self> {
        if derivative.len() != self.samples.len() {
            return Err(Error::invalid("derivative sample count does not match"));
        }
        if derivative.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("derivative samples must be finite"));
        }
        self.derivative = Some(derivative);
        Ok(self)
    }

    pub fn with_alpha(mut self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::invalid(format!("Hölder exponent {alpha} outside (0, 1]")));
        }
        self.alpha = alpha;
        Ok(self)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn supplied_derivative(&self) -> Option<&[f64]> {
        self.derivative.as_deref()
    }

    pub fn grid(&self) -> Vec<f64> {
        let h = self.length / self.len() as f64;
        (0..self.len()).map(|j| j as f64 * h).collect()
    }

    pub fn series(&self) -> FourierSeries {
        FourierSeries::from_samples(&self.samples, self.length)
    }

    /// Trigonometric interpolant of `φ` at arclength `s`.
    pub fn eval(&self, s: f64) -> f64 {
        self.series().eval(s)
    }

    /// `∫₀^L φ ds` (trapezoid rule, spectrally accurate for periodic data).
    pub fn integral(&self) -> f64 {
        self.length * self.samples.iter().sum::<f64>() / self.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn as_sampled(&self) -> SampledFunction {
        SampledFunction::periodic_uniform(self.samples.clone(), self.length)
            .expect("validated on construction")
    }

    /// `φ'` samples: supplied ones if present, otherwise spectral.
    pub fn derivative_samples(&self) -> Vec<f64> {
        match &self.derivative {
            Some(d) => d.clone(),
            None => crate::spectral::spectral_derivative(&self.samples, self.length),
        }
    }

    pub fn derivative_sampled(&self) -> SampledFunction {
        SampledFunction::periodic_uniform(self.derivative_samples(), self.length)
            .expect("validated on construction")
    }

    /// Resamples onto `m` uniform points (trigonometric interpolation).
    pub fn resampled(&self, m: usize) -> Result<Self> {
        if m == self.len() {
            return Ok(self.clone());
        }
        let samples = self.series().resample(m);
        let out = BoundaryFunction::new(samples, self.length, self.alpha)?;
        match &self.derivative {
            Some(d) => out.with_derivative(FourierSeries::from_samples(d, self.length).resample(m)),
            None => Ok(out),
        }
    }

    /// Cyclic shift of the arclength origin by `shift` samples:
    /// `φ_new(s_j) = φ(s_{j + shift})`.
    pub fn shifted(&self, shift: usize) -> Self {
        let n = self.len();
        let k = shift % n;
        let rotate = |v: &[f64]| -> Vec<f64> { (0..n).map(|j| v[(j + k) % n]).collect() };
        BoundaryFunction {
            samples: rotate(&self.samples),
            derivative: self.derivative.as_deref().map(rotate),
            length: self.length,
            alpha: self.alpha,
        }
    }
}

/// Outcome of a class-membership check for `𝒢₀ᴸ(m, M₀)` / `𝒢₁ᴸ(m, M₁)`.
#[derive(Debug, Clone)]
pub struct ClassReport {
    pub min: f64,
    pub norm0: f64,
    pub norm1: Option<f64>,
    pub positive: bool,
    pub in_g0: bool,
    pub in_g1: Option<bool>,
    pub violations: Vec<String>,
}

pub fn validate_class(phi: &BoundaryFunction, m: f64, m0: f64, m1: Option<f64>) -> ClassReport {
    let f = phi.as_sampled();
    let alpha = phi.alpha();
    let min = phi.min();
    let norm0 = norms::holder_norm(&f, 0, alpha, None).expect("alpha validated");
    let mut violations = Vec::new();
    let positive = min > 0.0;
    if !positive {
        violations.push(format!("positivity: min φ = {min:.6e} <= 0"));
    }
    if min < m {
        violations.push(format!("lower bound: min φ = {min:.6e} < m = {m:.6e}"));
    }
    if norm0 > m0 {
        violations.push(format!("‖φ‖_(0,α) = {norm0:.6e} > M0 = {m0:.6e}"));
    }
    let in_g0 = positive && min >= m && norm0 <= m0;
    let (norm1, in_g1) = match m1 {
        Some(bound) => {
            let d = phi.derivative_samples();
            let n1 = norms::holder_norm(&f, 1, alpha, Some(&d)).expect("alpha validated");
            if n1 > bound {
                violations.push(format!("‖φ‖_(1,α) = {n1:.6e} > M1 = {bound:.6e}"));
            }
            (Some(n1), Some(in_g0 && n1 <= bound))
        }
        None => (None, None),
    };
    ClassReport { min, norm0, norm1, positive, in_g0, in_g1, violations }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CumulativeOptions {
    /// Accept data whose integral misses 1 by more than the compatibility
    /// tolerance (the mean is then renormalized).
    pub renormalize: bool,
}

/// `Φ(s) = 2π (s/L + Q(s) − Q(0))`, with `Q` the periodic antiderivative of
/// `φ − mean φ`. This enforces `Φ(L) = 2π` exactly.
#[derive(Debug, Clone)]
pub struct CumulativeMap {
    phi: FourierSeries,
    primitive: FourierSeries,
    primitive_at_zero: f64,
    length: f64,
    integral: f64,
    table_s: Vec<f64>,
    table_theta: Vec<f64>,
}

pub fn build_cumulative(phi: &BoundaryFunction) -> Result<CumulativeMap> {
    build_cumulative_with(phi, CumulativeOptions::default())
}

pub fn build_cumulative_with(phi: &BoundaryFunction, opts: CumulativeOptions) -> Result<CumulativeMap> {
    let integral = phi.integral();
    if (integral - 1.0).abs() > COMPATIBILITY_TOL && !opts.renormalize {
        return Err(Error::Compatibility { integral });
    }
    if !(phi.min() > 0.0) {
        return Err(Error::invalid(format!(
            "boundary datum must be strictly positive (min {:.6e})",
            phi.min()
        )));
    }
    let series = phi.series();
    let primitive = series.periodic_antiderivative();
    let primitive_at_zero = primitive.eval(0.0);
    let mut cm = CumulativeMap {
        phi: series,
        primitive,
        primitive_at_zero,
        length: phi.length(),
        integral,
        table_s: Vec::new(),
        table_theta: Vec::new(),
    };
    let n = phi.len();
    cm.table_s = (0..=n).map(|j| j as f64 * cm.length / n as f64).collect();
    cm.table_theta = cm.table_s.iter().map(|&s| cm.theta_of(s)).collect();
    cm.table_theta[0] = 0.0;
    cm.table_theta[n] = TWO_PI;
    Ok(cm)
}

impl CumulativeMap {
    pub fn length(&self) -> f64 {
        self.length
    }

    /// `∫₀^L φ` of the data the map was built from.
    pub fn integral(&self) -> f64 {
        self.integral
    }

    /// `Φ(s)` for `s ∈ [0, L]`; extended by `Φ(s + L) = Φ(s) + 2π`.
    pub fn theta_of(&self, s: f64) -> f64 {
        TWO_PI * (s / self.length + self.primitive.eval(s) - self.primitive_at_zero)
    }

    /// `Φ'(s) = 2π φ(s)` (with the mean renormalized to `1/L`).
    pub fn slope(&self, s: f64) -> f64 {
        TWO_PI * (1.0 / self.length + self.phi.eval(s) - self.phi.mean())
    }

    /// `(s_j, Φ(s_j))` on the sample grid, closed at `(L, 2π)`.
    pub fn table(&self) -> (&[f64], &[f64]) {
        (&self.table_s, &self.table_theta)
    }

    /// Interpolated `φ` at `s`.
    pub fn phi_at(&self, s: f64) -> f64 {
        self.phi.eval(s)
    }

    pub fn phi_series(&self) -> &FourierSeries {
        &self.phi
    }
}

/// `s = Φ⁻¹(θ)`. `θ` outside `[0, 2π]` is reduced modulo `2π` (and `2π`
/// itself maps to `L`).
pub fn invert_cumulative(cm: &CumulativeMap, theta: f64) -> f64 {
    let theta = if theta == TWO_PI { theta } else { theta.rem_euclid(TWO_PI) };
    if theta == 0.0 {
        return 0.0;
    }
    if theta == TWO_PI {
        return cm.length;
    }
    let t = &cm.table_theta;
    // bracket on the sample table
    let idx = t.partition_point(|&v| v <= theta).clamp(1, t.len() - 1);
    let (lo, hi) = (cm.table_s[idx - 1], cm.table_s[idx]);
    let (tlo, thi) = (t[idx - 1], t[idx]);
    let guess = if thi > tlo { lo + (hi - lo) * (theta - tlo) / (thi - tlo) } else { 0.5 * (lo + hi) };
    solve::invert_monotone(
        |s| (cm.theta_of(s), cm.slope(s)),
        theta,
        lo,
        hi,
        guess,
        INVERSION_TOL,
        INVERSION_MAX_ITER,
    )
}

/// `ψ(θ) = φ(Φ⁻¹(θ))` on the uniform circle grid `θ_k = 2πk/n`.
#[derive(Debug, Clone)]
pub struct CircleFunction {
    values: Vec<f64>,
    derivative: Option<Vec<f64>>,
    arclengths: Vec<f64>,
}

impl CircleFunction {
    pub fn new(values: Vec<f64>, derivative: Option<Vec<f64>>) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(Error::invalid("circle function needs at least two samples"));
        }
        if derivative.as_ref().is_some_and(|d| d.len() != n) {
            return Err(Error::invalid("derivative sample count does not match"));
        }
        Ok(CircleFunction { values, derivative, arclengths: Vec::new() })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn thetas(&self) -> Vec<f64> {
        let n = self.len();
        (0..n).map(|k| TWO_PI * k as f64 / n as f64).collect()
    }

    /// `Φ⁻¹(θ_k)`, when the function was built by [`pushforward`].
    pub fn arclengths(&self) -> &[f64] {
        &self.arclengths
    }

    /// `ψ'` samples: from the chain rule when available, otherwise spectral.
    pub fn derivative(&self) -> Vec<f64> {
        match &self.derivative {
            Some(d) => d.clone(),
            None => crate::spectral::spectral_derivative(&self.values, TWO_PI),
        }
    }

    pub fn as_sampled(&self) -> SampledFunction {
        SampledFunction::periodic_uniform(self.values.clone(), TWO_PI).expect("n >= 2")
    }
}

/// Pulls `φ` back to the circle: `ψ(θ_k) = φ(Φ⁻¹(θ_k))` and
/// `ψ'(θ) = φ'(s) / (2π φ(s))`, `s = Φ⁻¹(θ)`.
pub fn pushforward(phi: &BoundaryFunction, cm: &CumulativeMap, n: usize) -> Result<CircleFunction> {
    if n < 2 {
        return Err(Error::invalid("circle grid needs at least two points"));
    }
    let dphi = FourierSeries::from_samples(&phi.derivative_samples(), phi.length());
    let mut values = Vec::with_capacity(n);
    let mut derivative = Vec::with_capacity(n);
    let mut arclengths = Vec::with_capacity(n);
    for k in 0..n {
        let theta = TWO_PI * k as f64 / n as f64;
        let s = invert_cumulative(cm, theta);
        let v = cm.phi_at(s);
        values.push(v);
        derivative.push(dphi.eval(s) / (TWO_PI * v));
        arclengths.push(s);
    }
    let mut out = CircleFunction::new(values, Some(derivative))?;
    out.arclengths = arclengths;
    Ok(out)
}

/// Rescales two data sets onto the common interval `[0, L]`,
/// `L = (L₁ + L₂)/2`, via `φ̂_j(s) = φ_j(L_j s / L)`.
///
/// Sample values are unchanged (only the abscissas stretch); derivatives pick
/// up the factor `L_j / L`. Data with different sample counts are brought to
/// the larger count first.
pub fn rescale_to_common_interval(
    phi1: &BoundaryFunction,
    phi2: &BoundaryFunction,
) -> Result<(BoundaryFunction, BoundaryFunction, f64)> {
    let n = phi1.len().max(phi2.len());
    let a = phi1.resampled(n)?;
    let b = phi2.resampled(n)?;
    let length = 0.5 * (a.length() + b.length());
    let rescale = |p: &BoundaryFunction| -> Result<BoundaryFunction> {
        let factor = p.length() / length;
        let d: Vec<f64> = p.derivative_samples().iter().map(|v| v * factor).collect();
        BoundaryFunction::new(p.samples().to_vec(), length, p.alpha())?.with_derivative(d)
    };
    Ok((rescale(&a)?, rescale(&b)?, length))
}
