//! Conformal maps of the unit disk stored as truncated power series, and the
//! forward operator `f ↦ φ = 1/(2π|f'(e^{iθ})|)` as a function of arclength.

use crate::boundary::{BoundaryFunction, DEFAULT_ALPHA};
use crate::error::{Error, Result};
use crate::solve;
use crate::spectral::{synthesize_on_circle, FourierSeries};
use num_complex::Complex64;
use std::f64::consts::PI;

const TWO_PI: f64 = 2.0 * PI;
/// `|f'|` below this on a grid node is treated as a zero of `f'`.
pub const DEGENERACY_TOL: f64 = 1e-12;
/// Tolerance for `Σ a_k = ζ_b`.
pub const BASE_POINT_TOL: f64 = 1e-8;

/// `f(z) = Σ_{k=0}^{M} a_k z^k`, with `ζ_o = a_0 = f(0)` and `ζ_b = f(1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalMap {
    coeffs: Vec<Complex64>,
}

impl ConformalMap {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::invalid("a map needs at least the coefficients a_0 and a_1"));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::invalid("map coefficients must be finite"));
        }
        let mut coeffs = coeffs;
        while coeffs.len() > 2 && coeffs[coeffs.len() - 1] == Complex64::new(0.0, 0.0) {
            coeffs.pop();
        }
        Ok(ConformalMap { coeffs })
    }

    /// Builds a map and checks it against declared base points.
    pub fn with_base_points(coeffs: Vec<Complex64>, zeta_o: Complex64, zeta_b: Complex64) -> Result<Self> {
        let f = Self::new(coeffs)?;
        if (f.zeta_o() - zeta_o).norm() > BASE_POINT_TOL {
            return Err(Error::invalid(format!("a_0 = {} differs from zeta_o = {zeta_o}", f.zeta_o())));
        }
        if (f.zeta_b() - zeta_b).norm() > BASE_POINT_TOL {
            return Err(Error::invalid(format!("sum of coefficients {} differs from zeta_b = {zeta_b}", f.zeta_b())));
        }
        Ok(f)
    }

    /// `ζ_o + ρ e^{iγ} z`.
    pub fn disk(zeta_o: Complex64, radius: f64, gamma: f64) -> Self {
        ConformalMap { coeffs: vec![zeta_o, Complex64::from_polar(radius, gamma)] }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn zeta_o(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn zeta_b(&self) -> Complex64 {
        self.coeffs.iter().sum()
    }

    pub fn derivative_coefficients(&self) -> Vec<Complex64> {
        self.coeffs.iter().enumerate().skip(1).map(|(k, a)| a * k as f64).collect()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.coeffs, z)
    }

    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        horner(&self.derivative_coefficients(), z)
    }

    /// `e^{iγ}(f − ζ_o) + ζ_o`.
    pub fn rotated(&self, gamma: f64) -> Self {
        let r = Complex64::from_polar(1.0, gamma);
        let mut coeffs = self.coeffs.clone();
        for a in coeffs.iter_mut().skip(1) {
            *a *= r;
        }
        ConformalMap { coeffs }
    }

    /// `λ(f − ζ_o) + ζ_o`.
    pub fn scaled(&self, lambda: f64) -> Self {
        let mut coeffs = self.coeffs.clone();
        for a in coeffs.iter_mut().skip(1) {
            *a *= lambda;
        }
        ConformalMap { coeffs }
    }

    fn check_grid(&self, n: usize) -> Result<()> {
        if n < 2 * self.degree() || n < 2 {
            return Err(Error::Aliasing { n, degree: self.degree() });
        }
        Ok(())
    }

    /// `f(e^{iθ_k})`, `θ_k = 2πk/n`, in order of increasing `θ`.
    pub fn eval_boundary(&self, n: usize) -> Result<Vec<Complex64>> {
        self.check_grid(n)?;
        Ok(synthesize_on_circle(&self.coeffs, n))
    }

    pub fn eval_fprime(&self, n: usize) -> Result<FprimeSamples> {
        self.check_grid(n)?;
        let values = synthesize_on_circle(&self.derivative_coefficients(), n);
        let moduli: Vec<f64> = values.iter().map(|v| v.norm()).collect();
        for (k, &m) in moduli.iter().enumerate() {
            if m < DEGENERACY_TOL {
                return Err(Error::Degenerate { modulus: m, theta: TWO_PI * k as f64 / n as f64 });
            }
        }
        let mut args = Vec::with_capacity(n);
        let mut prev = values[0].arg();
        args.push(prev);
        for v in values.iter().skip(1) {
            let mut a = v.arg();
            while a - prev > PI {
                a -= TWO_PI;
            }
            while a - prev < -PI {
                a += TWO_PI;
            }
            args.push(a);
            prev = a;
        }
        Ok(FprimeSamples { values, moduli, args })
    }

    pub fn arclength(&self, n: usize) -> Result<ArclengthTable> {
        let fp = self.eval_fprime(n)?;
        let series = FourierSeries::from_samples(&fp.moduli, TWO_PI);
        let speed = series.mean();
        let primitive = series.periodic_antiderivative();
        let p0 = primitive.eval(0.0);
        let thetas: Vec<f64> = (0..n).map(|k| TWO_PI * k as f64 / n as f64).collect();
        let s = thetas.iter().map(|&t| speed * t + primitive.eval(t) - p0).collect();
        Ok(ArclengthTable {
            thetas,
            s,
            length: TWO_PI * speed,
            speed,
            primitive,
            primitive_at_zero: p0,
            modulus: series,
        })
    }

    /// The forward operator: `φ(s) = 1/(2π|f'(e^{iθ})|)` with
    /// `s(θ) = ∫₀^θ |f'(e^{it})| dt`, sampled on `n` uniform arclength points.
    ///
    /// Each arclength node is pulled back to its `θ` by inverting `s(θ)`; `φ`
    /// and `φ' = −(d|f'|/dθ) / (2π|f'|³)` are then evaluated from the series.
    pub fn forward_operator(&self, n: usize) -> Result<BoundaryFunction> {
        let table = self.arclength(n)?;
        let length = table.length;
        let dcoeffs = self.derivative_coefficients();
        let ddcoeffs: Vec<Complex64> = dcoeffs.iter().enumerate().skip(1).map(|(k, a)| a * k as f64).collect();
        let mut samples = Vec::with_capacity(n);
        let mut derivative = Vec::with_capacity(n);
        for j in 0..n {
            let target = length * j as f64 / n as f64;
            let theta = table.theta_of_arclength(target);
            let z = Complex64::from_polar(1.0, theta);
            let fp = horner(&dcoeffs, z);
            let fpp = horner(&ddcoeffs, z);
            let modulus = fp.norm();
            if modulus < DEGENERACY_TOL {
                return Err(Error::Degenerate { modulus, theta });
            }
            // d/dθ f'(e^{iθ}) = i z f''(z);  d|f'|/dθ = Re(conj(f') · i z f'') / |f'|
            let dmod = (fp.conj() * Complex64::i() * z * fpp).re / modulus;
            samples.push(1.0 / (TWO_PI * modulus));
            derivative.push(-dmod / (TWO_PI * modulus.powi(3)));
        }
        BoundaryFunction::new(samples, length, DEFAULT_ALPHA)?.with_derivative(derivative)
    }

    /// Heuristic univalence check on an `n`-point boundary grid.
    pub fn check_univalence(&self, n: usize) -> Result<UnivalenceReport> {
        self.check_grid(n)?;
        let values = synthesize_on_circle(&self.derivative_coefficients(), n);
        let min_fprime = values.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
        let points = self.eval_boundary(n)?;
        let simple = crate::geometry::is_simple_polygon(&points);
        let mut warnings = Vec::new();
        if min_fprime < DEGENERACY_TOL {
            warnings.push(format!("|f'| reaches {min_fprime:.3e} on the boundary grid"));
        }
        if !simple {
            warnings.push("boundary polyline self-intersects".to_string());
        }
        Ok(UnivalenceReport { min_fprime, simple, warnings })
    }
}

pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

#[derive(Debug, Clone)]
pub struct FprimeSamples {
    pub values: Vec<Complex64>,
    pub moduli: Vec<f64>,
    /// `β = arg f'`, unwrapped continuously in `θ`.
    pub args: Vec<f64>,
}

impl FprimeSamples {
    /// Net change of `arg f'` over one period (closing the loop back to `θ = 0`),
    /// in units of `2π`.
    pub fn winding(&self) -> f64 {
        let last = *self.args.last().expect("nonempty");
        let mut close = self.args[0] - last;
        while close > PI {
            close -= TWO_PI;
        }
        while close < -PI {
            close += TWO_PI;
        }
        (last + close - self.args[0]) / TWO_PI
    }
}

/// `s(θ_k)` on the uniform `θ` grid and the perimeter `L = s(2π)`.
#[derive(Debug, Clone)]
pub struct ArclengthTable {
    pub thetas: Vec<f64>,
    pub s: Vec<f64>,
    pub length: f64,
    speed: f64,
    primitive: FourierSeries,
    primitive_at_zero: f64,
    modulus: FourierSeries,
}

impl ArclengthTable {
    pub fn s_at(&self, theta: f64) -> f64 {
        self.speed * theta + self.primitive.eval(theta) - self.primitive_at_zero
    }

    /// Inverse of the monotone map `θ ↦ s(θ)` on `[0, 2π]`.
    pub fn theta_of_arclength(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        if s >= self.length {
            return TWO_PI;
        }
        let n = self.s.len();
        let idx = self.s.partition_point(|&v| v <= s);
        let (lo, hi) = if idx >= n {
            (self.thetas[n - 1], TWO_PI)
        } else {
            (self.thetas[idx - 1], self.thetas[idx])
        };
        solve::invert_monotone(
            |t| (self.s_at(t), self.modulus.eval(t)),
            s,
            lo,
            hi,
            0.5 * (lo + hi),
            1e-13 * self.length,
            100,
        )
    }
}

#[derive(Debug, Clone)]
pub struct UnivalenceReport {
    pub min_fprime: f64,
    pub simple: bool,
    pub warnings: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quadratic(eps: f64) -> ConformalMap {
        ConformalMap::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(eps, 0.0)]).unwrap()
    }

    #[test]
    fn identity_boundary() {
        let f = ConformalMap::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let b = f.eval_boundary(4).unwrap();
        let expected = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (p, e) in b.iter().zip(expected) {
            assert!((p - e).norm() < 1e-15);
        }
    }

    #[test]
    fn aliasing_refused() {
        let f = quadratic(0.1);
        assert!(matches!(f.eval_boundary(3), Err(Error::Aliasing { .. })));
        assert!(f.eval_boundary(4).is_ok());
    }

    #[test]
    fn disk_boundary_and_derivative() {
        let zo = c(0.3, -0.2);
        let f = ConformalMap::disk(zo, 1.7, 0.4);
        for p in f.eval_boundary(64).unwrap() {
            assert!(((p - zo).norm() - 1.7).abs() < 1e-14);
        }
        let fp = f.eval_fprime(64).unwrap();
        assert!(fp.moduli.iter().all(|m| (m - 1.7).abs() < 1e-14));
        assert!(fp.args.iter().all(|a| (a - 0.4).abs() < 1e-14));
    }

    #[test]
    fn quadratic_modulus() {
        let f = quadratic(0.1);
        let n = 128;
        for (k, p) in f.eval_boundary(n).unwrap().iter().enumerate() {
            let t = TWO_PI * k as f64 / n as f64;
            let exact = (1.01 + 0.2 * t.cos()).sqrt();
            assert!((p.norm() - exact).abs() < 1e-14);
            assert!(p.norm() >= 0.9 - 1e-15 && p.norm() <= 1.1 + 1e-15);
        }
        let fp = f.eval_fprime(n).unwrap();
        for (k, m) in fp.moduli.iter().enumerate() {
            let t = TWO_PI * k as f64 / n as f64;
            assert!((m - (1.04 + 0.4 * t.cos()).sqrt()).abs() < 1e-14);
        }
        assert!(fp.winding().abs() < 1e-12);
    }

    #[test]
    fn degenerate_derivative() {
        // f'(z) = 1 + z vanishes at z = −1
        let f = ConformalMap::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0)]).unwrap();
        assert!(matches!(f.eval_fprime(16), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn arclength_of_disks() {
        let f = ConformalMap::disk(c(1.0, 1.0), 0.7, 0.0);
        let t = f.arclength(32).unwrap();
        assert!((t.length - TWO_PI * 0.7).abs() < 1e-14);
        for (th, s) in t.thetas.iter().zip(&t.s) {
            assert!((s - 0.7 * th).abs() < 1e-14);
        }
    }

    #[test]
    fn arclength_quadrature_oracle() {
        let f = quadratic(0.1);
        let t = f.arclength(256).unwrap();
        let oracle = solve::integrate(|x| (1.04 + 0.4 * x.cos()).sqrt(), 0.0, TWO_PI, 1e-14);
        assert!((t.length - oracle).abs() < 1e-9);
        let poly = f.eval_boundary(4096).unwrap();
        let polyline: f64 = (0..poly.len()).map(|k| (poly[(k + 1) % poly.len()] - poly[k]).norm()).sum();
        // chord deficit per edge is at most κ²ℓ³/24; κ ≤ 1.5625 and ℓ ≤ 1.2·2π/4096 here
        let h = 1.2 * TWO_PI / 4096.0;
        assert!(polyline < t.length);
        assert!(t.length - polyline < t.length * (1.5625 * h).powi(2) / 24.0);
    }

    #[test]
    fn forward_operator_of_disks() {
        let f = ConformalMap::new(vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let phi = f.forward_operator(256).unwrap();
        assert!((phi.length() - TWO_PI).abs() < 1e-14);
        assert!(phi.samples().iter().all(|v| (v - 1.0 / TWO_PI).abs() < 1e-15));

        let cst = 0.37;
        let fc = ConformalMap::disk(c(0.2, 0.1), 1.0 / (TWO_PI * cst), 1.1);
        let phi = fc.forward_operator(64).unwrap();
        assert!(phi.samples().iter().all(|v| (v - cst).abs() < 1e-14));
        assert!(phi.supplied_derivative().unwrap().iter().all(|d| d.abs() < 1e-14));
    }

    #[test]
    fn forward_operator_extrema() {
        let f = quadratic(0.1);
        let n = 512;
        let phi = f.forward_operator(n).unwrap();
        let max = phi.samples().iter().copied().fold(f64::MIN, f64::max);
        let min = phi.min();
        assert!((max - 1.0 / (1.6 * PI)).abs() < 1e-8);
        assert!((min - 1.0 / (2.4 * PI)).abs() < 1e-15);
        // θ = π sits at arclength L/2 by symmetry, which is a grid node
        assert!((phi.samples()[n / 2] - 1.0 / (1.6 * PI)).abs() < 1e-12);
        assert!((phi.integral() - 1.0).abs() < 1e-8);
        assert!(phi.min() > 0.0);
    }

    #[test]
    fn forward_derivative_matches_spectral() {
        let f = ConformalMap::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.1, 0.05), c(0.0, 0.03)]).unwrap();
        let phi = f.forward_operator(256).unwrap();
        let spectral = crate::spectral::spectral_derivative(phi.samples(), phi.length());
        for (a, b) in phi.supplied_derivative().unwrap().iter().zip(&spectral) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn relation_before_pullback() {
        // 2π φ(s(θ)) s'(θ) = 1 on the θ grid, with φ interpolated in s
        let f = ConformalMap::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.1, 0.0), c(0.05, 0.0)]).unwrap();
        let n = 256;
        let phi = f.forward_operator(n).unwrap();
        let table = f.arclength(n).unwrap();
        let series = phi.series();
        let sprime = f.eval_fprime(n).unwrap().moduli;
        for k in 0..n {
            let v = TWO_PI * series.eval(table.s[k]) * sprime[k];
            assert!((v - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn rotation_leaves_data_unchanged() {
        let f = ConformalMap::new(vec![c(0.1, 0.2), c(1.0, 0.0), c(0.1, 0.05)]).unwrap();
        let g = f.rotated(0.9);
        let (a, b) = (f.forward_operator(128).unwrap(), g.forward_operator(128).unwrap());
        assert!((a.length() - b.length()).abs() < 1e-13);
        for (x, y) in a.samples().iter().zip(b.samples()) {
            assert!((x - y).abs() < 1e-13);
        }
        assert_eq!(g.zeta_o(), f.zeta_o());
    }

    #[test]
    fn base_point_validation() {
        let coeffs = vec![c(0.0, 0.0), c(1.0, 0.0), c(0.1, 0.0)];
        assert!(ConformalMap::with_base_points(coeffs.clone(), c(0.0, 0.0), c(1.1, 0.0)).is_ok());
        assert!(ConformalMap::with_base_points(coeffs, c(0.0, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn univalence_heuristic() {
        assert!(quadratic(0.2).check_univalence(256).unwrap().warnings.is_empty());
        // z + 0.9 z² folds over itself
        let r = quadratic(0.9).check_univalence(256).unwrap();
        assert!(!r.simple);
    }
}
