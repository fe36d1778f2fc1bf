//! Trigonometric interpolation of real periodic samples.
//!
//! A [`FourierSeries`] holds the one-sided DFT coefficients
//! `c_k = (1/N) Σ_j f_j e^{-2πi jk/N}`, `k = 0..=N/2`, of `N` uniform samples
//! on `[0, P)`. The interpolant is the symmetric trigonometric polynomial, with
//! the Nyquist mode (even `N`) carried as a cosine.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Forward DFT `X_k = Σ_j x_j e^{-2πi jk/N}` (unnormalized).
pub fn fft_forward(data: &mut [Complex64]) {
    if data.is_empty() {
        return;
    }
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(data.len()).process(data);
}

/// Inverse DFT `x_j = Σ_k X_k e^{+2πi jk/N}` (unnormalized).
pub fn fft_inverse(data: &mut [Complex64]) {
    if data.is_empty() {
        return;
    }
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_inverse(data.len()).process(data);
}

/// Evaluates `Σ_{k=0}^{K} a_k e^{ikθ_j}` on `θ_j = 2πj/n`, `j = 0..n`.
///
/// Requires `coeffs.len() <= n` so that no two modes alias.
pub fn synthesize_on_circle(coeffs: &[Complex64], n: usize) -> Vec<Complex64> {
    debug_assert!(coeffs.len() <= n);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    buf[..coeffs.len()].copy_from_slice(coeffs);
    fft_inverse(&mut buf);
    buf
}

#[derive(Debug, Clone)]
pub struct FourierSeries {
    coeffs: Vec<Complex64>,
    n: usize,
    period: f64,
}

impl FourierSeries {
    /// Interpolates samples `values[j] = f(j P / N)`.
    pub fn from_samples(values: &[f64], period: f64) -> Self {
        let n = values.len();
        assert!(n >= 2, "need at least two samples");
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        fft_forward(&mut buf);
        let scale = 1.0 / n as f64;
        let coeffs = buf[..=n / 2].iter().map(|c| c * scale).collect();
        FourierSeries { coeffs, n, period }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// One-sided coefficients `c_0..=c_{N/2}`.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    fn has_nyquist(&self) -> bool {
        self.n % 2 == 0
    }

    fn omega(&self) -> f64 {
        2.0 * PI / self.period
    }

    /// Weighted positive-frequency coefficients, so that
    /// `f(x) = c_0 + 2 Re Σ_{k≥1} w_k e^{ikωx}`.
    fn weighted(&self, k: usize) -> Complex64 {
        if self.has_nyquist() && k == self.n / 2 {
            // the Nyquist mode is real; its cosine carries half the weight
            Complex64::new(self.coeffs[k].re * 0.5, 0.0)
        } else {
            self.coeffs[k]
        }
    }

    /// Evaluates the trigonometric interpolant at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        let kmax = self.coeffs.len() - 1;
        if kmax == 0 {
            return self.coeffs[0].re;
        }
        let w = Complex64::from_polar(1.0, self.omega() * x);
        let mut acc = self.weighted(kmax);
        for k in (1..kmax).rev() {
            acc = acc * w + self.weighted(k);
        }
        acc *= w;
        self.coeffs[0].re + 2.0 * acc.re
    }

    /// Spectral derivative (Nyquist mode dropped).
    pub fn derivative(&self) -> FourierSeries {
        let omega = self.omega();
        let mut coeffs: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * Complex64::new(0.0, omega * k as f64))
            .collect();
        if self.has_nyquist() {
            let last = coeffs.len() - 1;
            coeffs[last] = Complex64::new(0.0, 0.0);
        }
        coeffs[0] = Complex64::new(0.0, 0.0);
        FourierSeries { coeffs, n: self.n, period: self.period }
    }

    /// Periodic antiderivative `Q` of `f − mean(f)`, normalized so that `Q` has
    /// zero mean (Nyquist mode dropped).
    pub fn periodic_antiderivative(&self) -> FourierSeries {
        let omega = self.omega();
        let mut coeffs: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    c / Complex64::new(0.0, omega * k as f64)
                }
            })
            .collect();
        if self.has_nyquist() {
            let last = coeffs.len() - 1;
            coeffs[last] = Complex64::new(0.0, 0.0);
        }
        FourierSeries { coeffs, n: self.n, period: self.period }
    }

    /// Samples the interpolant on `m` uniform points of `[0, P)` by zero padding
    /// or truncation in frequency.
    pub fn resample(&self, m: usize) -> Vec<f64> {
        assert!(m >= 2);
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        let kmax = (self.coeffs.len() - 1).min(m / 2);
        buf[0] = self.coeffs[0];
        for k in 1..=kmax {
            let c = self.weighted(k);
            if m % 2 == 0 && k == m / 2 {
                // target Nyquist bin holds both ±k contributions
                buf[k] += Complex64::new(2.0 * c.re, 0.0);
                continue;
            }
            buf[k] += c;
            buf[m - k] += c.conj();
        }
        fft_inverse(&mut buf);
        buf.iter().map(|c| c.re).collect()
    }

    /// `Σ_{k > kmin} |c_k|²` over both signs of the frequency.
    pub fn tail_energy(&self, kmin: usize) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(kmin + 1)
            .map(|(k, c)| {
                if self.has_nyquist() && k == self.n / 2 {
                    c.norm_sqr()
                } else {
                    2.0 * c.norm_sqr()
                }
            })
            .sum()
    }
}

/// Spectral derivative of uniform periodic samples.
pub fn spectral_derivative(values: &[f64], period: f64) -> Vec<f64> {
    let series = FourierSeries::from_samples(values, period).derivative();
    series.resample(values.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, period: f64) -> Vec<f64> {
        (0..n).map(|j| j as f64 * period / n as f64).collect()
    }

    #[test]
    fn interpolates_trig_polynomial_exactly() {
        let p = 3.0;
        let w = 2.0 * PI / p;
        let f = |x: f64| 1.5 + (w * x).cos() - 0.25 * (3.0 * w * x).sin();
        let xs = grid(16, p);
        let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let s = FourierSeries::from_samples(&vals, p);
        for x in [0.1, 0.77, 2.9, 5.3] {
            assert!((s.eval(x) - f(x)).abs() < 1e-13);
        }
        assert!((s.mean() - 1.5).abs() < 1e-14);
    }

    #[test]
    fn nyquist_mode_reproduces_samples() {
        let vals: Vec<f64> = (0..8).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let s = FourierSeries::from_samples(&vals, 1.0);
        for (j, v) in vals.iter().enumerate() {
            assert!((s.eval(j as f64 / 8.0) - v).abs() < 1e-14);
        }
        let r = s.resample(8);
        for (a, b) in r.iter().zip(&vals) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn derivative_and_antiderivative_of_cosine() {
        let n = 64;
        let xs = grid(n, 2.0 * PI);
        let vals: Vec<f64> = xs.iter().map(|x| (2.0 * x).cos() + 0.3).collect();
        let s = FourierSeries::from_samples(&vals, 2.0 * PI);
        let d = s.derivative();
        let q = s.periodic_antiderivative();
        for x in [0.0, 1.0, 2.5] {
            assert!((d.eval(x) + 2.0 * (2.0 * x).sin()).abs() < 1e-12);
            assert!((q.eval(x) - 0.5 * (2.0 * x).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn resample_up_and_down() {
        let xs = grid(32, 2.0 * PI);
        let vals: Vec<f64> = xs.iter().map(|x| (x.cos()).exp()).collect();
        let s = FourierSeries::from_samples(&vals, 2.0 * PI);
        let up = s.resample(128);
        for (j, v) in up.iter().enumerate() {
            let x = 2.0 * PI * j as f64 / 128.0;
            assert!((v - x.cos().exp()).abs() < 1e-12);
        }
        let down = FourierSeries::from_samples(&up, 2.0 * PI).resample(32);
        for (a, b) in down.iter().zip(&vals) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn synthesis_matches_direct_sum() {
        let a = [Complex64::new(0.5, 0.0), Complex64::new(1.0, 0.2), Complex64::new(0.0, -0.1)];
        let out = synthesize_on_circle(&a, 8);
        for (j, v) in out.iter().enumerate() {
            let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 8.0);
            let direct = a[0] + a[1] * z + a[2] * z * z;
            assert!((v - direct).norm() < 1e-14);
        }
    }
}
