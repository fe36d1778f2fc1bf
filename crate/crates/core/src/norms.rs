//! Hölder norms and seminorms of sampled functions.
//!
//! For `φ` on an interval `I`:
//!
//! ```text
//! ‖φ‖_∞        = sup |φ|
//! [φ]_{k,α}    = sup_{x≠y} |φ^(k)(x) − φ^(k)(y)| / |x − y|^α
//! ‖φ‖_{k,α}    = Σ_{j≤k} ‖φ^(j)‖_∞ + [φ]_{k,α}
//! ‖φ‖_{k,0}    = Σ_{j≤k} ‖φ^(j)‖_∞
//! ```
//!
//! All quantities are computed exactly over the sample set, so they are lower
//! bounds of the continuum values that converge under refinement. Periodic
//! functions use the shortest wraparound distance.

use crate::error::{Error, Result};
use crate::spectral;

#[derive(Debug, Clone)]
pub struct SampledFunction {
    grid: Vec<f64>,
    values: Vec<f64>,
    period: Option<f64>,
    /// Spacing when the grid is `a + j h`; enables the index-gap distance table.
    uniform_step: Option<f64>,
}

impl SampledFunction {
    /// General (possibly nonuniform) grid.
    pub fn new(grid: Vec<f64>, values: Vec<f64>, period: Option<f64>) -> Result<Self> {
        if grid.len() < 2 {
            return Err(Error::invalid("sampled function needs at least two abscissas"));
        }
        if grid.len() != values.len() {
            return Err(Error::invalid(format!(
                "grid has {} points but {} values",
                grid.len(),
                values.len()
            )));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("grid must be strictly increasing"));
        }
        if values.iter().chain(grid.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("grid and values must be finite"));
        }
        if let Some(p) = period {
            let span = grid[grid.len() - 1] - grid[0];
            if !(p > 0.0) || span >= p {
                return Err(Error::invalid("periodic grid must lie within one period"));
            }
        }
        Ok(SampledFunction { grid, values, period, uniform_step: None })
    }

    /// `N` samples at `j P / N`, `j = 0..N`, of a `P`-periodic function.
    pub fn periodic_uniform(values: Vec<f64>, period: f64) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(Error::invalid("sampled function needs at least two abscissas"));
        }
        let h = period / n as f64;
        let grid = (0..n).map(|j| j as f64 * h).collect();
        let mut f = Self::new(grid, values, Some(period))?;
        f.uniform_step = Some(h);
        Ok(f)
    }

    /// `N` samples at `a + j (b − a)/(N − 1)`, endpoints included, non-periodic.
    pub fn uniform_closed(a: f64, b: f64, values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        if n < 2 || !(b > a) {
            return Err(Error::invalid("need at least two samples on a nondegenerate interval"));
        }
        let h = (b - a) / (n - 1) as f64;
        let grid = (0..n).map(|j| a + j as f64 * h).collect();
        let mut f = Self::new(grid, values, None)?;
        f.uniform_step = Some(h);
        Ok(f)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same grid, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.values.len() {
            return Err(Error::invalid("value count does not match grid"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("values must be finite"));
        }
        Ok(SampledFunction { values, ..self.clone() })
    }

    /// Pointwise combination of two functions on the same grid.
    pub fn zip_with(&self, other: &SampledFunction, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.grid != other.grid || self.period != other.period {
            return Err(Error::invalid("functions are sampled on different grids"));
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect();
        self.with_values(values)
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let d = (self.grid[i] - self.grid[j]).abs();
        match self.period {
            Some(p) => d.min(p - d),
            None => d,
        }
    }

    /// Spectral derivative samples; only for uniform periodic grids.
    pub fn spectral_derivative(&self) -> Result<Vec<f64>> {
        match (self.period, self.uniform_step) {
            (Some(p), Some(_)) => Ok(spectral::spectral_derivative(&self.values, p)),
            _ => Err(Error::invalid(
                "spectral differentiation needs uniform periodic samples; supply derivative samples",
            )),
        }
    }
}

pub fn sup_norm(f: &SampledFunction) -> f64 {
    f.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("Hölder exponent {alpha} outside (0, 1]")))
    }
}

/// Grid Hölder seminorm `max_{i≠j} |f_i − f_j| / d(x_i, x_j)^α`.
pub fn holder_seminorm(f: &SampledFunction, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let n = f.len();
    let v = &f.values;
    let mut best = 0.0f64;
    match f.uniform_step {
        Some(h) => {
            // distances depend only on the index gap
            let inv_pow: Vec<f64> = (0..n)
                .map(|gap| {
                    let g = match f.period {
                        Some(_) => gap.min(n - gap),
                        None => gap,
                    };
                    if g == 0 { 0.0 } else { 1.0 / (g as f64 * h).powf(alpha) }
                })
                .collect();
            for i in 0..n {
                let vi = v[i];
                for j in (i + 1)..n {
                    let q = (vi - v[j]).abs() * inv_pow[j - i];
                    if q > best {
                        best = q;
                    }
                }
            }
        }
        None => {
            for i in 0..n {
                for j in (i + 1)..n {
                    let q = (v[i] - v[j]).abs() / f.distance(i, j).powf(alpha);
                    if q > best {
                        best = q;
                    }
                }
            }
        }
    }
    Ok(best)
}

/// `‖f‖_{k,α}` for `k ∈ {0, 1}`; `alpha = 0` selects the `‖·‖_{k,0}` variant.
///
/// For `k = 1` the derivative samples are taken from `derivative` when given,
/// otherwise computed spectrally (uniform periodic grids only).
pub fn holder_norm(f: &SampledFunction, k: u32, alpha: f64, derivative: Option<&[f64]>) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::invalid(format!("Hölder exponent {alpha} outside [0, 1]")));
    }
    let seminorm = |g: &SampledFunction| -> Result<f64> {
        if alpha == 0.0 { Ok(0.0) } else { holder_seminorm(g, alpha) }
    };
    match k {
        0 => Ok(sup_norm(f) + seminorm(f)?),
        1 => {
            let d = match derivative {
                Some(d) => d.to_vec(),
                None => f.spectral_derivative()?,
            };
            let df = f.with_values(d)?;
            Ok(sup_norm(f) + sup_norm(&df) + seminorm(&df)?)
        }
        _ => Err(Error::invalid("only k = 0 and k = 1 are supported")),
    }
}

/// Upper bound `[ξ]_{0,α} [η]_{0,1}^α` for the seminorm of a composite `ξ ∘ η`.
pub fn composition_seminorm_bound(xi_seminorm: f64, eta_lipschitz: f64, alpha: f64) -> f64 {
    xi_seminorm * eta_lipschitz.powf(alpha)
}
