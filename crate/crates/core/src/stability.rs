//! Explicit stability constants and numerical checks of the stability
//! inequalities, one report row per inequality.
//!
//! Conventions shared by every check:
//! - `ψ_j = φ_j ∘ Φ_j⁻¹` is sampled on the uniform `θ` grid; `h = ln ψ₁ − ln ψ₂`.
//! - Hölder seminorms are periodic (shortest wraparound distance), which
//!   dominates the interval seminorm, and are exact over the sample set only.
//! - Sup norms of smooth periodic samples are taken on a spectrally
//!   interpolated grid `OVERSAMPLE` times finer, so they track the continuum
//!   value; map differences are evaluated directly on the finer grid.
//! - Class constants default to measured values. A user override is used only
//!   when the data satisfy it; otherwise the violation is recorded and the
//!   measured value is used.

use crate::boundary::{self, BoundaryFunction, CircleFunction};
use crate::conformal::ConformalMap;
use crate::error::{Error, Result};
use crate::geometry::{self, AlignmentMode, DomainBoundary};
use crate::norms::{self, SampledFunction};
use crate::reconstruct::boundary_c1_distance;
use crate::solve;
use crate::spectral::FourierSeries;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

const TWO_PI: f64 = 2.0 * PI;
/// Relative slack for floating-point error in `lhs ≤ K·rhs`.
pub const PASS_TOL: f64 = 1e-9;
/// Refinement factor for sup norms.
pub const OVERSAMPLE: usize = 4;
/// Relative perimeter mismatch tolerated by the same-perimeter check.
pub const PERIMETER_TOL: f64 = 1e-8;
pub const C_ALPHA_TOL: f64 = 1e-12;

/// `c_α = (2^α / 4π²) ∫₀^π t^α cot(t/2) dt`.
pub fn c_alpha(alpha: f64) -> Result<f64> {
    c_alpha_with_tol(alpha, C_ALPHA_TOL)
}

/// [`c_alpha`] with an explicit absolute quadrature tolerance.
///
/// With `t = u^{1/α}` the integrand becomes `(1/α) t cot(t/2)`, which is
/// bounded (it tends to 2 at `u = 0`) for every `α ∈ (0, 1]`.
pub fn c_alpha_with_tol(alpha: f64, tol: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::invalid(format!("Hölder exponent {alpha} outside (0, 1]")));
    }
    let integrand = |u: f64| {
        let t = u.powf(1.0 / alpha);
        if t == 0.0 {
            return 2.0 / alpha;
        }
        t / (0.5 * t).tan() / alpha
    };
    let integral = solve::integrate(integrand, 0.0, PI.powf(alpha), tol);
    Ok(2f64.powf(alpha) / (4.0 * PI * PI) * integral)
}

/// Hypothesis constants and the constants assembled from them.
///
/// `m` bounds every `φ_j` from below, `m0` bounds `‖φ_j‖_{0,α}`, `m1` bounds
/// `‖φ_j‖_{1,α}` and `[φ_j]_{0,α}`; `p ≤ L₁, L₂ ≤ pp`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantsBundle {
    pub alpha: f64,
    pub m: f64,
    pub m0: f64,
    pub m1: f64,
    pub l1: f64,
    pub l2: f64,
    pub p: f64,
    pub pp: f64,
    pub c_alpha: f64,
}

impl ConstantsBundle {
    #[allow(clippy::too_many_arguments)]
    pub fn new(alpha: f64, m: f64, m0: f64, m1: f64, l1: f64, l2: f64, p: f64, pp: f64) -> Result<Self> {
        for (name, v) in [("m", m), ("M0", m0), ("M1", m1), ("L1", l1), ("L2", l2), ("p", p), ("P", pp)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        let c_alpha = c_alpha(alpha)?;
        Ok(ConstantsBundle { alpha, m, m0, m1, l1, l2, p, pp, c_alpha })
    }

    /// Single-domain bundle (`L₁ = L₂ = p = P = L`).
    pub fn single(alpha: f64, m: f64, m0: f64, m1: f64, length: f64) -> Result<Self> {
        Self::new(alpha, m, m0, m1, length, length, length, length)
    }

    /// Broken invariants `m ≤ M0 ≤ M1`, `p ≤ min L`, `max L ≤ P`.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.m > self.m0 {
            out.push(format!("m = {} exceeds M0 = {}", self.m, self.m0));
        }
        if self.m0 > self.m1 {
            out.push(format!("M0 = {} exceeds M1 = {}", self.m0, self.m1));
        }
        if self.p > self.l1.min(self.l2) {
            out.push(format!("p = {} exceeds min(L1, L2)", self.p));
        }
        if self.pp < self.l1.max(self.l2) {
            out.push(format!("P = {} below max(L1, L2)", self.pp));
        }
        out
    }

    /// Common interval length `(L₁ + L₂)/2`.
    pub fn l(&self) -> f64 {
        0.5 * (self.l1 + self.l2)
    }

    pub fn c1(&self) -> f64 {
        self.m0 * self.m0 / (TWO_PI.powf(self.alpha) * self.m.powf(self.alpha + 3.0))
    }

    pub fn c2(&self) -> f64 {
        self.m0 / (self.m * self.m)
    }

    /// Constant of the general estimate
    /// `‖f₁ − f₂‖_{1,0,∂D} ≤ K ‖ψ₁ − ψ₂‖_{0,α,[0,2π]}`.
    ///
    /// On `∂D`, `|f'_j| = 1/(2πψ_j)`, so `|f'₂| ≤ 1/(2πm)` and
    /// `||f'₁| − |f'₂|| ≤ ‖ψ₁ − ψ₂‖∞/(2πm²)`. With `f'_j = |f'_j| e^{iβ_j}`,
    /// `|f'₁ − f'₂| ≤ ||f'₁| − |f'₂|| + |f'₂||β₁ − β₂|`, and the conjugate
    /// Poisson kernel is bounded by `cot(t/2)`, giving
    /// `|β₁ − β₂| ≤ ([h]/2π) ∫₀^π (2t)^α cot(t/2) dt = 2π c_α [h]`. Hence
    /// `sup|f'₁ − f'₂| ≤ ‖Δψ‖∞/(2πm²) + (c_α/m)[h]`. The same bound holds for
    /// `sup|f₁ − f₂|` by integrating along radii from the common `f(0) = ζ_o`,
    /// so the `C^{1,0}` norm is at most twice it. Inserting
    /// `[h] ≤ C₁‖Δψ‖∞ + C₂[Δψ]`:
    /// `‖f₁ − f₂‖ ≤ 2(1/(2πm²) + c_α C₁/m)‖Δψ‖∞ + 2(c_α C₂/m)[Δψ]`,
    /// and the sum of both coefficients dominates their maximum.
    pub fn k_stab(&self) -> f64 {
        let m = self.m;
        2.0 * (1.0 / (TWO_PI * m * m) + self.c_alpha * self.c1() / m + self.c_alpha * self.c2() / m)
    }

    /// Near-disk constant: `‖ψ − C‖∞ = ‖φ − C‖∞` and
    /// `[ψ − C] ≤ [φ − C]/(2πm)^α`, so `‖ψ − C‖_{0,α} ≤ (1 + (2πm)^{−α})‖φ − C‖_{0,α}`.
    pub fn k_disco(&self) -> f64 {
        self.k_stab() * (1.0 + (TWO_PI * self.m).powf(-self.alpha))
    }

    /// Same-perimeter factor `A` in `‖ψ₁ − ψ₂‖∞ ≤ A ‖φ₁ − φ₂‖∞^α`:
    /// `|Δψ| ≤ [φ₁]|s₁ − s₂|^α + ‖Δφ‖∞`, `|s₁ − s₂| ≤ (L/m)‖Δφ‖∞`, and
    /// `‖Δφ‖∞ ≤ (2M₁)^{1−α}‖Δφ‖∞^α` since each `‖φ_j‖∞ ≤ M₁`.
    pub fn psi_sup_factor(&self) -> f64 {
        self.m1 * (self.l() / self.m).powf(self.alpha) + (2.0 * self.m1).powf(1.0 - self.alpha)
    }

    /// Same-perimeter factor `B` in
    /// `2π‖ψ'₁ − ψ'₂‖∞ ≤ B‖Δφ‖∞^α + ‖Δφ'‖∞/m`.
    pub fn psi_derivative_factor(&self) -> f64 {
        let (m, m1) = (self.m, self.m1);
        (m1 / m) * (self.l() / m).powf(self.alpha) + (m1 / (m * m)) * self.psi_sup_factor()
    }

    /// Same-perimeter constant for `‖f₁ − f₂‖ ≤ K(‖Δφ‖∞^α + ‖Δφ'‖∞)`:
    /// `‖Δψ‖_{0,α} ≤ A‖Δφ‖^α + (2π)^{1−α}‖Δψ'‖∞` (mean value theorem) and
    /// `(2π)^{1−α}‖Δψ'‖∞ ≤ (2π)^{−α}(B‖Δφ‖^α + ‖Δφ'‖/m)`.
    pub fn k_lugua(&self) -> f64 {
        let w = TWO_PI.powf(-self.alpha);
        self.k_stab() * (self.psi_sup_factor() + w * self.psi_derivative_factor()).max(w / self.m)
    }

    /// `d_H ≤ K ‖Δφ‖_{1,0}^α`: `d_H ≤ sup|f₁ − f₂|`, and
    /// `‖Δφ'‖ ≤ (2M₁)^{1−α}‖Δφ'‖^α`, with each `x^α ≤ (x + y)^α`.
    pub fn k_hausdorff(&self) -> f64 {
        self.k_lugua() * (1.0 + (2.0 * self.m1).powf(1.0 - self.alpha))
    }

    /// Bound on `sup|ŝ₁ − ŝ₂|` per unit of
    /// `E = |L₁ − L₂|/P + ‖φ̂₁ − φ̂₂‖∞/M₁`.
    pub fn arclength_shift_factor(&self) -> f64 {
        self.m1 * self.pp * self.pp / (self.m * self.p)
    }

    /// `‖ψ₁ − ψ₂‖∞ ≤ K₁ E^α`: `[φ̂₁] ≤ (P/p)^α M₁`,
    /// `|Δŝ|^α ≤ (M₁P²/(mp))^α E^α` and `‖Δφ̂‖∞ ≤ M₁E ≤ 4^{1−α}M₁E^α` as `E ≤ 3`.
    pub fn k1(&self) -> f64 {
        let a = self.alpha;
        self.m1 * (((self.m1 / self.m) * self.pp.powi(3) / (self.p * self.p)).powf(a) + 4f64.powf(1.0 - a))
    }

    /// `2π‖ψ'₁ − ψ'₂‖∞ ≤ K₂E^α + (P/(pm))‖Δφ̂'‖∞`.
    ///
    /// `2πψ'_j = (L/L_j) φ̂'_j(ŝ_j)/φ̂_j(ŝ_j)`. Splitting off
    /// `|L/L₁ − L/L₂| |φ̂'₁/φ̂₁| ≤ (P|ΔL|/p²)(P/p)(M₁/m) ≤ 4^{1−α}(P³M₁/(p³m))E^α`,
    /// the rest is `L/L₂ ≤ P/p` times the three terms of the same-perimeter
    /// case with `[φ̂'₁] ≤ (P/p)^{α+1}M₁`, `‖φ̂'₁‖∞ ≤ (P/p)M₁`:
    /// `(P/p)^{α+1}(M₁/m)(M₁P²/(mp))^α E^α + (P/p)(M₁/m²)K₁E^α + ‖Δφ̂'‖/m`.
    pub fn k2(&self) -> f64 {
        let (a, m, m1, p, pp) = (self.alpha, self.m, self.m1, self.p, self.pp);
        let r = pp / p;
        r.powf(a + 2.0) * (m1 / m) * self.arclength_shift_factor().powf(a)
            + r * r * (m1 / (m * m)) * self.k1()
            + 4f64.powf(1.0 - a) * pp.powi(3) * m1 / (p.powi(3) * m)
    }

    /// Unequal-perimeter constant for
    /// `‖f₁ − f₂‖ ≤ K(E^α + ‖φ̂'₁ − φ̂'₂‖∞)`, assembled as in [`Self::k_lugua`].
    pub fn k_ultimo(&self) -> f64 {
        let w = TWO_PI.powf(-self.alpha);
        self.k_stab() * (self.k1() + w * self.k2()).max(w * self.pp / (self.p * self.m))
    }

    /// `d_H ≤ K((‖Δφ̂‖∞ + |ΔL|)^α + ‖Δφ̂'‖∞)`, using
    /// `E ≤ (‖Δφ̂‖∞ + |ΔL|)/min(P, M₁)`.
    pub fn k_corollary(&self) -> f64 {
        self.k_ultimo() * self.pp.min(self.m1).powf(-self.alpha).max(1.0)
    }
}

/// User-supplied hypothesis values.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ConstantOverrides {
    pub m: Option<f64>,
    pub m0: Option<f64>,
    pub m1: Option<f64>,
    pub p: Option<f64>,
    pub pp: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    pub alpha: f64,
    pub alignment: AlignmentMode,
    pub overrides: ConstantOverrides,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { alpha: 0.5, alignment: AlignmentMode::ProofFaithful, overrides: ConstantOverrides::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theorem {
    /// General estimate through `ψ`.
    StabGen,
    /// Distance to the disk with constant datum `C`.
    Disco,
    /// Circumradius minus inradius.
    Raggi,
    /// Same perimeter, with the Hausdorff row.
    Lugua,
    /// Different perimeters, with the Hausdorff row.
    Ultimo,
}

impl Theorem {
    pub const ALL: [Theorem; 5] = [Theorem::Raggi, Theorem::Disco, Theorem::StabGen, Theorem::Lugua, Theorem::Ultimo];

    pub fn as_str(self) -> &'static str {
        match self {
            Theorem::StabGen => "stab_gen",
            Theorem::Disco => "disco",
            Theorem::Raggi => "raggi",
            Theorem::Lugua => "lugua",
            Theorem::Ultimo => "ultimo",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Theorem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stab_gen" | "stab-gen" => Ok(Theorem::StabGen),
            "disco" => Ok(Theorem::Disco),
            "raggi" => Ok(Theorem::Raggi),
            "lugua" | "hausdorff" => Ok(Theorem::Lugua),
            "ultimo" | "corollary" => Ok(Theorem::Ultimo),
            other => Err(Error::invalid(format!("unknown theorem '{other}'"))),
        }
    }
}

/// One checked inequality `lhs ≤ K · rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    /// Reported estimate: `stab_gen`, `disco`, `raggi`, `lugua`, `hausdorff`,
    /// `ultimo` or `corollary`.
    pub theorem: &'static str,
    pub row: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub k: f64,
    pub product: f64,
    /// `lhs / product`; 0 when both vanish, infinite when only `product` does.
    pub ratio: f64,
    pub pass: bool,
    pub n: usize,
    pub alignment: AlignmentMode,
    pub m: f64,
    pub m0: f64,
    pub m1: f64,
    pub l1: f64,
    pub l2: f64,
    pub alpha: f64,
    /// Hypothesis violations found while assembling the constants.
    pub violations: Vec<String>,
}

pub const CSV_HEADER: &str = "theorem,row,lhs,rhs,K,product,ratio,pass,n,alignment,m,M0,M1,L1,L2,alpha";

impl StabilityReport {
    fn new(theorem: &'static str, row: &'static str, lhs: f64, rhs: f64, k: f64, meta: &Meta) -> Self {
        let product = k * rhs;
        let ratio = if product > 0.0 {
            lhs / product
        } else if lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        let b = &meta.bundle;
        StabilityReport {
            theorem,
            row,
            lhs,
            rhs,
            k,
            product,
            ratio,
            pass: ratio <= 1.0 + PASS_TOL,
            n: meta.n,
            alignment: meta.alignment,
            m: b.m,
            m0: b.m0,
            m1: b.m1,
            l1: b.l1,
            l2: b.l2,
            alpha: b.alpha,
            violations: meta.violations.clone(),
        }
    }

    /// Fields in [`CSV_HEADER`] order, floats in fixed 17-digit scientific form.
    pub fn csv_row(&self) -> String {
        let e = |v: f64| format!("{v:.16e}");
        [
            self.theorem.to_string(),
            self.row.to_string(),
            e(self.lhs),
            e(self.rhs),
            e(self.k),
            e(self.product),
            e(self.ratio),
            self.pass.to_string(),
            self.n.to_string(),
            self.alignment.as_str().to_string(),
            e(self.m),
            e(self.m0),
            e(self.m1),
            e(self.l1),
            e(self.l2),
            e(self.alpha),
        ]
        .join(",")
    }
}

struct Meta {
    bundle: ConstantsBundle,
    n: usize,
    alignment: AlignmentMode,
    violations: Vec<String>,
}

/// A map with its forward data `φ` (uniform arclength grid) and the
/// pushforward `ψ` (uniform circle grid, same size).
#[derive(Debug, Clone)]
pub struct PreparedMap {
    map: ConformalMap,
    phi: BoundaryFunction,
    psi: CircleFunction,
}

impl PreparedMap {
    pub fn from_map(map: ConformalMap, n: usize) -> Result<Self> {
        let phi = map.forward_operator(n)?;
        Self::from_data(map, phi)
    }

    /// Pairs a map with externally supplied data `φ` (e.g. the data the map
    /// was reconstructed from).
    pub fn from_data(map: ConformalMap, phi: BoundaryFunction) -> Result<Self> {
        let cm = boundary::build_cumulative(&phi)?;
        let psi = boundary::pushforward(&phi, &cm, phi.len())?;
        Ok(PreparedMap { map, phi, psi })
    }

    /// Rotates the domain about `ζ_o`; the data are unchanged.
    pub fn rotated(&self, gamma: f64) -> Self {
        PreparedMap { map: self.map.rotated(gamma), phi: self.phi.clone(), psi: self.psi.clone() }
    }

    pub fn map(&self) -> &ConformalMap {
        &self.map
    }

    pub fn phi(&self) -> &BoundaryFunction {
        &self.phi
    }

    pub fn psi(&self) -> &CircleFunction {
        &self.psi
    }

    pub fn n(&self) -> usize {
        self.phi.len()
    }

    pub fn length(&self) -> f64 {
        self.phi.length()
    }
}

/// Measured class constants of one datum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMeasurement {
    pub min: f64,
    pub seminorm0: f64,
    /// `‖φ‖_{0,α} = ‖φ‖∞ + [φ]_{0,α}`.
    pub norm0: f64,
    /// `‖φ‖_{1,α} = ‖φ‖∞ + ‖φ'‖∞ + [φ']_{0,α}`.
    pub norm1: f64,
    pub length: f64,
}

pub fn measure_class(d: &PreparedMap, alpha: f64) -> Result<ClassMeasurement> {
    let phi = d.phi();
    let length = phi.length();
    let fine = FourierSeries::from_samples(phi.samples(), length).resample(OVERSAMPLE * phi.len());
    let min = fine.iter().chain(phi.samples()).copied().fold(f64::INFINITY, f64::min);
    let sup = sup_periodic(phi.samples(), length);
    let seminorm0 = norms::holder_seminorm(&phi.as_sampled(), alpha)?;
    let dphi = phi.derivative_samples();
    let seminorm1 = norms::holder_seminorm(&periodic(dphi.clone(), length)?, alpha)?;
    Ok(ClassMeasurement {
        min,
        seminorm0,
        norm0: sup + seminorm0,
        norm1: sup + sup_periodic(&dphi, length) + seminorm1,
        length,
    })
}

fn periodic(values: Vec<f64>, period: f64) -> Result<SampledFunction> {
    SampledFunction::periodic_uniform(values, period)
}

/// Sup of `|v|` over the samples and their trigonometric interpolant on an
/// `OVERSAMPLE`-times finer grid.
fn sup_periodic(values: &[f64], period: f64) -> f64 {
    let nodal = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if values.len() < 4 {
        return nodal;
    }
    let fine = FourierSeries::from_samples(values, period).resample(OVERSAMPLE * values.len());
    fine.iter().fold(nodal, |a, v| a.max(v.abs()))
}

fn diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `(value, violation)`: a lower-bound hypothesis is usable only if it does
/// not exceed the measured value; an upper bound only if it is not below it.
fn resolve(name: &str, measured: f64, supplied: Option<f64>, is_lower: bool) -> (f64, Option<String>) {
    match supplied {
        None => (measured, None),
        Some(v) => {
            let ok = if is_lower { v <= measured } else { v >= measured };
            if ok && v > 0.0 && v.is_finite() {
                (v, None)
            } else {
                let rel = if is_lower { "above" } else { "below" };
                (measured, Some(format!("{name} = {v} is {rel} the measured {measured}; using the measured value")))
            }
        }
    }
}

fn assemble(
    alpha: f64,
    measured: [f64; 5],
    lengths: (f64, f64),
    ov: &ConstantOverrides,
) -> Result<(ConstantsBundle, Vec<String>)> {
    let [m, m0, m1, p, pp] = measured;
    let mut violations = Vec::new();
    let mut take = |name: &str, measured: f64, supplied: Option<f64>, lower: bool| {
        let (v, msg) = resolve(name, measured, supplied, lower);
        violations.extend(msg);
        v
    };
    let m = take("m", m, ov.m, true);
    let m0 = take("M0", m0, ov.m0, false);
    // [φ]_{0,α} ≤ ‖φ‖_{0,α} must also be bounded by M1
    let m1 = take("M1", m1.max(m0), ov.m1, false);
    let p = take("p", p, ov.p, true);
    let pp = take("P", pp, ov.pp, false);
    let bundle = ConstantsBundle::new(alpha, m, m0, m1, lengths.0, lengths.1, p, pp)?;
    violations.extend(bundle.violations());
    Ok((bundle, violations))
}

/// Bundle for a pair of data: `m` is the smaller minimum, `M0`, `M1` the
/// larger norms, `p`, `P` the perimeter extrema.
pub fn pair_bundle(d1: &PreparedMap, d2: &PreparedMap, opts: &CheckOptions) -> Result<(ConstantsBundle, Vec<String>)> {
    let a = measure_class(d1, opts.alpha)?;
    let b = measure_class(d2, opts.alpha)?;
    let measured = [
        a.min.min(b.min),
        a.norm0.max(b.norm0),
        a.norm1.max(b.norm1),
        a.length.min(b.length),
        a.length.max(b.length),
    ];
    assemble(opts.alpha, measured, (a.length, b.length), &opts.overrides)
}

/// Bundle for one datum compared with the constant `c`, which must lie in
/// `[m, M0]`; the measured range is widened to contain it.
fn constant_bundle(d: &PreparedMap, c: f64, opts: &CheckOptions) -> Result<(ConstantsBundle, Vec<String>)> {
    let a = measure_class(d, opts.alpha)?;
    let measured = [a.min.min(c), a.norm0.max(c), a.norm1, a.length, a.length];
    assemble(opts.alpha, measured, (a.length, a.length), &opts.overrides)
}

fn check_same_grid(d1: &PreparedMap, d2: &PreparedMap) -> Result<usize> {
    if d1.n() != d2.n() {
        return Err(Error::invalid(format!("grid sizes differ: {} vs {}", d1.n(), d2.n())));
    }
    if d1.map().zeta_o() != d2.map().zeta_o() {
        return Err(Error::invalid("maps must share the pole zeta_o"));
    }
    Ok(d1.n())
}

/// Seminorm rows on the circle: `[ψ_j] ≤ M0/(2πm)^α` for both data, and
/// `[h] ≤ C₁‖ψ₁ − ψ₂‖∞ + C₂[ψ₁ − ψ₂]`, as `(row, lhs, rhs, K)`.
pub fn seminorm_bounds(
    psi1: &CircleFunction,
    psi2: &CircleFunction,
    bundle: &ConstantsBundle,
) -> Result<Vec<(&'static str, f64, f64, f64)>> {
    let (v1, v2) = (psi1.values(), psi2.values());
    if v1.len() != v2.len() {
        return Err(Error::invalid("circle grids differ in size"));
    }
    if v1.iter().chain(v2).any(|v| !(*v > 0.0)) {
        return Err(Error::invalid("psi must be strictly positive for log psi"));
    }
    let alpha = bundle.alpha;
    let k = (TWO_PI * bundle.m).powf(-alpha);
    let s1 = norms::holder_seminorm(&psi1.as_sampled(), alpha)?;
    let s2 = norms::holder_seminorm(&psi2.as_sampled(), alpha)?;
    let h: Vec<f64> = v1.iter().zip(v2).map(|(a, b)| a.ln() - b.ln()).collect();
    let h_sem = norms::holder_seminorm(&periodic(h, TWO_PI)?, alpha)?;
    let d = diff(v1, v2);
    let d_sup = sup_periodic(&d, TWO_PI);
    let d_sem = norms::holder_seminorm(&periodic(d, TWO_PI)?, alpha)?;
    Ok(vec![
        ("psi_seminorm_1", s1, bundle.m0, k),
        ("psi_seminorm_2", s2, bundle.m0, k),
        ("log_ratio_seminorm", h_sem, bundle.c1() * d_sup + bundle.c2() * d_sem, 1.0),
    ])
}

/// General estimate `‖f₁ − f₂‖_{1,0,∂D} ≤ K‖ψ₁ − ψ₂‖_{0,α,[0,2π]}` with its
/// two seminorm estimates.
pub fn check_stab_gen(d1: &PreparedMap, d2: &PreparedMap, opts: &CheckOptions) -> Result<Vec<StabilityReport>> {
    let n = check_same_grid(d1, d2)?;
    let (bundle, violations) = pair_bundle(d1, d2, opts)?;
    let meta = Meta { bundle, n, alignment: opts.alignment, violations };
    let aligned = geometry::align_rotation(d1.map(), d2.map(), opts.alignment, n)?;
    let lhs = boundary_c1_distance(d1.map(), &aligned.rotated, OVERSAMPLE * n)?;
    let d = diff(d1.psi().values(), d2.psi().values());
    let rhs = sup_periodic(&d, TWO_PI) + norms::holder_seminorm(&periodic(d, TWO_PI)?, opts.alpha)?;
    let mut out: Vec<StabilityReport> = seminorm_bounds(d1.psi(), d2.psi(), &bundle)?
        .into_iter()
        .map(|(row, l, r, k)| StabilityReport::new("stab_gen", row, l, r, k, &meta))
        .collect();
    out.push(StabilityReport::new("stab_gen", "main", lhs, rhs, bundle.k_stab(), &meta));
    Ok(out)
}

/// `‖φ − C‖_{0,α,[0,L]}`.
fn distance_to_constant(phi: &BoundaryFunction, c: f64, alpha: f64) -> Result<f64> {
    let d: Vec<f64> = phi.samples().iter().map(|v| v - c).collect();
    Ok(sup_periodic(&d, phi.length()) + norms::holder_seminorm(&periodic(d, phi.length())?, alpha)?)
}

/// Near-disk estimate `‖f − f_C‖_{1,0,∂D} ≤ K(1 + (2πm)^{−α})‖φ − C‖_{0,α,[0,L]}`
/// with `f_C(z) = ζ_o + e^{iγ} z/(2πC)`.
pub fn check_disco(d: &PreparedMap, c: f64, opts: &CheckOptions) -> Result<StabilityReport> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid(format!("disk datum C must be positive, got {c}")));
    }
    let n = d.n();
    let (bundle, mut violations) = constant_bundle(d, c, opts)?;
    let cls = measure_class(d, opts.alpha)?;
    if c < cls.min || c > cls.norm0 {
        violations.push(format!("C = {c} outside the measured [m, M0] = [{}, {}]", cls.min, cls.norm0));
    }
    let meta = Meta { bundle, n, alignment: opts.alignment, violations };
    let disk = ConformalMap::disk(d.map().zeta_o(), 1.0 / (TWO_PI * c), 0.0);
    let aligned = geometry::align_rotation(d.map(), &disk, opts.alignment, n)?;
    let lhs = boundary_c1_distance(d.map(), &aligned.rotated, OVERSAMPLE * n)?;
    let rhs = distance_to_constant(d.phi(), c, opts.alpha)?;
    Ok(StabilityReport::new("disco", "main", lhs, rhs, bundle.k_disco(), &meta))
}

/// `R − ρ ≤ K‖φ − 1/(2πρ)‖_{0,α,[0,L]}` with radii centered at `ζ_o`, plus
/// the same bound for the free-center radii (whose gap is never larger).
pub fn check_raggi(d: &PreparedMap, opts: &CheckOptions) -> Result<Vec<StabilityReport>> {
    let n = d.n();
    let b = DomainBoundary::from_map(d.map(), n)?;
    let (rho, r) = geometry::inradius_circumradius(&b);
    let (rho_free, r_free) = geometry::free_center_radii(&b);
    let c = 1.0 / (TWO_PI * rho);
    let (bundle, violations) = constant_bundle(d, c, opts)?;
    let meta = Meta { bundle, n, alignment: opts.alignment, violations };
    let rhs = distance_to_constant(d.phi(), c, opts.alpha)?;
    let k = bundle.k_disco();
    Ok(vec![
        StabilityReport::new("raggi", "main", r - rho, rhs, k, &meta),
        StabilityReport::new("raggi", "free_centers", r_free - rho_free, rhs, k, &meta),
    ])
}

/// Measurements shared by the same- and different-perimeter checks, on the
/// common interval `[0, L]`, `L = (L₁ + L₂)/2`.
struct PairMeasurements {
    /// `sup_θ |ŝ₁(θ) − ŝ₂(θ)|`, `ŝ_j = (L/L_j)Φ_j⁻¹`.
    shift: f64,
    dphi: f64,
    dphi_prime: f64,
    phi1_sup: f64,
    dpsi: f64,
    dpsi_seminorm: f64,
    dpsi_prime: f64,
    c1_distance: f64,
    hausdorff: f64,
}

fn measure_pair(d1: &PreparedMap, d2: &PreparedMap, opts: &CheckOptions, n: usize) -> Result<PairMeasurements> {
    let (h1, h2, l) = boundary::rescale_to_common_interval(d1.phi(), d2.phi())?;
    let (sc1, sc2) = (l / d1.length(), l / d2.length());
    let ds: Vec<f64> = d1
        .psi()
        .arclengths()
        .iter()
        .zip(d2.psi().arclengths())
        .map(|(a, b)| sc1 * a - sc2 * b)
        .collect();
    let dpsi = diff(d1.psi().values(), d2.psi().values());
    let dpsi_prime = diff(&d1.psi().derivative(), &d2.psi().derivative());
    let aligned = geometry::align_rotation(d1.map(), d2.map(), opts.alignment, n)?;
    let b1 = DomainBoundary::from_map(d1.map(), n)?;
    let b2 = DomainBoundary::from_map(&aligned.rotated, n)?;
    Ok(PairMeasurements {
        shift: sup_periodic(&ds, TWO_PI),
        dphi: sup_periodic(&diff(h1.samples(), h2.samples()), l),
        dphi_prime: sup_periodic(&diff(&h1.derivative_samples(), &h2.derivative_samples()), l),
        phi1_sup: sup_periodic(h1.samples(), l),
        dpsi: sup_periodic(&dpsi, TWO_PI),
        dpsi_seminorm: norms::holder_seminorm(&periodic(dpsi, TWO_PI)?, opts.alpha)?,
        dpsi_prime: sup_periodic(&dpsi_prime, TWO_PI),
        c1_distance: boundary_c1_distance(d1.map(), &aligned.rotated, OVERSAMPLE * n)?,
        hausdorff: geometry::hausdorff_distance(&b1, &b2).distance,
    })
}

/// Same-perimeter estimate `‖f₁ − f₂‖ ≤ K(‖Δφ‖∞^α + ‖Δφ'‖∞)` with its
/// intermediate displays, and `d_H ≤ K‖Δφ‖_{1,0}^α`.
pub fn check_lugua_hausdorff(d1: &PreparedMap, d2: &PreparedMap, opts: &CheckOptions) -> Result<Vec<StabilityReport>> {
    let n = check_same_grid(d1, d2)?;
    let (l1, l2) = (d1.length(), d2.length());
    if (l1 - l2).abs() > PERIMETER_TOL * l1.max(l2) {
        return Err(Error::PerimeterMismatch { l1, l2 });
    }
    let (bundle, violations) = pair_bundle(d1, d2, opts)?;
    let meta = Meta { bundle, n, alignment: opts.alignment, violations };
    let pm = measure_pair(d1, d2, opts, n)?;
    let a = opts.alpha;
    let x = pm.dphi.powf(a);
    let row = |row, lhs, rhs, k| StabilityReport::new("lugua", row, lhs, rhs, k, &meta);
    Ok(vec![
        row("arclength_shift", pm.shift, pm.dphi, bundle.l() / bundle.m),
        row("psi_sup", pm.dpsi, x, bundle.psi_sup_factor()),
        row("psi_seminorm_by_derivative", pm.dpsi_seminorm, pm.dpsi_prime, TWO_PI.powf(1.0 - a)),
        row(
            "psi_derivative",
            TWO_PI * pm.dpsi_prime,
            bundle.psi_derivative_factor() * x + pm.dphi_prime / bundle.m,
            1.0,
        ),
        row("main", pm.c1_distance, x + pm.dphi_prime, bundle.k_lugua()),
        StabilityReport::new("hausdorff", "main", pm.hausdorff, (pm.dphi + pm.dphi_prime).powf(a), bundle.k_hausdorff(), &meta),
    ])
}

/// Different-perimeter estimate
/// `‖f₁ − f₂‖ ≤ K(E^α + ‖φ̂'₁ − φ̂'₂‖∞)`, `E = |L₁ − L₂|/P + ‖φ̂₁ − φ̂₂‖∞/M₁`,
/// with its intermediate displays and the Hausdorff form.
pub fn check_ultimo(d1: &PreparedMap, d2: &PreparedMap, opts: &CheckOptions) -> Result<Vec<StabilityReport>> {
    let n = check_same_grid(d1, d2)?;
    let (bundle, violations) = pair_bundle(d1, d2, opts)?;
    let meta = Meta { bundle, n, alignment: opts.alignment, violations };
    let pm = measure_pair(d1, d2, opts, n)?;
    let a = opts.alpha;
    let (l1, l2, l) = (bundle.l1, bundle.l2, bundle.l());
    let dl = (l1 - l2).abs();
    let e = dl / bundle.pp + pm.dphi / bundle.m1;
    let ea = e.powf(a);
    let row = |row, lhs, rhs, k| StabilityReport::new("ultimo", row, lhs, rhs, k, &meta);
    Ok(vec![
        // (L₁/L) m |ŝ₁ − ŝ₂| ≤ |L₁ − L₂|‖φ̂₁‖∞ + L₂‖φ̂₁ − φ̂₂‖∞
        row("arclength_shift_raw", (l1 / l) * bundle.m * pm.shift, dl * pm.phi1_sup + l2 * pm.dphi, 1.0),
        row("arclength_shift", pm.shift, e, bundle.arclength_shift_factor()),
        row("psi_sup", pm.dpsi, ea, bundle.k1()),
        row("psi_seminorm_by_derivative", pm.dpsi_seminorm, pm.dpsi_prime, TWO_PI.powf(1.0 - a)),
        row(
            "psi_derivative",
            TWO_PI * pm.dpsi_prime,
            bundle.k2() * ea + bundle.pp / (bundle.p * bundle.m) * pm.dphi_prime,
            1.0,
        ),
        row("main", pm.c1_distance, ea + pm.dphi_prime, bundle.k_ultimo()),
        StabilityReport::new("corollary", "hausdorff", pm.hausdorff, (pm.dphi + dl).powf(a) + pm.dphi_prime, bundle.k_corollary(), &meta),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly(coeffs: &[(usize, f64)]) -> ConformalMap {
        let deg = coeffs.iter().map(|(k, _)| *k).max().unwrap();
        let mut a = vec![c(0.0, 0.0); deg + 1];
        for (k, v) in coeffs {
            a[*k] = c(*v, 0.0);
        }
        ConformalMap::new(a).unwrap()
    }

    fn prepared(coeffs: &[(usize, f64)], n: usize) -> PreparedMap {
        PreparedMap::from_map(poly(coeffs), n).unwrap()
    }

    fn all_pass(rows: &[StabilityReport]) {
        for r in rows {
            assert!(r.pass, "{} {}: lhs {} > {} * {}", r.theorem, r.row, r.lhs, r.k, r.rhs);
            assert!(r.lhs.is_finite() && r.rhs.is_finite() && r.k.is_finite());
        }
    }

    #[test]
    fn c_alpha_closed_form_at_one() {
        let v = c_alpha(1.0).unwrap();
        assert!((v - 2f64.ln() / PI).abs() < 1e-12);
        // independent oracle: ∫₀^π t cot(t/2) dt by midpoint rule with Richardson
        let mid = |n: usize| {
            let h = PI / n as f64;
            (0..n).map(|k| {
                let t = (k as f64 + 0.5) * h;
                t / (0.5 * t).tan()
            }).sum::<f64>() * h
        };
        let rich = (4.0 * mid(20000) - mid(10000)) / 3.0;
        assert!((2.0 / (4.0 * PI * PI) * rich - v).abs() < 1e-9);
    }

    #[test]
    fn c_alpha_refinement_is_stable() {
        for alpha in [0.25, 0.5, 0.75, 1.0] {
            let a = c_alpha_with_tol(alpha, 1e-12).unwrap();
            let b = c_alpha_with_tol(alpha, 1e-14).unwrap();
            assert!(a > 0.0 && a.is_finite());
            assert!((a - b).abs() < 1e-12, "alpha {alpha}: {a} vs {b}");
        }
        assert!(c_alpha(0.0).is_err());
        assert!(c_alpha(1.5).is_err());
    }

    #[test]
    fn k_stab_monotone_in_class_constants() {
        let ms = [0.05, 0.1, 0.15];
        let m0s = [0.2, 0.4, 0.8];
        let k = |m: f64, m0: f64| ConstantsBundle::single(0.5, m, m0, m0, 1.0).unwrap().k_stab();
        for i in 0..3 {
            for j in 0..3 {
                if i + 1 < 3 {
                    assert!(k(ms[i + 1], m0s[j]) < k(ms[i], m0s[j]));
                }
                if j + 1 < 3 {
                    assert!(k(ms[i], m0s[j + 1]) > k(ms[i], m0s[j]));
                }
            }
        }
    }

    fn arb_bundle() -> impl Strategy<Value = ConstantsBundle> {
        (0.05f64..1.0, 0.02f64..0.5, 1.0f64..4.0, 1.0f64..3.0, 1.0f64..10.0, 0.0f64..0.3, 0.0f64..0.3)
            .prop_map(|(alpha, m, r0, r1, l, dl, slack)| {
                let m0 = m * r0;
                let l2 = l * (1.0 + dl);
                ConstantsBundle::new(alpha, m, m0, m0 * r1, l, l2, l * (1.0 - slack), l2 * (1.0 + slack)).unwrap()
            })
    }

    proptest! {
        // Chaining the individual displays at equality never exceeds the
        // assembled constant.
        #[test]
        fn k_stab_dominates_its_displays(b in arb_bundle(), sup in 0.0f64..1.0, sem in 0.0f64..1.0) {
            let m = b.m;
            let h = b.c1() * sup + b.c2() * sem;
            let fprime = sup / (TWO_PI * m * m) + b.c_alpha / m * h;
            prop_assert!(2.0 * fprime <= b.k_stab() * (sup + sem) * (1.0 + 1e-12));
        }

        #[test]
        fn k_lugua_dominates_its_displays(b0 in arb_bundle(), t in 0.0f64..1.0, u in 0.0f64..1.0) {
            let b = ConstantsBundle { l2: b0.l1, p: b0.l1, pp: b0.l1, ..b0 };
            let a = b.alpha;
            // both differences are bounded by 2M₁ in the class
            let x = t * 2.0 * b.m1;
            let y = u * 2.0 * b.m1;
            let psi_sup = b.psi_sup_factor() * x.powf(a);
            let two_pi_dpsi = (b.m1 / b.m) * (b.l() / b.m).powf(a) * x.powf(a)
                + (b.m1 / (b.m * b.m)) * psi_sup
                + y / b.m;
            let sem = TWO_PI.powf(1.0 - a) * two_pi_dpsi / TWO_PI;
            let f = b.k_stab() * (psi_sup + sem);
            prop_assert!(f <= b.k_lugua() * (x.powf(a) + y) * (1.0 + 1e-12));
            prop_assert!(f <= b.k_hausdorff() * (x + y).powf(a) * (1.0 + 1e-12));
        }

        #[test]
        fn k_ultimo_dominates_its_displays(b in arb_bundle(), t in 0.0f64..1.0, y in 0.0f64..5.0) {
            let (a, m, m1, p, pp) = (b.alpha, b.m, b.m1, b.p, b.pp);
            let l = b.l();
            let dl = (b.l1 - b.l2).abs();
            let dphi = t * 2.0 * m1;
            let e = dl / pp + dphi / m1;
            // shift display, then the per-term bounds
            let shift = (l / b.l1) / m * (dl * m1 + b.l2 * dphi);
            prop_assert!(shift <= b.arclength_shift_factor() * e * (1.0 + 1e-12));
            let semi1 = (b.l1 / l).powf(a) * m1;
            let psi_sup = semi1 * shift.powf(a) + dphi;
            prop_assert!(psi_sup <= b.k1() * e.powf(a) * (1.0 + 1e-12));
            let r = pp / p;
            let semi1p = (b.l1 / l).powf(a + 1.0) * m1;
            let sup1p = (b.l1 / l) * m1;
            let ratio_gap = (l / b.l1 - l / b.l2).abs() * sup1p / m;
            let inner = semi1p * shift.powf(a) / m + sup1p * b.k1() * e.powf(a) / (m * m) + y / m;
            let two_pi_dpsi = ratio_gap + (l / b.l2) * inner;
            prop_assert!(two_pi_dpsi <= (b.k2() * e.powf(a) + r / m * y) * (1.0 + 1e-12));
            let f = b.k_stab() * (b.k1() * e.powf(a) + TWO_PI.powf(-a) * (b.k2() * e.powf(a) + r / m * y));
            prop_assert!(f <= b.k_ultimo() * (e.powf(a) + y) * (1.0 + 1e-12));
            let g = (dphi + dl).powf(a) + y;
            prop_assert!(b.k_ultimo() * (e.powf(a) + y) <= b.k_corollary() * g * (1.0 + 1e-12));
        }
    }

    #[test]
    fn identical_maps_pass_with_zero_lhs() {
        let d = prepared(&[(1, 1.0), (2, 0.05)], 128);
        let opts = CheckOptions::default();
        let rows = check_stab_gen(&d, &d, &opts).unwrap();
        all_pass(&rows);
        assert_eq!(rows.last().unwrap().lhs, 0.0);
        let rows = check_lugua_hausdorff(&d, &d, &opts).unwrap();
        all_pass(&rows);
        for r in &rows {
            assert_eq!(r.lhs, 0.0, "{}", r.row);
        }
    }

    #[test]
    fn disks_of_different_radius_closed_form() {
        let (r1, r2) = (1.0, 1.3);
        let d1 = PreparedMap::from_map(ConformalMap::disk(c(0.0, 0.0), r1, 0.0), 64).unwrap();
        let d2 = PreparedMap::from_map(ConformalMap::disk(c(0.0, 0.0), r2, 0.0), 64).unwrap();
        let rows = check_stab_gen(&d1, &d2, &CheckOptions::default()).unwrap();
        all_pass(&rows);
        let main = rows.last().unwrap();
        assert!((main.lhs - 2.0 * (r2 - r1)).abs() < 1e-12);
        let dpsi = 1.0 / (TWO_PI * r1) - 1.0 / (TWO_PI * r2);
        assert!((main.rhs - dpsi).abs() < 1e-12);
    }

    #[test]
    fn disk_against_itself_as_constant() {
        let d = PreparedMap::from_map(ConformalMap::disk(c(0.3, -0.2), 0.8, 0.4), 64).unwrap();
        let r = check_disco(&d, 1.0 / (TWO_PI * 0.8), &CheckOptions::default()).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.lhs < 1e-14 && r.rhs < 1e-14);
        let rows = check_raggi(&d, &CheckOptions::default()).unwrap();
        all_pass(&rows);
        assert!(rows[0].lhs.abs() < 1e-14);
    }

    #[test]
    fn raggi_quadratic_closed_form() {
        let d = prepared(&[(1, 1.0), (2, 0.1)], 512);
        let rows = check_raggi(&d, &CheckOptions::default()).unwrap();
        all_pass(&rows);
        assert!((rows[0].lhs - 0.2).abs() < 1e-10);
        assert!(rows[1].lhs <= rows[0].lhs);
    }

    #[test]
    fn disco_quadratic_passes() {
        let d = prepared(&[(1, 1.0), (2, 0.1)], 256);
        for alpha in [0.5, 1.0] {
            let opts = CheckOptions { alpha, ..Default::default() };
            let r = check_disco(&d, 1.0 / TWO_PI, &opts).unwrap();
            assert!(r.pass, "{r:?}");
            assert!(r.violations.is_empty(), "{:?}", r.violations);
        }
    }

    #[test]
    fn lugua_rejects_perimeter_mismatch() {
        let d1 = prepared(&[(1, 1.0)], 64);
        let d2 = prepared(&[(1, 1.1)], 64);
        assert!(matches!(
            check_lugua_hausdorff(&d1, &d2, &CheckOptions::default()),
            Err(Error::PerimeterMismatch { .. })
        ));
    }

    #[test]
    fn ultimo_of_two_disks() {
        let d1 = PreparedMap::from_map(ConformalMap::disk(c(0.0, 0.0), 1.0, 0.0), 64).unwrap();
        let d2 = PreparedMap::from_map(ConformalMap::disk(c(0.0, 0.0), 1.05, 0.0), 64).unwrap();
        let rows = check_ultimo(&d1, &d2, &CheckOptions::default()).unwrap();
        all_pass(&rows);
        let get = |name: &str| rows.iter().find(|r| r.row == name).unwrap();
        // ŝ_j(θ) = Lθ/2π for both disks, ψ_j constant
        // Φ⁻¹ is resolved to INVERSION_TOL in θ, i.e. about 1.05·INVERSION_TOL in s
        assert!(get("arclength_shift").lhs < 2.0 * boundary::INVERSION_TOL);
        assert!((get("psi_sup").lhs - (1.0 / TWO_PI - 1.0 / (TWO_PI * 1.05))).abs() < 1e-14);
        assert!(get("psi_derivative").lhs < 1e-12);
        assert!((get("main").lhs - 0.1).abs() < 1e-12);
        assert!((get("hausdorff").lhs - 0.05).abs() < 1e-12);
        let b = ConstantsBundle::new(0.5, 1.0 / (TWO_PI * 1.05), 1.0 / TWO_PI, 1.0 / TWO_PI, TWO_PI, 2.1 * PI, TWO_PI, 2.1 * PI).unwrap();
        assert!((get("main").k - b.k_ultimo()).abs() < 1e-9 * b.k_ultimo());
    }

    #[test]
    fn ultimo_reduces_to_lugua_for_equal_perimeters() {
        let f1 = poly(&[(1, 1.0), (2, 0.08)]);
        let f2 = poly(&[(1, 1.0), (3, 0.04)]);
        let n = 256;
        let l1 = f1.arclength(n).unwrap().length;
        let l2 = f2.arclength(n).unwrap().length;
        let d1 = PreparedMap::from_map(f1, n).unwrap();
        let d2 = PreparedMap::from_map(f2.scaled(l1 / l2), n).unwrap();
        let opts = CheckOptions::default();
        let lug = check_lugua_hausdorff(&d1, &d2, &opts).unwrap();
        let ult = check_ultimo(&d1, &d2, &opts).unwrap();
        all_pass(&lug);
        all_pass(&ult);
        for name in ["arclength_shift", "psi_sup", "psi_seminorm_by_derivative", "psi_derivative", "main"] {
            let a = lug.iter().find(|r| r.row == name).unwrap();
            let b = ult.iter().find(|r| r.row == name).unwrap();
            assert!((a.lhs - b.lhs).abs() <= 1e-10 * (1.0 + a.lhs.abs()), "{name}");
        }
    }

    #[test]
    fn overrides_are_used_only_when_valid() {
        let d = prepared(&[(1, 1.0), (2, 0.1)], 128);
        let cls = measure_class(&d, 0.5).unwrap();
        let ok = CheckOptions { overrides: ConstantOverrides { m: Some(0.5 * cls.min), ..Default::default() }, ..Default::default() };
        let (b, v) = pair_bundle(&d, &d, &ok).unwrap();
        assert_eq!(b.m, 0.5 * cls.min);
        assert!(v.is_empty());
        let bad = CheckOptions { overrides: ConstantOverrides { m: Some(2.0 * cls.min), ..Default::default() }, ..Default::default() };
        let (b, v) = pair_bundle(&d, &d, &bad).unwrap();
        assert_eq!(b.m, cls.min);
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn rotation_sound() {
        let d1 = prepared(&[(1, 1.0), (2, 0.1)], 128);
        let d2 = prepared(&[(1, 1.05), (3, 0.05)], 128);
        let opts = CheckOptions::default();
        let base = check_ultimo(&d1, &d2, &opts).unwrap();
        let rot = check_ultimo(&d1.rotated(0.77), &d2.rotated(0.77), &opts).unwrap();
        for (a, b) in base.iter().zip(&rot) {
            for (x, y) in [(a.lhs, b.lhs), (a.rhs, b.rhs), (a.k, b.k), (a.ratio, b.ratio)] {
                assert!((x - y).abs() <= 1e-9, "{}: {x} vs {y}", a.row);
            }
        }
    }

    #[test]
    fn csv_row_has_header_arity() {
        let d = prepared(&[(1, 1.0), (2, 0.1)], 64);
        let r = check_disco(&d, 1.0 / TWO_PI, &CheckOptions::default()).unwrap();
        assert_eq!(r.csv_row().split(',').count(), CSV_HEADER.split(',').count());
    }
}
