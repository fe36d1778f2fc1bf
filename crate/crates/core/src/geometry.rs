//! Set geometry on sampled boundaries: radii about the pole, Hausdorff
//! distance, and rotation alignment of maps about `ζ_o`.

use crate::conformal::ConformalMap;
use crate::error::{Error, Result};
use crate::solve;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use std::f64::consts::PI;

const TWO_PI: f64 = 2.0 * PI;
pub const WINDING_TOL: f64 = 1e-6;
/// Number of rotation angles scanned before golden-section refinement.
pub const ALIGNMENT_GRID: usize = 4096;

/// Closed boundary polyline (the last point connects back to the first).
#[derive(Debug, Clone)]
pub struct DomainBoundary {
    points: Vec<Complex64>,
    zeta_o: Complex64,
    arclengths: Vec<f64>,
}

impl DomainBoundary {
    pub fn new(points: Vec<Complex64>, zeta_o: Complex64) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::invalid("boundary polyline needs at least three points"));
        }
        let mut arclengths = Vec::with_capacity(points.len() + 1);
        arclengths.push(0.0);
        let mut acc = 0.0;
        for k in 0..points.len() {
            let step = (points[(k + 1) % points.len()] - points[k]).norm();
            if !(step > 0.0) {
                return Err(Error::invalid(format!("repeated boundary point at index {k}")));
            }
            acc += step;
            arclengths.push(acc);
        }
        let b = DomainBoundary { points, zeta_o, arclengths };
        let w = b.winding_number();
        if (w - 1.0).abs() > WINDING_TOL {
            return Err(Error::invalid(format!("pole has winding number {w:.6} with respect to the boundary")));
        }
        Ok(b)
    }

    /// Samples `f(e^{iθ_k})` on `n` nodes.
    pub fn from_map(f: &ConformalMap, n: usize) -> Result<Self> {
        Self::new(f.eval_boundary(n)?, f.zeta_o())
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn zeta_o(&self) -> Complex64 {
        self.zeta_o
    }

    /// Cumulative polyline arclength at each vertex, closed with the perimeter.
    pub fn arclengths(&self) -> &[f64] {
        &self.arclengths
    }

    pub fn perimeter(&self) -> f64 {
        *self.arclengths.last().expect("nonempty")
    }

    /// Total turning of `p_k − ζ_o` over the closed polyline, in turns.
    pub fn winding_number(&self) -> f64 {
        let n = self.points.len();
        let mut total = 0.0;
        for k in 0..n {
            let a = self.points[k] - self.zeta_o;
            let b = self.points[(k + 1) % n] - self.zeta_o;
            total += (b / a).arg();
        }
        total / TWO_PI
    }

    pub fn max_edge_length(&self) -> f64 {
        let n = self.points.len();
        (0..n).map(|k| (self.points[(k + 1) % n] - self.points[k]).norm()).fold(0.0, f64::max)
    }

    pub fn is_simple(&self) -> bool {
        is_simple_polygon(&self.points)
    }
}

/// `(ρ, R)`: smallest and largest sample distance to `ζ_o`.
pub fn inradius_circumradius(b: &DomainBoundary) -> (f64, f64) {
    b.points.iter().map(|p| (p - b.zeta_o).norm()).fold((f64::INFINITY, 0.0), |(lo, hi), d| (lo.min(d), hi.max(d)))
}

/// `sup_{a∈A} inf_{b∈B} |a − b|` over sample points.
pub fn directed_hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .map(|p| b.iter().map(|q| (p - q).norm_sqr()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
        .sqrt()
}

#[derive(Debug, Clone, Copy)]
pub struct HausdorffDistance {
    pub distance: f64,
    /// Half the longest edge of either polyline: the sampled value is within
    /// this of the distance between the continuous curves.
    pub discretization_bound: f64,
}

pub fn hausdorff_distance(b1: &DomainBoundary, b2: &DomainBoundary) -> HausdorffDistance {
    let distance = directed_hausdorff(&b1.points, &b2.points).max(directed_hausdorff(&b2.points, &b1.points));
    let discretization_bound = 0.5 * b1.max_edge_length().max(b2.max_edge_length());
    HausdorffDistance { distance, discretization_bound }
}

/// Radii of the smallest enclosing disk and the largest sample-free disk with
/// free centers (`(inscribed, enclosing)`), the centers not tied to `ζ_o`.
///
/// The enclosing disk is exact for the sample set (Welzl). The inscribed disk
/// maximizes `min_k |p_k − c|` over centers by compass search started at
/// `ζ_o`, so it never falls below the centered inradius.
pub fn free_center_radii(b: &DomainBoundary) -> (f64, f64) {
    (largest_inscribed_radius(b), smallest_enclosing_circle(&b.points).1)
}

fn circle_two(a: Complex64, b: Complex64) -> (Complex64, f64) {
    let c = (a + b) * 0.5;
    (c, (a - c).norm())
}

fn circle_three(a: Complex64, b: Complex64, c: Complex64) -> Option<(Complex64, f64)> {
    let (bx, by) = (b.re - a.re, b.im - a.im);
    let (cx, cy) = (c.re - a.re, c.im - a.im);
    let d = 2.0 * (bx * cy - by * cx);
    if d.abs() < 1e-300 {
        return None;
    }
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    let center = Complex64::new(a.re + ux, a.im + uy);
    Some((center, (ux * ux + uy * uy).sqrt()))
}

/// Minimum enclosing circle of a point set (iterative Welzl on a fixed-seed
/// shuffle, so results are reproducible).
pub fn smallest_enclosing_circle(points: &[Complex64]) -> (Complex64, f64) {
    let mut pts = points.to_vec();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    pts.shuffle(&mut rng);
    let inside = |c: &(Complex64, f64), p: Complex64| (p - c.0).norm() <= c.1 * (1.0 + 1e-14) + 1e-300;
    let mut circle = (pts[0], 0.0);
    for i in 1..pts.len() {
        if inside(&circle, pts[i]) {
            continue;
        }
        circle = (pts[i], 0.0);
        for j in 0..i {
            if inside(&circle, pts[j]) {
                continue;
            }
            circle = circle_two(pts[i], pts[j]);
            for k in 0..j {
                if inside(&circle, pts[k]) {
                    continue;
                }
                circle = circle_three(pts[i], pts[j], pts[k]).unwrap_or_else(|| {
                    // collinear: the widest pair spans the circle
                    let cands = [circle_two(pts[i], pts[j]), circle_two(pts[i], pts[k]), circle_two(pts[j], pts[k])];
                    cands.into_iter().fold((Complex64::new(0.0, 0.0), 0.0), |a, b| if b.1 > a.1 { b } else { a })
                });
            }
        }
    }
    circle
}

fn largest_inscribed_radius(b: &DomainBoundary) -> f64 {
    // work in a frame anchored at ζ_o and the first sample so the search path
    // is the same for rotated copies of the boundary
    let anchor = b.points[0] - b.zeta_o;
    let unit = anchor.conj() / anchor.norm();
    let pts: Vec<Complex64> = b.points.iter().map(|p| (p - b.zeta_o) * unit).collect();
    let clearance = |c: Complex64| pts.iter().map(|p| (p - c).norm()).fold(f64::INFINITY, f64::min);
    let mut center = Complex64::new(0.0, 0.0);
    let mut best = clearance(center);
    let mut step = 0.25 * best;
    let dirs: Vec<Complex64> = (0..16).map(|k| Complex64::from_polar(1.0, PI * k as f64 / 8.0)).collect();
    while step > 1e-13 * best {
        let mut improved = false;
        for d in &dirs {
            let cand = center + d * step;
            if !point_in_polygon(&pts, cand) {
                continue;
            }
            let v = clearance(cand);
            if v > best {
                best = v;
                center = cand;
                improved = true;
                break;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best
}

/// Even–odd rule point-in-polygon test.
pub fn point_in_polygon(poly: &[Complex64], p: Complex64) -> bool {
    let n = poly.len();
    let mut inside = false;
    for k in 0..n {
        let a = poly[k];
        let b = poly[(k + 1) % n];
        if (a.im > p.im) != (b.im > p.im) {
            let x = a.re + (p.im - a.im) * (b.re - a.re) / (b.im - a.im);
            if p.re < x {
                inside = !inside;
            }
        }
    }
    inside
}

fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    (b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re)
}

fn segments_cross(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    (d1 > 0.0) != (d2 > 0.0) && (d3 > 0.0) != (d4 > 0.0) && d1 != 0.0 && d2 != 0.0 && d3 != 0.0 && d4 != 0.0
}

/// Brute-force check that no two nonadjacent edges of the closed polyline cross.
pub fn is_simple_polygon(points: &[Complex64]) -> bool {
    let n = points.len();
    for i in 0..n {
        let (a, b) = (points[i], points[(i + 1) % n]);
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (c, d) = (points[j], points[(j + 1) % n]);
            if segments_cross(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

/// How the "up to rotations about `ζ_o`" freedom is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlignmentMode {
    /// Match the phases `γ_j` of the integral representations, i.e. make
    /// `arg f₁'(0) = arg f₂'(0)`.
    ProofFaithful,
    /// Minimize `‖f₁ − e^{iγ}(f₂ − ζ_o) − ζ_o‖_{∞,∂D}` over `γ`.
    Optimal,
}

impl AlignmentMode {
    pub fn as_str(self) -> &'static str {
        match self {
            AlignmentMode::ProofFaithful => "proof-faithful",
            AlignmentMode::Optimal => "optimal",
        }
    }
}

impl std::str::FromStr for AlignmentMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "proof-faithful" | "proof" => Ok(AlignmentMode::ProofFaithful),
            "optimal" => Ok(AlignmentMode::Optimal),
            other => Err(Error::invalid(format!("unknown alignment mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Alignment {
    /// Angle applied to `f₂`, in `(−π, π]`.
    pub gamma: f64,
    pub rotated: ConformalMap,
    /// `sup_k |f₁(e^{iθ_k}) − rotated(e^{iθ_k})|`.
    pub residual: f64,
}

fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TWO_PI);
    if w > PI { w - TWO_PI } else { w }
}

/// `arg f'(0)`: the phase `γ` of the integral representation of `f'`, since
/// the Poisson mean term of the exponent is real.
pub fn representation_phase(f: &ConformalMap) -> f64 {
    f.coefficients()[1].arg()
}

pub fn align_rotation(f1: &ConformalMap, f2: &ConformalMap, mode: AlignmentMode, n: usize) -> Result<Alignment> {
    if (f1.zeta_o() - f2.zeta_o()).norm() > 1e-12 * (1.0 + f1.zeta_o().norm()) {
        return Err(Error::invalid("maps must share the pole zeta_o"));
    }
    let n = n.max(2 * f1.degree()).max(2 * f2.degree());
    let zo = f1.zeta_o();
    let u: Vec<Complex64> = f1.eval_boundary(n)?.iter().map(|p| p - zo).collect();
    let v: Vec<Complex64> = f2.eval_boundary(n)?.iter().map(|p| p - zo).collect();
    let residual_at = |gamma: f64| -> f64 {
        let r = Complex64::from_polar(1.0, gamma);
        u.iter().zip(&v).map(|(a, b)| (a - r * b).norm()).fold(0.0, f64::max)
    };
    let faithful = wrap_angle(representation_phase(f1) - representation_phase(f2));
    let gamma = match mode {
        AlignmentMode::ProofFaithful => faithful,
        AlignmentMode::Optimal => {
            let h = TWO_PI / ALIGNMENT_GRID as f64;
            let (mut best_g, mut best_r) = (0.0, f64::INFINITY);
            for k in 0..ALIGNMENT_GRID {
                let g = k as f64 * h;
                let r = residual_at(g);
                if r < best_r {
                    best_g = g;
                    best_r = r;
                }
            }
            let (g, r) = solve::golden_section(residual_at, best_g - h, best_g + h, 1e-14);
            if r < best_r {
                best_g = g;
                best_r = r;
            }
            if residual_at(faithful) < best_r {
                best_g = faithful;
            }
            wrap_angle(best_g)
        }
    };
    Ok(Alignment { gamma, rotated: f2.rotated(gamma), residual: residual_at(gamma) })
}
