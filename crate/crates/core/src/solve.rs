//! Scalar root finding, quadrature and line search.

/// Solves `g(x) = target` for increasing `g` on `[lo, hi]` by Newton steps
/// safeguarded with bisection.
///
/// `eval` returns `(g(x), g'(x))`. The bracket must satisfy
/// `g(lo) <= target <= g(hi)`; the returned `x` satisfies
/// `|g(x) - target| <= tol` unless `max_iter` is exhausted, in which case the
/// midpoint of the final bracket is returned.
pub fn invert_monotone<F>(
    eval: F,
    target: f64,
    mut lo: f64,
    mut hi: f64,
    guess: f64,
    tol: f64,
    max_iter: usize,
) -> f64
where
    F: Fn(f64) -> (f64, f64),
{
    let mut x = if guess > lo && guess < hi { guess } else { 0.5 * (lo + hi) };
    for _ in 0..max_iter {
        let (g, dg) = eval(x);
        let r = g - target;
        if r.abs() <= tol {
            // one more Newton step is nearly free and usually lands on round-off
            if dg > 0.0 {
                let refined = x - r / dg;
                if refined >= lo && refined <= hi {
                    let (g2, _) = eval(refined);
                    if (g2 - target).abs() <= r.abs() {
                        return refined;
                    }
                }
            }
            return x;
        }
        if r < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = if dg > 0.0 { x - r / dg } else { f64::NAN };
        x = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
            return x;
        }
    }
    0.5 * (lo + hi)
}

/// Plain bisection for increasing `g`.
pub fn bisect_monotone<F>(g: F, target: f64, mut lo: f64, mut hi: f64, iters: usize) -> f64
where
    F: Fn(f64) -> f64,
{
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        if g(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss–Kronrod (7, 15) quadrature of `f` over `[a, b]` with an
/// absolute error target.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, whole: f64, err: f64, depth: u32) -> f64 {
        if err <= tol || depth >= 50 {
            return whole;
        }
        let mid = 0.5 * (a + b);
        let (l, el) = gauss_kronrod_15(f, a, mid);
        let (r, er) = gauss_kronrod_15(f, mid, b);
        recurse(f, a, mid, 0.5 * tol, l, el, depth + 1) + recurse(f, mid, b, 0.5 * tol, r, er, depth + 1)
    }
    let (whole, err) = gauss_kronrod_15(&f, a, b);
    recurse(&f, a, b, abs_tol, whole, err, 0)
}

/// Golden-section minimization of a unimodal `f` on `[a, b]`.
/// Returns `(x, f(x))`.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn newton_inverts_cubic() {
        let g = |x: f64| (x * x * x + x, 3.0 * x * x + 1.0);
        let x = invert_monotone(g, 10.0, 0.0, 5.0, 1.0, 1e-14, 100);
        assert!((x - 2.0).abs() < 1e-13);
    }

    #[test]
    fn newton_survives_flat_derivative() {
        // derivative reported as zero everywhere: pure bisection must still converge
        let g = |x: f64| (x.powi(3), 0.0);
        let x = invert_monotone(g, 8.0, 0.0, 4.0, 0.5, 1e-12, 200);
        assert!((x - 2.0).abs() < 1e-10);
    }

    #[test]
    fn bisection_oracle() {
        let x = bisect_monotone(|x| x.exp(), 2.0, 0.0, 2.0, 80);
        assert!((x - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn quadrature_known_integrals() {
        assert!((integrate(|x| x.sin(), 0.0, PI, 1e-14) - 2.0).abs() < 1e-14);
        assert!((integrate(|x| x.powi(7), 0.0, 1.0, 1e-15) - 0.125).abs() < 1e-15);
        // endpoint square-root singularity, handled by subdivision
        assert!((integrate(|x| x.sqrt(), 0.0, 1.0, 1e-12) - 2.0 / 3.0).abs() < 1e-11);
    }

    #[test]
    fn golden_section_parabola() {
        // a smooth minimum is only resolvable to about sqrt(eps) in x
        let (x, fx) = golden_section(|x| (x - 0.3).powi(2) + 1.0, -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 1.0).abs() < 1e-15);
        let (x, _) = golden_section(|x| (x - 0.3).abs(), -1.0, 2.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-11);
    }
}
