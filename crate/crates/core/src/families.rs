//! Built-in analytic map families `f_ε`, all with `ζ_o = 0` and `f'(0) > 0`.

use crate::conformal::ConformalMap;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `(1 + ε) z`.
    Disk,
    /// `z + ε z^k`, univalent for `kε < 1`.
    Monomial(usize),
    /// `z exp(ε z^k)`, truncated where the terms drop below `1e−17`.
    Exponential(usize),
    /// `z + ε Σ_{k=2}^{6} z^k / k²`: several boundary modes at once.
    Fourier,
}

const FOURIER_MODES: std::ops::RangeInclusive<usize> = 2..=6;

impl Family {
    pub fn map(&self, eps: f64) -> Result<ConformalMap> {
        if !eps.is_finite() {
            return Err(Error::invalid("family parameter must be finite"));
        }
        let zero = Complex64::new(0.0, 0.0);
        let real = |v: f64| Complex64::new(v, 0.0);
        let coeffs = match *self {
            Family::Disk => vec![zero, real(1.0 + eps)],
            Family::Monomial(k) => {
                let mut a = vec![zero; k + 1];
                a[1] = real(1.0);
                a[k] += real(eps);
                a
            }
            Family::Exponential(k) => {
                // z Σ_j (ε z^k)^j / j!
                let mut a = vec![zero, real(1.0)];
                let mut term = 1.0;
                for j in 1..64 {
                    term *= eps / j as f64;
                    if term.abs() < 1e-17 {
                        break;
                    }
                    let deg = 1 + j * k;
                    a.resize(deg + 1, zero);
                    a[deg] = real(term);
                }
                a
            }
            Family::Fourier => {
                let mut a = vec![zero, real(1.0)];
                for k in FOURIER_MODES {
                    a.push(real(eps / (k * k) as f64));
                }
                a
            }
        };
        ConformalMap::new(coeffs)
    }

    /// Largest `|ε|` for which the family is known to be univalent.
    pub fn univalence_radius(&self) -> f64 {
        match *self {
            Family::Disk => f64::INFINITY,
            Family::Monomial(k) => 1.0 / k as f64,
            // Re(1 + kεz^k) > 0 on the disk suffices for the starlike z e^{εz^k}
            Family::Exponential(k) => 1.0 / k as f64,
            Family::Fourier => 1.0 / FOURIER_MODES.map(|k| 1.0 / k as f64).sum::<f64>(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Disk => write!(f, "disk"),
            Family::Monomial(k) => write!(f, "z+eps*z^{k}"),
            Family::Exponential(k) => write!(f, "z*exp(eps*z^{k})"),
            Family::Fourier => write!(f, "fourier"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let power = |rest: &str| -> Result<usize> {
            let k: usize = rest.parse().map_err(|_| Error::invalid(format!("bad exponent in family '{s}'")))?;
            if k < 2 {
                return Err(Error::invalid(format!("family exponent must be at least 2, got {k}")));
            }
            Ok(k)
        };
        if compact == "disk" {
            Ok(Family::Disk)
        } else if compact == "fourier" {
            Ok(Family::Fourier)
        } else if let Some(rest) = compact.strip_prefix("z+eps*z^") {
            Ok(Family::Monomial(power(rest)?))
        } else if let Some(rest) = compact.strip_prefix("z*exp(eps*z^").and_then(|r| r.strip_suffix(')')) {
            Ok(Family::Exponential(power(rest)?))
        } else {
            Err(Error::invalid(format!(
                "unknown family '{s}' (expected disk, fourier, z+eps*z^k or z*exp(eps*z^k))"
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trips() {
        for s in ["disk", "fourier", "z+eps*z^2", "z+eps*z^5", "z*exp(eps*z^3)"] {
            let f: Family = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert_eq!("z + eps*z^2".parse::<Family>().unwrap(), Family::Monomial(2));
        assert!("z+eps*z^1".parse::<Family>().is_err());
        assert!("ellipse".parse::<Family>().is_err());
    }

    #[test]
    fn coefficients() {
        let f = Family::Monomial(2).map(0.1).unwrap();
        assert_eq!(f.coefficients().len(), 3);
        assert_eq!(f.coefficients()[2].re, 0.1);
        let d = Family::Disk.map(0.5).unwrap();
        assert_eq!(d.coefficients()[1].re, 1.5);
        // z e^{εz}: coefficient of z^{j+1} is ε^j / j!
        let e = Family::Exponential(1).map(0.2).unwrap();
        assert!((e.coefficients()[3].re - 0.02).abs() < 1e-17);
        let z = Complex64::new(0.3, 0.4);
        assert!((e.eval(z) - z * (0.2 * z).exp()).norm() < 1e-15);
    }

    #[test]
    fn members_are_univalent_inside_radius() {
        for fam in [Family::Monomial(2), Family::Monomial(4), Family::Exponential(2), Family::Fourier] {
            let eps = 0.9 * fam.univalence_radius();
            let f = fam.map(eps).unwrap();
            let rep = f.check_univalence(512).unwrap();
            assert!(rep.simple && rep.min_fprime > 0.0, "{fam}");
        }
    }
}
