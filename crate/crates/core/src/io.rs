//! Text formats: map files, boundary-data files, CSV tables and plot data.
//!
//! Map file: `zeta_o re im`, `zeta_b re im`, then `k re(a_k) im(a_k)` for
//! `k = 0..=M`. Boundary-data file: `L <perimeter>`, `alpha <value>`, then
//! `s value [derivative]` on the uniform grid `s_j = jL/N`. Blank lines and
//! lines starting with `#` are ignored. All floats are written with 17
//! significant digits so that files round-trip exactly.

use crate::boundary::{BoundaryFunction, CumulativeMap};
use crate::conformal::ConformalMap;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// Relative tolerance on the uniformity of the `s` column.
pub const GRID_TOL: f64 = 1e-9;

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `contents` to a temporary sibling and renames it into place, so a
/// failed run never leaves a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().ok_or_else(|| Error::invalid(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let t = l.trim();
        (!t.is_empty() && !t.starts_with('#')).then(|| (i + 1, t.split_whitespace().collect()))
    })
}

struct Ctx<'a> {
    path: &'a str,
}

impl Ctx<'_> {
    fn err(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::Parse { path: self.path.to_string(), line, msg: msg.into() }
    }

    fn num(&self, line: usize, tok: &str) -> Result<f64> {
        tok.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| self.err(line, format!("expected a finite number, found '{tok}'")))
    }

    fn keyed_complex(&self, item: Option<(usize, Vec<&str>)>, key: &str) -> Result<Complex64> {
        let (line, toks) = item.ok_or_else(|| self.err(0, format!("missing '{key}' line")))?;
        if toks.len() != 3 || toks[0] != key {
            return Err(self.err(line, format!("expected '{key} <re> <im>'")));
        }
        Ok(Complex64::new(self.num(line, toks[1])?, self.num(line, toks[2])?))
    }

    fn keyed_real(&self, item: Option<(usize, Vec<&str>)>, key: &str) -> Result<f64> {
        let (line, toks) = item.ok_or_else(|| self.err(0, format!("missing '{key}' line")))?;
        if toks.len() != 2 || toks[0] != key {
            return Err(self.err(line, format!("expected '{key} <value>'")));
        }
        self.num(line, toks[1])
    }
}

pub fn parse_map(text: &str, path: &str) -> Result<ConformalMap> {
    let ctx = Ctx { path };
    let mut lines = content_lines(text);
    let zeta_o = ctx.keyed_complex(lines.next(), "zeta_o")?;
    let zeta_b = ctx.keyed_complex(lines.next(), "zeta_b")?;
    let mut coeffs = Vec::new();
    let mut last_line = 0;
    for (line, toks) in lines {
        last_line = line;
        if toks.len() != 3 {
            return Err(ctx.err(line, "expected 'k re im'"));
        }
        let k: usize = toks[0].parse().map_err(|_| ctx.err(line, format!("bad index '{}'", toks[0])))?;
        if k != coeffs.len() {
            return Err(ctx.err(line, format!("expected coefficient index {}, found {k}", coeffs.len())));
        }
        coeffs.push(Complex64::new(ctx.num(line, toks[1])?, ctx.num(line, toks[2])?));
    }
    ConformalMap::with_base_points(coeffs, zeta_o, zeta_b).map_err(|e| ctx.err(last_line, e.to_string()))
}

pub fn format_map(f: &ConformalMap) -> String {
    let mut out = String::new();
    let c = |v: Complex64| format!("{} {}", fmt_f64(v.re), fmt_f64(v.im));
    let _ = writeln!(out, "zeta_o {}", c(f.zeta_o()));
    let _ = writeln!(out, "zeta_b {}", c(f.zeta_b()));
    for (k, a) in f.coefficients().iter().enumerate() {
        let _ = writeln!(out, "{k} {}", c(*a));
    }
    out
}

pub fn read_map(path: &Path) -> Result<ConformalMap> {
    parse_map(&fs::read_to_string(path)?, &path.display().to_string())
}

pub fn parse_boundary_data(text: &str, path: &str) -> Result<BoundaryFunction> {
    let ctx = Ctx { path };
    let mut lines = content_lines(text);
    let length = ctx.keyed_real(lines.next(), "L")?;
    let alpha = ctx.keyed_real(lines.next(), "alpha")?;
    let rows: Vec<(usize, Vec<&str>)> = lines.collect();
    let n = rows.len();
    let with_derivative = rows.first().is_some_and(|(_, t)| t.len() == 3);
    let mut samples = Vec::with_capacity(n);
    let mut derivative = Vec::with_capacity(n);
    for (j, (line, toks)) in rows.iter().enumerate() {
        let expected = if with_derivative { 3 } else { 2 };
        if toks.len() != expected {
            return Err(ctx.err(*line, format!("expected {expected} columns like the first data row")));
        }
        let s = ctx.num(*line, toks[0])?;
        let want = length * j as f64 / n as f64;
        if (s - want).abs() > GRID_TOL * length {
            return Err(ctx.err(*line, format!("arclength {s} is not on the uniform grid (expected {want})")));
        }
        samples.push(ctx.num(*line, toks[1])?);
        if with_derivative {
            derivative.push(ctx.num(*line, toks[2])?);
        }
    }
    let last = rows.last().map_or(0, |(l, _)| *l);
    let phi = BoundaryFunction::new(samples, length, alpha).map_err(|e| ctx.err(last, e.to_string()))?;
    if with_derivative {
        phi.with_derivative(derivative).map_err(|e| ctx.err(last, e.to_string()))
    } else {
        Ok(phi)
    }
}

pub fn format_boundary_data(phi: &BoundaryFunction) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "L {}", fmt_f64(phi.length()));
    let _ = writeln!(out, "alpha {}", fmt_f64(phi.alpha()));
    let grid = phi.grid();
    match phi.supplied_derivative() {
        Some(d) => {
            for ((s, v), dv) in grid.iter().zip(phi.samples()).zip(d) {
                let _ = writeln!(out, "{} {} {}", fmt_f64(*s), fmt_f64(*v), fmt_f64(*dv));
            }
        }
        None => {
            for (s, v) in grid.iter().zip(phi.samples()) {
                let _ = writeln!(out, "{} {}", fmt_f64(*s), fmt_f64(*v));
            }
        }
    }
    out
}

pub fn read_boundary_data(path: &Path) -> Result<BoundaryFunction> {
    parse_boundary_data(&fs::read_to_string(path)?, &path.display().to_string())
}

/// `s,phi,theta` rows of the cumulative map `θ = Φ(s)` on the sample grid,
/// closed with `(L, φ(0), 2π)`.
pub fn cumulative_table_csv(cm: &CumulativeMap) -> String {
    let mut out = String::from("s,phi,theta\n");
    let (s, theta) = cm.table();
    for (sv, tv) in s.iter().zip(theta) {
        let _ = writeln!(out, "{},{},{}", fmt_f64(*sv), fmt_f64(cm.phi_at(*sv)), fmt_f64(*tv));
    }
    out
}

/// `theta,s,re,im` rows of the boundary polyline `f(e^{iθ_k})`.
pub fn polyline_csv(f: &ConformalMap, n: usize) -> Result<String> {
    let points = f.eval_boundary(n)?;
    let table = f.arclength(n)?;
    let mut out = String::from("theta,s,re,im\n");
    for (k, p) in points.iter().enumerate() {
        let theta = 2.0 * PI * k as f64 / n as f64;
        let _ = writeln!(out, "{},{},{},{}", fmt_f64(theta), fmt_f64(table.s_at(theta)), fmt_f64(p.re), fmt_f64(p.im));
    }
    Ok(out)
}

/// Whitespace-separated two-column plot data.
pub fn plot_data(header: &str, rows: impl IntoIterator<Item = (f64, f64)>) -> String {
    let mut out = format!("# {header}\n");
    for (x, y) in rows {
        let _ = writeln!(out, "{} {}", fmt_f64(x), fmt_f64(y));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn map_file_round_trip() {
        let f = ConformalMap::new(vec![c(0.1, -0.2), c(1.0, 0.3), c(0.05, 0.01), c(1.0 / 3.0, 0.0)]).unwrap();
        let text = format_map(&f);
        let g = parse_map(&text, "mem").unwrap();
        assert_eq!(f.coefficients(), g.coefficients());
        assert_eq!(format_map(&g), text);
    }

    #[test]
    fn map_file_errors_carry_line_numbers() {
        let text = "zeta_o 0 0\nzeta_b 1 0\n0 0 0\n2 1 0\n";
        match parse_map(text, "x.map") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        let text = "zeta_o 0 0\nzeta_b 2 0\n0 0 0\n1 1 0\n";
        assert!(matches!(parse_map(text, "x.map"), Err(Error::Parse { .. })));
        let text = "# comment\nzeta_o 0 0\n\nzeta_b 1 0\n0 0 0\n1 1 nan\n";
        match parse_map(text, "x.map") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn boundary_file_round_trip() {
        let f = ConformalMap::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.1, 0.0)]).unwrap();
        let phi = f.forward_operator(64).unwrap();
        let text = format_boundary_data(&phi);
        let back = parse_boundary_data(&text, "mem").unwrap();
        assert_eq!(back.samples(), phi.samples());
        assert_eq!(back.supplied_derivative(), phi.supplied_derivative());
        assert_eq!(back.length(), phi.length());
    }

    #[test]
    fn boundary_file_rejects_nonuniform_grid() {
        let mut text = String::from("L 1\nalpha 0.5\n");
        for j in 0..16 {
            let s = if j == 5 { 0.33 } else { j as f64 / 16.0 };
            text.push_str(&format!("{s} 1\n"));
        }
        match parse_boundary_data(&text, "d.txt") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 8),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub").join("a.csv");
        write_atomic(&p, "one\n").unwrap();
        write_atomic(&p, "two\n").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two\n");
        assert_eq!(fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }
}
