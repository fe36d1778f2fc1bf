//! Theorem checks over a family parameter `ε`, fanned out over a bounded
//! thread pool and reported sorted by `ε`.

use crate::conformal::ConformalMap;
use crate::error::{Error, Result};
use crate::families::Family;
use crate::io::fmt_f64;
use crate::stability::{self, CheckOptions, PreparedMap, StabilityReport, Theorem, CSV_HEADER};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::str::FromStr;

/// Inclusive range `start:stop:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl EpsRange {
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl FromStr for EpsRange {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::invalid(format!("expected start:stop:step, got '{s}'"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let v: Vec<f64> = parts.iter().map(|p| p.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
        let r = EpsRange { start: v[0], stop: v[1], step: v[2] };
        if !(r.step > 0.0) || !(r.stop >= r.start) || v.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid(format!("range '{s}' needs start <= stop and a positive step")));
        }
        Ok(r)
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub family: Family,
    pub eps: Vec<f64>,
    pub theorems: Vec<Theorem>,
    pub n: usize,
    pub opts: CheckOptions,
    pub jobs: usize,
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub eps: f64,
    pub report: StabilityReport,
}

/// Second map for the same- and different-perimeter checks: `z + (ε/2) z³`.
fn partner(eps: f64) -> Result<ConformalMap> {
    Family::Monomial(3).map(0.5 * eps)
}

/// Ratio of the partner's perimeter in the unequal-perimeter check.
pub const ULTIMO_SCALE: f64 = 1.05;

/// Runs every selected check for one member `f_ε`.
pub fn check_member(family: Family, eps: f64, theorems: &[Theorem], n: usize, opts: &CheckOptions) -> Result<Vec<StabilityReport>> {
    let f = family.map(eps)?;
    let d = PreparedMap::from_map(f.clone(), n)?;
    let mut out = Vec::new();
    for t in theorems {
        match t {
            Theorem::Raggi => out.extend(stability::check_raggi(&d, opts)?),
            Theorem::Disco => out.push(stability::check_disco(&d, 1.0 / (2.0 * PI), opts)?),
            Theorem::StabGen => {
                let disk = PreparedMap::from_map(Family::Disk.map(0.0)?, n)?;
                out.extend(stability::check_stab_gen(&d, &disk, opts)?);
            }
            Theorem::Lugua => {
                let g = partner(eps)?;
                let scale = d.length() / g.arclength(n)?.length;
                let e = PreparedMap::from_map(g.scaled(scale), n)?;
                out.extend(stability::check_lugua_hausdorff(&d, &e, opts)?);
            }
            Theorem::Ultimo => {
                let e = PreparedMap::from_map(partner(eps)?.scaled(ULTIMO_SCALE), n)?;
                out.extend(stability::check_ultimo(&d, &e, opts)?);
            }
        }
    }
    Ok(out)
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    let per_eps: Vec<Result<Vec<StabilityReport>>> = pool.install(|| {
        cfg.eps.par_iter().map(|&eps| check_member(cfg.family, eps, &cfg.theorems, cfg.n, &cfg.opts)).collect()
    });
    let mut rows = Vec::new();
    for (eps, res) in cfg.eps.iter().zip(per_eps) {
        rows.extend(res?.into_iter().map(|report| SweepRow { eps: *eps, report }));
    }
    // stable: rows of one member keep their check order
    rows.sort_by(|a, b| a.eps.total_cmp(&b.eps));
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = format!("eps,{CSV_HEADER}\n");
    for r in rows {
        out.push_str(&fmt_f64(r.eps));
        out.push(',');
        out.push_str(&r.report.csv_row());
        out.push('\n');
    }
    out
}
