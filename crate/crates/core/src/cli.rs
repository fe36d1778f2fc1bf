//! Command-line front end.
//!
//! Settings come from flags and, optionally, a config file of `key = value`
//! lines. Keys before any `[section]` apply to every command; keys in
//! `[forward]`, `[check]`, ... apply to that command only. Flags override the
//! file. Exit status: 0 when every check passes, 2 when some check fails,
//! 1 on input errors.

use crate::boundary::{self, BoundaryFunction};
use crate::conformal::ConformalMap;
use crate::error::{Error, Result};
use crate::families::Family;
use crate::geometry::{self, AlignmentMode, DomainBoundary};
use crate::io::{self, fmt_f64};
use crate::reconstruct::{self, ReconstructOptions};
use crate::stability::{self, CheckOptions, ConstantOverrides, PreparedMap, StabilityReport, Theorem, CSV_HEADER};
use crate::sweep::{self, EpsRange, SweepConfig};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const DEFAULT_N: usize = 512;
pub const JOBS_ENV: &str = "GREENRECON_JOBS";

#[derive(Debug, Parser)]
#[command(name = "greenrecon", version, about = "Domain reconstruction from Green's function boundary data, and stability checks")]
pub struct Cli {
    /// Config file (`key = value` lines, optional `[command]` sections).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Grid size, a power of two >= 64.
    #[arg(long)]
    pub n: Option<usize>,
    /// Hölder exponent in (0, 1].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Rotation alignment: proof-faithful or optimal.
    #[arg(long)]
    pub alignment: Option<String>,
    /// Lower bound m of the data.
    #[arg(long)]
    pub m: Option<f64>,
    /// Bound M0 on the C^{0,α} norms.
    #[arg(long = "M0")]
    pub m0: Option<f64>,
    /// Bound M1 on the C^{1,α} norms.
    #[arg(long = "M1")]
    pub m1: Option<f64>,
    /// Lower perimeter bound p.
    #[arg(long)]
    pub p: Option<f64>,
    /// Upper perimeter bound P.
    #[arg(long = "P")]
    pub pp: Option<f64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write two-column plot data files.
    #[arg(long)]
    pub emit_plots: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Forward operator: boundary data of a map.
    Forward {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Inverse operator: reconstruct a map from boundary data.
    Invert {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        data: Option<PathBuf>,
        /// Pole as `re,im`.
        #[arg(long = "zeta-o", allow_hyphen_values = true)]
        zeta_o: Option<String>,
        /// Boundary base point as `re,im`.
        #[arg(long = "zeta-b", allow_hyphen_values = true)]
        zeta_b: Option<String>,
        /// Rescale data to unit integral instead of rejecting it.
        #[arg(long)]
        renormalize: bool,
    },
    /// Forward then inverse, reporting the C^{1,0} error.
    Roundtrip {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Hausdorff distance and radii of two domains.
    Hausdorff {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        map2: Option<PathBuf>,
    },
    /// Check one stability estimate on given maps or data.
    Check {
        #[command(flatten)]
        common: Common,
        /// raggi, disco, stab_gen, lugua (hausdorff) or ultimo (corollary).
        #[arg(long)]
        theorem: Option<String>,
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        map2: Option<PathBuf>,
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        data2: Option<PathBuf>,
        /// Constant datum for disco (default 1/(2π)).
        #[arg(long)]
        c: Option<f64>,
        #[arg(long = "zeta-o", allow_hyphen_values = true)]
        zeta_o: Option<String>,
        #[arg(long = "zeta-b", allow_hyphen_values = true)]
        zeta_b: Option<String>,
    },
    /// Run checks over a built-in family.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// disk, fourier, z+eps*z^k or z*exp(eps*z^k).
        #[arg(long)]
        family: Option<String>,
        /// Inclusive range start:stop:step.
        #[arg(long)]
        eps: Option<String>,
        /// A theorem id or `all`.
        #[arg(long)]
        theorem: Option<String>,
        /// Worker threads (default from GREENRECON_JOBS, then the CPU count).
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Forward,
    Invert,
    Roundtrip,
    Hausdorff,
    Check,
    Sweep,
}

impl CommandKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandKind::Forward => "forward",
            CommandKind::Invert => "invert",
            CommandKind::Roundtrip => "roundtrip",
            CommandKind::Hausdorff => "hausdorff",
            CommandKind::Check => "check",
            CommandKind::Sweep => "sweep",
        }
    }

    fn from_section(s: &str) -> Option<Self> {
        [
            CommandKind::Forward,
            CommandKind::Invert,
            CommandKind::Roundtrip,
            CommandKind::Hausdorff,
            CommandKind::Check,
            CommandKind::Sweep,
        ]
        .into_iter()
        .find(|k| k.as_str() == s)
    }
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub map: Option<PathBuf>,
    pub map2: Option<PathBuf>,
    pub data: Option<PathBuf>,
    pub data2: Option<PathBuf>,
    pub n: usize,
    pub alpha: f64,
    pub alignment: AlignmentMode,
    pub overrides: ConstantOverrides,
    pub out: PathBuf,
    pub emit_plots: bool,
    pub theorem: Option<String>,
    pub family: Option<Family>,
    pub eps: Option<EpsRange>,
    pub jobs: usize,
    pub c: Option<f64>,
    pub zeta_o: Complex64,
    pub zeta_b: Complex64,
    pub renormalize: bool,
}

const KEYS: &[&str] = &[
    "n", "alpha", "alignment", "m", "M0", "M1", "p", "P", "out", "emit-plots", "map", "map2", "data", "data2",
    "theorem", "family", "eps", "jobs", "c", "zeta-o", "zeta-b", "renormalize",
];

/// Parsed config file: `(value, line)` per key, globally and per section.
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    path: String,
    global: HashMap<String, (String, usize)>,
    sections: HashMap<String, HashMap<String, (String, usize)>>,
}

impl ConfigFile {
    pub fn parse(text: &str, path: &str) -> Result<Self> {
        let mut cfg = ConfigFile { path: path.to_string(), ..Default::default() };
        let mut section: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |msg: String| Error::Parse { path: path.to_string(), line, msg };
            let t = raw.split('#').next().unwrap_or("").trim();
            if t.is_empty() {
                continue;
            }
            if let Some(name) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                let name = name.trim();
                if CommandKind::from_section(name).is_none() {
                    return Err(err(format!("unknown section [{name}]")));
                }
                section = Some(name.to_string());
                continue;
            }
            let (k, v) = t.split_once('=').ok_or_else(|| err(format!("expected 'key = value', found '{t}'")))?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(err(format!("unknown key '{k}'")));
            }
            if v.is_empty() {
                return Err(err(format!("missing value for '{k}'")));
            }
            let table = match &section {
                Some(s) => cfg.sections.entry(s.clone()).or_default(),
                None => &mut cfg.global,
            };
            if table.insert(k.to_string(), (v.to_string(), line)).is_some() {
                return Err(err(format!("duplicate key '{k}'")));
            }
        }
        Ok(cfg)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?, &path.display().to_string())
    }

    fn lookup(&self, cmd: CommandKind, key: &str) -> Option<&(String, usize)> {
        self.sections.get(cmd.as_str()).and_then(|s| s.get(key)).or_else(|| self.global.get(key))
    }
}

struct Resolver<'a> {
    file: &'a ConfigFile,
    cmd: CommandKind,
}

impl Resolver<'_> {
    /// Flag value if given, otherwise the config value parsed as `T`.
    fn get<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.lookup(self.cmd, key) {
            None => Ok(None),
            Some((v, line)) => v.parse::<T>().map(Some).map_err(|e| Error::Parse {
                path: self.file.path.clone(),
                line: *line,
                msg: format!("bad value '{v}' for '{key}': {e}"),
            }),
        }
    }

    fn flag(&self, flag: bool, key: &str) -> Result<bool> {
        Ok(flag || self.get::<bool>(None, key)?.unwrap_or(false))
    }
}

/// `re,im` (or a bare real).
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::invalid(format!("expected 're,im', got '{s}'"));
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(bad()),
    }
}

fn default_jobs() -> usize {
    std::env::var(JOBS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|j| *j > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

impl RunConfig {
    pub fn resolve(cli: Cli) -> Result<Self> {
        let file = match &cli.config {
            Some(p) => ConfigFile::read(p)?,
            None => ConfigFile::default(),
        };
        let none = || -> Option<String> { None };
        let (cmd, common, map, map2, data, data2, theorem, family, eps, jobs, c, zo, zb, renorm) = match cli.command {
            Command::Forward { common, map } => (CommandKind::Forward, common, map, None, None, None, none(), none(), none(), None, None, none(), none(), false),
            Command::Invert { common, data, zeta_o, zeta_b, renormalize } => {
                (CommandKind::Invert, common, None, None, data, None, none(), none(), none(), None, None, zeta_o, zeta_b, renormalize)
            }
            Command::Roundtrip { common, map } => (CommandKind::Roundtrip, common, map, None, None, None, none(), none(), none(), None, None, none(), none(), false),
            Command::Hausdorff { common, map, map2 } => {
                (CommandKind::Hausdorff, common, map, map2, None, None, none(), none(), none(), None, None, none(), none(), false)
            }
            Command::Check { common, theorem, map, map2, data, data2, c, zeta_o, zeta_b } => {
                (CommandKind::Check, common, map, map2, data, data2, theorem, none(), none(), None, c, zeta_o, zeta_b, false)
            }
            Command::Sweep { common, family, eps, theorem, jobs } => {
                (CommandKind::Sweep, common, None, None, None, None, theorem, family, eps, jobs, None, none(), none(), false)
            }
        };
        let r = Resolver { file: &file, cmd };
        let n = r.get(common.n, "n")?.unwrap_or(DEFAULT_N);
        if n < 64 || !n.is_power_of_two() {
            return Err(Error::invalid(format!("--n must be a power of two >= 64, got {n}")));
        }
        let alpha = r.get(common.alpha, "alpha")?.unwrap_or(boundary::DEFAULT_ALPHA);
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::invalid(format!("--alpha must lie in (0, 1], got {alpha}")));
        }
        let alignment = match r.get(common.alignment, "alignment")? {
            Some(s) => s.parse()?,
            None => AlignmentMode::ProofFaithful,
        };
        let overrides = ConstantOverrides {
            m: r.get(common.m, "m")?,
            m0: r.get(common.m0, "M0")?,
            m1: r.get(common.m1, "M1")?,
            p: r.get(common.p, "p")?,
            pp: r.get(common.pp, "P")?,
        };
        let family = r.get(family, "family")?.map(|s: String| s.parse::<Family>()).transpose()?;
        let eps = r.get(eps, "eps")?.map(|s: String| s.parse::<EpsRange>()).transpose()?;
        let jobs = r.get(jobs, "jobs")?.unwrap_or_else(default_jobs);
        if jobs == 0 {
            return Err(Error::invalid("--jobs must be positive"));
        }
        let zeta_o = r.get(zo, "zeta-o")?.map(|s: String| parse_complex(&s)).transpose()?.unwrap_or(Complex64::new(0.0, 0.0));
        let zeta_b = r.get(zb, "zeta-b")?.map(|s: String| parse_complex(&s)).transpose()?.unwrap_or(Complex64::new(1.0, 0.0));
        let cfg = RunConfig {
            command: cmd,
            map: r.get(map, "map")?,
            map2: r.get(map2, "map2")?,
            data: r.get(data, "data")?,
            data2: r.get(data2, "data2")?,
            n,
            alpha,
            alignment,
            overrides,
            out: r.get(common.out, "out")?.unwrap_or_else(|| PathBuf::from(".")),
            emit_plots: r.flag(common.emit_plots, "emit-plots")?,
            theorem: r.get(theorem, "theorem")?,
            family,
            eps,
            jobs,
            c: r.get(c, "c")?,
            zeta_o,
            zeta_b,
            renormalize: r.flag(renorm, "renormalize")?,
        };
        cfg.validate_paths()?;
        Ok(cfg)
    }

    fn validate_paths(&self) -> Result<()> {
        for p in [&self.map, &self.map2, &self.data, &self.data2].into_iter().flatten() {
            if !p.is_file() {
                return Err(Error::invalid(format!("input file not found: {}", p.display())));
            }
        }
        Ok(())
    }

    fn check_options(&self) -> CheckOptions {
        CheckOptions { alpha: self.alpha, alignment: self.alignment, overrides: self.overrides }
    }

    fn require<'a>(&self, p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
        p.as_deref().ok_or_else(|| Error::invalid(format!("{} needs --{flag}", self.command.as_str())))
    }

    fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.out.join(name);
        io::write_atomic(&path, contents)?;
        Ok(path)
    }
}

/// Parses arguments, runs, and maps the outcome to an exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match RunConfig::resolve(cli).and_then(|cfg| run(&cfg)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<i32> {
    match cfg.command {
        CommandKind::Forward => run_forward(cfg),
        CommandKind::Invert => run_invert(cfg),
        CommandKind::Roundtrip => run_roundtrip(cfg),
        CommandKind::Hausdorff => run_hausdorff(cfg),
        CommandKind::Check => run_check(cfg),
        CommandKind::Sweep => run_sweep(cfg),
    }
}

fn warn_univalence(f: &ConformalMap, n: usize) -> Result<()> {
    for w in f.check_univalence(n)?.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn fprime_plot(f: &ConformalMap, n: usize) -> Result<String> {
    let fp = f.eval_fprime(n)?;
    Ok(io::plot_data("theta |f'|", fp.moduli.iter().enumerate().map(|(k, v)| (2.0 * PI * k as f64 / n as f64, *v))))
}

fn run_forward(cfg: &RunConfig) -> Result<i32> {
    let f = io::read_map(cfg.require(&cfg.map, "map")?)?;
    warn_univalence(&f, cfg.n)?;
    let phi = f.forward_operator(cfg.n)?.with_alpha(cfg.alpha)?;
    let cm = boundary::build_cumulative(&phi)?;
    cfg.write("phi.txt", &io::format_boundary_data(&phi))?;
    cfg.write("phi_table.csv", &io::cumulative_table_csv(&cm))?;
    cfg.write("boundary.csv", &io::polyline_csv(&f, cfg.n)?)?;
    if cfg.emit_plots {
        cfg.write("plot_fprime.dat", &fprime_plot(&f, cfg.n)?)?;
        cfg.write("plot_phi.dat", &io::plot_data("s phi", phi.grid().into_iter().zip(phi.samples().iter().copied())))?;
    }
    println!("perimeter {}", fmt_f64(phi.length()));
    println!("phi min {} max {}", fmt_f64(phi.min()), fmt_f64(phi.samples().iter().copied().fold(f64::MIN, f64::max)));
    Ok(EXIT_OK)
}

fn run_invert(cfg: &RunConfig) -> Result<i32> {
    let phi = io::read_boundary_data(cfg.require(&cfg.data, "data")?)?;
    let opts = ReconstructOptions { renormalize: cfg.renormalize, ..Default::default() };
    let rec = reconstruct::reconstruct_fprime_with(&phi, cfg.zeta_o, cfg.zeta_b, phi.len(), opts)?;
    cfg.write("reconstructed.map", &io::format_map(&rec.map))?;
    let report = format!(
        "n,gamma,compatibility_residual,normalization_residual,tail_energy,inconsistent\n{},{},{},{},{},{}\n",
        phi.len(),
        fmt_f64(rec.gamma),
        fmt_f64(rec.compatibility_residual),
        fmt_f64(rec.normalization_residual),
        fmt_f64(rec.tail_energy),
        rec.inconsistent
    );
    cfg.write("reconstruct.csv", &report)?;
    cfg.write("boundary.csv", &io::polyline_csv(&rec.map, phi.len())?)?;
    if cfg.emit_plots {
        cfg.write("plot_fprime.dat", &fprime_plot(&rec.map, phi.len())?)?;
    }
    if rec.inconsistent {
        eprintln!("warning: normalization residual {} exceeds tolerance; datum may be inconsistent", fmt_f64(rec.normalization_residual));
    }
    println!("degree {} gamma {}", rec.map.degree(), fmt_f64(rec.gamma));
    Ok(EXIT_OK)
}

fn run_roundtrip(cfg: &RunConfig) -> Result<i32> {
    let f = io::read_map(cfg.require(&cfg.map, "map")?)?;
    let phi = f.forward_operator(cfg.n)?;
    let rec = reconstruct::reconstruct_fprime(&phi, f.zeta_o(), f.zeta_b(), cfg.n)?;
    let aligned = geometry::align_rotation(&f, &rec.map, cfg.alignment, cfg.n)?;
    let error = reconstruct::boundary_c1_distance(&f, &aligned.rotated, cfg.n)?;
    let report = format!(
        "n,error,alignment,gamma,normalization_residual,tail_energy\n{},{},{},{},{},{}\n",
        cfg.n,
        fmt_f64(error),
        cfg.alignment.as_str(),
        fmt_f64(aligned.gamma),
        fmt_f64(rec.normalization_residual),
        fmt_f64(rec.tail_energy)
    );
    cfg.write("roundtrip.csv", &report)?;
    cfg.write("roundtrip.map", &io::format_map(&aligned.rotated))?;
    println!("roundtrip error {}", fmt_f64(error));
    Ok(EXIT_OK)
}

fn run_hausdorff(cfg: &RunConfig) -> Result<i32> {
    let f1 = io::read_map(cfg.require(&cfg.map, "map")?)?;
    let f2 = io::read_map(cfg.require(&cfg.map2, "map2")?)?;
    let aligned = geometry::align_rotation(&f1, &f2, cfg.alignment, cfg.n)?;
    let b1 = DomainBoundary::from_map(&f1, cfg.n)?;
    let b2 = DomainBoundary::from_map(&f2, cfg.n)?;
    let b2r = DomainBoundary::from_map(&aligned.rotated, cfg.n)?;
    let raw = geometry::hausdorff_distance(&b1, &b2);
    let rot = geometry::hausdorff_distance(&b1, &b2r);
    let (rho1, r1) = geometry::inradius_circumradius(&b1);
    let (rho2, r2) = geometry::inradius_circumradius(&b2);
    let e = fmt_f64;
    let report = format!(
        "distance,aligned_distance,discretization_bound,gamma,rho1,R1,rho2,R2,n,alignment\n{},{},{},{},{},{},{},{},{},{}\n",
        e(raw.distance),
        e(rot.distance),
        e(raw.discretization_bound.max(rot.discretization_bound)),
        e(aligned.gamma),
        e(rho1),
        e(r1),
        e(rho2),
        e(r2),
        cfg.n,
        cfg.alignment.as_str()
    );
    cfg.write("hausdorff.csv", &report)?;
    cfg.write("boundary1.csv", &io::polyline_csv(&f1, cfg.n)?)?;
    cfg.write("boundary2.csv", &io::polyline_csv(&aligned.rotated, cfg.n)?)?;
    println!("hausdorff {} (aligned {})", e(raw.distance), e(rot.distance));
    Ok(EXIT_OK)
}

/// The `i`-th domain of a check, from a map file or from boundary data.
fn load_prepared(cfg: &RunConfig, map: &Option<PathBuf>, data: &Option<PathBuf>, which: &str) -> Result<PreparedMap> {
    match (map, data) {
        (Some(m), None) => {
            let f = io::read_map(m)?;
            warn_univalence(&f, cfg.n)?;
            PreparedMap::from_map(f, cfg.n)
        }
        (None, Some(d)) => {
            let phi: BoundaryFunction = io::read_boundary_data(d)?;
            let rec = reconstruct::reconstruct_fprime(&phi, cfg.zeta_o, cfg.zeta_b, phi.len())?;
            if rec.inconsistent {
                eprintln!("warning: {} is inconsistent with the base points", d.display());
            }
            PreparedMap::from_data(rec.map, phi)
        }
        (Some(_), Some(_)) => Err(Error::invalid(format!("give either a map or data for the {which} domain, not both"))),
        (None, None) => Err(Error::invalid(format!("check needs a map or data file for the {which} domain"))),
    }
}

fn report_csv(rows: &[StabilityReport]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in rows {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

fn summarize(rows: &[StabilityReport]) -> i32 {
    for r in rows {
        println!("{} {} ratio {} {}", r.theorem, r.row, fmt_f64(r.ratio), if r.pass { "pass" } else { "FAIL" });
        for v in &r.violations {
            eprintln!("warning: {} {}: {v}", r.theorem, r.row);
        }
    }
    if rows.iter().all(|r| r.pass) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn run_check(cfg: &RunConfig) -> Result<i32> {
    let theorem: Theorem = cfg.theorem.as_deref().ok_or_else(|| Error::invalid("check needs --theorem"))?.parse()?;
    let opts = cfg.check_options();
    let d1 = load_prepared(cfg, &cfg.map, &cfg.data, "first")?;
    let rows = match theorem {
        Theorem::Raggi => stability::check_raggi(&d1, &opts)?,
        Theorem::Disco => vec![stability::check_disco(&d1, cfg.c.unwrap_or(1.0 / (2.0 * PI)), &opts)?],
        pair => {
            let d2 = load_prepared(cfg, &cfg.map2, &cfg.data2, "second")?;
            match pair {
                Theorem::StabGen => stability::check_stab_gen(&d1, &d2, &opts)?,
                Theorem::Lugua => stability::check_lugua_hausdorff(&d1, &d2, &opts)?,
                _ => stability::check_ultimo(&d1, &d2, &opts)?,
            }
        }
    };
    cfg.write("report.csv", &report_csv(&rows))?;
    Ok(summarize(&rows))
}

fn run_sweep(cfg: &RunConfig) -> Result<i32> {
    let family = cfg.family.ok_or_else(|| Error::invalid("sweep needs --family"))?;
    let eps = cfg.eps.ok_or_else(|| Error::invalid("sweep needs --eps start:stop:step"))?;
    let theorems = match cfg.theorem.as_deref() {
        None | Some("all") => Theorem::ALL.to_vec(),
        Some(t) => vec![t.parse()?],
    };
    let sc = SweepConfig { family, eps: eps.values(), theorems, n: cfg.n, opts: cfg.check_options(), jobs: cfg.jobs };
    let rows = sweep::run_sweep(&sc)?;
    cfg.write("sweep.csv", &sweep::sweep_csv(&rows))?;
    if cfg.emit_plots {
        let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
        for r in &rows {
            let key = format!("{}_{}", r.report.theorem, r.report.row);
            match series.iter_mut().find(|(k, _)| *k == key) {
                Some((_, v)) => v.push((r.eps, r.report.ratio)),
                None => series.push((key, vec![(r.eps, r.report.ratio)])),
            }
        }
        for (key, pts) in series {
            cfg.write(&format!("plot_ratio_{key}.dat"), &io::plot_data("eps ratio", pts))?;
        }
    }
    let reports: Vec<StabilityReport> = rows.into_iter().map(|r| r.report).collect();
    let failed = reports.iter().filter(|r| !r.pass).count();
    for r in reports.iter().filter(|r| !r.pass) {
        eprintln!("FAIL {} {}: lhs {} > {} * {}", r.theorem, r.row, fmt_f64(r.lhs), fmt_f64(r.k), fmt_f64(r.rhs));
    }
    println!("{} rows, {} failed", reports.len(), failed);
    Ok(if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}
