//! The `bovdyn` command line.
//!
//! Every subcommand produces a [`VerificationReport`]. With `--out DIR` the
//! report is written to `DIR/<name>.json` (plus images or tables selected by
//! `--format`) and a one-line summary per check goes to stdout; without it
//! the JSON report itself goes to stdout. Files are written atomically.
//!
//! Exit codes: 0 all checks pass, 1 a check failed (or the computation
//! broke down), 2 usage or configuration error, 3 inconclusive only.

use std::f64::consts::PI;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::bov::{bov_evidence, curve_growth, CurveKind, CurveSpec};
use crate::dynamics::{
    classify_grid, iterate, Verdict, DEFAULT_MAX_ITER, LABEL_ESCAPED, LABEL_UNDECIDED,
};
use crate::error::{Error, Result};
use crate::geom::Rect;
use crate::map::MapSpec;
use crate::parse::parse_complex;
use crate::poly::Poly;
use crate::report::json::{digest, emit_json};
use crate::report::{csv, pnm, Check, Status, VerificationReport};
use crate::singular::{accumulation_checks, window_data, DEFAULT_SEED_DENSITY};
use crate::suites::{run_suite, SuiteOptions, CURVE_SAMPLES, CURVE_T, CURVE_TAIL};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

const DEFAULT_WINDOWS: [f64; 3] = [20.0, 40.0, 80.0];
const DEFAULT_RADIUS: f64 = 10.0;
const DEFAULT_BOV_RESOLUTION: usize = 1024;
const DEFAULT_BASIN_RESOLUTION: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Critical points and values over nested square windows.
    Critical,
    /// Sublevel census of `{|f| ≤ R}` over nested square windows.
    Bov,
    /// Per-decade minima of `|f|` along an unbounded curve.
    Curve,
    /// Basin classification of `f_λ` or `h_λ` on a window.
    Basin,
    /// A single orbit.
    Orbit,
    /// A named verification suite.
    Verify,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Ppm,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "bovdyn",
    version,
    about = "Baker omitted value evidence and dynamics of c·E^k(z) + P(z)"
)]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,
    /// Map in text form, e.g. "kind=tower k=1 c=1+0i poly=[0,1]".
    #[arg(long, global = true)]
    pub map: Option<String>,
    /// λ of f_λ; restricts verify suites.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// β of f_{2,β}; restricts verify suites.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Tower height; overrides `k` of `--map`, or selects E^k(z) + z.
    #[arg(long, global = true)]
    pub k: Option<u32>,
    /// Level of the sublevel set `{|f| ≤ R}`.
    #[arg(long = "R", global = true)]
    pub radius: Option<f64>,
    /// Comma-separated half-widths of nested square windows.
    #[arg(long, global = true, value_delimiter = ',')]
    pub windows: Option<Vec<f64>>,
    /// Window `re_min,re_max,im_min,im_max` for basin rasters.
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    pub window: Option<Vec<f64>>,
    /// Raster size per side.
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    #[arg(long, global = true)]
    pub max_iter: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: machine parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Suite for `verify`: lemma23, corollary13, bovsuite, example41,
    /// example42, example43 or all.
    #[arg(long, global = true)]
    pub suite: Option<String>,
    /// Curve: left, sector:θ, zigzag:β or spiral:a:b.
    #[arg(long, global = true)]
    pub curve: Option<String>,
    /// Starting point of `orbit`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub z0: Option<String>,
}

/// A validated invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub map: Option<MapSpec>,
    pub lambda: Option<f64>,
    pub beta: Option<f64>,
    pub radius: f64,
    pub windows: Vec<Rect>,
    pub window: Option<Rect>,
    pub resolution: Option<usize>,
    pub max_iter: usize,
    pub seed: u64,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub suite: String,
    pub curve: CurveKind,
    pub z0: Option<Complex64>,
}

fn parse_curve(s: &str) -> Result<CurveKind> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad number `{t}` in curve `{s}`")))
    };
    match parts.as_slice() {
        ["left"] => Ok(CurveKind::LeftRay),
        ["sector", a] => Ok(CurveKind::SectorRay(num(a)?)),
        ["zigzag", b] => Ok(CurveKind::VerticalZigzag(num(b)?)),
        ["spiral", a, b] => Ok(CurveKind::LogSpiral(num(a)?, num(b)?)),
        _ => Err(Error::Parse(format!(
            "unknown curve `{s}`; expected left, sector:θ, zigzag:β or spiral:a:b"
        ))),
    }
}

fn resolve_map(args: &Args) -> Result<Option<MapSpec>> {
    if let Some(text) = &args.map {
        let m: MapSpec = text.parse()?;
        return match (m, args.k) {
            (MapSpec::TowerPoly { c, poly, .. }, Some(k)) => MapSpec::tower(k, c, poly).map(Some),
            (MapSpec::HLambda { .. }, Some(_)) => {
                Err(Error::InvalidMap("--k does not apply to kind=h".into()))
            }
            (m, None) => Ok(Some(m)),
        };
    }
    if let Some(l) = args.lambda {
        if args.command != Command::Verify {
            return MapSpec::f_lambda(l).map(Some);
        }
    }
    if let Some(b) = args.beta {
        if args.command != Command::Verify {
            return MapSpec::f_two_beta(b).map(Some);
        }
    }
    match args.k {
        Some(k) => MapSpec::tower(k, Complex64::new(1.0, 0.0), Poly::identity()).map(Some),
        None => Ok(None),
    }
}

impl RunConfig {
    pub fn from_args(args: &Args) -> Result<Self> {
        let map = resolve_map(args)?;
        let half_widths = args
            .windows
            .clone()
            .unwrap_or_else(|| DEFAULT_WINDOWS.to_vec());
        if half_widths.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err(Error::Precondition(
                "window half-widths must be positive".into(),
            ));
        }
        let window = match &args.window {
            None => None,
            Some(v) if v.len() == 4 => {
                let r = Rect::new(v[0], v[1], v[2], v[3]);
                r.validate()?;
                Some(r)
            }
            Some(_) => {
                return Err(Error::Parse(
                    "--window needs re_min,re_max,im_min,im_max".into(),
                ))
            }
        };
        let radius = args.radius.unwrap_or(DEFAULT_RADIUS);
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::Precondition(format!(
                "R must be positive, got {radius}"
            )));
        }
        if args.resolution == Some(0) || args.max_iter == Some(0) || args.threads == Some(0) {
            return Err(Error::Precondition(
                "--resolution, --max-iter and --threads must be at least 1".into(),
            ));
        }
        if args.format != Format::Json && args.out.is_none() {
            return Err(Error::Precondition(
                "--format ppm and csv need --out".into(),
            ));
        }
        let needs_map = matches!(
            args.command,
            Command::Critical | Command::Bov | Command::Curve | Command::Orbit
        );
        if needs_map && map.is_none() {
            return Err(Error::Precondition(
                "this subcommand needs --map (or --lambda, --beta, --k)".into(),
            ));
        }
        let z0 = args.z0.as_deref().map(parse_complex).transpose()?;
        if args.command == Command::Orbit && z0.is_none() {
            return Err(Error::Precondition("orbit needs --z0".into()));
        }
        Ok(RunConfig {
            command: args.command,
            map,
            lambda: args.lambda,
            beta: args.beta,
            radius,
            windows: half_widths.iter().map(|&h| Rect::square(h)).collect(),
            window,
            resolution: args.resolution,
            max_iter: args.max_iter.unwrap_or(DEFAULT_MAX_ITER),
            seed: args.seed,
            threads: args.threads,
            out: args.out.clone(),
            format: args.format,
            suite: args.suite.clone().unwrap_or_else(|| "all".to_string()),
            curve: args
                .curve
                .as_deref()
                .map(parse_curve)
                .transpose()?
                .unwrap_or(CurveKind::LeftRay),
            z0,
        })
    }

    /// Everything that determines the output bytes; threads and paths are
    /// left out.
    fn describe(&self) -> String {
        format!(
            "command={:?} map={} lambda={:?} beta={:?} R={:e} windows={:?} window={:?} resolution={:?} max_iter={} seed={} suite={} curve={:?} z0={:?}",
            self.command,
            self.map.as_ref().map(|m| m.to_string()).unwrap_or_default(),
            self.lambda,
            self.beta,
            self.radius,
            self.windows,
            self.window,
            self.resolution,
            self.max_iter,
            self.seed,
            self.suite,
            self.curve,
            self.z0
        )
    }
}

/// Output of one subcommand before anything is written.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub report: VerificationReport,
    /// File name and bytes of each extra output.
    pub files: Vec<(String, Vec<u8>)>,
}

fn report(name: &str, cfg: &RunConfig, checks: Vec<Check>) -> VerificationReport {
    let mut r = VerificationReport::new(name);
    r.extend(checks);
    r.input_digest = digest(&cfg.describe());
    r
}

fn map_of(cfg: &RunConfig) -> Result<&MapSpec> {
    cfg.map
        .as_ref()
        .ok_or_else(|| Error::Precondition("missing map".into()))
}

fn run_critical(cfg: &RunConfig) -> Result<RunOutput> {
    let m = map_of(cfg)?;
    let data = window_data(m, &cfg.windows, DEFAULT_SEED_DENSITY)?;
    let mut files = Vec::new();
    if cfg.format == Format::Csv {
        let all: Vec<_> = data.iter().flat_map(|(d, _)| d.iter().cloned()).collect();
        files.push((
            "critical.csv".to_string(),
            csv::critical_csv(&all).into_bytes(),
        ));
    }
    let checks = accumulation_checks(&cfg.windows, data)?;
    Ok(RunOutput {
        report: report("critical", cfg, checks),
        files,
    })
}

fn run_bov(cfg: &RunConfig) -> Result<RunOutput> {
    let m = map_of(cfg)?;
    let res = cfg.resolution.unwrap_or(DEFAULT_BOV_RESOLUTION);
    let ev = bov_evidence(m, cfg.radius, &cfg.windows, res)?;
    let mut files = Vec::new();
    if cfg.format == Format::Ppm {
        for (i, mask) in ev.masks.iter().enumerate() {
            files.push((format!("bov_window{i}.pbm"), pnm::emit_pbm(mask)?));
        }
    }
    Ok(RunOutput {
        report: report("bov", cfg, ev.checks),
        files,
    })
}

fn run_curve(cfg: &RunConfig) -> Result<RunOutput> {
    let m = map_of(cfg)?;
    let spec = CurveSpec::new(cfg.curve, CURVE_T.0, CURVE_T.1)?;
    if let Some(p) = m.poly() {
        spec.validate_for_degree(p.degree())?;
    }
    let g = curve_growth(m, &spec, CURVE_SAMPLES)?;
    let minima: Vec<String> = g.minima().iter().map(|x| format!("{x:.3e}")).collect();
    let check = Check::new(
        "curve.growth",
        "f(γ) is unbounded along an unbounded curve γ",
        Status::from_bool(g.eventually_increasing(CURVE_TAIL)),
    )
    .with_details(format!(
        "{:?} on t ∈ [{}, {}]: decade minima [{}]; increasing tail {}",
        cfg.curve,
        CURVE_T.0,
        CURVE_T.1,
        minima.join(", "),
        g.increasing_tail()
    ));
    let mut files = Vec::new();
    if cfg.format == Format::Csv {
        files.push(("curve.csv".to_string(), csv::curve_csv(&g).into_bytes()));
    }
    Ok(RunOutput {
        report: report("curve", cfg, vec![check]),
        files,
    })
}

fn run_basin(cfg: &RunConfig) -> Result<RunOutput> {
    let m = match &cfg.map {
        Some(m) => m.clone(),
        None => MapSpec::f_lambda(1.0)?,
    };
    let window = cfg
        .window
        .unwrap_or(Rect::new(-6.0, 6.0, -2.0 * PI, 2.0 * PI));
    let res = cfg.resolution.unwrap_or(DEFAULT_BASIN_RESOLUTION);
    let g = classify_grid(&m, &window, res, res, cfg.max_iter)?;
    let escaped = g.labels.iter().filter(|&&l| l == LABEL_ESCAPED).count();
    let undecided = g.labels.iter().filter(|&&l| l == LABEL_UNDECIDED).count();
    let converged = g.labels.len() - escaped - undecided;
    let status = if undecided == g.labels.len() {
        Status::Inconclusive
    } else {
        Status::Pass
    };
    let check = Check::new(
        "basin.grid",
        "orbits classified by limit fixed point or escape",
        status,
    )
    .with_details(format!(
        "{res}×{res} pixels: {converged} converged, {escaped} escaped, {undecided} undecided"
    ));
    let mut files = Vec::new();
    match cfg.format {
        Format::Ppm => files.push(("basins.ppm".to_string(), pnm::emit_ppm_grid(&g)?)),
        Format::Csv => files.push(("basins.csv".to_string(), csv::grid_csv(&g).into_bytes())),
        Format::Json => {}
    }
    Ok(RunOutput {
        report: report("basin", cfg, vec![check]),
        files,
    })
}

fn run_orbit(cfg: &RunConfig) -> Result<RunOutput> {
    let m = map_of(cfg)?;
    let z0 = cfg
        .z0
        .ok_or_else(|| Error::Precondition("orbit needs --z0".into()))?;
    let o = iterate(m, z0, cfg.max_iter)?;
    let (status, details) = match o.verdict {
        Verdict::Converged {
            fixed_point,
            k_index,
        } => (
            Status::Pass,
            format!(
                "converged to {fixed_point} (index {k_index}) after {} steps",
                o.steps_used
            ),
        ),
        Verdict::Escaped { at_step } => (Status::Pass, format!("escaped at step {at_step}")),
        Verdict::Undecided => (
            Status::Inconclusive,
            format!("undecided after {} steps", o.steps_used),
        ),
    };
    let check = Check::new(
        "orbit.verdict",
        "orbit converges to a fixed point or escapes",
        status,
    )
    .with_details(details);
    let mut files = Vec::new();
    if cfg.format == Format::Csv {
        files.push(("orbit.csv".to_string(), csv::orbit_csv(&o).into_bytes()));
    }
    Ok(RunOutput {
        report: report("orbit", cfg, vec![check]),
        files,
    })
}

fn run_verify(cfg: &RunConfig) -> Result<RunOutput> {
    let defaults = SuiteOptions::default();
    let opts = SuiteOptions {
        seed: cfg.seed,
        lambda: cfg.lambda,
        beta: cfg.beta,
        resolution: cfg.resolution.unwrap_or(defaults.resolution),
        image_resolution: defaults.image_resolution,
        max_iter: cfg.max_iter,
    };
    let out = run_suite(&cfg.suite, &opts)?;
    Ok(RunOutput {
        report: out.report,
        files: out
            .artifacts
            .into_iter()
            .map(|a| (a.name, a.bytes))
            .collect(),
    })
}

/// Runs the subcommand on the current rayon pool.
pub fn execute(cfg: &RunConfig) -> Result<RunOutput> {
    match cfg.command {
        Command::Critical => run_critical(cfg),
        Command::Bov => run_bov(cfg),
        Command::Curve => run_curve(cfg),
        Command::Basin => run_basin(cfg),
        Command::Orbit => run_orbit(cfg),
        Command::Verify => run_verify(cfg),
    }
}

/// Writes `bytes` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, dir.join(name))?;
    Ok(())
}

fn exit_code(status: Status) -> i32 {
    match status {
        Status::Pass | Status::Skipped => EXIT_PASS,
        Status::Fail => EXIT_FAIL,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::InvalidMap(_) | Error::Parse(_) | Error::Precondition(_) => EXIT_USAGE,
        Error::NoConvergence(_) | Error::Io(_) => EXIT_FAIL,
    }
}

/// Runs a validated configuration and returns the exit code.
pub fn run(cfg: &RunConfig) -> i32 {
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("bovdyn: cannot start worker pool: {e}");
            return EXIT_FAIL;
        }
    };
    let out = match pool.install(|| execute(cfg)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("bovdyn: {e}");
            return error_code(&e);
        }
    };
    let json = emit_json(&out.report);
    match &cfg.out {
        None => print!("{}", String::from_utf8_lossy(&json)),
        Some(dir) => {
            let written = fs::create_dir_all(dir).map_err(Error::from).and_then(|_| {
                write_atomic(dir, &format!("{}.json", out.report.suite_name), &json)?;
                for (name, bytes) in &out.files {
                    write_atomic(dir, name, bytes)?;
                }
                Ok(())
            });
            if let Err(e) = written {
                eprintln!("bovdyn: {e}");
                return error_code(&e);
            }
            for c in &out.report.checks {
                println!("{:<12} {}", c.status.as_str(), c.id);
            }
            println!(
                "{:<12} {}",
                out.report.status().as_str(),
                out.report.suite_name
            );
        }
    }
    exit_code(out.report.status())
}

/// Parses `argv` and runs it.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
        }
    };
    match RunConfig::from_args(&args) {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            eprintln!("bovdyn: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(argv: &[&str]) -> Result<RunConfig> {
        let args =
            Args::try_parse_from(std::iter::once("bovdyn").chain(argv.iter().copied())).unwrap();
        RunConfig::from_args(&args)
    }

    #[test]
    fn windows_and_radius() {
        let c = config(&[
            "bov",
            "--map",
            "kind=tower k=1 c=1 poly=[0,1]",
            "--R",
            "5",
            "--windows",
            "10,20,40",
        ])
        .unwrap();
        assert_eq!(c.radius, 5.0);
        assert_eq!(
            c.windows,
            vec![Rect::square(10.0), Rect::square(20.0), Rect::square(40.0)]
        );
    }

    #[test]
    fn map_shortcuts() {
        assert_eq!(
            config(&["orbit", "--lambda", "1", "--z0", "0"])
                .unwrap()
                .map,
            Some(MapSpec::f_lambda(1.0).unwrap())
        );
        assert_eq!(
            config(&["curve", "--beta", "-1"]).unwrap().map,
            Some(MapSpec::f_two_beta(-1.0).unwrap())
        );
        let c = config(&[
            "critical",
            "--map",
            "kind=tower k=1 c=1 poly=[0,1]",
            "--k",
            "2",
        ])
        .unwrap();
        assert!(matches!(c.map, Some(MapSpec::TowerPoly { k: 2, .. })));
        assert_eq!(config(&["verify", "--lambda", "1"]).unwrap().map, None);
    }

    #[test]
    fn config_errors() {
        assert!(config(&["critical", "--map", "kind=tower k=1 c=1 poly=[]"]).is_err());
        assert!(config(&["critical"]).is_err());
        assert!(config(&["orbit", "--lambda", "1"]).is_err());
        assert!(config(&["basin", "--format", "ppm"]).is_err());
        assert!(config(&["basin", "--window", "1,0,0,1"]).is_err());
        assert!(config(&["bov", "--k", "1", "--windows", "10,-1"]).is_err());
    }

    #[test]
    fn curve_syntax() {
        assert_eq!(parse_curve("left").unwrap(), CurveKind::LeftRay);
        assert_eq!(
            parse_curve("spiral:0:3").unwrap(),
            CurveKind::LogSpiral(0.0, 3.0)
        );
        assert_eq!(
            parse_curve("sector:0.5").unwrap(),
            CurveKind::SectorRay(0.5)
        );
        assert!(parse_curve("circle").is_err());
    }

    #[test]
    fn usage_exit_codes() {
        assert_eq!(
            main_with_args(["bovdyn", "critical", "--map", "kind=tower k=1 c=1 poly=[]"]),
            EXIT_USAGE
        );
        assert_eq!(main_with_args(["bovdyn", "frobnicate"]), EXIT_USAGE);
    }

    #[test]
    fn threads_do_not_change_output() {
        let run_with = |t: &str| {
            let args = Args::try_parse_from([
                "bovdyn",
                "basin",
                "--lambda",
                "1",
                "--resolution",
                "24",
                "--threads",
                t,
            ])
            .unwrap();
            let cfg = RunConfig::from_args(&args).unwrap();
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.threads.unwrap())
                .build()
                .unwrap();
            emit_json(&pool.install(|| execute(&cfg)).unwrap().report)
        };
        assert_eq!(run_with("1"), run_with("3"));
    }
}
