//! Batch pipelines behind the `zswkb` binary: argument parsing, run
//! configuration, deterministic CSV/JSON output and the `validate` suite.

mod validate;

pub use validate::{validate, Check, ValidationReport};

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::oracle::{self, DiscretizationParams, ReflectionOptions};
use crate::potential::{decompose, PotentialSpec};
use crate::spectrum;

#[derive(Debug, Parser)]
#[command(name = "zswkb", version, about = "Semiclassical scattering data for the Zakharov-Shabat operator")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand; each has a `ZSWKB_*` environment override.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Potential config (TOML, or JSON by extension).
    #[arg(long, global = true, env = "ZSWKB_POTENTIAL")]
    pub potential: Option<PathBuf>,
    /// Run config (TOML) supplying defaults for the flags below.
    #[arg(long, global = true, env = "ZSWKB_CONFIG")]
    pub config: Option<PathBuf>,
    /// Comma-separated hbar values.
    #[arg(long, visible_alias = "hbars", global = true, allow_negative_numbers = true, value_delimiter = ',', env = "ZSWKB_HBAR")]
    pub hbar: Vec<f64>,
    /// Eigenvalue window a,b for mu = Im lambda.
    #[arg(long = "mu-window", global = true, allow_negative_numbers = true, value_delimiter = ',', env = "ZSWKB_MU_WINDOW")]
    pub mu_window: Option<Vec<f64>>,
    /// Output directory.
    #[arg(long, global = true, env = "ZSWKB_OUT")]
    pub out: Option<PathBuf>,
    /// Acceptance tolerance for `validate` and `sweep` gaps.
    #[arg(long, global = true, allow_negative_numbers = true, env = "ZSWKB_TOL")]
    pub tol: Option<f64>,
    /// Grid size N of the oracle discretization.
    #[arg(long = "grid-n", global = true, env = "ZSWKB_GRID_N")]
    pub grid_n: Option<usize>,
    /// Half-width X of the oracle domain.
    #[arg(long = "domain-x", global = true, allow_negative_numbers = true, env = "ZSWKB_DOMAIN_X")]
    pub domain_x: Option<f64>,
    /// Worker threads for sweeps.
    #[arg(long, global = true, env = "ZSWKB_JOBS")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Barriers and wells at the given levels (JSON).
    Decompose {
        #[arg(long, allow_negative_numbers = true, value_delimiter = ',', required = true)]
        mu: Vec<f64>,
    },
    /// Action profiles Phi_l(mu) and Phi_l'(mu) of every barrier node (CSV).
    Action,
    /// WKB eigenvalues and norming signs (CSV per hbar).
    Wkb,
    /// Direct spectrum with shooting refinement (CSV and JSON per hbar).
    Oracle,
    /// Acceptance-grade invariants; exits nonzero on failure (JSON).
    Validate {
        /// Also run the oracle and compare.
        #[arg(long)]
        with_oracle: bool,
    },
    /// Limiting density and, per hbar, the counting check (CSV and JSON).
    Density {
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Reflection coefficients (CSV).
    Reflection {
        #[arg(long, allow_negative_numbers = true, value_delimiter = ',', default_value = "0.5")]
        lambda: Vec<f64>,
        /// The lambda floor is hbar^b.
        #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
        floor_exponent: f64,
    },
    /// Oracle/WKB matching over an hbar sweep with a fitted slope (JSON).
    Sweep,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Decompose { .. } => "decompose",
            Command::Action => "action",
            Command::Wkb => "wkb",
            Command::Oracle => "oracle",
            Command::Validate { .. } => "validate",
            Command::Density { .. } => "density",
            Command::Reflection { .. } => "reflection",
            Command::Sweep => "sweep",
        }
    }
}

/// Optional run-config file; every field may be overridden by a flag.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    potential: Option<PathBuf>,
    hbar: Option<Vec<f64>>,
    mu_window: Option<[f64; 2]>,
    out: Option<PathBuf>,
    tol: Option<f64>,
    grid_n: Option<usize>,
    domain_x: Option<f64>,
    jobs: Option<usize>,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub potential: PathBuf,
    pub command: String,
    pub hbar: Vec<f64>,
    pub mu_window: Option<(f64, f64)>,
    pub tol: Option<f64>,
    pub grid_n: Option<usize>,
    pub domain_x: Option<f64>,
    #[serde(skip)]
    pub out: PathBuf,
    #[serde(skip)]
    pub jobs: usize,
}

fn cfg(path: &str, msg: impl Into<String>) -> Error {
    Error::Config { path: path.into(), msg: msg.into() }
}

impl RunConfig {
    /// Merge flags over the optional config file and validate.
    pub fn resolve(args: &CommonArgs, command: &Command) -> Result<Self> {
        let file: FileConfig = match &args.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                toml::from_str(&text).map_err(|e| cfg("<config>", e.to_string()))?
            }
            None => FileConfig::default(),
        };
        let potential = args
            .potential
            .clone()
            .or(file.potential)
            .ok_or_else(|| cfg("potential", "missing; pass --potential <file>"))?;
        let hbar = if args.hbar.is_empty() { file.hbar.unwrap_or_default() } else { args.hbar.clone() };
        let mu_window = match (&args.mu_window, file.mu_window) {
            (Some(v), _) if v.len() == 2 => Some((v[0], v[1])),
            (Some(v), _) => return Err(cfg("mu_window", format!("expected two values a,b, got {}", v.len()))),
            (None, Some(w)) => Some((w[0], w[1])),
            _ => None,
        };
        let jobs = args
            .jobs
            .or(file.jobs)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
            .max(1);
        let rc = RunConfig {
            potential,
            command: command.name().to_string(),
            hbar,
            mu_window,
            tol: args.tol.or(file.tol),
            grid_n: args.grid_n.or(file.grid_n),
            domain_x: args.domain_x.or(file.domain_x),
            out: args.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from(".")),
            jobs,
        };
        rc.check(command)?;
        Ok(rc)
    }

    fn check(&self, command: &Command) -> Result<()> {
        if let Some((i, h)) = self.hbar.iter().enumerate().find(|(_, h)| !(**h > 0.0 && h.is_finite())) {
            return Err(cfg(&format!("hbar[{i}]"), format!("must be positive, got {h}")));
        }
        let needs_hbar = matches!(
            command,
            Command::Wkb | Command::Oracle | Command::Validate { .. } | Command::Reflection { .. } | Command::Sweep
        );
        if needs_hbar && self.hbar.is_empty() {
            return Err(cfg("hbar", "missing; pass --hbar <list>"));
        }
        if matches!(command, Command::Sweep) && self.hbar.windows(2).any(|w| w[1] >= w[0]) {
            return Err(cfg("hbar", "must be strictly descending for a sweep"));
        }
        if let Some((a, b)) = self.mu_window {
            if !(a >= 0.0 && b > a) {
                return Err(cfg("mu_window", format!("need 0 <= a < b, got ({a}, {b})")));
            }
        }
        if let Some(t) = self.tol {
            if !(t > 0.0) {
                return Err(cfg("tol", format!("must be positive, got {t}")));
            }
        }
        if let Some(x) = self.domain_x {
            if !(x > 0.0 && x.is_finite()) {
                return Err(cfg("domain_x", format!("must be positive, got {x}")));
            }
        }
        Ok(())
    }

    /// Short SHA-256 of the canonical run config and potential.
    pub fn hash(&self, spec: &PotentialSpec) -> String {
        let doc = serde_json::json!({"run": self, "potential": spec.config_json()});
        let digest = Sha256::digest(doc.to_string().as_bytes());
        digest.iter().take(8).fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    fn window(&self, spec: &PotentialSpec) -> (f64, f64) {
        self.mu_window.unwrap_or((0.0, spec.amax()))
    }

    /// Oracle parameters: the configured X (default: where A drops to
    /// 1e-10 A_max, at most 40 length scales) and N (default: the smallest
    /// power of two passing the resolution guard).
    pub fn oracle_params(&self, spec: &PotentialSpec, hbar: f64) -> Result<DiscretizationParams> {
        let x = match self.domain_x {
            Some(x) => x,
            None => {
                let (l, r) = spec.cut_points(1e-10 * spec.amax())?;
                l.abs().max(r.abs()).min(40.0 * spec.length_scale())
            }
        };
        Ok(match self.grid_n {
            Some(n) => DiscretizationParams::new(x, n),
            None => DiscretizationParams::for_spec(spec, hbar, x),
        })
    }
}

/// Files written and the overall verdict of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub passed: bool,
    pub summary: String,
}

/// Header line carried by every table: command, config hash and potential.
pub fn header(rc: &RunConfig, spec: &PotentialSpec) -> String {
    format!("# zswkb {} config={} potential={}\n", rc.command, rc.hash(spec), spec.family_name())
}

fn hbar_tag(h: f64) -> String {
    format!("hbar{h}")
}

struct Writer<'a> {
    dir: &'a Path,
    files: Vec<PathBuf>,
}

impl Writer<'_> {
    fn put(&mut self, name: &str, text: &str) -> Result<()> {
        let p = self.dir.join(name);
        std::fs::write(&p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
        self.files.push(p);
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
        self.put(name, &(text + "\n"))
    }
}

/// Report of one sweep point.
#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub hbar: f64,
    pub oracle: oracle::OracleSpectrum,
    pub matching: oracle::MatchReport,
    /// Largest distance from an oracle eigenvalue in the window to the
    /// nearest WKB eigenvalue.
    pub max_nearest_gap: Option<f64>,
}

/// Sweep result with the fitted convergence slope.
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub config_hash: String,
    pub window: (f64, f64),
    pub points: Vec<SweepPoint>,
    /// Slope of log(max nearest gap) against log(hbar).
    pub slope: Option<f64>,
    /// Slope of log(max greedy-pair gap) against log(hbar).
    pub pair_slope: Option<f64>,
}

/// One sweep point: oracle, WKB, matching.
pub fn sweep_point(spec: &PotentialSpec, rc: &RunConfig, hbar: f64) -> Result<SweepPoint> {
    let window = rc.window(spec);
    let params = rc.oracle_params(spec, hbar)?;
    let sp = oracle::discrete_spectrum(spec, hbar, &params)?;
    let wkb = spectrum::enumerate_wkb(spec, hbar, (0.0, spec.amax()))?;
    let mus: Vec<f64> = sp.mus().into_iter().filter(|m| *m > window.0 && *m < window.1).collect();
    let wkb_in: Vec<_> = wkb.iter().copied().filter(|w| w.mu > window.0 && w.mu < window.1).collect();
    let matching = oracle::match_spectra(hbar, &mus, &wkb_in);
    let max_nearest_gap = oracle::nearest_gaps(&mus, &wkb, window).into_iter().map(|g| g.1).reduce(f64::max);
    Ok(SweepPoint { hbar, oracle: sp, matching, max_nearest_gap })
}

/// Run `f` over `items` on at most `jobs` threads, keeping input order.
pub fn parallel_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        return items.iter().map(&f).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut slots: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
    let results = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                results.lock().expect("result lock")[i] = Some(r);
            });
        }
    });
    slots.into_iter().map(|r| r.expect("every item processed")).collect()
}

/// Execute one command.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let rc = RunConfig::resolve(&cli.common, &cli.command)?;
    let spec = PotentialSpec::from_path(&rc.potential)?;
    std::fs::create_dir_all(&rc.out).map_err(|e| Error::Io(format!("{}: {e}", rc.out.display())))?;
    let head = header(&rc, &spec);
    let mut w = Writer { dir: &rc.out, files: Vec::new() };
    let mut passed = true;
    let mut summary = String::new();
    match &cli.command {
        Command::Decompose { mu } => {
            let ds: Vec<_> = mu.iter().map(|m| decompose(&spec, *m)).collect::<Result<_>>()?;
            let doc = serde_json::json!({"config_hash": rc.hash(&spec), "mu": mu, "decompositions": ds});
            w.json("decompose.json", &doc)?;
            let _ = writeln!(summary, "{} levels decomposed", mu.len());
        }
        Command::Action => {
            let mut out = format!("{head}# mu [amplitude units], phi [amplitude x length], dphi [length]\nnode,mu,phi,dphi\n");
            let profiles = spectrum::profiles(&spec)?;
            for p in &profiles {
                for k in 0..p.mu.len() {
                    let _ = writeln!(out, "{},{:.15e},{:.15e},{:.15e}", p.index, p.mu[k], p.phi[k], p.dphi[k]);
                }
            }
            w.put("action.csv", &out)?;
            let _ = writeln!(summary, "{} barrier nodes", profiles.len());
        }
        Command::Wkb => {
            let profiles = spectrum::profiles(&spec)?;
            for &h in &rc.hbar {
                let evs = spectrum::enumerate_with(&spec, &profiles, h, rc.window(&spec))?;
                w.put(&format!("wkb-{}.csv", hbar_tag(h)), &spectrum::eigenvalues_csv(&evs, &head))?;
                let _ = writeln!(summary, "hbar {h}: {} WKB eigenvalues", evs.len());
            }
        }
        Command::Oracle => {
            for &h in &rc.hbar {
                let params = rc.oracle_params(&spec, h)?;
                let sp = oracle::discrete_spectrum(&spec, h, &params)?;
                w.put(&format!("oracle-{}.csv", hbar_tag(h)), &oracle::spectrum_csv(&sp, &head))?;
                w.json(&format!("oracle-{}.json", hbar_tag(h)), &sp)?;
                let _ = writeln!(
                    summary,
                    "hbar {h}: {} eigenvalues (N = {}, X = {}), {} hypothesis violations",
                    sp.eigenvalues.len(),
                    params.n,
                    params.x_half,
                    sp.violations.len()
                );
                if !sp.violations.is_empty() {
                    let _ = writeln!(summary, "WARNING: eigenvalues off the imaginary axis: {:?}", sp.violations);
                }
            }
        }
        Command::Validate { with_oracle } => {
            let report = validate(&spec, &rc, *with_oracle)?;
            passed = report.passed;
            for c in &report.checks {
                let _ = writeln!(
                    summary,
                    "{} {}: {:.3e} (limit {:.3e})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.limit
                );
            }
            w.json("validate.json", &report)?;
        }
        Command::Density { samples } => {
            let grid = spectrum::density_grid(&spec, *samples);
            let ds = spectrum::density(&spec, &grid)?;
            w.put("density.csv", &spectrum::density_csv(&ds, &head))?;
            let profiles = spectrum::profiles(&spec)?;
            let mut reports = Vec::new();
            for &h in &rc.hbar {
                let evs = spectrum::enumerate_with(&spec, &profiles, h, (0.0, spec.amax()))?;
                let r = spectrum::counting_check(&spec, &evs, h, &grid)?;
                let _ = writeln!(summary, "hbar {h}: counting sup gap {:.3e}", r.sup_gap);
                reports.push(r);
            }
            if !reports.is_empty() {
                w.json("density.json", &serde_json::json!({"config_hash": rc.hash(&spec), "counting": reports}))?;
            }
        }
        Command::Reflection { lambda, floor_exponent } => {
            let opts = ReflectionOptions { floor_exponent: *floor_exponent, ..ReflectionOptions::default() };
            let jobs: Vec<(f64, f64)> = rc.hbar.iter().flat_map(|h| lambda.iter().map(move |l| (*h, *l))).collect();
            let samples = parallel_map(&jobs, rc.jobs, |(h, l)| oracle::reflection(&spec, *h, *l, &opts));
            let samples: Vec<_> = samples.into_iter().collect::<Result<_>>()?;
            w.put("reflection.csv", &oracle::reflection_csv(&samples, &head))?;
            let _ = writeln!(summary, "{} reflection samples", samples.len());
        }
        Command::Sweep => {
            let points = parallel_map(&rc.hbar, rc.jobs, |h| sweep_point(&spec, &rc, *h));
            let points: Vec<SweepPoint> = points.into_iter().collect::<Result<_>>()?;
            let nearest: Vec<(f64, f64)> =
                points.iter().filter_map(|p| p.max_nearest_gap.map(|g| (p.hbar, g))).collect();
            let pairs: Vec<(f64, f64)> = points.iter().filter_map(|p| p.matching.max_gap.map(|g| (p.hbar, g))).collect();
            let report = SweepReport {
                config_hash: rc.hash(&spec),
                window: rc.window(&spec),
                slope: oracle::fit_slope(&nearest),
                pair_slope: oracle::fit_slope(&pairs),
                points,
            };
            for p in &report.points {
                let _ = writeln!(summary, "hbar {}: max nearest gap {:?}", p.hbar, p.max_nearest_gap);
            }
            let _ = writeln!(summary, "fitted slope {:?}", report.slope);
            w.json("sweep.json", &report)?;
        }
    }
    Ok(Outcome { files: w.files, passed, summary })
}

/// Entry point used by the binary: exit code 0 on success, 1 when
/// `validate` fails, 2 on errors.
pub fn main_with(cli: Cli) -> std::process::ExitCode {
    match run(&cli) {
        Ok(o) => {
            print!("{}", o.summary);
            for f in &o.files {
                println!("wrote {}", f.display());
            }
            if o.passed {
                std::process::ExitCode::SUCCESS
            } else {
                std::process::ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests;
