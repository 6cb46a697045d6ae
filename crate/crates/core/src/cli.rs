//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime or data error.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::analysis::{
    fit_threshold, locate_threshold, percolation_threshold, read_csv, run_sweep, write_csv,
    FitOptions, Interval, LocateConfig, Located, ScalingFit, SweepConfig, SweepRow, SweepTable,
    DEFAULT_TRIAL_CAP,
};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeKind, DEFAULT_MAX_LEVEL};
use crate::stabilizer::ErrorType;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "surface-lab", version, about = "Surface codes on periodic 2D lattices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a lattice and print its incidence structure.
    Lattice(LatticeArgs),
    /// Monte Carlo sweep of logical failure rates, written as CSV.
    Simulate(SimulateArgs),
    /// Fit the finite-size scaling ansatz to a sweep CSV.
    Fit(FitArgs),
    /// Estimate a bond-percolation threshold.
    Percolate(PercolateArgs),
    /// Locate an error threshold adaptively and fit it.
    Threshold(ThresholdArgs),
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    /// square, kagome, hexagonal, trihexa, recursive, dual-<kind>, recursive-<n>
    #[arg(long)]
    pub kind: String,
    #[arg(long)]
    pub size: usize,
    /// Emit the dual lattice instead.
    #[arg(long)]
    pub dual: bool,
    /// Stellation level for `--kind recursive`.
    #[arg(long, visible_alias = "recursive")]
    pub level: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_MAX_LEVEL)]
    pub max_level: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// TOML file with a `[simulate]` table; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub lattice: Option<String>,
    /// Comma-separated linear sizes.
    #[arg(long)]
    pub sizes: Option<String>,
    #[arg(long)]
    pub error_type: Option<ErrorType>,
    /// `start:stop:step` (inclusive) or a comma-separated list.
    #[arg(long)]
    pub p_grid: Option<String>,
    /// Same syntax as `--p-grid`; defaults to `0`.
    #[arg(long)]
    pub loss_grid: Option<String>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; the output does not depend on it.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub trial_cap: Option<u64>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    pub bootstrap: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative half-width of the fit window around the crossing.
    #[arg(long, default_value_t = 0.3)]
    pub window: f64,
}

#[derive(Debug, Args)]
pub struct PercolateArgs {
    #[arg(long)]
    pub kind: String,
    #[arg(long)]
    pub dual: bool,
    #[arg(long, visible_alias = "recursive")]
    pub level: Option<usize>,
    #[arg(long, default_value = "16,32,64")]
    pub sizes: String,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub lattice: String,
    #[arg(long)]
    pub error_type: ErrorType,
    #[arg(long, default_value = "8,12,16")]
    pub sizes: String,
    #[arg(long, default_value_t = 0.0)]
    pub p_loss: f64,
    #[arg(long, default_value_t = 2000)]
    pub trials: u64,
    #[arg(long, default_value_t = 400)]
    pub coarse_trials: u64,
    /// Relative half-width of the fine grid around the coarse crossing.
    #[arg(long, default_value_t = 0.2)]
    pub span: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Also write every simulated row as CSV here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// Accepts `start:stop:step` (stop included up to rounding) or `a,b,c`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |m: &str| Error::InvalidArgument(format!("grid `{spec}`: {m}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.len() {
        1 => spec.split(',').map(num).collect(),
        3 => {
            let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
            if !(step > 0.0) || stop < start {
                return Err(bad("need step > 0 and stop >= start"));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..n)
                .map(|k| ((start + k as f64 * step) * 1e10).round() / 1e10)
                .collect())
        }
        _ => Err(bad("expected start:stop:step or a comma-separated list")),
    }
}

pub fn parse_sizes(spec: &str) -> Result<Vec<usize>> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad size `{s}`")))
        })
        .collect()
}

fn resolve_kind(kind: &str, level: Option<usize>, dual: bool) -> Result<LatticeKind> {
    let base = match (kind.trim().to_ascii_lowercase().as_str(), level) {
        ("recursive", Some(n)) => LatticeKind::Recursive(n),
        ("recursive", None) => {
            return Err(Error::InvalidArgument("`--kind recursive` needs `--level`".into()))
        }
        (_, Some(_)) => {
            return Err(Error::InvalidArgument("`--level` only applies to `--kind recursive`".into()))
        }
        (k, None) => k.parse()?,
    };
    Ok(if dual { base.dual() } else { base })
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    simulate: Option<SimulateFile>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulateFile {
    lattice: Option<String>,
    sizes: Option<Vec<usize>>,
    error_type: Option<ErrorType>,
    p_grid: Option<GridValue>,
    loss_grid: Option<GridValue>,
    trials: Option<u64>,
    seed: Option<u64>,
    jobs: Option<usize>,
    trial_cap: Option<u64>,
    output: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum GridValue {
    Spec(String),
    List(Vec<f64>),
}

impl GridValue {
    fn values(&self) -> Result<Vec<f64>> {
        match self {
            GridValue::Spec(s) => parse_grid(s),
            GridValue::List(v) => Ok(v.clone()),
        }
    }
}

fn read_config(path: &Path) -> Result<SimulateFile> {
    let text = std::fs::read_to_string(path)?;
    let file: ConfigFile = toml::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e
            .span()
            .map(|s| text[..s.start].lines().count().max(1) as u64)
            .unwrap_or(0),
        message: e.message().to_string(),
    })?;
    Ok(file.simulate.unwrap_or_default())
}

/// Resolved `simulate` settings: the sweep plus where and how to run it.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulateRun {
    pub sweep: SweepConfig,
    pub jobs: Option<usize>,
    pub output: Option<PathBuf>,
}

pub fn resolve_simulate(args: &SimulateArgs) -> Result<SimulateRun> {
    let file = match &args.config {
        Some(p) => read_config(p)?,
        None => SimulateFile::default(),
    };
    let missing = |name: &str| Error::InvalidArgument(format!("missing `--{name}`"));
    let lattice = match (&args.lattice, &file.lattice) {
        (Some(k), _) | (None, Some(k)) => k.parse()?,
        _ => return Err(missing("lattice")),
    };
    let sizes = match (&args.sizes, file.sizes) {
        (Some(s), _) => parse_sizes(s)?,
        (None, Some(v)) => v,
        _ => return Err(missing("sizes")),
    };
    let p_grid = match (&args.p_grid, &file.p_grid) {
        (Some(s), _) => parse_grid(s)?,
        (None, Some(g)) => g.values()?,
        _ => return Err(missing("p-grid")),
    };
    let loss_grid = match (&args.loss_grid, &file.loss_grid) {
        (Some(s), _) => parse_grid(s)?,
        (None, Some(g)) => g.values()?,
        _ => vec![0.0],
    };
    let sweep = SweepConfig {
        lattice,
        sizes,
        error_type: args
            .error_type
            .or(file.error_type)
            .ok_or_else(|| missing("error-type"))?,
        p_grid,
        loss_grid,
        trials: args.trials.or(file.trials).ok_or_else(|| missing("trials"))?,
        seed: args.seed.or(file.seed).unwrap_or(0),
        trial_cap: args.trial_cap.or(file.trial_cap).unwrap_or(DEFAULT_TRIAL_CAP),
    };
    Ok(SimulateRun {
        sweep,
        jobs: args.jobs.or(file.jobs),
        output: args.output.clone().or(file.output),
    })
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// Comment lines embedded in simulate output. The worker count is left out
/// so that output is identical for every `--jobs`.
pub fn simulate_header(cfg: &SweepConfig) -> Vec<String> {
    vec![
        format!("surface-lab {VERSION} simulate"),
        format!("lattice={}", cfg.lattice),
        format!("sizes={}", join(&cfg.sizes)),
        format!("error_type={}", cfg.error_type),
        format!("p_grid={}", join(&cfg.p_grid)),
        format!("loss_grid={}", join(&cfg.loss_grid)),
        format!("trials={}", cfg.trials),
        format!("seed={}", cfg.seed),
        format!("trial_cap={}", cfg.trial_cap),
    ]
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match jobs {
        Some(0) => Err(Error::InvalidArgument("--jobs must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(f),
        None => f(),
    }
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

#[derive(Debug, Serialize)]
struct FitReport {
    lattice: String,
    error_type: String,
    p_loss: f64,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
    #[serde(rename = "A", skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_th: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sse: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    initial_p_th: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    points_used: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bootstrap_samples: Option<usize>,
    #[serde(rename = "A_ci", skip_serializing_if = "Option::is_none")]
    a_ci: Option<[f64; 2]>,
    #[serde(rename = "B_ci", skip_serializing_if = "Option::is_none")]
    b_ci: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nu_ci: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_th_ci: Option<[f64; 2]>,
}

impl FitReport {
    fn new(row: &SweepRow, result: &Result<ScalingFit>) -> Self {
        let ci = |i: Option<Interval>| i.map(|i| [i.lo, i.hi]);
        let mut r = FitReport {
            lattice: row.lattice.clone(),
            error_type: row.error_type.to_string(),
            p_loss: row.p_loss,
            status: "ok".into(),
            message: None,
            a: None,
            b: None,
            nu: None,
            p_th: None,
            sse: None,
            initial_p_th: None,
            points_used: None,
            bootstrap_samples: None,
            a_ci: None,
            b_ci: None,
            nu_ci: None,
            p_th_ci: None,
        };
        match result {
            Ok(f) => {
                r.a = Some(f.a);
                r.b = Some(f.b);
                r.nu = Some(f.nu);
                r.p_th = Some(f.p_th);
                r.sse = Some(f.sse);
                r.initial_p_th = Some(f.initial_p_th);
                r.points_used = Some(f.points_used);
                r.bootstrap_samples = Some(f.bootstrap_samples);
                r.a_ci = ci(f.a_ci);
                r.b_ci = ci(f.b_ci);
                r.nu_ci = ci(f.nu_ci);
                r.p_th_ci = ci(f.p_th_ci);
            }
            Err(e) => {
                r.status = "error".into();
                r.message = Some(e.to_string());
            }
        }
        r
    }
}

#[derive(Serialize)]
struct FitDocument {
    fit: Vec<FitReport>,
}

fn render_fits(comments: &[String], reports: Vec<FitReport>) -> Result<String> {
    let mut out = String::new();
    for c in comments {
        out.push_str(&format!("# {c}\n"));
    }
    let body = toml::to_string(&FitDocument { fit: reports })
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    out.push_str(&body);
    Ok(out)
}

/// Groups rows by (lattice, error type, loss rate), in first-seen order.
pub fn group_rows(table: &SweepTable) -> Vec<Vec<SweepRow>> {
    let mut groups: Vec<Vec<SweepRow>> = Vec::new();
    for row in &table.rows {
        let slot = groups.iter_mut().find(|g| {
            g[0].lattice == row.lattice && g[0].error_type == row.error_type && g[0].p_loss == row.p_loss
        });
        match slot {
            Some(g) => g.push(row.clone()),
            None => groups.push(vec![row.clone()]),
        }
    }
    groups
}

fn cmd_lattice(args: &LatticeArgs) -> Result<()> {
    let kind = resolve_kind(&args.kind, args.level, args.dual)?;
    log::info!("lattice kind={kind} size={} max_level={}", args.size, args.max_level);
    let lat = Lattice::build_capped(kind, args.size, args.max_level)?;
    lat.validate()?;
    let mut out = open_output(&args.output)?;
    lat.write_text(&mut out)?;
    out.flush()?;
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let run = resolve_simulate(args)?;
    run.sweep.validate()?;
    log::info!(
        "simulate resolved config: {:?} jobs={:?} output={:?}",
        run.sweep,
        run.jobs,
        run.output
    );
    let table = with_jobs(run.jobs, || run_sweep(&run.sweep))?;
    let mut out = open_output(&run.output)?;
    write_csv(&table, &simulate_header(&run.sweep), &mut out)?;
    out.flush()?;
    Ok(())
}

fn cmd_fit(args: &FitArgs) -> Result<()> {
    let opts = FitOptions {
        window: args.window,
        bootstrap: args.bootstrap,
        seed: args.seed,
        ..FitOptions::default()
    };
    log::info!("fit input={:?} options={opts:?}", args.input);
    let table = read_csv(BufReader::new(File::open(&args.input)?), &args.input)?;
    let mut reports = Vec::new();
    let mut first_error = None;
    for group in group_rows(&table) {
        let result = fit_threshold(&group, &opts);
        reports.push(FitReport::new(&group[0], &result));
        if let Err(e) = result {
            log::error!("{} {} p_loss={}: {e}", group[0].lattice, group[0].error_type, group[0].p_loss);
            first_error.get_or_insert(e);
        }
    }
    let comments = vec![
        format!("surface-lab {VERSION} fit"),
        format!("input={}", args.input.display()),
        format!("window={} bootstrap={} seed={}", args.window, args.bootstrap, args.seed),
    ];
    let mut out = open_output(&args.output)?;
    out.write_all(render_fits(&comments, reports)?.as_bytes())?;
    out.flush()?;
    first_error.map_or(Ok(()), Err)
}

fn cmd_percolate(args: &PercolateArgs) -> Result<()> {
    let kind = resolve_kind(&args.kind, args.level, args.dual)?;
    let sizes = parse_sizes(&args.sizes)?;
    log::info!(
        "percolate kind={kind} sizes={sizes:?} samples={} seed={} jobs={:?}",
        args.samples,
        args.seed,
        args.jobs
    );
    let est = with_jobs(args.jobs, || {
        percolation_threshold(&kind, &sizes, args.samples, args.seed)
    })?;
    let mut text = format!(
        "# surface-lab {VERSION} percolate\n# kind={kind} sizes={} samples={} seed={}\n",
        join(&sizes),
        args.samples,
        args.seed
    );
    text.push_str(&format!("kind = \"{kind}\"\np_c = {}\np_c_ci = [{}, {}]\nslope = {}\n", est.p_c, est.ci.lo, est.ci.hi, est.slope));
    for s in &est.per_size {
        text.push_str(&format!("\n[[size]]\nL = {}\nmedian = {}\nsamples = {}\n", s.size, s.median, s.samples));
    }
    let mut out = open_output(&args.output)?;
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn cmd_threshold(args: &ThresholdArgs) -> Result<()> {
    let kind: LatticeKind = args.lattice.parse()?;
    let cfg = LocateConfig {
        sizes: parse_sizes(&args.sizes)?,
        trials: args.trials,
        coarse_trials: args.coarse_trials,
        seed: args.seed,
        fine_span: args.span,
        ..LocateConfig::default()
    };
    log::info!(
        "threshold lattice={kind} error_type={} p_loss={} config={cfg:?} jobs={:?}",
        args.error_type,
        args.p_loss,
        args.jobs
    );
    let located = with_jobs(args.jobs, || {
        locate_threshold(&kind, args.error_type, args.p_loss, &cfg)
    })?;
    let comments = vec![
        format!("surface-lab {VERSION} threshold"),
        format!(
            "lattice={kind} error_type={} p_loss={} sizes={} trials={} seed={}",
            args.error_type, args.p_loss, args.sizes, args.trials, args.seed
        ),
    ];
    if let Some(path) = &args.csv {
        let table = SweepTable {
            rows: located.rows().to_vec(),
        };
        write_csv(&table, &comments, BufWriter::new(File::create(path)?))?;
    }
    let text = match &located {
        Located::Threshold { fit, rows } => {
            render_fits(&comments, vec![FitReport::new(&rows[0], &Ok(fit.clone()))])?
        }
        Located::Vanished { .. } => {
            let mut t = comments.iter().map(|c| format!("# {c}\n")).collect::<String>();
            t.push_str("status = \"vanished\"\np_th = 0.0\n");
            t
        }
    };
    let mut out = open_output(&args.output)?;
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidSize(_)
            | Error::UnknownKind(_)
            | Error::RecursionTooDeep { .. }
            | Error::InvalidProbability { .. }
            | Error::InvalidArgument(_)
            | Error::TrialCap { .. }
    )
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Lattice(a) => cmd_lattice(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Percolate(a) => cmd_percolate(a),
        Command::Threshold(a) => cmd_threshold(a),
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if is_usage(&e) {
                1
            } else {
                2
            }
        }
    }
}
