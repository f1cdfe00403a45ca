//! The `ifs-lab` command line: analyze a system or verify a gallery entry.

pub mod input;
pub mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use ifs_lab::gallery::{build_example, GalleryParams};
use ifs_lab::{run_property, AnalysisSettings, CirclePoint, IfsError, IfsSystem, Property, Resolution};
use thiserror::Error;

pub use report::{PropertyReport, Report, Source, SCHEMA};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Detector(IfsError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Detector(IfsError::NonInvertible(_) | IfsError::NotDifferentiable { .. }) => 3,
            _ => 2,
        }
    }
}

impl From<IfsError> for CliError {
    fn from(e: IfsError) -> Self {
        match e {
            IfsError::NonInvertible(_) | IfsError::NotDifferentiable { .. } => CliError::Detector(e),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ifs-lab", version, about = "Dynamics of iterated function systems on the circle")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run property detectors and write a report.
    Analyze(AnalyzeArgs),
    /// Check a gallery system against its expected properties.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "source")]
pub struct SourceArgs {
    /// Gallery system name.
    #[arg(long, group = "source")]
    pub gallery: Option<String>,
    /// JSON system definition.
    #[arg(long, group = "source")]
    pub system: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ResolutionArgs {
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.01)]
    pub r: f64,
    #[arg(long, default_value_t = 60)]
    pub depth: usize,
    #[arg(long = "net", default_value_t = 100)]
    pub net_size: usize,
    #[arg(long, default_value_t = 100_000)]
    pub budget: usize,
    /// Separation threshold for cofinite sensitivity.
    #[arg(long, default_value_t = 0.2)]
    pub delta: f64,
    /// Consecutive separation times for cofinite sensitivity.
    #[arg(long, default_value_t = 100)]
    pub window: usize,
    /// Base point for almost periodicity.
    #[arg(long, default_value_t = 0.25)]
    pub point: f64,
    /// Rotation number override for gallery systems.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// North-south multiplier override for gallery systems.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Hinge height override for ex42_hinges.
    #[arg(long)]
    pub hinge: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

impl ResolutionArgs {
    pub fn settings(&self) -> AnalysisSettings {
        AnalysisSettings {
            resolution: Resolution {
                eps: self.eps,
                r: self.r,
                depth: self.depth,
                net_size: self.net_size,
                budget: self.budget,
            },
            delta: self.delta,
            window: self.window,
            point: CirclePoint::new(self.point),
            ..AnalysisSettings::default()
        }
    }

    fn params(&self) -> GalleryParams {
        GalleryParams { alpha: self.alpha, lambda: self.lambda, s: self.hinge }
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Comma-separated property names.
    #[arg(long, value_delimiter = ',', required = true)]
    pub props: Vec<String>,
    #[command(flatten)]
    pub resolution: ResolutionArgs,
    /// Report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record wall-clock time per property in the report.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub gallery: String,
    #[command(flatten)]
    pub resolution: ResolutionArgs,
}

/// Parses property names, rejecting unknown ones before any work is done.
pub fn parse_properties(names: &[String]) -> Result<Vec<Property>, CliError> {
    names
        .iter()
        .map(|n| n.trim().parse::<Property>().map_err(|e| CliError::Input(e.to_string())))
        .collect()
}

fn load(source: &SourceArgs, params: &GalleryParams) -> Result<(Source, IfsSystem), CliError> {
    if let Some(name) = &source.gallery {
        let entry = build_example(name, params)?;
        return Ok((Source::Gallery { name: name.clone() }, entry.system));
    }
    let path = source.system.as_deref().expect("clap requires a source");
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let system = input::parse_system(&text, &path.display().to_string())?;
    Ok((Source::System { path: path.display().to_string() }, system))
}

fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, CliError> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(CliError::Input("--threads must be at least 1".into())),
        #[cfg(feature = "parallel")]
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Input(format!("cannot start {n} threads: {e}")))?;
            Ok(pool.install(f))
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(f()),
    }
}

/// Runs the requested detectors. Wall-clock times are returned alongside
/// the report and stored in it only when `timings` is set, so reports are
/// byte-identical across runs and thread counts by default.
pub fn analyze(
    system: &IfsSystem,
    source: Source,
    properties: &[Property],
    settings: &AnalysisSettings,
    timings: bool,
) -> Result<(Report, Vec<f64>), CliError> {
    settings.resolution.validate()?;
    let mut out = Vec::with_capacity(properties.len());
    let mut seconds = Vec::with_capacity(properties.len());
    for &p in properties {
        let start = Instant::now();
        let verdict = run_property(system, p, settings)?;
        let dt = start.elapsed().as_secs_f64();
        seconds.push(dt);
        out.push(PropertyReport { name: p, verdict, seconds: timings.then_some(dt) });
    }
    Ok((Report::new(source, system, settings, out), seconds))
}

pub fn write_report(report: &Report, path: &Path) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn run_analyze(args: &AnalyzeArgs) -> Result<u8, CliError> {
    let properties = parse_properties(&args.props)?;
    let settings = args.resolution.settings();
    settings.resolution.validate()?;
    let (source, system) = load(&args.source, &args.resolution.params())?;
    let (report, seconds) =
        with_threads(args.resolution.threads, || analyze(&system, source, &properties, &settings, args.timings))??;
    for (p, dt) in report.properties.iter().zip(&seconds) {
        println!("{}", report::summary_line(p, *dt));
    }
    if let Some(path) = &args.out {
        write_report(&report, path)?;
        println!("report written to {}", path.display());
    }
    Ok(0)
}

pub fn run_verify(args: &VerifyArgs) -> Result<u8, CliError> {
    let settings = args.resolution.settings();
    settings.resolution.validate()?;
    let entry = build_example(&args.gallery, &args.resolution.params())?;
    let outcomes = with_threads(args.resolution.threads, || report::check_manifest(&entry, &settings))??;
    let mut mismatches = 0;
    for o in &outcomes {
        println!("{}", o.line());
        if !o.matches {
            mismatches += 1;
        }
    }
    println!("{}: {} of {} expectations met", entry.name, outcomes.len() - mismatches, outcomes.len());
    Ok(if mismatches == 0 { 0 } else { 1 })
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn run(cli: &Cli) -> u8 {
    let result = match &cli.command {
        Command::Analyze(a) => run_analyze(a),
        Command::Verify(v) => run_verify(v),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
