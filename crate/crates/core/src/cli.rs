//! Command-line front end.
//!
//! Exit codes: 0 on success (and for audits, no failing probe), 1 on any
//! usage or input error, 2 when an audit finds a violation.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use setdp::audit::{self, AuditOptions, CapacityMethod, MonteCarlo, ProbeGrid, Verdict};
use setdp::experiments::{self, Experiment};
use setdp::io::{self, format_sig, CapacityRecord, Manifest, ManifestEntry, ReportDocument, SetDocument};
use setdp::{
    diameter, hausdorff_distance, perturb, CompactSet, Error, Mode, NoiseModel, PrivacyParams, SeededStream,
};

const EXIT_USAGE: u8 = 1;
const EXIT_AUDIT_FAIL: u8 = 2;

const DEFAULT_EPSILON: f64 = 1.0;
const DEFAULT_SEED: u64 = 0;
const DEFAULT_RUNS: u64 = 4;

#[derive(Debug, Parser)]
#[command(name = "setdp", version, about = "Laplace translation mechanism for sets, with a privacy auditor")]
struct Cli {
    /// TOML file with defaults for epsilon, seed, runs, trials, confidence,
    /// grid_scales, grid_count, point_probes, workers and method. Flags win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Release privatized copies of a set.
    Perturb(PerturbArgs),
    /// Print the 1-norm Hausdorff distance between two sets.
    Distance { a: PathBuf, b: PathBuf },
    /// Print the 1-norm diameter of a set.
    Diameter { set: PathBuf },
    /// Capacity of the released set at one probe.
    Capacity(CapacityArgs),
    /// Audit the privacy inequality for two sets over a probe grid.
    Audit(AuditArgs),
    /// Release the four-point unit square.
    #[command(name = "experiment-r2")]
    ExperimentR2(ExperimentArgs),
    /// Release the eight-vertex polytope in R^3.
    #[command(name = "experiment-r3")]
    ExperimentR3(ExperimentArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// Privacy parameter; noise scale is 1/epsilon per coordinate [default: 1].
    #[arg(long)]
    epsilon: Option<f64>,
    /// Master seed [default: 0].
    #[arg(long, env = "SETDP_SEED")]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliMode {
    Release,
    /// Records every realized noise vector in the manifest. Anyone holding
    /// the manifest can undo the privatization.
    AuditLeaksNoise,
}

#[derive(Debug, Args)]
struct PerturbArgs {
    /// Set document to release.
    input: PathBuf,
    #[command(flatten)]
    common: Common,
    /// Independent releases; each one spends another epsilon [default: 4].
    #[arg(long)]
    runs: Option<u64>,
    #[arg(long, value_enum, default_value_t = CliMode::Release)]
    mode: CliMode,
    /// Directory for the released sets and manifest.
    #[arg(long, default_value = "perturbed")]
    output: PathBuf,
    /// Record the wall-clock creation time in the manifest (the output is
    /// then no longer reproducible byte for byte).
    #[arg(long)]
    timestamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum CliMethod {
    Auto,
    Exact,
    MonteCarlo,
}

impl From<CliMethod> for CapacityMethod {
    fn from(m: CliMethod) -> Self {
        match m {
            CliMethod::Auto => CapacityMethod::Auto,
            CliMethod::Exact => CapacityMethod::Exact,
            CliMethod::MonteCarlo => CapacityMethod::MonteCarlo,
        }
    }
}

#[derive(Debug, Args)]
struct Estimation {
    /// Monte-Carlo trials per capacity estimate [default: 100000].
    #[arg(long)]
    trials: Option<u64>,
    /// Confidence level of the Clopper-Pearson intervals [default: 0.99].
    #[arg(long)]
    confidence: Option<f64>,
    /// Exact inclusion-exclusion needs Laplace noise and at most 20 points
    /// or a box; auto picks it when possible [default: auto].
    #[arg(long, value_enum)]
    method: Option<CliMethod>,
    /// Monte-Carlo worker threads. Results do not depend on this.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Debug, Args)]
struct CapacityArgs {
    /// Set document whose release is probed.
    set: PathBuf,
    /// Box or point document.
    probe: PathBuf,
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    estimation: Estimation,
    /// Write the JSON record here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AuditArgs {
    /// First set document.
    x: PathBuf,
    /// Second set document, same dimension.
    y: PathBuf,
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    estimation: Estimation,
    /// Box scales in the probe grid.
    #[arg(long)]
    grid_scales: Option<usize>,
    /// Box placements per scale.
    #[arg(long)]
    grid_count: Option<usize>,
    /// Single-point probes (these always come out inconclusive).
    #[arg(long)]
    point_probes: Option<usize>,
    /// Audit a deliberately broken mechanism that only perturbs the first
    /// coordinate.
    #[arg(long)]
    broken_mechanism: bool,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    #[command(flatten)]
    common: Common,
    /// Releases of the built-in set [default: 4].
    #[arg(long)]
    runs: Option<u64>,
    /// Directory for the results record and CSV tables.
    #[arg(long, default_value = ".")]
    output: PathBuf,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    epsilon: Option<f64>,
    seed: Option<u64>,
    runs: Option<u64>,
    trials: Option<u64>,
    confidence: Option<f64>,
    grid_scales: Option<usize>,
    grid_count: Option<usize>,
    point_probes: Option<usize>,
    workers: Option<usize>,
    method: Option<CliMethod>,
}

impl Config {
    fn load(path: Option<&Path>) -> Result<Self, Error> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Document(format!("{}: {e}", path.display())))
    }

    fn epsilon(&self, c: &Common) -> f64 {
        c.epsilon.or(self.epsilon).unwrap_or(DEFAULT_EPSILON)
    }

    fn seed(&self, c: &Common) -> u64 {
        c.seed.or(self.seed).unwrap_or(DEFAULT_SEED)
    }

    fn runs(&self, flag: Option<u64>) -> u64 {
        flag.or(self.runs).unwrap_or(DEFAULT_RUNS)
    }

    fn audit_options(&self, epsilon: f64, e: &Estimation, model: NoiseModel) -> AuditOptions {
        AuditOptions {
            epsilon,
            method: e.method.or(self.method).map_or(CapacityMethod::Auto, Into::into),
            mc: MonteCarlo {
                trials: e.trials.or(self.trials).unwrap_or(audit::DEFAULT_TRIALS),
                confidence: e.confidence.or(self.confidence).unwrap_or(audit::DEFAULT_CONFIDENCE),
                workers: e.workers.or(self.workers),
                model,
            },
        }
    }
}

fn read_set(path: &Path) -> Result<CompactSet, Error> {
    SetDocument::read(path)?.to_set()
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Error> {
    match output {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(path, text)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn warn_epsilon(epsilon: f64, dim: usize) -> Result<(), Error> {
    if let Some(w) = PrivacyParams::new(epsilon, dim)?.guidance_warning() {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn check_runs(runs: u64) -> Result<(), Error> {
    if runs == 0 {
        return Err(Error::Document("--runs must be at least 1".into()));
    }
    Ok(())
}

fn cmd_perturb(args: &PerturbArgs, cfg: &Config) -> Result<u8, Error> {
    let input = read_set(&args.input)?;
    let epsilon = cfg.epsilon(&args.common);
    let seed = cfg.seed(&args.common);
    let runs = cfg.runs(args.runs);
    check_runs(runs)?;
    let params = PrivacyParams::new(epsilon, input.dim())?;
    warn_epsilon(epsilon, input.dim())?;
    let mode = match args.mode {
        CliMode::Release => Mode::Release,
        CliMode::AuditLeaksNoise => Mode::Audit,
    };
    if mode == Mode::Audit {
        eprintln!("warning: audit mode writes the realized noise; the outputs are not private");
    }

    fs::create_dir_all(&args.output)?;
    let mut outputs = Vec::with_capacity(runs as usize);
    for run in 0..runs {
        let out = perturb(&input, &params, &SeededStream::new(seed, run), mode)?;
        let file = format!("run-{run:04}.json");
        let label = format!("epsilon={epsilon} seed={seed} run={run}");
        io::write_json(&args.output.join(&file), &SetDocument::from_set(out.set(), Some(label)))?;
        outputs.push(ManifestEntry {
            run,
            stream: run,
            file,
            noise: out.noise().map(|n| n.w.clone()),
        });
    }
    let manifest = Manifest {
        schema: io::MANIFEST_SCHEMA.to_owned(),
        input: args.input.display().to_string(),
        epsilon,
        seed,
        runs,
        mode,
        cumulative_epsilon: epsilon * runs as f64,
        created_unix: args
            .timestamp
            .then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())),
        outputs,
    };
    io::write_json(&args.output.join("manifest.json"), &manifest)?;
    Ok(0)
}

fn cmd_capacity(args: &CapacityArgs, cfg: &Config) -> Result<u8, Error> {
    let set = read_set(&args.set)?;
    let probe = SetDocument::read(&args.probe)?.to_probe()?;
    let epsilon = cfg.epsilon(&args.common);
    let seed = cfg.seed(&args.common);
    let opts = cfg.audit_options(epsilon, &args.estimation, NoiseModel::Laplace);
    let estimate = audit::capacity(&set, &probe, &opts, &SeededStream::new(seed, 0))?;
    let record = CapacityRecord {
        schema: io::CAPACITY_SCHEMA.to_owned(),
        epsilon,
        seed,
        method: opts.method,
        estimate,
    };
    emit(args.output.as_deref(), &io::to_json(&record)?)?;
    Ok(0)
}

fn cmd_audit(args: &AuditArgs, cfg: &Config) -> Result<u8, Error> {
    let x = read_set(&args.x)?;
    let y = read_set(&args.y)?;
    let epsilon = cfg.epsilon(&args.common);
    let seed = cfg.seed(&args.common);
    let model = if args.broken_mechanism {
        NoiseModel::SingleAxisStub
    } else {
        NoiseModel::Laplace
    };
    let opts = cfg.audit_options(epsilon, &args.estimation, model);
    let defaults = ProbeGrid::default();
    let grid = ProbeGrid {
        scales: args.grid_scales.or(cfg.grid_scales).unwrap_or(defaults.scales),
        placements: args.grid_count.or(cfg.grid_count).unwrap_or(defaults.placements),
        point_probes: args.point_probes.or(cfg.point_probes).unwrap_or(defaults.point_probes),
    };
    let probes = grid.build(&x, &y, epsilon)?;
    let report = audit::verify_privacy(&x, &y, &probes, &opts, &SeededStream::new(seed, 0))?;
    let doc = ReportDocument::from(&report);
    emit(args.output.as_deref(), &io::to_json(&doc)?)?;
    let c = doc.counts;
    eprintln!("pass {} inconclusive {} fail {}", c.pass, c.inconclusive, c.fail);
    Ok(if doc.verdict == Verdict::Fail { EXIT_AUDIT_FAIL } else { 0 })
}

fn cmd_experiment(which: Experiment, args: &ExperimentArgs, cfg: &Config) -> Result<u8, Error> {
    let epsilon = cfg.epsilon(&args.common);
    let seed = cfg.seed(&args.common);
    let runs = cfg.runs(args.runs);
    check_runs(runs)?;
    let input = which.input();
    warn_epsilon(epsilon, input.dim())?;
    let result = experiments::run_experiment(which, &input, epsilon, runs, seed)?;
    let name = which.name();
    io::write_json(&args.output.join(format!("{name}.json")), &result)?;
    fs::write(args.output.join(format!("{name}-runs.csv")), experiments::runs_csv(&result))?;
    fs::write(args.output.join(format!("{name}-points.csv")), experiments::points_csv(&result)?)?;
    let s = &result.summary;
    println!(
        "{name}: runs {} mean displacement {} (expected {}) shapes preserved {}",
        s.runs,
        format_sig(s.mean_hausdorff, 12),
        format_sig(s.expected_displacement, 12),
        s.all_shapes_preserved
    );
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Error> {
    let cfg = Config::load(cli.config.as_deref())?;
    match &cli.command {
        Command::Perturb(a) => cmd_perturb(a, &cfg),
        Command::Distance { a, b } => {
            println!("{}", format_sig(hausdorff_distance(&read_set(a)?, &read_set(b)?)?, 12));
            Ok(0)
        }
        Command::Diameter { set } => {
            println!("{}", format_sig(diameter(&read_set(set)?), 12));
            Ok(0)
        }
        Command::Capacity(a) => cmd_capacity(a, &cfg),
        Command::Audit(a) => cmd_audit(a, &cfg),
        Command::ExperimentR2(a) => cmd_experiment(Experiment::R2, a, &cfg),
        Command::ExperimentR3(a) => cmd_experiment(Experiment::R3, a, &cfg),
    }
}

pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
