//! Command-line driver.
//!
//! Exit status: 0 success, 1 output failure, 2 configuration error,
//! 3 ingestion error, 4 degeneracy (every feature degenerate in `screen`,
//! any vanishing denominator in `bounds`).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use robscreen_core::bounds::{guarantee_report, BoundConstantsConfig};
use robscreen_core::simgen::{null_calibration, run_monte_carlo_with, SimulationDesign};
use robscreen_core::{estimate_moments, fit_all, screen, MomentProfile, ScreeningConfig, Threshold};
use serde::Serialize;

use crate::config::{DesignKind, FileConfig};
use crate::error::AppError;
use crate::filter::{apply_filter, FilterSpec, Predicate};
use crate::ingest::{ingest, ColumnRef, IngestSpec, NaPolicy, Orientation};
use crate::report::{self, Manifest, OutDir, ScreenSummary, SimulationReport};

const DEFAULT_OUT: &str = "robscreen-out";
const DEFAULT_Q: f64 = 0.10;

#[derive(Debug, Parser)]
#[command(name = "robscreen", version, about = "Model-free marginal screening with robust studentized scores")]
pub struct Cli {
    /// TOML configuration file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: available parallelism). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct ThresholdArgs {
    /// Target false positive rate; γ = Φ⁻¹(1 − q/2).
    #[arg(long, conflicts_with = "gamma")]
    pub q: Option<f64>,
    /// Threshold on |score|.
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct IngestArgs {
    /// Data file (delimited text).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Response column (samples as rows) or row (features as rows), by name or 1-based position.
    #[arg(long)]
    pub response: Option<String>,
    /// Separate response file, one sample per record, last field used.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub orientation: Option<Orientation>,
    #[arg(long)]
    pub delimiter: Option<char>,
    /// The input (and label) files have no header record.
    #[arg(long)]
    pub no_header: bool,
    #[arg(long, value_enum)]
    pub na_policy: Option<NaPolicy>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Screen the features of a data file.
    Screen {
        #[command(flatten)]
        ingest: IngestArgs,
        #[command(flatten)]
        threshold: ThresholdArgs,
        /// Enable the expression filter with this minimum expressed fraction.
        #[arg(long)]
        min_expressed: Option<f64>,
        /// Expression predicate, e.g. "value > 0".
        #[arg(long)]
        predicate: Option<String>,
    },
    /// Monte Carlo run of the simulation design.
    Simulate {
        #[arg(long, value_enum)]
        design: Option<DesignKind>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        /// Number of replicates.
        #[arg(long = "N")]
        replicates: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        threshold: ThresholdArgs,
    },
    /// Non-asymptotic guarantee constants at plug-in moments.
    Bounds {
        #[command(flatten)]
        ingest: IngestArgs,
        #[command(flatten)]
        threshold: ThresholdArgs,
        /// Declared active set: feature names or 1-based positions.
        #[arg(long, value_delimiter = ',')]
        active: Option<Vec<String>>,
        #[arg(long)]
        c_be: Option<f64>,
        #[arg(long)]
        c_1r: Option<f64>,
        #[arg(long)]
        c_2r: Option<f64>,
        /// Sample size for --profiles.
        #[arg(long)]
        n: Option<u64>,
        /// JSON array of moment profiles used instead of data.
        #[arg(long, hide = true)]
        profiles: Option<PathBuf>,
    },
    /// Empirical false positive rate on a pure-null design.
    NullCalibrate {
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "N")]
        replicates: Option<usize>,
        /// One or more target rates.
        #[arg(long, value_delimiter = ',')]
        q: Option<Vec<f64>>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Screen { .. } => "screen",
            Command::Simulate { .. } => "simulate",
            Command::Bounds { .. } => "bounds",
            Command::NullCalibrate { .. } => "null-calibrate",
        }
    }
}

struct Run {
    out: OutDir,
    resolved: serde_json::Value,
    seed: Option<u64>,
}

impl Run {
    fn resolve<T: Serialize>(&mut self, value: &T) {
        self.resolved = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
    }
}

/// Executes a parsed invocation; `arguments` are recorded in the manifest.
pub fn run(cli: Cli, arguments: Vec<String>) -> Result<(), AppError> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path).map_err(AppError::Config)?,
        None => FileConfig::default(),
    };
    let threads = cli.threads.or(file.threads);
    if threads == Some(0) {
        return Err(AppError::config("--threads must be at least 1"));
    }
    let out_path = cli.out.clone().or_else(|| file.out.clone()).unwrap_or_else(|| DEFAULT_OUT.into());
    let out = OutDir::create(out_path)?;
    let mut run = Run {
        out,
        resolved: serde_json::Value::Null,
        seed: None,
    };
    let command = cli.command.name();

    let body = |run: &mut Run| match cli.command {
        Command::Screen {
            ingest,
            threshold,
            min_expressed,
            predicate,
        } => cmd_screen(run, &file, ingest, threshold, min_expressed, predicate),
        Command::Simulate {
            design,
            n,
            p,
            replicates,
            seed,
            threshold,
        } => cmd_simulate(run, &file, design, n, p, replicates, seed, threshold),
        Command::Bounds {
            ingest,
            threshold,
            active,
            c_be,
            c_1r,
            c_2r,
            n,
            profiles,
        } => cmd_bounds(run, &file, ingest, threshold, active, [c_be, c_1r, c_2r], n, profiles),
        Command::NullCalibrate {
            p,
            n,
            replicates,
            q,
            seed,
        } => cmd_null(run, &file, p, n, replicates, q, seed),
    };
    let result = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| AppError::config(format!("thread pool: {e}")))?
            .install(|| body(&mut run)),
        None => body(&mut run),
    };

    let mut outputs = run.out.written().to_vec();
    outputs.push(report::MANIFEST_JSON.to_owned());
    let manifest = Manifest {
        tool: "robscreen".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        core_version: robscreen_core::VERSION.into(),
        command: command.into(),
        arguments,
        seed: run.seed,
        threads,
        resolved: run.resolved.clone(),
        outputs,
        status: match &result {
            Ok(()) => "ok".into(),
            Err(e) => format!("error (exit {}): {e}", e.exit_status() as i32),
        },
    };
    let written = run.out.write_json(report::MANIFEST_JSON, &manifest);
    result?;
    written?;
    Ok(())
}

fn threshold(args: &ThresholdArgs, file: &FileConfig, default_q: f64) -> Result<ScreeningConfig, AppError> {
    let chosen = match (args.q, args.gamma, file.q, file.gamma) {
        (Some(q), _, _, _) => Threshold::Q(q),
        (None, Some(g), _, _) => Threshold::Gamma(g),
        (None, None, Some(q), _) => Threshold::Q(q),
        (None, None, None, Some(g)) => Threshold::Gamma(g),
        _ => Threshold::Q(default_q),
    };
    ScreeningConfig::new(chosen).map_err(AppError::config)
}

fn ingest_spec(args: &IngestArgs, file: &FileConfig) -> Result<IngestSpec, AppError> {
    let sec = &file.ingest;
    let path = args
        .input
        .clone()
        .or_else(|| sec.path.clone())
        .ok_or_else(|| AppError::config("no input file (--input or [ingest].path)"))?;
    // a response given on the command line replaces the file's declaration
    let (response, label_path) = match (&args.response, &args.labels) {
        (None, None) => (sec.response.clone(), sec.label_path.clone()),
        (r, l) => (r.clone().map(ColumnRef::Name), l.clone()),
    };
    let spec = IngestSpec {
        path,
        orientation: args.orientation.or(sec.orientation).unwrap_or_default(),
        response,
        label_path,
        delimiter: args.delimiter.or(sec.delimiter).unwrap_or(','),
        has_header: if args.no_header { false } else { sec.has_header.unwrap_or(true) },
        na_policy: args.na_policy.or(sec.na_policy).unwrap_or_default(),
    };
    spec.validate().map_err(AppError::Config)?;
    Ok(spec)
}

fn filter_spec(
    file: &FileConfig,
    min_expressed: Option<f64>,
    predicate: Option<String>,
) -> Result<Option<FilterSpec>, AppError> {
    if min_expressed.is_none() && predicate.is_none() && file.filter.is_none() {
        return Ok(None);
    }
    let sec = file.filter.clone().unwrap_or_default();
    let defaults = FilterSpec::default();
    let predicate = match predicate {
        Some(p) => p.parse::<Predicate>().map_err(AppError::config)?,
        None => sec.expressed_predicate.unwrap_or(defaults.expressed_predicate),
    };
    let fraction = min_expressed
        .or(sec.min_expressed_fraction)
        .unwrap_or(defaults.min_expressed_fraction);
    FilterSpec::new(fraction, predicate).map(Some).map_err(AppError::config)
}

#[derive(Serialize)]
struct ScreenResolved<'a> {
    ingest: &'a IngestSpec,
    filter: Option<FilterSpec>,
    threshold: ScreeningConfig,
}

fn cmd_screen(
    run: &mut Run,
    file: &FileConfig,
    args: IngestArgs,
    thr: ThresholdArgs,
    min_expressed: Option<f64>,
    predicate: Option<String>,
) -> Result<(), AppError> {
    let spec = ingest_spec(&args, file)?;
    let filter = filter_spec(file, min_expressed, predicate)?;
    let config = threshold(&thr, file, DEFAULT_Q)?;
    run.resolve(&ScreenResolved {
        ingest: &spec,
        filter,
        threshold: config,
    });

    let ingested = ingest(&spec)?;
    let p_input = ingested.data.p();
    let data = match &filter {
        Some(f) => {
            let filtered = apply_filter(&ingested.data, f)?;
            log::info!("filter kept {} of {} features", filtered.kept.len(), p_input);
            filtered.data
        }
        None => ingested.data,
    };
    let fits = fit_all(&data);
    if fits.iter().all(|f| f.degenerate) {
        return Err(AppError::Degenerate(format!(
            "all {} features have zero variance or a perfect fit",
            fits.len()
        )));
    }
    let result = screen(&fits, &config);
    let name = |j: usize| data.feature_name(j);
    run.out
        .write_with(report::SCORES_CSV, |buf| report::write_scores(buf, &result, name))?;
    let summary = ScreenSummary::new(
        &result,
        name,
        data.n(),
        p_input,
        ingested.dropped_samples,
        ingested.warnings,
    );
    run.out.write_json(report::SUMMARY_JSON, &summary)?;
    println!(
        "selected {} of {} features (gamma = {:.6}, q = {:.6e})",
        result.n_selected,
        data.p(),
        config.gamma,
        config.q
    );
    Ok(())
}

#[derive(Serialize)]
struct SimulateResolved {
    design: SimulationDesign,
    replicates: usize,
    threshold: ScreeningConfig,
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    run: &mut Run,
    file: &FileConfig,
    kind: Option<DesignKind>,
    n: Option<usize>,
    p: Option<usize>,
    replicates: Option<usize>,
    seed: Option<u64>,
    thr: ThresholdArgs,
) -> Result<(), AppError> {
    let sec = &file.design;
    let kind = kind.or(sec.kind).unwrap_or(DesignKind::Continuous);
    let seed = seed.or(file.seed).unwrap_or(0);
    let mut design = SimulationDesign::new(kind.into(), n.or(sec.n).unwrap_or(2500), seed);
    design.p = p.or(sec.p).unwrap_or(design.p);
    design.rho_signal = sec.rho_signal.unwrap_or(design.rho_signal);
    design.rho_noise = sec.rho_noise.unwrap_or(design.rho_noise);
    design.theta_star = sec.theta_star.unwrap_or(design.theta_star);
    design.noise_var_z3_z6 = sec.noise_var_z3_z6.unwrap_or(design.noise_var_z3_z6);
    design.validate().map_err(AppError::config)?;
    let replicates = replicates.or(sec.replicates).unwrap_or(500);
    if replicates == 0 {
        return Err(AppError::config("--N must be at least 1"));
    }
    let config = threshold(&thr, file, DEFAULT_Q)?;
    run.seed = Some(seed);
    run.resolve(&SimulateResolved {
        design: design.clone(),
        replicates,
        threshold: config,
    });

    log::info!("simulating {replicates} replicates of n = {}, p = {}", design.n, design.p);
    let summary = run_monte_carlo_with(&design, &config, replicates)?;
    run.out.write_with(report::FREQUENCIES_CSV, |buf| {
        report::write_frequencies(buf, &summary.selection_frequency)
    })?;
    run.out
        .write_json(report::SUMMARY_JSON, &SimulationReport::from(&summary))?;
    println!(
        "tpr = {:.4}  fpr = {:.4}  mean_selected = {:.3}",
        summary.tpr, summary.fpr, summary.mean_selected
    );
    Ok(())
}

#[derive(Serialize)]
struct BoundsResolved<'a> {
    ingest: Option<&'a IngestSpec>,
    profiles: Option<&'a PathBuf>,
    n: u64,
    active: Vec<String>,
    gamma: f64,
    constants: BoundConstantsConfig,
}

#[derive(Serialize)]
struct BoundsDocument<'a> {
    feature_names: Vec<String>,
    #[serde(flatten)]
    report: &'a robscreen_core::bounds::GuaranteeReport,
}

#[allow(clippy::too_many_arguments)]
fn cmd_bounds(
    run: &mut Run,
    file: &FileConfig,
    args: IngestArgs,
    thr: ThresholdArgs,
    active: Option<Vec<String>>,
    constants: [Option<f64>; 3],
    n_flag: Option<u64>,
    profiles_path: Option<PathBuf>,
) -> Result<(), AppError> {
    let sec = &file.bounds;
    let defaults = BoundConstantsConfig::default();
    let c = BoundConstantsConfig::new(
        constants[0].or(sec.c_be).unwrap_or(defaults.c_be),
        constants[1].or(sec.c_1r).unwrap_or(defaults.c_1r),
        constants[2].or(sec.c_2r).unwrap_or(defaults.c_2r),
    )
    .map_err(AppError::config)?;
    let config = threshold(&thr, file, DEFAULT_Q)?;
    let active_refs: Vec<ColumnRef> = match active {
        Some(tokens) => tokens.into_iter().map(ColumnRef::Name).collect(),
        None => sec.active.clone().unwrap_or_default(),
    };

    let (spec, profiles, names, n) = match &profiles_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| AppError::config(format!("cannot read {}: {e}", path.display())))?;
            let profiles: Vec<MomentProfile> = serde_json::from_str(&text)
                .map_err(|e| AppError::config(format!("{}: {e}", path.display())))?;
            let n = n_flag
                .or_else(|| profiles.first().map(|m| m.n_used as u64))
                .filter(|&n| n >= 2)
                .ok_or_else(|| AppError::config("--profiles needs --n ≥ 2"))?;
            let names = (1..=profiles.len()).map(|j| format!("X{j}")).collect();
            (None, profiles, names, n)
        }
        None => {
            let spec = ingest_spec(&args, file)?;
            let data = ingest(&spec)?.data;
            let names: Vec<String> = (0..data.p()).map(|j| data.feature_name(j)).collect();
            let profiles = (0..data.p())
                .into_par_iter()
                .map(|j| {
                    estimate_moments(data.column(j), data.y())
                        .map_err(|e| AppError::Degenerate(format!("feature {}: {e}", names[j])))
                })
                .collect::<Result<Vec<_>, _>>();
            (Some(spec), profiles?, names, data.n() as u64)
        }
    };
    let mut active_set = Vec::with_capacity(active_refs.len());
    for r in &active_refs {
        let j = r
            .resolve(Some(&names), names.len())
            .ok_or_else(|| AppError::config(format!("active feature {r} not found")))?;
        active_set.push(j);
    }
    active_set.sort_unstable();
    active_set.dedup();
    run.resolve(&BoundsResolved {
        ingest: spec.as_ref(),
        profiles: profiles_path.as_ref(),
        n,
        active: active_set.iter().map(|&j| names[j].clone()).collect(),
        gamma: config.gamma,
        constants: c,
    });

    let report = guarantee_report(&profiles, &active_set, n, config.gamma, &c).map_err(|e| {
        let who = e.feature().map(|j| names[j].clone()).unwrap_or_default();
        match e.root() {
            robscreen_core::Error::DegenerateProfile(_) => {
                AppError::Degenerate(format!("feature {who}: {}", e.root()))
            }
            _ => AppError::Compute(e),
        }
    })?;
    run.out.write_json(
        report::BOUNDS_JSON,
        &BoundsDocument {
            feature_names: names,
            report: &report,
        },
    )?;
    println!(
        "ssp_lower_bound = {:.6e}{}  fpr_deviation_bound = {:.6e}",
        report.ssp_lower_bound,
        if report.ssp_vacuous { " (vacuous)" } else { "" },
        report.fpr_deviation_bound
    );
    Ok(())
}

#[derive(Serialize)]
struct NullResolved {
    p: usize,
    n: usize,
    replicates: usize,
    q: Vec<f64>,
    seed: u64,
}

#[derive(Serialize)]
struct NullRow {
    q: f64,
    fpr: f64,
}

fn cmd_null(
    run: &mut Run,
    file: &FileConfig,
    p: Option<usize>,
    n: Option<usize>,
    replicates: Option<usize>,
    q: Option<Vec<f64>>,
    seed: Option<u64>,
) -> Result<(), AppError> {
    let sec = &file.null;
    let resolved = NullResolved {
        p: p.or(sec.p).unwrap_or(200),
        n: n.or(sec.n).unwrap_or(1000),
        replicates: replicates.or(sec.replicates).unwrap_or(500),
        q: q.or_else(|| sec.q.clone()).unwrap_or_else(|| vec![0.05, 0.10, 0.15]),
        seed: seed.or(file.seed).unwrap_or(0),
    };
    if resolved.p == 0 || resolved.n < 3 || resolved.replicates == 0 || resolved.q.is_empty() {
        return Err(AppError::config("null-calibrate needs p ≥ 1, n ≥ 3, N ≥ 1 and at least one q"));
    }
    for &q in &resolved.q {
        ScreeningConfig::from_q(q).map_err(AppError::config)?;
    }
    run.seed = Some(resolved.seed);
    run.resolve(&resolved);
    let mut rows = Vec::with_capacity(resolved.q.len());
    for &q in &resolved.q {
        let fpr = null_calibration(resolved.p, resolved.n, q, resolved.replicates, resolved.seed)?;
        println!("q = {q}  fpr = {fpr:.5}");
        rows.push(NullRow { q, fpr });
    }
    run.out.write_json(report::SUMMARY_JSON, &rows)?;
    Ok(())
}
