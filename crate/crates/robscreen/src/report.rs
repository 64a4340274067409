//! Output documents. File names inside an output directory are fixed.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use robscreen_core::simgen::MonteCarloSummary;
use robscreen_core::summary::DistributionSummary;
use robscreen_core::{ScreeningResult, Threshold};
use serde::{Deserialize, Serialize};

pub const SCORES_CSV: &str = "scores.csv";
pub const SUMMARY_JSON: &str = "summary.json";
pub const FREQUENCIES_CSV: &str = "frequencies.csv";
pub const BOUNDS_JSON: &str = "bounds.json";
pub const MANIFEST_JSON: &str = "manifest.json";

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else if v == 0.0 || (1e-5..1e16).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// One line of `scores.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub rank: usize,
    pub feature: String,
    pub score: f64,
    pub abs_score: f64,
    pub selected: bool,
    pub degenerate: bool,
}

/// Writes the ranked score table. `name(j)` labels feature `j`.
pub fn write_scores<W: Write>(
    out: W,
    result: &ScreeningResult,
    name: impl Fn(usize) -> String,
) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["rank", "feature", "score", "abs_score", "selected", "degenerate"])?;
    for (k, row) in result.rows.iter().enumerate() {
        w.write_record([
            (k + 1).to_string(),
            name(row.index),
            fmt_num(row.score),
            fmt_num(row.abs_score),
            row.selected.to_string(),
            row.degenerate.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_scores<R: Read>(input: R) -> anyhow::Result<Vec<ScoreRecord>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .collect::<Result<Vec<ScoreRecord>, _>>()
        .context("reading score table")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GivenThreshold {
    Q,
    Gamma,
}

impl From<Threshold> for GivenThreshold {
    fn from(t: Threshold) -> Self {
        match t {
            Threshold::Q(_) => GivenThreshold::Q,
            Threshold::Gamma(_) => GivenThreshold::Gamma,
        }
    }
}

/// `summary.json` of the `screen` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreenSummary {
    pub n_samples: usize,
    pub n_features_input: usize,
    pub n_features_screened: usize,
    pub dropped_samples: usize,
    pub q: f64,
    pub gamma: f64,
    pub threshold_given: GivenThreshold,
    pub n_selected: usize,
    pub n_degenerate: usize,
    pub selected: Vec<String>,
    pub score_distribution: DistributionSummary,
    pub warnings: Vec<String>,
}

impl ScreenSummary {
    pub fn new(
        result: &ScreeningResult,
        name: impl Fn(usize) -> String,
        n_samples: usize,
        n_features_input: usize,
        dropped_samples: usize,
        warnings: Vec<String>,
    ) -> Self {
        ScreenSummary {
            n_samples,
            n_features_input,
            n_features_screened: result.rows.len(),
            dropped_samples,
            q: result.config.q,
            gamma: result.config.gamma,
            threshold_given: result.config.given.into(),
            n_selected: result.n_selected,
            n_degenerate: result.rows.iter().filter(|r| r.degenerate).count(),
            selected: result.selected.iter().map(|&j| name(j)).collect(),
            score_distribution: DistributionSummary::new(
                result.rows.iter().map(|r| r.abs_score),
                result.config.gamma,
            ),
            warnings,
        }
    }
}

/// `summary.json` of the `simulate` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub tpr: f64,
    pub fpr: f64,
    pub mean_selected: f64,
    pub q: f64,
    pub gamma: f64,
    pub n: usize,
    pub p: usize,
    #[serde(rename = "N")]
    pub n_replicates: usize,
    pub seed: u64,
    pub design: robscreen_core::simgen::SimulationDesign,
}

impl From<&MonteCarloSummary> for SimulationReport {
    fn from(s: &MonteCarloSummary) -> Self {
        SimulationReport {
            tpr: s.tpr,
            fpr: s.fpr,
            mean_selected: s.mean_selected,
            q: s.q,
            gamma: s.gamma,
            n: s.design.n,
            p: s.design.p,
            n_replicates: s.n_replicates,
            seed: s.design.seed,
            design: s.design.clone(),
        }
    }
}

/// Per-feature selection frequencies; `index` is 1-based.
pub fn write_frequencies<W: Write>(out: W, frequencies: &[f64]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "name", "selection_frequency"])?;
    for (j, f) in frequencies.iter().enumerate() {
        w.write_record([(j + 1).to_string(), format!("X{}", j + 1), fmt_num(*f)])?;
    }
    w.flush()?;
    Ok(())
}

/// Reproduction record written by every run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub core_version: String,
    pub command: String,
    pub arguments: Vec<String>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub resolved: serde_json::Value,
    pub outputs: Vec<String>,
    pub status: String,
}

/// Output directory with fixed file names.
#[derive(Debug, Clone)]
pub struct OutDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutDir {
    pub fn create(root: impl Into<PathBuf>) -> anyhow::Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root).with_context(|| format!("creating {}", root.display()))?;
        Ok(OutDir {
            root,
            written: Vec::new(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    pub fn write_with(
        &mut self,
        name: &str,
        f: impl FnOnce(&mut Vec<u8>) -> anyhow::Result<()>,
    ) -> anyhow::Result<()> {
        let mut buf = Vec::new();
        f(&mut buf)?;
        let path = self.path(name);
        fs::write(&path, buf).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(name.to_owned());
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> anyhow::Result<()> {
        self.write_with(name, |buf| {
            serde_json::to_writer_pretty(&mut *buf, value)?;
            buf.push(b'\n');
            Ok(())
        })
    }
}
