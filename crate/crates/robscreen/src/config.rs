//! TOML run configuration. Every key is optional; command-line flags take
//! precedence over file values, which take precedence over defaults.
//!
//! ```toml
//! seed = 7
//! threads = 4
//! out = "results"
//! q = 0.10            # or gamma = 4.056, never both
//!
//! [design]
//! kind = "continuous" # or "discrete"
//! n = 2500
//! p = 2000
//! replicates = 200
//! rho_signal = 0.57
//! rho_noise = 0.7
//! theta_star = [-1.0, 3.61935, -3.274923, 2.963273, -2.68128, 2.0, 4.0, 6.0, 3.0, 2.0, 4.0]
//! noise_var_z3_z6 = [0.4, 0.02, 0.35, 0.55]
//!
//! [ingest]
//! path = "expr.csv"
//! orientation = "features_as_rows"
//! label_path = "labels.csv"
//! delimiter = ","
//! has_header = true
//! na_policy = "drop_row"
//!
//! [filter]
//! min_expressed_fraction = 0.2
//! expressed_predicate = "value > 0"
//!
//! [bounds]
//! active = ["X1", "X2"]
//! c_be = 0.56
//! c_1r = 1.0
//! c_2r = 1.0
//!
//! [null]
//! p = 200
//! n = 1000
//! replicates = 500
//! q = [0.05, 0.10, 0.15]
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::filter::Predicate;
use crate::ingest::{NaPolicy, Orientation, ColumnRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum DesignKind {
    Continuous,
    Discrete,
}

impl From<DesignKind> for robscreen_core::simgen::OutputKind {
    fn from(k: DesignKind) -> Self {
        match k {
            DesignKind::Continuous => robscreen_core::simgen::OutputKind::ContinuousHetero,
            DesignKind::Discrete => robscreen_core::simgen::OutputKind::Poisson,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub q: Option<f64>,
    pub gamma: Option<f64>,
    #[serde(default)]
    pub design: DesignSection,
    #[serde(default)]
    pub ingest: IngestSection,
    pub filter: Option<FilterSection>,
    #[serde(default)]
    pub bounds: BoundsSection,
    #[serde(default)]
    pub null: NullSection,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignSection {
    pub kind: Option<DesignKind>,
    pub n: Option<usize>,
    pub p: Option<usize>,
    pub replicates: Option<usize>,
    pub rho_signal: Option<f64>,
    pub rho_noise: Option<f64>,
    pub theta_star: Option<[f64; 11]>,
    pub noise_var_z3_z6: Option<[f64; 4]>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IngestSection {
    pub path: Option<PathBuf>,
    pub orientation: Option<Orientation>,
    pub response: Option<ColumnRef>,
    pub label_path: Option<PathBuf>,
    pub delimiter: Option<char>,
    pub has_header: Option<bool>,
    pub na_policy: Option<NaPolicy>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterSection {
    pub min_expressed_fraction: Option<f64>,
    pub expressed_predicate: Option<Predicate>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSection {
    pub active: Option<Vec<ColumnRef>>,
    pub c_be: Option<f64>,
    pub c_1r: Option<f64>,
    pub c_2r: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NullSection {
    pub p: Option<usize>,
    pub n: Option<usize>,
    pub replicates: Option<usize>,
    pub q: Option<Vec<f64>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let cfg: FileConfig = toml::from_str(text).map_err(|e| e.to_string())?;
        if cfg.q.is_some() && cfg.gamma.is_some() {
            return Err("q and gamma are mutually exclusive".into());
        }
        Ok(cfg)
    }
}
