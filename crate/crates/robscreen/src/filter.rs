//! Expression pre-filter: keep a feature when the fraction of samples in
//! which it is "expressed" reaches a minimum.

use std::fmt;
use std::str::FromStr;

use robscreen_core::DataMatrix;
use serde::{Deserialize, Serialize};

use crate::error::FilterError;

/// `value <op> threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Predicate {
    Greater(f64),
    GreaterEq(f64),
    NotEqual(f64),
}

impl Predicate {
    pub fn holds(&self, v: f64) -> bool {
        match *self {
            Predicate::Greater(t) => v > t,
            Predicate::GreaterEq(t) => v >= t,
            Predicate::NotEqual(t) => v != t,
        }
    }
}

impl Default for Predicate {
    fn default() -> Self {
        Predicate::Greater(0.0)
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Greater(t) => write!(f, "value > {t}"),
            Predicate::GreaterEq(t) => write!(f, "value >= {t}"),
            Predicate::NotEqual(t) => write!(f, "value != {t}"),
        }
    }
}

impl FromStr for Predicate {
    type Err = FilterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FilterError::Predicate(s.to_owned());
        let rest = s.trim().strip_prefix("value").ok_or_else(bad)?.trim_start();
        let (op, num) = [">=", "!=", ">"]
            .iter()
            .find_map(|op| rest.strip_prefix(op).map(|r| (*op, r.trim())))
            .ok_or_else(bad)?;
        let t: f64 = num.parse().map_err(|_| bad())?;
        if !t.is_finite() {
            return Err(bad());
        }
        Ok(match op {
            ">=" => Predicate::GreaterEq(t),
            "!=" => Predicate::NotEqual(t),
            _ => Predicate::Greater(t),
        })
    }
}

impl TryFrom<String> for Predicate {
    type Error = FilterError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Predicate> for String {
    fn from(p: Predicate) -> String {
        p.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    pub min_expressed_fraction: f64,
    pub expressed_predicate: Predicate,
}

impl Default for FilterSpec {
    fn default() -> Self {
        FilterSpec {
            min_expressed_fraction: 0.20,
            expressed_predicate: Predicate::default(),
        }
    }
}

impl FilterSpec {
    pub fn new(min_expressed_fraction: f64, expressed_predicate: Predicate) -> Result<Self, FilterError> {
        if !(0.0..=1.0).contains(&min_expressed_fraction) {
            return Err(FilterError::Fraction(min_expressed_fraction));
        }
        Ok(FilterSpec {
            min_expressed_fraction,
            expressed_predicate,
        })
    }

    /// Fraction of entries of `column` satisfying the predicate.
    pub fn expressed_fraction(&self, column: &[f64]) -> f64 {
        let hits = column.iter().filter(|&&v| self.expressed_predicate.holds(v)).count();
        hits as f64 / column.len() as f64
    }

    /// Ties at the minimum are kept.
    pub fn keeps(&self, column: &[f64]) -> bool {
        self.expressed_fraction(column) >= self.min_expressed_fraction
    }
}

#[derive(Debug, Clone)]
pub struct Filtered {
    pub data: DataMatrix,
    /// `kept[k]` is the input index of output column `k`; strictly increasing.
    pub kept: Vec<usize>,
}

pub fn apply_filter(data: &DataMatrix, spec: &FilterSpec) -> Result<Filtered, FilterError> {
    if !(0.0..=1.0).contains(&spec.min_expressed_fraction) {
        return Err(FilterError::Fraction(spec.min_expressed_fraction));
    }
    let kept: Vec<usize> = (0..data.p()).filter(|&j| spec.keeps(data.column(j))).collect();
    if kept.is_empty() {
        return Err(FilterError::Empty(spec.min_expressed_fraction));
    }
    let data = data
        .select_columns(&kept)
        .expect("kept indices are in range and non-empty");
    Ok(Filtered { data, kept })
}
