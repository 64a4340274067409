use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// `n × p` explanatory matrix plus the length-`n` response.
///
/// Storage is column-major so that each feature is a contiguous slice.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DataMatrix {
    n: usize,
    p: usize,
    x: Vec<f64>,
    y: Vec<f64>,
    feature_names: Option<Vec<String>>,
}

impl DataMatrix {
    /// Builds a matrix from column-major data (`x[j * n + i]` is row `i` of
    /// feature `j`).
    pub fn from_columns(n: usize, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewSamples(n));
        }
        if y.len() != n {
            return Err(Error::LengthMismatch {
                x_len: n,
                y_len: y.len(),
            });
        }
        if x.is_empty() || x.len() % n != 0 {
            return Err(Error::Shape(format!(
                "{} matrix entries is not a positive multiple of n = {n}",
                x.len()
            )));
        }
        let p = x.len() / n;
        if let Some(row) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row, column: None });
        }
        if let Some(k) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: k % n,
                column: Some(k / n),
            });
        }
        Ok(DataMatrix {
            n,
            p,
            x,
            y,
            feature_names: None,
        })
    }

    /// Builds a matrix from a list of feature columns.
    pub fn from_column_vecs(columns: Vec<Vec<f64>>, y: Vec<f64>) -> Result<Self> {
        let n = y.len();
        let mut x = Vec::with_capacity(n * columns.len());
        for (j, col) in columns.into_iter().enumerate() {
            if col.len() != n {
                return Err(Error::LengthMismatch {
                    x_len: col.len(),
                    y_len: n,
                }
                .at_feature(j));
            }
            x.extend(col);
        }
        Self::from_columns(n, x, y)
    }

    pub fn with_feature_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.p {
            return Err(Error::Shape(format!(
                "{} feature names for {} features",
                names.len(),
                self.p
            )));
        }
        let mut seen = BTreeSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        self.feature_names = Some(names);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Whole explanatory matrix, column-major.
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.x[j * self.n..(j + 1) * self.n]
    }

    pub fn columns(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.x.chunks_exact(self.n)
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    /// Display name of feature `j`: the declared name, or `X{j+1}`.
    pub fn feature_name(&self, j: usize) -> String {
        match &self.feature_names {
            Some(names) => names[j].clone(),
            None => format!("X{}", j + 1),
        }
    }

    /// Matrix restricted to the given feature indices (in the given order).
    pub fn select_columns(&self, keep: &[usize]) -> Result<Self> {
        let mut x = Vec::with_capacity(keep.len() * self.n);
        for &j in keep {
            x.extend_from_slice(self.column(j));
        }
        let out = Self::from_columns(self.n, x, self.y.clone())?;
        match &self.feature_names {
            Some(names) => out.with_feature_names(keep.iter().map(|&j| names[j].clone()).collect()),
            None => Ok(out),
        }
    }

    pub fn into_parts(self) -> (usize, Vec<f64>, Vec<f64>, Option<Vec<String>>) {
        (self.n, self.x, self.y, self.feature_names)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_small_and_non_finite() {
        assert_eq!(
            DataMatrix::from_columns(2, vec![0.0, 1.0], vec![0.0, 1.0]),
            Err(Error::TooFewSamples(2))
        );
        let err = DataMatrix::from_columns(3, vec![0.0, 1.0, 2.0, 0.0, f64::NAN, 1.0], vec![1.0; 3])
            .unwrap_err();
        assert_eq!(
            err,
            Error::NonFinite {
                row: 1,
                column: Some(1)
            }
        );
    }

    #[test]
    fn names_must_be_distinct_and_complete() {
        let m = DataMatrix::from_columns(3, vec![0.0; 6], vec![1.0; 3]).unwrap();
        assert!(m.clone().with_feature_names(vec!["a".into()]).is_err());
        assert_eq!(
            m.clone().with_feature_names(vec!["a".into(), "a".into()]),
            Err(Error::DuplicateName("a".into()))
        );
        let m = m.with_feature_names(vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(m.feature_name(1), "b");
    }

    #[test]
    fn select_columns_keeps_names() {
        let m = DataMatrix::from_column_vecs(
            vec![vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0], vec![7.0, 8.0, 9.0]],
            vec![0.0, 1.0, 0.0],
        )
        .unwrap()
        .with_feature_names(vec!["a".into(), "b".into(), "c".into()])
        .unwrap();
        let s = m.select_columns(&[0, 2]).unwrap();
        assert_eq!(s.column(1), &[7.0, 8.0, 9.0]);
        assert_eq!(s.feature_names().unwrap(), &["a".to_string(), "c".to_string()]);
    }
}
