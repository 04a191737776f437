//! Feature tables and label schemes.
//!
//! A `FeatureTable` is the rectangular hand-off between feature extraction
//! and the modeling stages: one row per epoch, one column per named feature,
//! plus an integer class label per row. Tables are always f64; generic
//! scalars stop at the feature kernels.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::Mode;
use crate::error::{Error, Result};

/// How epochs are labeled for classification.
///
/// `FiveClass` keeps the raw modes. `FourClass` merges bus and car into
/// `non_vru`. `Binary` additionally merges bike, walk and run into `vru`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelScheme {
    FiveClass,
    FourClass,
    Binary,
}

impl LabelScheme {
    pub fn all() -> [LabelScheme; 3] {
        [LabelScheme::FiveClass, LabelScheme::FourClass, LabelScheme::Binary]
    }

    /// Class names in label order; a label is an index into this list.
    pub fn class_names(self) -> Vec<String> {
        match self {
            LabelScheme::FiveClass => ["bike", "walk", "run", "bus", "car"]
                .map(String::from)
                .to_vec(),
            LabelScheme::FourClass => ["bike", "walk", "run", "non_vru"]
                .map(String::from)
                .to_vec(),
            LabelScheme::Binary => ["vru", "non_vru"].map(String::from).to_vec(),
        }
    }

    pub fn n_classes(self) -> usize {
        match self {
            LabelScheme::FiveClass => 5,
            LabelScheme::FourClass => 4,
            LabelScheme::Binary => 2,
        }
    }

    /// Label assigned to a transport mode under this scheme.
    pub fn label_of(self, mode: Mode) -> usize {
        match self {
            LabelScheme::FiveClass => mode as usize,
            LabelScheme::FourClass => {
                if mode.is_vru() {
                    mode as usize
                } else {
                    3
                }
            }
            LabelScheme::Binary => {
                if mode.is_vru() {
                    0
                } else {
                    1
                }
            }
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LabelScheme::FiveClass => "five_class",
            LabelScheme::FourClass => "four_class",
            LabelScheme::Binary => "binary",
        }
    }
}

impl fmt::Display for LabelScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LabelScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "five_class" => Ok(LabelScheme::FiveClass),
            "four_class" => Ok(LabelScheme::FourClass),
            "binary" => Ok(LabelScheme::Binary),
            other => Err(Error::InvalidLabel(format!("unknown label scheme {other:?}"))),
        }
    }
}

/// Row-major feature matrix with aligned labels.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub feature_names: Vec<String>,
    pub class_names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
}

impl FeatureTable {
    /// Builds a table, enforcing rectangularity and label alignment.
    pub fn new(
        feature_names: Vec<String>,
        class_names: Vec<String>,
        rows: Vec<Vec<f64>>,
        labels: Vec<usize>,
    ) -> Result<Self> {
        let width = feature_names.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::WidthMismatch {
                    expected: width,
                    got: row.len(),
                });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!("non-finite feature in row {i}")));
            }
        }
        if labels.len() != rows.len() {
            return Err(Error::Alignment(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_names.len()) {
            return Err(Error::InvalidLabel(format!(
                "label {bad} out of range for {} classes",
                class_names.len()
            )));
        }
        Ok(FeatureTable {
            feature_names,
            class_names,
            rows,
            labels,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|row| row[j]).collect()
    }

    /// Per-class row counts, indexed by label.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.class_names.len()];
        for &label in &self.labels {
            counts[label] += 1;
        }
        counts
    }

    /// New table keeping only the named columns, in the given order.
    pub fn select_columns(&self, indices: &[usize]) -> Result<FeatureTable> {
        for &j in indices {
            if j >= self.n_features() {
                return Err(Error::InvalidInput(format!(
                    "column index {j} out of range for {} features",
                    self.n_features()
                )));
            }
        }
        Ok(FeatureTable {
            feature_names: indices
                .iter()
                .map(|&j| self.feature_names[j].clone())
                .collect(),
            class_names: self.class_names.clone(),
            rows: self
                .rows
                .iter()
                .map(|row| indices.iter().map(|&j| row[j]).collect())
                .collect(),
            labels: self.labels.clone(),
        })
    }

    /// Reinterprets labels under another scheme. Rows are unchanged; each
    /// label is parsed back to a mode by its current class name and mapped.
    pub fn relabel(&self, scheme: LabelScheme) -> Result<FeatureTable> {
        let labels = self
            .labels
            .iter()
            .map(|&l| {
                let mode: Mode = self.class_names[l].parse()?;
                Ok(scheme.label_of(mode))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FeatureTable {
            feature_names: self.feature_names.clone(),
            class_names: scheme.class_names(),
            rows: self.rows.clone(),
            labels,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("f{i}")).collect()
    }

    #[test]
    fn five_class_labels_follow_mode_order() {
        let s = LabelScheme::FiveClass;
        assert_eq!(s.class_names(), ["bike", "walk", "run", "bus", "car"]);
        for (i, mode) in Mode::ALL.into_iter().enumerate() {
            assert_eq!(s.label_of(mode), i);
        }
    }

    #[test]
    fn four_class_merges_exactly_bus_and_car() {
        let s = LabelScheme::FourClass;
        assert_eq!(s.class_names(), ["bike", "walk", "run", "non_vru"]);
        assert_eq!(s.label_of(Mode::Bike), 0);
        assert_eq!(s.label_of(Mode::Walk), 1);
        assert_eq!(s.label_of(Mode::Run), 2);
        assert_eq!(s.label_of(Mode::Bus), 3);
        assert_eq!(s.label_of(Mode::Car), 3);
    }

    #[test]
    fn binary_label_agrees_with_vru_flag() {
        let s = LabelScheme::Binary;
        assert_eq!(s.class_names(), ["vru", "non_vru"]);
        for mode in Mode::ALL {
            assert_eq!(s.label_of(mode) == 0, mode.is_vru());
        }
    }

    #[test]
    fn scheme_names_round_trip() {
        for scheme in LabelScheme::all() {
            assert_eq!(scheme.as_str().parse::<LabelScheme>().unwrap(), scheme);
        }
        assert!("three_class".parse::<LabelScheme>().is_err());
    }

    #[test]
    fn construction_enforces_rectangularity() {
        let err = FeatureTable::new(
            names(2),
            LabelScheme::Binary.class_names(),
            vec![vec![1.0, 2.0], vec![3.0]],
            vec![0, 1],
        )
        .unwrap_err();
        assert!(matches!(err, Error::WidthMismatch { expected: 2, got: 1 }));
    }

    #[test]
    fn construction_enforces_label_alignment_and_range() {
        let rows = vec![vec![1.0], vec![2.0]];
        assert!(matches!(
            FeatureTable::new(names(1), LabelScheme::Binary.class_names(), rows.clone(), vec![0]),
            Err(Error::Alignment(_))
        ));
        assert!(matches!(
            FeatureTable::new(names(1), LabelScheme::Binary.class_names(), rows, vec![0, 2]),
            Err(Error::InvalidLabel(_))
        ));
    }

    #[test]
    fn select_columns_projects_names_and_values_together() {
        let t = FeatureTable::new(
            names(3),
            LabelScheme::Binary.class_names(),
            vec![vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]],
            vec![0, 1],
        )
        .unwrap();
        let p = t.select_columns(&[2, 0]).unwrap();
        assert_eq!(p.feature_names, ["f2", "f0"]);
        assert_eq!(p.rows, vec![vec![3.0, 1.0], vec![6.0, 4.0]]);
        assert_eq!(p.labels, t.labels);
        assert!(t.select_columns(&[3]).is_err());
    }

    #[test]
    fn relabel_remaps_through_modes() {
        let t = FeatureTable::new(
            names(1),
            LabelScheme::FiveClass.class_names(),
            vec![vec![0.0]; 5],
            vec![0, 1, 2, 3, 4],
        )
        .unwrap();
        assert_eq!(t.relabel(LabelScheme::FourClass).unwrap().labels, [0, 1, 2, 3, 3]);
        assert_eq!(t.relabel(LabelScheme::Binary).unwrap().labels, [0, 0, 0, 1, 1]);
        // A merged class name cannot be parsed back to a single mode.
        assert!(t
            .relabel(LabelScheme::Binary)
            .unwrap()
            .relabel(LabelScheme::FiveClass)
            .is_err());
    }

    #[test]
    fn class_counts_tally_labels() {
        let t = FeatureTable::new(
            names(1),
            LabelScheme::Binary.class_names(),
            vec![vec![0.0]; 4],
            vec![0, 1, 1, 1],
        )
        .unwrap();
        assert_eq!(t.class_counts(), [1, 3]);
    }
}
