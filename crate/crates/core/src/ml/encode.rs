use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::features::{FeatureKind, FeatureSchema, FeatureValue, Label, LabeledDataset};

/// Code assigned to categorical values never seen in training.
pub const UNSEEN: f64 = -1.0;

/// Per-column mapping from feature values to `f64`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColumnEncoding {
    Numeric,
    /// `false` → 0, `true` → 1.
    Boolean,
    /// Sorted dictionary; code = index.
    Categorical { values: Vec<String> },
}

impl ColumnEncoding {
    pub fn is_numeric(&self) -> bool {
        matches!(self, ColumnEncoding::Numeric)
    }

    /// Number of distinct codes for discrete columns.
    pub fn cardinality(&self) -> usize {
        match self {
            ColumnEncoding::Numeric => 0,
            ColumnEncoding::Boolean => 2,
            ColumnEncoding::Categorical { values } => values.len(),
        }
    }

    fn encode(&self, v: &FeatureValue) -> f64 {
        match (self, v) {
            (ColumnEncoding::Numeric, FeatureValue::Num(x)) => *x,
            (ColumnEncoding::Boolean, FeatureValue::Bool(b)) => f64::from(u8::from(*b)),
            (ColumnEncoding::Categorical { values }, FeatureValue::Cat(s)) => values
                .binary_search(s)
                .map_or(UNSEEN, |i| i as f64),
            _ => UNSEEN,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Encoder {
    pub schema: FeatureSchema,
    pub columns: Vec<ColumnEncoding>,
}

impl Encoder {
    pub fn fit(ds: &LabeledDataset) -> Self {
        let columns = ds
            .schema
            .features
            .iter()
            .enumerate()
            .map(|(j, spec)| match spec.kind {
                FeatureKind::Numeric => ColumnEncoding::Numeric,
                FeatureKind::Boolean => ColumnEncoding::Boolean,
                FeatureKind::Categorical => {
                    let values: BTreeSet<&str> = ds
                        .rows
                        .iter()
                        .filter_map(|r| match &r.values[j] {
                            FeatureValue::Cat(s) => Some(s.as_str()),
                            _ => None,
                        })
                        .collect();
                    ColumnEncoding::Categorical {
                        values: values.into_iter().map(str::to_string).collect(),
                    }
                }
            })
            .collect();
        Encoder {
            schema: ds.schema.clone(),
            columns,
        }
    }

    pub fn encode_row(&self, values: &[FeatureValue]) -> Result<Vec<f64>> {
        self.schema.check_row(values)?;
        Ok(self
            .columns
            .iter()
            .zip(values)
            .map(|(c, v)| c.encode(v))
            .collect())
    }

    pub fn encode(&self, ds: &LabeledDataset) -> Result<EncodedData> {
        let mut columns = vec![Vec::with_capacity(ds.len()); self.columns.len()];
        for r in &ds.rows {
            for (col, x) in columns.iter_mut().zip(self.encode_row(&r.values)?) {
                col.push(x);
            }
        }
        Ok(EncodedData {
            columns,
            labels: ds.rows.iter().map(|r| r.label).collect(),
        })
    }
}

/// Column-major encoded training data.
#[derive(Debug, Clone)]
pub struct EncodedData {
    pub columns: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
}

impl EncodedData {
    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[i]).collect()
    }
}
