//! Summary statistics shared by the report types.

use serde::{Deserialize, Serialize};

/// Mean and population standard deviation of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub n: usize,
    pub mean: f64,
    pub std_dev: f64,
}

impl MeanStd {
    /// Returns `None` for an empty sample.
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Some(MeanStd {
            n: values.len(),
            mean,
            std_dev: var.sqrt(),
        })
    }
}

/// Round to two decimals for report display.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}
