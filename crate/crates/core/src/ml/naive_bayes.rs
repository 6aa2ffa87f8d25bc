use serde::{Deserialize, Serialize};

use super::encode::{ColumnEncoding, EncodedData};
use crate::features::Label;

pub const VARIANCE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NbFeature {
    /// Per-class mean and (population) variance.
    Gaussian { mean: [f64; 2], variance: [f64; 2] },
    /// Per-class log P(code | class) with add-1 smoothing, plus the log
    /// probability given to codes unseen in training.
    Discrete { log_probs: [Vec<f64>; 2], unseen_log_prob: [f64; 2] },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayes {
    pub log_priors: [f64; 2],
    pub features: Vec<NbFeature>,
}

fn gaussian_log_pdf(x: f64, mean: f64, variance: f64) -> f64 {
    let d = x - mean;
    -0.5 * (2.0 * std::f64::consts::PI * variance).ln() - d * d / (2.0 * variance)
}

impl NaiveBayes {
    /// Caller guarantees both classes are present.
    pub(crate) fn fit(data: &EncodedData, encodings: &[ColumnEncoding]) -> Self {
        let n = data.n_rows() as f64;
        let mut class_n = [0usize; 2];
        for l in &data.labels {
            class_n[l.index()] += 1;
        }
        let log_priors = class_n.map(|c| (c as f64 / n).ln());
        let features = data
            .columns
            .iter()
            .zip(encodings)
            .map(|(col, enc)| match enc {
                ColumnEncoding::Numeric => {
                    let mut sum = [0.0; 2];
                    for (x, l) in col.iter().zip(&data.labels) {
                        sum[l.index()] += x;
                    }
                    let mean = [sum[0] / class_n[0] as f64, sum[1] / class_n[1] as f64];
                    let mut sq = [0.0; 2];
                    for (x, l) in col.iter().zip(&data.labels) {
                        let d = x - mean[l.index()];
                        sq[l.index()] += d * d;
                    }
                    let variance = [0, 1].map(|c| (sq[c] / class_n[c] as f64).max(VARIANCE_FLOOR));
                    NbFeature::Gaussian { mean, variance }
                }
                enc => {
                    let v = enc.cardinality();
                    let mut counts = [vec![0usize; v], vec![0usize; v]];
                    for (x, l) in col.iter().zip(&data.labels) {
                        if *x >= 0.0 {
                            counts[l.index()][*x as usize] += 1;
                        }
                    }
                    let denom = [0, 1].map(|c| (class_n[c] + v) as f64);
                    let log_probs = [0, 1].map(|c| {
                        counts[c]
                            .iter()
                            .map(|&k| ((k + 1) as f64 / denom[c]).ln())
                            .collect()
                    });
                    NbFeature::Discrete {
                        log_probs,
                        unseen_log_prob: denom.map(|d| (1.0 / d).ln()),
                    }
                }
            })
            .collect();
        NaiveBayes { log_priors, features }
    }

    /// Unnormalised log P(class) + Σ log P(x_j | class), per class.
    pub fn log_joint(&self, x: &[f64]) -> [f64; 2] {
        let mut out = self.log_priors;
        for (f, &xj) in self.features.iter().zip(x) {
            for (c, acc) in out.iter_mut().enumerate() {
                *acc += match f {
                    NbFeature::Gaussian { mean, variance } => gaussian_log_pdf(xj, mean[c], variance[c]),
                    NbFeature::Discrete { log_probs, unseen_log_prob } => {
                        if xj >= 0.0 {
                            log_probs[c].get(xj as usize).copied().unwrap_or(unseen_log_prob[c])
                        } else {
                            unseen_log_prob[c]
                        }
                    }
                };
            }
        }
        out
    }

    /// Normalised log posteriors (log-sum-exp over the two classes).
    pub fn log_posteriors(&self, x: &[f64]) -> [f64; 2] {
        let j = self.log_joint(x);
        let m = j[0].max(j[1]);
        let lse = m + ((j[0] - m).exp() + (j[1] - m).exp()).ln();
        [j[0] - lse, j[1] - lse]
    }

    pub fn predict(&self, x: &[f64]) -> Label {
        let j = self.log_joint(x);
        if j[Label::Spam.index()] > j[Label::NonSpam.index()] {
            Label::Spam
        } else {
            Label::NonSpam
        }
    }
}
