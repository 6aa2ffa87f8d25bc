//! From-scratch spam classifiers: Gaussian/multinomial Naive Bayes, a
//! C4.5-style decision tree and a random forest, plus stratified
//! cross-validation and information-gain feature ranking.
//!
//! All randomness is derived from a caller-supplied seed through
//! per-item streams, so results do not depend on [`Execution`].

mod encode;
mod entropy;
mod forest;
mod metrics;
mod naive_bayes;
mod tree;

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::features::{FeatureSchema, FeatureValue, Label, LabeledDataset};

pub use encode::{ColumnEncoding, EncodedData, Encoder, UNSEEN};
pub use entropy::{entropy, information_gain, split_info};
pub use forest::{default_max_features, derive_seed, Forest, ForestParams, DEFAULT_N_TREES};
pub use metrics::ConfusionMatrix;
pub use naive_bayes::{NaiveBayes, NbFeature, VARIANCE_FLOOR};
pub use tree::{Node, SplitTest, TreeParams, DEFAULT_MAX_DEPTH, DEFAULT_MIN_LEAF};

pub const DEFAULT_FOLDS: usize = 10;
/// Bumped whenever the serialized model layout changes.
pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    NaiveBayes,
    DecisionTree,
    RandomForest,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::NaiveBayes, Variant::DecisionTree, Variant::RandomForest];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::NaiveBayes => "naive_bayes",
            Variant::DecisionTree => "decision_tree",
            Variant::RandomForest => "random_forest",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "naive_bayes" | "nb" => Ok(Variant::NaiveBayes),
            "decision_tree" | "dt" | "j48" => Ok(Variant::DecisionTree),
            "random_forest" | "rf" => Ok(Variant::RandomForest),
            _ => Err(Error::InvalidParameter(format!("unknown classifier variant {s:?}"))),
        }
    }
}

/// Variant plus hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum ClassifierSpec {
    NaiveBayes,
    DecisionTree(TreeParams),
    RandomForest(ForestParams),
}

impl ClassifierSpec {
    pub fn variant(&self) -> Variant {
        match self {
            ClassifierSpec::NaiveBayes => Variant::NaiveBayes,
            ClassifierSpec::DecisionTree(_) => Variant::DecisionTree,
            ClassifierSpec::RandomForest(_) => Variant::RandomForest,
        }
    }

    pub fn default_for(variant: Variant) -> Self {
        match variant {
            Variant::NaiveBayes => ClassifierSpec::NaiveBayes,
            Variant::DecisionTree => ClassifierSpec::DecisionTree(TreeParams::default()),
            Variant::RandomForest => ClassifierSpec::RandomForest(ForestParams::default()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum Learned {
    NaiveBayes(NaiveBayes),
    DecisionTree { params: TreeParams, root: Node },
    RandomForest { params: ForestParams, forest: Forest },
}

/// A trained classifier together with the schema and encoding it expects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierModel {
    pub encoder: Encoder,
    pub learned: Learned,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    model: ClassifierModel,
}

impl ClassifierModel {
    pub fn variant(&self) -> Variant {
        match self.learned {
            Learned::NaiveBayes(_) => Variant::NaiveBayes,
            Learned::DecisionTree { .. } => Variant::DecisionTree,
            Learned::RandomForest { .. } => Variant::RandomForest,
        }
    }

    pub fn schema(&self) -> &FeatureSchema {
        &self.encoder.schema
    }

    /// Predict from an already-encoded row.
    pub fn predict_encoded(&self, x: &[f64]) -> Label {
        match &self.learned {
            Learned::NaiveBayes(nb) => nb.predict(x),
            Learned::DecisionTree { root, .. } => root.predict(x),
            Learned::RandomForest { forest, .. } => forest.predict(x),
        }
    }

    /// Fails when `values` does not match the training schema.
    pub fn predict(&self, values: &[FeatureValue]) -> Result<Label> {
        Ok(self.predict_encoded(&self.encoder.encode_row(values)?))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&ModelFile {
            format_version: MODEL_FORMAT_VERSION,
            model: self.clone(),
        })?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Header {
            format_version: u32,
        }
        let h: Header = serde_json::from_str(text)?;
        if h.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::ModelVersion(h.format_version));
        }
        Ok(serde_json::from_str::<ModelFile>(text)?.model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

fn prepare(ds: &LabeledDataset) -> Result<(Encoder, EncodedData)> {
    ds.require_both_classes()?;
    let encoder = Encoder::fit(ds);
    let data = encoder.encode(ds)?;
    Ok((encoder, data))
}

pub fn train_naive_bayes(ds: &LabeledDataset) -> Result<ClassifierModel> {
    let (encoder, data) = prepare(ds)?;
    let nb = NaiveBayes::fit(&data, &encoder.columns);
    Ok(ClassifierModel {
        encoder,
        learned: Learned::NaiveBayes(nb),
    })
}

pub fn train_decision_tree(ds: &LabeledDataset, params: TreeParams) -> Result<ClassifierModel> {
    let (encoder, data) = prepare(ds)?;
    let root = tree::Builder::new(&data, &encoder.columns, params).build((0..data.n_rows()).collect(), None);
    Ok(ClassifierModel {
        encoder,
        learned: Learned::DecisionTree { params, root },
    })
}

pub fn train_random_forest(
    ds: &LabeledDataset,
    params: ForestParams,
    seed: u64,
    exec: Execution,
) -> Result<ClassifierModel> {
    if params.n_trees == 0 {
        return Err(Error::InvalidParameter("n_trees must be at least 1".into()));
    }
    let (encoder, data) = prepare(ds)?;
    let forest = Forest::fit(&data, &encoder.columns, &params, seed, exec);
    Ok(ClassifierModel {
        encoder,
        learned: Learned::RandomForest { params, forest },
    })
}

/// Bootstrap row indices the forest used for tree `index`.
pub fn bootstrap_indices(n: usize, seed: u64, index: usize) -> Vec<usize> {
    forest::bootstrap(n, seed, index).0
}

pub fn train(ds: &LabeledDataset, spec: &ClassifierSpec, seed: u64, exec: Execution) -> Result<ClassifierModel> {
    match spec {
        ClassifierSpec::NaiveBayes => train_naive_bayes(ds),
        ClassifierSpec::DecisionTree(p) => train_decision_tree(ds, *p),
        ClassifierSpec::RandomForest(p) => train_random_forest(ds, *p, seed, exec),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub fold: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub confusion: ConfusionMatrix,
    pub accuracy: f64,
    pub f_score_spam: f64,
}

/// Cross-validated evaluation; one row of a Table-7-style comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub classifier: Variant,
    pub network: crate::corpus::Network,
    pub feature_set: String,
    pub features: Vec<String>,
    pub n_rows: usize,
    pub folds: usize,
    pub seed: u64,
    pub accuracy: f64,
    pub f_score_spam: f64,
    pub f_score_weighted: f64,
    pub confusion: ConfusionMatrix,
    pub per_fold: Vec<FoldReport>,
}

/// "full" when the schema is the network's complete feature set.
pub fn feature_set_name(schema: &FeatureSchema) -> &'static str {
    if *schema == FeatureSchema::for_network(schema.network) {
        "full"
    } else {
        "reduced"
    }
}

/// Stratified fold index per row. The row shuffle ignores labels, so
/// relabelling the classes yields the same assignment.
pub fn stratified_folds(labels: &[Label], folds: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(derive_seed(seed, u64::MAX)));
    let mut next = [0usize; 2];
    let mut assignment = vec![0; labels.len()];
    for i in order {
        let c = labels[i].index();
        assignment[i] = next[c] % folds;
        next[c] += 1;
    }
    assignment
}

pub fn cross_validate(
    ds: &LabeledDataset,
    spec: &ClassifierSpec,
    folds: usize,
    seed: u64,
    exec: Execution,
) -> Result<EvalReport> {
    if folds < 2 {
        return Err(Error::InvalidParameter(format!("folds must be at least 2, got {folds}")));
    }
    let counts = ds.class_counts();
    for label in [Label::NonSpam, Label::Spam] {
        let count = counts[label.index()];
        if count < folds {
            return Err(Error::ClassTooSmall {
                class: label.as_str(),
                count,
                folds,
            });
        }
    }
    let labels: Vec<Label> = ds.rows.iter().map(|r| r.label).collect();
    let assignment = stratified_folds(&labels, folds, seed);
    let per_fold = exec.try_map_range(folds, |k| {
        let (test, train_idx): (Vec<usize>, Vec<usize>) = (0..ds.len()).partition(|&i| assignment[i] == k);
        let model = train(&ds.subset(&train_idx), spec, derive_seed(seed, k as u64), exec)?;
        let mut confusion = ConfusionMatrix::default();
        for &i in &test {
            let row = &ds.rows[i];
            confusion.record(row.label, model.predict(&row.values)?);
        }
        Ok::<_, Error>(FoldReport {
            fold: k,
            n_train: train_idx.len(),
            n_test: test.len(),
            accuracy: confusion.accuracy(),
            f_score_spam: confusion.f_score_spam(),
            confusion,
        })
    })?;
    let confusion = per_fold
        .iter()
        .fold(ConfusionMatrix::default(), |acc, f| acc.add(&f.confusion));
    Ok(EvalReport {
        classifier: spec.variant(),
        network: ds.network(),
        feature_set: feature_set_name(&ds.schema).to_string(),
        features: ds.schema.names().iter().map(|s| s.to_string()).collect(),
        n_rows: ds.len(),
        folds,
        seed,
        accuracy: confusion.accuracy(),
        f_score_spam: confusion.f_score_spam(),
        f_score_weighted: confusion.f_score_weighted(),
        confusion,
        per_fold,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedFeature {
    pub feature: String,
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRanking {
    pub entries: Vec<RankedFeature>,
}

impl FeatureRanking {
    pub fn top(&self, n: usize) -> Vec<&str> {
        self.entries.iter().take(n).map(|e| e.feature.as_str()).collect()
    }

    pub fn gain_of(&self, feature: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.feature == feature).map(|e| e.gain)
    }

    /// CSV `rank,feature,gain` with gains at 6 decimals.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["rank", "feature", "gain"])?;
        for (i, e) in self.entries.iter().enumerate() {
            w.write_record([(i + 1).to_string(), e.feature.clone(), format!("{:.6}", e.gain)])?;
        }
        w.flush().map_err(|e| Error::io("<writer>", e))
    }
}

fn feature_gain(data: &EncodedData, feature: usize, enc: &ColumnEncoding, parent: [usize; 2]) -> f64 {
    let col = &data.columns[feature];
    match enc {
        ColumnEncoding::Numeric => {
            let mut pairs: Vec<(f64, usize)> = col.iter().zip(&data.labels).map(|(&x, l)| (x, l.index())).collect();
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut left = [0usize; 2];
            let mut best = 0.0f64;
            for i in 0..pairs.len().saturating_sub(1) {
                left[pairs[i].1] += 1;
                if pairs[i].0 == pairs[i + 1].0 {
                    continue;
                }
                let right = [parent[0] - left[0], parent[1] - left[1]];
                best = best.max(information_gain(parent, &[left, right]));
            }
            best
        }
        enc => {
            let mut parts = vec![[0usize; 2]; enc.cardinality()];
            for (&x, l) in col.iter().zip(&data.labels) {
                if x >= 0.0 {
                    parts[x as usize][l.index()] += 1;
                }
            }
            information_gain(parent, &parts)
        }
    }
}

/// Information gain of each feature against the label, highest first.
pub fn rank_features(ds: &LabeledDataset, exec: Execution) -> Result<FeatureRanking> {
    if ds.is_empty() {
        return Err(Error::EmptyInput("rank_features needs at least one row"));
    }
    let encoder = Encoder::fit(ds);
    let data = encoder.encode(ds)?;
    let parent = ds.class_counts();
    let gains = exec.map_range(data.n_features(), |j| feature_gain(&data, j, &encoder.columns[j], parent));
    let mut entries: Vec<RankedFeature> = ds
        .schema
        .names()
        .into_iter()
        .zip(gains)
        .map(|(name, gain)| RankedFeature {
            feature: name.to_string(),
            gain,
        })
        .collect();
    entries.sort_by(|a, b| b.gain.total_cmp(&a.gain).then_with(|| a.feature.cmp(&b.feature)));
    Ok(FeatureRanking { entries })
}
