//! Binary C4.5-style decision tree.
//!
//! Split selection follows the C4.5 heuristic: among candidate splits with
//! at least average information gain, take the one with the highest gain
//! ratio. Numeric tests are `x <= midpoint`, discrete tests are `x == code`.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::encode::{ColumnEncoding, EncodedData};
use super::entropy::{information_gain, split_info};
use crate::features::Label;

pub const DEFAULT_MAX_DEPTH: usize = 30;
pub const DEFAULT_MIN_LEAF: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: usize,
    pub min_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_depth: DEFAULT_MAX_DEPTH,
            min_leaf: DEFAULT_MIN_LEAF,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum SplitTest {
    LessEq { threshold: f64 },
    Equals { code: u32 },
}

impl SplitTest {
    /// True sends the row left.
    pub fn goes_left(&self, x: f64) -> bool {
        match *self {
            SplitTest::LessEq { threshold } => x <= threshold,
            SplitTest::Equals { code } => x == f64::from(code),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum Node {
    Leaf {
        /// Training rows per class, indexed by `Label::index`.
        counts: [usize; 2],
        prediction: Label,
    },
    Split {
        feature: usize,
        test: SplitTest,
        left: Box<Node>,
        right: Box<Node>,
    },
}

impl Node {
    pub fn predict(&self, x: &[f64]) -> Label {
        let mut node = self;
        loop {
            match node {
                Node::Leaf { prediction, .. } => return *prediction,
                Node::Split { feature, test, left, right } => {
                    node = if test.goes_left(x[*feature]) { left } else { right };
                }
            }
        }
    }

    /// Edges on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Split { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }
}

pub(crate) fn majority(counts: [usize; 2]) -> Label {
    if counts[Label::Spam.index()] > counts[Label::NonSpam.index()] {
        Label::Spam
    } else {
        Label::NonSpam
    }
}

fn class_counts(data: &EncodedData, rows: &[usize]) -> [usize; 2] {
    let mut c = [0; 2];
    for &r in rows {
        c[data.labels[r].index()] += 1;
    }
    c
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    feature: usize,
    test: SplitTest,
    gain: f64,
    ratio: f64,
}

/// Best numeric split by gain. Ties keep the lowest threshold.
fn best_numeric(
    data: &EncodedData,
    rows: &[usize],
    feature: usize,
    parent: [usize; 2],
    min_leaf: usize,
) -> Option<Candidate> {
    let col = &data.columns[feature];
    let mut pairs: Vec<(f64, usize)> = rows.iter().map(|&r| (col[r], data.labels[r].index())).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = pairs.len();
    let mut left = [0usize; 2];
    let mut best: Option<(f64, f64, usize)> = None;
    for i in 0..n.saturating_sub(1) {
        left[pairs[i].1] += 1;
        let (lo, hi) = (pairs[i].0, pairs[i + 1].0);
        if lo == hi {
            continue;
        }
        let n_left = i + 1;
        if n_left < min_leaf || n - n_left < min_leaf {
            continue;
        }
        let right = [parent[0] - left[0], parent[1] - left[1]];
        let gain = information_gain(parent, &[left, right]);
        if best.is_none_or(|(g, _, _)| gain > g) {
            let mut t = lo + (hi - lo) / 2.0;
            // adjacent floats: the midpoint may round onto `hi`
            if t >= hi {
                t = lo;
            }
            best = Some((gain, t, n_left));
        }
    }
    best.map(|(gain, threshold, n_left)| Candidate {
        feature,
        test: SplitTest::LessEq { threshold },
        gain,
        ratio: ratio(gain, &[n_left, n - n_left]),
    })
}

/// Best one-vs-rest equality split by gain. Ties keep the lowest code.
fn best_discrete(
    data: &EncodedData,
    rows: &[usize],
    feature: usize,
    cardinality: usize,
    parent: [usize; 2],
    min_leaf: usize,
) -> Option<Candidate> {
    let col = &data.columns[feature];
    let mut per_code = vec![[0usize; 2]; cardinality];
    for &r in rows {
        let x = col[r];
        if x >= 0.0 {
            per_code[x as usize][data.labels[r].index()] += 1;
        }
    }
    let n = rows.len();
    let mut best: Option<Candidate> = None;
    for (code, left) in per_code.iter().enumerate() {
        let n_left = left[0] + left[1];
        if n_left == 0 || n_left < min_leaf || n - n_left < min_leaf {
            continue;
        }
        let right = [parent[0] - left[0], parent[1] - left[1]];
        let gain = information_gain(parent, &[*left, right]);
        if best.is_none_or(|b| gain > b.gain) {
            best = Some(Candidate {
                feature,
                test: SplitTest::Equals { code: code as u32 },
                gain,
                ratio: ratio(gain, &[n_left, n - n_left]),
            });
        }
    }
    best
}

fn ratio(gain: f64, sizes: &[usize]) -> f64 {
    let si = split_info(sizes);
    if si > 0.0 {
        gain / si
    } else {
        0.0
    }
}

/// C4.5 choice: highest ratio among candidates whose gain is at least the
/// mean positive gain. Earlier candidates win ties.
fn choose(cands: &[Candidate]) -> Option<Candidate> {
    let positive: Vec<f64> = cands.iter().map(|c| c.gain).filter(|&g| g > 0.0).collect();
    let floor = if positive.is_empty() {
        0.0
    } else {
        positive.iter().sum::<f64>() / positive.len() as f64 - 1e-12
    };
    let mut best: Option<Candidate> = None;
    for c in cands.iter().filter(|c| c.gain >= floor) {
        if best.is_none_or(|b| c.ratio > b.ratio) {
            best = Some(*c);
        }
    }
    best
}

/// Feature subsampling for forests: `m` features per node from `rng`.
pub(crate) struct Subsample<'a> {
    pub m: usize,
    pub rng: &'a mut ChaCha8Rng,
}

pub(crate) struct Builder<'a> {
    data: &'a EncodedData,
    encodings: &'a [ColumnEncoding],
    params: TreeParams,
}

impl<'a> Builder<'a> {
    pub fn new(data: &'a EncodedData, encodings: &'a [ColumnEncoding], params: TreeParams) -> Self {
        Builder { data, encodings, params }
    }

    fn candidate(&self, rows: &[usize], feature: usize, parent: [usize; 2]) -> Option<Candidate> {
        let min_leaf = self.params.min_leaf.max(1);
        match &self.encodings[feature] {
            ColumnEncoding::Numeric => best_numeric(self.data, rows, feature, parent, min_leaf),
            enc => best_discrete(self.data, rows, feature, enc.cardinality(), parent, min_leaf),
        }
    }

    pub fn build(&self, rows: Vec<usize>, sub: Option<&mut Subsample<'_>>) -> Node {
        let mut sub = sub;
        self.grow(rows, 0, &mut sub)
    }

    fn grow(&self, rows: Vec<usize>, depth: usize, sub: &mut Option<&mut Subsample<'_>>) -> Node {
        let counts = class_counts(self.data, &rows);
        let leaf = Node::Leaf {
            counts,
            prediction: majority(counts),
        };
        if counts[0] == 0 || counts[1] == 0 || depth >= self.params.max_depth {
            return leaf;
        }
        let d = self.data.n_features();
        let chosen = match sub {
            Some(s) if s.m < d => {
                let mut order: Vec<usize> = (0..d).collect();
                order.shuffle(s.rng);
                let (first, rest) = order.split_at(s.m);
                let primary: Vec<Candidate> =
                    first.iter().filter_map(|&f| self.candidate(&rows, f, counts)).collect();
                // only fall back to the other features when the sample offers no split at all
                choose(&primary).or_else(|| {
                    let others: Vec<Candidate> =
                        rest.iter().filter_map(|&f| self.candidate(&rows, f, counts)).collect();
                    choose(&others)
                })
            }
            _ => {
                let all: Vec<Candidate> = (0..d).filter_map(|f| self.candidate(&rows, f, counts)).collect();
                choose(&all)
            }
        };
        let Some(c) = chosen else { return leaf };
        let col = &self.data.columns[c.feature];
        let (left, right): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&r| c.test.goes_left(col[r]));
        Node::Split {
            feature: c.feature,
            test: c.test,
            left: Box::new(self.grow(left, depth + 1, sub)),
            right: Box::new(self.grow(right, depth + 1, sub)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(cols: Vec<Vec<f64>>, labels: &[u8]) -> EncodedData {
        EncodedData {
            columns: cols,
            labels: labels.iter().map(|&l| Label::from_index(l as usize)).collect(),
        }
    }

    #[test]
    fn midpoint_threshold() {
        let d = data(vec![vec![1.0, 2.0, 3.0, 10.0, 11.0, 12.0]], &[0, 0, 0, 1, 1, 1]);
        let enc = [ColumnEncoding::Numeric];
        let tree = Builder::new(&d, &enc, TreeParams::default()).build((0..6).collect(), None);
        match tree {
            Node::Split { test: SplitTest::LessEq { threshold }, .. } => assert_eq!(threshold, 6.5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pure_is_single_leaf() {
        let d = data(vec![vec![1.0, 2.0, 3.0]], &[1, 1, 1]);
        let enc = [ColumnEncoding::Numeric];
        let tree = Builder::new(&d, &enc, TreeParams::default()).build(vec![0, 1, 2], None);
        assert_eq!(tree, Node::Leaf { counts: [0, 3], prediction: Label::Spam });
    }

    #[test]
    fn leaf_tie_goes_to_non_spam() {
        assert_eq!(majority([2, 2]), Label::NonSpam);
        let d = data(vec![vec![1.0, 1.0]], &[0, 1]);
        let enc = [ColumnEncoding::Numeric];
        let tree = Builder::new(&d, &enc, TreeParams::default()).build(vec![0, 1], None);
        assert_eq!(tree.predict(&[1.0]), Label::NonSpam);
    }

    #[test]
    fn adjacent_floats_keep_threshold_below_hi() {
        let lo = 1.0f64;
        let hi = f64::from_bits(lo.to_bits() + 1);
        let d = data(vec![vec![lo, lo, hi, hi]], &[0, 0, 1, 1]);
        let enc = [ColumnEncoding::Numeric];
        let tree = Builder::new(&d, &enc, TreeParams::default()).build((0..4).collect(), None);
        assert_eq!(tree.predict(&[lo]), Label::NonSpam);
        assert_eq!(tree.predict(&[hi]), Label::Spam);
    }
}
