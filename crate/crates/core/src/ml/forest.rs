use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::encode::{ColumnEncoding, EncodedData};
use super::tree::{Builder, Node, Subsample, TreeParams};
use crate::exec::Execution;
use crate::features::Label;

pub const DEFAULT_N_TREES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    /// Features tried per split; `None` means ⌈√d⌉.
    pub max_features: Option<usize>,
    pub tree: TreeParams,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: DEFAULT_N_TREES,
            max_features: None,
            tree: TreeParams {
                min_leaf: 1,
                ..TreeParams::default()
            },
        }
    }
}

/// ⌈√d⌉, at least 1.
pub fn default_max_features(d: usize) -> usize {
    let mut m = (d as f64).sqrt().ceil() as usize;
    while m * m < d {
        m += 1;
    }
    while m > 1 && (m - 1) * (m - 1) >= d {
        m -= 1;
    }
    m.max(1)
}

/// SplitMix64 finaliser.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent stream seed for work item `index` under `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub seed: u64,
    pub max_features: usize,
    pub trees: Vec<Node>,
}

/// Bootstrap rows (size n, with replacement) for tree `index`, plus the
/// RNG positioned after the draw for use in feature subsampling.
pub(crate) fn bootstrap(n: usize, seed: u64, index: usize) -> (Vec<usize>, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, index as u64));
    let rows = (0..n).map(|_| rng.gen_range(0..n)).collect();
    (rows, rng)
}

impl Forest {
    pub(crate) fn fit(
        data: &EncodedData,
        encodings: &[ColumnEncoding],
        params: &ForestParams,
        seed: u64,
        exec: Execution,
    ) -> Self {
        let d = data.n_features();
        let m = params.max_features.unwrap_or_else(|| default_max_features(d)).clamp(1, d.max(1));
        let builder = Builder::new(data, encodings, params.tree);
        let trees = exec.map_range(params.n_trees, |t| {
            let (rows, mut rng) = bootstrap(data.n_rows(), seed, t);
            let mut sub = Subsample { m, rng: &mut rng };
            builder.build(rows, Some(&mut sub))
        });
        Forest {
            seed,
            max_features: m,
            trees,
        }
    }

    /// Vote counts indexed by `Label::index`.
    pub fn votes(&self, x: &[f64]) -> [usize; 2] {
        let mut v = [0; 2];
        for t in &self.trees {
            v[t.predict(x).index()] += 1;
        }
        v
    }

    pub fn predict(&self, x: &[f64]) -> Label {
        super::tree::majority(self.votes(x))
    }
}
