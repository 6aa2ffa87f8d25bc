use std::path::PathBuf;

use clap::{Parser, Subcommand};
use eventlens::ml::Variant;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "eventlens", version, about = "Cross-network event analytics for Facebook/Twitter corpora")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub args: Args,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Parse and check every given input file.
    Validate,
    /// Stem and hashtag vocabulary overlap between the two networks.
    Overlap,
    /// Hashtag usage per network and across networks.
    Hashtags,
    /// First-post latency after each event's occurrence.
    Latency,
    /// Same-time URL posts and the accounts behind them.
    Crosspost,
    /// Most frequent expanded URL domains.
    Domains,
    /// Most active users per event via the content-gain walk.
    ActiveUsers,
    /// Extract labelled stylometric feature tables.
    Features,
    /// Train one classifier and save the model.
    Train,
    /// Stratified cross-validation of one or all classifiers.
    Evaluate,
    /// Rank features by information gain.
    RankFeatures,
    /// Spam-per-hour correlation between the networks.
    Timeline,
    /// Most frequent terms per network.
    Terms,
    /// Generate a synthetic paired corpus with ground truth.
    Synth,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Overlap => "overlap",
            Command::Hashtags => "hashtags",
            Command::Latency => "latency",
            Command::Crosspost => "crosspost",
            Command::Domains => "domains",
            Command::ActiveUsers => "active-users",
            Command::Features => "features",
            Command::Train => "train",
            Command::Evaluate => "evaluate",
            Command::RankFeatures => "rank-features",
            Command::Timeline => "timeline",
            Command::Terms => "terms",
            Command::Synth => "synth",
        }
    }
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: eventlens::Error| e.to_string())
}

#[derive(Debug, Clone, clap::Args, Serialize)]
pub struct Args {
    /// Facebook corpus (JSON lines).
    #[arg(long, global = true)]
    pub fb: Option<PathBuf>,
    /// Twitter corpus (JSON lines).
    #[arg(long, global = true)]
    pub tw: Option<PathBuf>,
    /// Event definitions (JSON array).
    #[arg(long, global = true)]
    pub events: Option<PathBuf>,
    /// User labels (CSV).
    #[arg(long, global = true)]
    pub labels: Option<PathBuf>,
    /// Short-to-long URL mapping (TSV).
    #[arg(long, global = true)]
    pub url_map: Option<PathBuf>,
    /// Shortener host list, one per line.
    #[arg(long, global = true)]
    pub shorteners: Option<PathBuf>,
    /// Stopword list for `terms`.
    #[arg(long, global = true)]
    pub stopwords: Option<PathBuf>,
    /// Feature table written by `features`.
    #[arg(long, global = true)]
    pub dataset: Option<PathBuf>,
    /// Generator settings (JSON) for `synth`; --seed overrides its seed.
    #[arg(long, global = true)]
    pub synth_config: Option<PathBuf>,

    /// Content-gain threshold, percent.
    #[arg(long, global = true, default_value_t = eventlens::activeusers::DEFAULT_K)]
    pub k: f64,
    /// Identity-linking threshold.
    #[arg(long, global = true, default_value_t = eventlens::crosspost::DEFAULT_LINK_THRESHOLD)]
    pub threshold: f64,
    #[arg(long, global = true, default_value_t = eventlens::ml::DEFAULT_FOLDS)]
    pub folds: usize,
    #[arg(long, global = true, default_value_t = eventlens::ml::DEFAULT_N_TREES)]
    pub trees: usize,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, default_value_t = eventlens::timeline::DEFAULT_WINDOW_HOURS)]
    pub window_hours: u32,
    #[arg(long, global = true, default_value_t = eventlens::timeline::DEFAULT_TOP_K)]
    pub top_k: usize,
    /// Classifier: naive-bayes, decision-tree or random-forest. `evaluate`
    /// runs all three when omitted; `train` defaults to random-forest.
    #[arg(long, global = true, value_parser = parse_variant)]
    pub variant: Option<Variant>,
    /// Drop the six post-level stylometric features (Facebook only).
    #[arg(long, global = true)]
    pub deplete: bool,
    /// Run every stage on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    /// Output directory.
    #[arg(long, global = true, default_value = "eventlens-out")]
    pub out: PathBuf,
}
