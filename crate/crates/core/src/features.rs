//! Stylometric and metadata features for spam classification.
//!
//! Ratio features with a zero denominator take [`RATIO_SENTINEL`] (1.0, no
//! observable repetition). Absent categorical metadata becomes
//! [`MISSING_CATEGORY`].

use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, LabelSet, Network, Post, UserLabelKind};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::textproc::{domain_matches, extract_domain, tokenize, ShortenerList, TokenKind, TokenList};

pub const RATIO_SENTINEL: f64 = 1.0;
pub const MISSING_CATEGORY: &str = "N/A";

/// Facebook post-level stylometric features removed by [`deplete_features`].
pub const POST_LEVEL_FEATURES: [&str; 6] = [
    "post_richness",
    "post_length",
    "post_chars",
    "post_rep_factor",
    "post_words",
    "post_unique_words",
];

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        RATIO_SENTINEL
    } else {
        num as f64 / den as f64
    }
}

fn distinct(items: &[String]) -> usize {
    items.iter().collect::<BTreeSet<_>>().len()
}

fn category(value: Option<&str>) -> String {
    value
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .unwrap_or(MISSING_CATEGORY)
        .to_string()
}

/// Counts shared by both networks' vectors.
struct TextStats {
    words: usize,
    unique_words: usize,
    chars: usize,
    length: usize,
    hashtags: usize,
    unique_hashtags: usize,
    mentions: usize,
    unique_mentions: usize,
    plain_tokens: usize,
    urls: Vec<String>,
}

impl TextStats {
    fn of(text: &str) -> Self {
        let tokens: TokenList = tokenize(text);
        let keys: BTreeSet<String> = tokens.tokens.iter().map(|t| t.word_key()).collect();
        let hashtags = tokens.hashtags();
        let mentions = tokens.mentions();
        TextStats {
            words: tokens.len(),
            unique_words: keys.len(),
            chars: text.chars().filter(|c| !c.is_whitespace()).count(),
            length: text.chars().count(),
            hashtags: hashtags.len(),
            unique_hashtags: distinct(&hashtags),
            mentions: mentions.len(),
            unique_mentions: distinct(&mentions),
            plain_tokens: tokens.count(TokenKind::Plain),
            urls: tokens.urls().into_iter().map(str::to_string).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacebookFeatureVector {
    pub post_richness: f64,
    pub post_length: usize,
    pub post_chars: usize,
    pub post_rep_factor: f64,
    pub post_words: usize,
    pub post_unique_words: usize,
    pub is_page: bool,
    pub post_type: String,
    pub num_fb_urls: usize,
    pub num_urls: usize,
    pub app: String,
    pub num_likes: u64,
    pub page_likes: u64,
    pub category: String,
    pub num_hashtags: usize,
    pub num_unique_hashtags: usize,
    pub num_shares: u64,
    pub hashtag_rep_factor: f64,
    pub app_ns: String,
    pub num_short_urls: usize,
    pub num_comments: u64,
}

/// Twitter client bucket derived from the posting application name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TweetSource {
    Mobile,
    Web,
    ThirdParty,
    Other,
}

impl TweetSource {
    pub fn as_str(self) -> &'static str {
        match self {
            TweetSource::Mobile => "mobile",
            TweetSource::Web => "web",
            TweetSource::ThirdParty => "third_party",
            TweetSource::Other => "other",
        }
    }
}

const MOBILE_CLIENT_MARKERS: &[&str] = &[
    "for iphone",
    "for ipad",
    "for ios",
    "for android",
    "for blackberry",
    "for windows phone",
    "for nokia",
    "mobile",
];

const WEB_CLIENTS: &[&str] = &["web", "twitter web client", "twitter web app", "twitter.com", "tweetdeck web"];

pub fn classify_tweet_source(app: Option<&str>) -> TweetSource {
    let Some(app) = app.map(str::trim).filter(|a| !a.is_empty()) else {
        return TweetSource::Other;
    };
    let app = app.to_lowercase();
    if MOBILE_CLIENT_MARKERS.iter().any(|m| app.contains(m)) {
        TweetSource::Mobile
    } else if WEB_CLIENTS.contains(&app.as_str()) {
        TweetSource::Web
    } else {
        TweetSource::ThirdParty
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwitterFeatureVector {
    pub tweet_richness: f64,
    pub num_unique_hashtags: usize,
    pub num_hashtags: usize,
    pub tweet_chars: usize,
    pub num_plain_tokens: usize,
    pub tweet_words: usize,
    pub tweet_unique_words: usize,
    pub tweet_source: TweetSource,
    pub is_retweet: bool,
    pub tweet_rep_factor: f64,
    pub num_urls: usize,
    pub has_media: bool,
    pub hashtag_rep_factor: f64,
    pub num_mentions: usize,
    pub num_unique_mentions: usize,
    pub mention_rep_factor: f64,
}

/// Feature extraction with a configurable shortener list.
#[derive(Debug, Clone, Default)]
pub struct FeatureExtractor {
    pub shorteners: ShortenerList,
}

impl FeatureExtractor {
    pub fn new(shorteners: ShortenerList) -> Self {
        FeatureExtractor { shorteners }
    }

    pub fn facebook(&self, post: &Post) -> FacebookFeatureVector {
        let s = TextStats::of(&post.text);
        let num_fb_urls = s
            .urls
            .iter()
            .filter(|u| extract_domain(u).is_ok_and(|d| domain_matches(&d, "facebook.com")))
            .count();
        let num_short_urls = s.urls.iter().filter(|u| self.shorteners.is_short(u)).count();
        FacebookFeatureVector {
            post_richness: ratio(s.words, s.chars),
            post_length: s.length,
            post_chars: s.chars,
            post_rep_factor: ratio(s.unique_words, s.words),
            post_words: s.words,
            post_unique_words: s.unique_words,
            is_page: post.is_page,
            post_type: post.post_type.as_str().to_string(),
            num_fb_urls,
            num_urls: s.urls.len(),
            app: category(post.app.as_deref()),
            num_likes: post.likes,
            page_likes: if post.is_page { post.page_likes.unwrap_or(0) } else { 0 },
            category: if post.is_page {
                category(post.page_category.as_deref())
            } else {
                MISSING_CATEGORY.to_string()
            },
            num_hashtags: s.hashtags,
            num_unique_hashtags: s.unique_hashtags,
            num_shares: post.shares,
            hashtag_rep_factor: ratio(s.unique_hashtags, s.hashtags),
            app_ns: category(post.app_namespace.as_deref()),
            num_short_urls,
            num_comments: post.comments,
        }
    }

    pub fn twitter(&self, post: &Post) -> TwitterFeatureVector {
        let s = TextStats::of(&post.text);
        TwitterFeatureVector {
            tweet_richness: ratio(s.words, s.chars),
            num_unique_hashtags: s.unique_hashtags,
            num_hashtags: s.hashtags,
            tweet_chars: s.chars,
            num_plain_tokens: s.plain_tokens,
            tweet_words: s.words,
            tweet_unique_words: s.unique_words,
            tweet_source: classify_tweet_source(post.app.as_deref()),
            is_retweet: post.is_retweet,
            tweet_rep_factor: ratio(s.unique_words, s.words),
            num_urls: s.urls.len(),
            has_media: post.has_media,
            hashtag_rep_factor: ratio(s.unique_hashtags, s.hashtags),
            num_mentions: s.mentions,
            num_unique_mentions: s.unique_mentions,
            mention_rep_factor: ratio(s.unique_mentions, s.mentions),
        }
    }

    /// Feature row for a post of either network, in schema order.
    pub fn row(&self, post: &Post) -> Vec<FeatureValue> {
        match post.network {
            Network::Facebook => self.facebook(post).values(),
            Network::Twitter => self.twitter(post).values(),
        }
    }
}

pub fn extract_fb_features(post: &Post) -> FacebookFeatureVector {
    FeatureExtractor::default().facebook(post)
}

pub fn extract_tw_features(post: &Post) -> TwitterFeatureVector {
    FeatureExtractor::default().twitter(post)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    Numeric,
    Categorical,
    Boolean,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub name: String,
    pub kind: FeatureKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSchema {
    pub network: Network,
    pub features: Vec<FeatureSpec>,
}

impl FeatureSchema {
    fn build(network: Network, specs: &[(&str, FeatureKind)]) -> Self {
        FeatureSchema {
            network,
            features: specs
                .iter()
                .map(|(name, kind)| FeatureSpec {
                    name: name.to_string(),
                    kind: *kind,
                })
                .collect(),
        }
    }

    pub fn facebook() -> Self {
        use FeatureKind::*;
        Self::build(
            Network::Facebook,
            &[
                ("post_richness", Numeric),
                ("post_length", Numeric),
                ("post_chars", Numeric),
                ("post_rep_factor", Numeric),
                ("post_words", Numeric),
                ("post_unique_words", Numeric),
                ("isPage", Boolean),
                ("type", Categorical),
                ("num_fb_urls", Numeric),
                ("num_urls", Numeric),
                ("app", Categorical),
                ("num_likes", Numeric),
                ("pageLikes", Numeric),
                ("category", Categorical),
                ("num_hashtags", Numeric),
                ("num_unique_hashtags", Numeric),
                ("num_shares", Numeric),
                ("hashtag_rep_factor", Numeric),
                ("app_ns", Categorical),
                ("num_short_urls", Numeric),
                ("num_comments", Numeric),
            ],
        )
    }

    pub fn twitter() -> Self {
        use FeatureKind::*;
        Self::build(
            Network::Twitter,
            &[
                ("tweet_richness", Numeric),
                ("num_unique_hashtags", Numeric),
                ("num_hashtags", Numeric),
                ("tweet_chars", Numeric),
                ("num_plain_tokens", Numeric),
                ("tweet_words", Numeric),
                ("tweet_unique_words", Numeric),
                ("tweet_source", Categorical),
                ("isRetweet", Boolean),
                ("tweet_rep_factor", Numeric),
                ("num_urls", Numeric),
                ("hasMedia", Boolean),
                ("hashtag_rep_factor", Numeric),
                ("num_mentions", Numeric),
                ("num_unique_mentions", Numeric),
                ("mention_rep_factor", Numeric),
            ],
        )
    }

    pub fn for_network(network: Network) -> Self {
        match network {
            Network::Facebook => Self::facebook(),
            Network::Twitter => Self::twitter(),
        }
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn names(&self) -> Vec<&str> {
        self.features.iter().map(|f| f.name.as_str()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f.name == name)
    }

    /// Check a row's arity and value kinds.
    pub fn check_row(&self, values: &[FeatureValue]) -> Result<()> {
        if values.len() != self.features.len() {
            return Err(Error::SchemaMismatch(format!(
                "expected {} values, got {}",
                self.features.len(),
                values.len()
            )));
        }
        for (spec, v) in self.features.iter().zip(values) {
            if v.kind() != spec.kind {
                return Err(Error::SchemaMismatch(format!(
                    "feature {} expects {:?}, got {:?}",
                    spec.name,
                    spec.kind,
                    v.kind()
                )));
            }
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(path, json + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FeatureValue {
    Bool(bool),
    Num(f64),
    Cat(String),
}

impl FeatureValue {
    pub fn kind(&self) -> FeatureKind {
        match self {
            FeatureValue::Bool(_) => FeatureKind::Boolean,
            FeatureValue::Num(_) => FeatureKind::Numeric,
            FeatureValue::Cat(_) => FeatureKind::Categorical,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            FeatureValue::Num(x) => Some(*x),
            _ => None,
        }
    }

    fn csv_field(&self) -> String {
        match self {
            FeatureValue::Bool(b) => b.to_string(),
            FeatureValue::Num(x) => x.to_string(),
            FeatureValue::Cat(s) => format!("\"{}\"", s.replace('"', "\"\"")),
        }
    }

    fn parse(raw: &str, kind: FeatureKind) -> std::result::Result<Self, String> {
        match kind {
            FeatureKind::Boolean => match raw {
                "true" => Ok(FeatureValue::Bool(true)),
                "false" => Ok(FeatureValue::Bool(false)),
                _ => Err(format!("bad boolean {raw:?}")),
            },
            FeatureKind::Numeric => raw
                .parse::<f64>()
                .map(FeatureValue::Num)
                .map_err(|e| format!("bad number {raw:?}: {e}")),
            FeatureKind::Categorical => Ok(FeatureValue::Cat(raw.to_string())),
        }
    }
}

fn num<T: Into<f64>>(x: T) -> FeatureValue {
    FeatureValue::Num(x.into())
}

fn count(x: usize) -> FeatureValue {
    FeatureValue::Num(x as f64)
}

impl FacebookFeatureVector {
    pub fn values(&self) -> Vec<FeatureValue> {
        vec![
            num(self.post_richness),
            count(self.post_length),
            count(self.post_chars),
            num(self.post_rep_factor),
            count(self.post_words),
            count(self.post_unique_words),
            FeatureValue::Bool(self.is_page),
            FeatureValue::Cat(self.post_type.clone()),
            count(self.num_fb_urls),
            count(self.num_urls),
            FeatureValue::Cat(self.app.clone()),
            num(self.num_likes as f64),
            num(self.page_likes as f64),
            FeatureValue::Cat(self.category.clone()),
            count(self.num_hashtags),
            count(self.num_unique_hashtags),
            num(self.num_shares as f64),
            num(self.hashtag_rep_factor),
            FeatureValue::Cat(self.app_ns.clone()),
            count(self.num_short_urls),
            num(self.num_comments as f64),
        ]
    }
}

impl TwitterFeatureVector {
    pub fn values(&self) -> Vec<FeatureValue> {
        vec![
            num(self.tweet_richness),
            count(self.num_unique_hashtags),
            count(self.num_hashtags),
            count(self.tweet_chars),
            count(self.num_plain_tokens),
            count(self.tweet_words),
            count(self.tweet_unique_words),
            FeatureValue::Cat(self.tweet_source.as_str().to_string()),
            FeatureValue::Bool(self.is_retweet),
            num(self.tweet_rep_factor),
            count(self.num_urls),
            FeatureValue::Bool(self.has_media),
            num(self.hashtag_rep_factor),
            count(self.num_mentions),
            count(self.num_unique_mentions),
            num(self.mention_rep_factor),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    NonSpam,
    Spam,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Spam => "spam",
            Label::NonSpam => "non_spam",
        }
    }

    pub fn index(self) -> usize {
        match self {
            Label::NonSpam => 0,
            Label::Spam => 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i == 1 {
            Label::Spam
        } else {
            Label::NonSpam
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Label::Spam => Label::NonSpam,
            Label::NonSpam => Label::Spam,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledRow {
    pub values: Vec<FeatureValue>,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    pub schema: FeatureSchema,
    pub rows: Vec<LabeledRow>,
}

impl LabeledDataset {
    pub fn new(schema: FeatureSchema, rows: Vec<LabeledRow>) -> Result<Self> {
        for r in &rows {
            schema.check_row(&r.values)?;
        }
        Ok(LabeledDataset { schema, rows })
    }

    pub fn network(&self) -> Network {
        self.schema.network
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// (non_spam, spam) row counts.
    pub fn class_counts(&self) -> [usize; 2] {
        let mut c = [0; 2];
        for r in &self.rows {
            c[r.label.index()] += 1;
        }
        c
    }

    /// Fails unless both classes are present.
    pub fn require_both_classes(&self) -> Result<()> {
        match self.class_counts() {
            [0, 0] => Err(Error::EmptyInput("dataset has no rows")),
            [0, _] => Err(Error::SingleClass("spam")),
            [_, 0] => Err(Error::SingleClass("non_spam")),
            _ => Ok(()),
        }
    }

    pub fn subset(&self, indices: &[usize]) -> LabeledDataset {
        LabeledDataset {
            schema: self.schema.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    /// Drop the named features, keeping the remaining columns in order.
    pub fn drop_features(&self, names: &[&str]) -> Result<LabeledDataset> {
        for n in names {
            if self.schema.index_of(n).is_none() {
                return Err(Error::MissingFeature(n.to_string()));
            }
        }
        let keep: Vec<usize> = (0..self.schema.len())
            .filter(|&i| !names.contains(&self.schema.features[i].name.as_str()))
            .collect();
        Ok(LabeledDataset {
            schema: FeatureSchema {
                network: self.schema.network,
                features: keep.iter().map(|&i| self.schema.features[i].clone()).collect(),
            },
            rows: self
                .rows
                .iter()
                .map(|r| LabeledRow {
                    values: keep.iter().map(|&i| r.values[i].clone()).collect(),
                    label: r.label,
                })
                .collect(),
        })
    }

    /// Header of feature names plus `label`; categorical values quoted.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let io = |e| Error::io("<writer>", e);
        let mut header: Vec<&str> = self.schema.names();
        header.push("label");
        writeln!(out, "{}", header.join(",")).map_err(io)?;
        for r in &self.rows {
            let mut fields: Vec<String> = r.values.iter().map(FeatureValue::csv_field).collect();
            fields.push(r.label.as_str().to_string());
            writeln!(out, "{}", fields.join(",")).map_err(io)?;
        }
        Ok(())
    }

    pub fn read_csv(text: &str, schema: FeatureSchema) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let headers = reader.headers()?.clone();
        let mut expected = schema.names();
        expected.push("label");
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(Error::SchemaMismatch("CSV header does not match schema".into()));
        }
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            let bad = |reason: String| Error::MalformedRecord { line, reason };
            let values = schema
                .features
                .iter()
                .zip(record.iter())
                .map(|(spec, raw)| FeatureValue::parse(raw, spec.kind).map_err(bad))
                .collect::<Result<Vec<_>>>()?;
            let label = match &record[schema.len()] {
                "spam" => Label::Spam,
                "non_spam" => Label::NonSpam,
                other => return Err(bad(format!("unknown class {other:?}"))),
            };
            rows.push(LabeledRow { values, label });
        }
        LabeledDataset::new(schema, rows)
    }

    /// Write `<path>` (CSV) and `<path>.schema.json`.
    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = std::io::BufWriter::new(file);
        self.write_csv(&mut w)?;
        w.flush().map_err(|e| Error::io(path, e))?;
        self.schema.save(&schema_sidecar(path))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let schema = FeatureSchema::load(&schema_sidecar(path))?;
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::read_csv(&text, schema)
    }
}

pub fn schema_sidecar(path: &Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".schema.json");
    s.into()
}

/// Rows for posts by labeled users: spammers are spam; legitimate and
/// verified users are non-spam; other labels and unlabeled users are
/// skipped.
pub fn build_dataset(
    corpus: &Corpus,
    labels: &LabelSet,
    extractor: &FeatureExtractor,
    exec: Execution,
) -> Result<LabeledDataset> {
    let networks: BTreeSet<Network> = corpus.posts().iter().map(|p| p.network).collect();
    if networks.len() > 1 {
        return Err(Error::InvalidParameter(
            "build_dataset expects a single-network corpus".into(),
        ));
    }
    let Some(&network) = networks.iter().next() else {
        return Err(Error::NoLabeledUsers);
    };
    let labelled: Vec<(&Post, Label)> = corpus
        .posts()
        .iter()
        .filter_map(|p| {
            let label = match labels.get(p.network, &p.user_id)? {
                UserLabelKind::Spammer => Label::Spam,
                UserLabelKind::Legitimate | UserLabelKind::Verified => Label::NonSpam,
                _ => return None,
            };
            Some((p, label))
        })
        .collect();
    if labelled.is_empty() {
        return Err(Error::NoLabeledUsers);
    }
    let rows = exec.map(&labelled, |(p, label)| LabeledRow {
        values: extractor.row(p),
        label: *label,
    });
    let ds = LabeledDataset {
        schema: FeatureSchema::for_network(network),
        rows,
    };
    ds.require_both_classes()?;
    Ok(ds)
}

/// Remove the six Facebook post-level stylometric features.
pub fn deplete_features(dataset: &LabeledDataset) -> Result<LabeledDataset> {
    if dataset.network() != Network::Facebook {
        return Err(Error::WrongNetwork {
            expected: Network::Facebook,
            actual: dataset.network(),
        });
    }
    dataset.drop_features(&POST_LEVEL_FEATURES)
}
