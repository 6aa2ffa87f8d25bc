//! Deterministic two-network corpus generator with planted ground truth.
//!
//! Everything is drawn from one ChaCha stream seeded by `SynthConfig::seed`,
//! so a config fully determines the output. Planted facts:
//!
//! * spammers (labelled `spammer`, every other user `legitimate`);
//! * vocabulary: pseudo-words with pairwise-distinct Porter stems, split so
//!   that exactly `round(p · |F|)` Facebook words also occur on Twitter,
//!   which makes the Facebook→Twitter directional stem overlap ≈ `p`;
//! * same-time URL pairs: one Facebook and one Twitter post sharing an
//!   otherwise unused URL and timestamp. A `cross_poster_fraction` share
//!   of them come from twin accounts with identical handle and name; the
//!   rest pair unrelated accounts whose identities stay below the default
//!   linking threshold.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::Path;

use chrono::{DateTime, Duration, TimeZone, Utc};
use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{timestamp, Corpus, Event, LabelSet, Network, Post, PostType, UserLabel, UserLabelKind};
use crate::crosspost::{identity_scores, AccountIdentity, DEFAULT_LINK_THRESHOLD};
use crate::error::{Error, Result};
use crate::textproc::{porter_stem, UrlResolver};

/// Hashtag carried by every generated post; the generated event's keyword.
pub const EVENT_TAG: &str = "synthevent";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpamStyle {
    /// Share of a spam post's words that repeat an earlier word.
    pub repetition: f64,
    /// Spam word count relative to a legitimate post.
    pub length_multiplier: f64,
    /// Mean URLs per spam post (at least 1).
    pub url_rate: f64,
    /// Share of spammers who write legitimate-looking text and rely on
    /// several shortened links instead of repetition.
    pub linker_fraction: f64,
    /// Share of legitimate users that are automated publishers: pages and
    /// news accounts posting links through scheduling clients.
    pub publisher_fraction: f64,
    /// Share of legitimate posts as long as spam, without the repetition.
    pub long_legit_fraction: f64,
}

impl Default for SpamStyle {
    fn default() -> Self {
        SpamStyle {
            repetition: 0.85,
            length_multiplier: 3.0,
            url_rate: 2.0,
            linker_fraction: 0.15,
            publisher_fraction: 0.1,
            long_legit_fraction: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub seed: u64,
    pub fb_users: usize,
    pub tw_users: usize,
    pub fb_posts: usize,
    pub tw_posts: usize,
    pub spammer_fraction: f64,
    /// Share of same-time URL pairs posted by twin accounts.
    pub cross_poster_fraction: f64,
    /// Target Facebook→Twitter directional stem overlap, percent.
    pub planted_vocab_overlap: f64,
    pub fb_vocab: usize,
    pub tw_vocab: usize,
    pub spam_style: SpamStyle,
    #[serde(with = "timestamp")]
    pub window_start: DateTime<Utc>,
    pub window_hours: u32,
    pub same_time_pairs: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 42,
            fb_users: 800,
            tw_users: 800,
            fb_posts: 10_000,
            tw_posts: 10_000,
            spammer_fraction: 0.1,
            cross_poster_fraction: 0.7,
            planted_vocab_overlap: 30.0,
            fb_vocab: 3000,
            tw_vocab: 2500,
            spam_style: SpamStyle::default(),
            window_start: Utc.with_ymd_and_hms(2013, 4, 15, 0, 0, 0).unwrap(),
            window_hours: 240,
            same_time_pairs: 500,
        }
    }
}

impl SynthConfig {
    /// Number of vocabulary words shared between the networks.
    pub fn shared_vocab(&self) -> usize {
        (self.planted_vocab_overlap / 100.0 * self.fb_vocab as f64).round() as usize
    }

    pub fn genuine_pairs(&self) -> usize {
        (self.cross_poster_fraction * self.same_time_pairs as f64).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InfeasibleConfig(m));
        for (name, v) in [
            ("spammer_fraction", self.spammer_fraction),
            ("cross_poster_fraction", self.cross_poster_fraction),
            ("spam_style.repetition", self.spam_style.repetition),
            ("spam_style.linker_fraction", self.spam_style.linker_fraction),
            ("spam_style.publisher_fraction", self.spam_style.publisher_fraction),
            ("spam_style.long_legit_fraction", self.spam_style.long_legit_fraction),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name} must lie in [0, 1], got {v}"));
            }
        }
        if !(0.0..=100.0).contains(&self.planted_vocab_overlap) {
            return bad("planted_vocab_overlap must lie in [0, 100]".into());
        }
        if [self.spam_style.length_multiplier, self.spam_style.url_rate].iter().any(|v| v.is_nan() || *v < 1.0) {
            return bad("spam length_multiplier and url_rate must be at least 1".into());
        }
        if self.fb_vocab == 0 || self.tw_vocab == 0 {
            return bad("vocabularies must be non-empty".into());
        }
        if self.shared_vocab() > self.tw_vocab {
            return bad(format!(
                "overlap target needs {} shared words but the Twitter vocabulary has {}",
                self.shared_vocab(),
                self.tw_vocab
            ));
        }
        if self.fb_users == 0 || self.tw_users == 0 {
            return bad("each network needs at least one user".into());
        }
        if self.window_hours == 0 {
            return bad("window_hours must be at least 1".into());
        }
        if self.same_time_pairs > self.fb_posts.min(self.tw_posts) {
            return bad("same_time_pairs exceeds the post budget".into());
        }
        if self.same_time_pairs > 0 {
            if self.shared_vocab() == 0 {
                return bad("same-time posts draw from the shared vocabulary, which is empty".into());
            }
            let spam = |n: usize| (self.spammer_fraction * n as f64).round() as usize;
            if spam(self.fb_users) >= self.fb_users || spam(self.tw_users) >= self.tw_users {
                return bad("same-time pairs need a legitimate user on each network".into());
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedPair {
    pub url: String,
    pub fb_post_id: String,
    pub tw_post_id: String,
    pub fb_user_id: String,
    pub tw_user_id: String,
    /// Posted by twin accounts (identical handle and name).
    pub genuine: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub fb_spammers: BTreeSet<String>,
    pub tw_spammers: BTreeSet<String>,
    pub fb_vocab: usize,
    pub tw_vocab: usize,
    pub shared_vocab: usize,
    /// 100 · shared / fb_vocab.
    pub planted_overlap_pct: f64,
    pub pairs: Vec<PlantedPair>,
}

#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub config: SynthConfig,
    pub fb: Corpus,
    pub tw: Corpus,
    pub labels: LabelSet,
    pub events: Vec<Event>,
    /// Short URL → expanded URL, sorted by short URL.
    pub url_map: Vec<(String, String)>,
    pub truth: GroundTruth,
}

impl SynthOutput {
    pub fn resolver(&self) -> UrlResolver {
        UrlResolver::from_pairs(self.url_map.iter().cloned())
    }

    /// Write fb.jsonl, tw.jsonl, labels.csv, url_map.tsv, events.json,
    /// ground_truth.json and config.json into `dir`.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        self.fb.save(&dir.join("fb.jsonl"))?;
        self.tw.save(&dir.join("tw.jsonl"))?;
        let labels_path = dir.join("labels.csv");
        let f = std::fs::File::create(&labels_path).map_err(|e| Error::io(&labels_path, e))?;
        self.labels.write_csv(std::io::BufWriter::new(f))?;
        let map: String = self.url_map.iter().map(|(s, l)| format!("{s}\t{l}\n")).collect();
        write(&dir.join("url_map.tsv"), map)?;
        write(&dir.join("events.json"), serde_json::to_string_pretty(&self.events)? + "\n")?;
        write(&dir.join("ground_truth.json"), serde_json::to_string_pretty(&self.truth)? + "\n")?;
        write(&dir.join("config.json"), serde_json::to_string_pretty(&self.config)? + "\n")?;
        Ok(())
    }
}

fn write(path: &Path, text: String) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

const CONSONANTS: &[u8] = b"bcdfghjklmnprstvz";
const VOWELS: &[u8] = b"aeiou";

fn pseudo_word(rng: &mut ChaCha8Rng, syllables: usize) -> String {
    let mut w = String::new();
    for _ in 0..syllables {
        w.push(*CONSONANTS.choose(rng).unwrap() as char);
        w.push(*VOWELS.choose(rng).unwrap() as char);
        if rng.gen_bool(0.3) {
            w.push(*CONSONANTS.choose(rng).unwrap() as char);
        }
    }
    w
}

/// `n` pseudo-words with pairwise-distinct Porter stems.
fn vocabulary(rng: &mut ChaCha8Rng, n: usize) -> Vec<String> {
    let mut stems = HashSet::new();
    let mut words = Vec::with_capacity(n);
    while words.len() < n {
        let syllables = rng.gen_range(2..=4);
        let w = pseudo_word(rng, syllables);
        if w == EVENT_TAG {
            continue;
        }
        if stems.insert(porter_stem(&w)) {
            words.push(w);
        }
    }
    words
}

fn handle(rng: &mut ChaCha8Rng) -> String {
    let len = rng.gen_range(8..=12);
    (0..len)
        .map(|i| {
            if i > 0 && rng.gen_bool(0.2) {
                char::from(b'0' + rng.gen_range(0..10))
            } else {
                char::from(b'a' + rng.gen_range(0..26))
            }
        })
        .collect()
}

fn display_name(rng: &mut ChaCha8Rng) -> String {
    let cap = |w: String| {
        let mut c = w.chars();
        let first = c.next().unwrap().to_ascii_uppercase();
        std::iter::once(first).chain(c).collect::<String>()
    };
    let a = pseudo_word(rng, 2);
    let b = pseudo_word(rng, 3);
    format!("{} {}", cap(a), cap(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Archetype {
    Person,
    Publisher,
    Repeater,
    Linker,
}

#[derive(Debug, Clone)]
struct User {
    id: String,
    handle: String,
    name: String,
    spammer: bool,
    archetype: Archetype,
    is_page: bool,
    page_likes: u64,
    category: String,
}

const PAGE_CATEGORIES: &[&str] = &["News/media website", "Community", "Local business", "Public figure", "Product/service"];
const NEWS_DOMAINS: &[&str] = &[
    "dailynews.example",
    "citytimes.example",
    "worldwire.example",
    "localherald.example",
    "sportsdesk.example",
];
const SOCIAL_DOMAINS: &[&str] = &["youtube.com", "facebook.com", "instagram.com", "twitter.com"];
const SPAM_DOMAINS: &[&str] = &["cheap-deals.example", "win-prize.example", "free-followers.example"];
const SHORTENERS: &[&str] = &["bit.ly", "goo.gl", "ow.ly", "tinyurl.com"];
const FB_LEGIT_APPS: &[(&str, &str)] = &[
    ("Facebook for iPhone", "fbiphone"),
    ("Facebook for Android", "fbandroid"),
    ("Instagram", "instapp"),
];
const FB_SPAM_APPS: &[(&str, &str)] = &[
    ("dlvr.it", "dlvrit"),
    ("HootSuite", "hootsuite"),
    ("Facebook for Android", "fbandroid"),
    ("IFTTT", "ifttt"),
];
const TW_LEGIT_APPS: &[&str] = &["Twitter for iPhone", "Twitter for Android", "Twitter Web Client", "TweetDeck"];
const TW_SPAM_APPS: &[&str] = &["twittbot.net", "dlvr.it", "IFTTT", "Twitter Web Client"];

struct Gen<'a> {
    cfg: &'a SynthConfig,
    rng: ChaCha8Rng,
    url_map: BTreeMap<String, String>,
    url_counter: usize,
    topic_tags: Vec<String>,
    spam_tags: Vec<String>,
}

/// A post before ids are assigned.
struct Draft {
    post: Post,
    pair: Option<usize>,
    spam: bool,
}

impl Gen<'_> {
    fn time(&mut self) -> DateTime<Utc> {
        let secs = i64::from(self.cfg.window_hours) * 3600;
        self.cfg.window_start + Duration::seconds(self.rng.gen_range(0..secs))
    }

    fn expanded_url(&mut self, spam: bool) -> String {
        self.url_counter += 1;
        let n = self.url_counter;
        if spam {
            format!("http://{}/offer/{n:06}", SPAM_DOMAINS.choose(&mut self.rng).unwrap())
        } else if self.rng.gen_bool(0.3) {
            let d = SOCIAL_DOMAINS.choose(&mut self.rng).unwrap();
            format!("https://www.{d}/p/{n:06}")
        } else {
            format!("http://{}/story/{n:06}", NEWS_DOMAINS.choose(&mut self.rng).unwrap())
        }
    }

    fn short_url(&mut self, host: &str, target: String) -> String {
        self.url_counter += 1;
        let short = format!("https://{host}/s{:07}", self.url_counter);
        self.url_map.insert(short.clone(), target);
        short
    }

    /// Facebook URL: the expanded form, or a mapped short link.
    fn fb_url(&mut self, spam: bool, short_p: f64) -> String {
        let long = self.expanded_url(spam);
        if self.rng.gen_bool(short_p) {
            let host = *SHORTENERS.choose(&mut self.rng).unwrap();
            self.short_url(host, long)
        } else {
            long
        }
    }

    /// Twitter URL: always t.co, possibly wrapping another shortener.
    fn tw_url(&mut self, spam: bool, short_p: f64) -> String {
        let mut target = self.expanded_url(spam);
        if self.rng.gen_bool(short_p) {
            let host = *SHORTENERS.choose(&mut self.rng).unwrap();
            target = self.short_url(host, target);
        }
        self.short_url("t.co", target)
    }

    fn draw_words(&mut self, vocab: &[String], n: usize, used: &mut [bool]) -> Vec<String> {
        (0..n)
            .map(|_| {
                let i = self.rng.gen_range(0..vocab.len());
                used[i] = true;
                vocab[i].clone()
            })
            .collect()
    }

    /// `n` words over a pool of about `n · (1 − repetition)` distinct words.
    fn repetitive_words(&mut self, vocab: &[String], n: usize, used: &mut [bool]) -> Vec<String> {
        let distinct = ((n as f64 * (1.0 - self.cfg.spam_style.repetition)).round() as usize).clamp(2, n.max(2));
        let pool = self.draw_words(vocab, distinct, used);
        let mut words: Vec<String> = pool.clone();
        while words.len() < n {
            words.push(pool.choose(&mut self.rng).unwrap().clone());
        }
        words.truncate(n);
        words
    }

    fn legit_hashtags(&mut self) -> Vec<String> {
        let mut tags = vec![format!("#{EVENT_TAG}")];
        for _ in 0..self.rng.gen_range(0..=2) {
            tags.push(format!("#{}", self.topic_tags.choose(&mut self.rng).unwrap()));
        }
        if self.rng.gen_bool(0.05) {
            tags.push(tags[tags.len() - 1].clone());
        }
        tags
    }

    fn spam_hashtags(&mut self) -> Vec<String> {
        let mut tags = vec![format!("#{EVENT_TAG}")];
        let n = self.rng.gen_range(2..=5);
        if self.rng.gen_bool(0.6) {
            let t = self.spam_tags.choose(&mut self.rng).unwrap().clone();
            tags.extend(std::iter::repeat_n(format!("#{t}"), n));
        } else {
            let picks: Vec<String> = self.spam_tags.choose_multiple(&mut self.rng, n).cloned().collect();
            tags.extend(picks.into_iter().map(|t| format!("#{t}")));
        }
        tags
    }

    fn spam_url_count(&mut self) -> usize {
        let extra = (self.cfg.spam_style.url_rate - 1.0).max(0.0);
        let trials = 4u32;
        let p = (extra / f64::from(trials)).min(1.0);
        1 + (0..trials).filter(|_| self.rng.gen_bool(p)).count()
    }

    fn assemble(&mut self, mut tokens: Vec<String>) -> String {
        tokens.shuffle(&mut self.rng);
        tokens.join(" ")
    }

    fn legit_len(&mut self, network: Network) -> usize {
        match network {
            Network::Facebook => self.rng.gen_range(6..=24),
            Network::Twitter => self.rng.gen_range(4..=14),
        }
    }

    fn spam_len(&mut self, network: Network) -> usize {
        let base = self.legit_len(network) as f64;
        (base * self.cfg.spam_style.length_multiplier).round() as usize
    }

    fn spam_words(&mut self, network: Network, vocab: &[String], used: &mut [bool]) -> Vec<String> {
        let n = self.spam_len(network);
        self.repetitive_words(vocab, n, used)
    }

    fn distinct_spam_hashtags(&mut self) -> Vec<String> {
        let n = self.rng.gen_range(1..=3);
        let mut tags = vec![format!("#{EVENT_TAG}")];
        let picks: Vec<String> = self.spam_tags.choose_multiple(&mut self.rng, n).cloned().collect();
        tags.extend(picks.into_iter().map(|t| format!("#{t}")));
        tags
    }

    /// Words, hashtags, URL count, short-link probability and whether the
    /// URLs point at spam domains.
    fn body(&mut self, user: &User, network: Network, vocab: &[String], used: &mut [bool]) -> (Vec<String>, usize, f64, bool) {
        match user.archetype {
            Archetype::Repeater => {
                let mut t = self.spam_words(network, vocab, used);
                t.extend(self.spam_hashtags());
                let k = self.spam_url_count();
                (t, k, 0.7, true)
            }
            Archetype::Linker => {
                let n = self.legit_len(network);
                let mut t = self.draw_words(vocab, n, used);
                t.extend(self.distinct_spam_hashtags());
                (t, self.rng.gen_range(2..=4), 0.8, true)
            }
            Archetype::Publisher => {
                let mut t = self.legit_words(network, vocab, used);
                t.extend(self.legit_hashtags());
                (t, self.rng.gen_range(1..=2), 0.5, false)
            }
            Archetype::Person => {
                let mut t = self.legit_words(network, vocab, used);
                t.extend(self.legit_hashtags());
                let p = if network == Network::Facebook { 0.35 } else { 0.3 };
                (t, usize::from(self.rng.gen_bool(p)), 0.1, false)
            }
        }
    }

    fn legit_words(&mut self, network: Network, vocab: &[String], used: &mut [bool]) -> Vec<String> {
        let n = if self.rng.gen_bool(self.cfg.spam_style.long_legit_fraction) {
            self.spam_len(network)
        } else {
            self.legit_len(network)
        };
        self.draw_words(vocab, n, used)
    }

    /// Most legitimate posts draw no reaction at all.
    fn engagement(&mut self, max: u64) -> u64 {
        if self.rng.gen_bool(0.5) {
            0
        } else {
            self.rng.gen_range(0..=max)
        }
    }

    fn fb_post(&mut self, user: &User, spam: bool, vocab: &[String], used: &mut [bool]) -> Post {
        let mut p = Post::new(Network::Facebook, "", user.id.clone(), self.time(), String::new());
        p.user_handle = Some(user.handle.clone());
        p.user_name = Some(user.name.clone());
        p.is_page = user.is_page;
        if user.is_page {
            p.page_likes = Some(user.page_likes);
            p.page_category = Some(user.category.clone());
        }
        let (mut tokens, n_urls, short_p, spam_urls) = self.body(user, Network::Facebook, vocab, used);
        for _ in 0..n_urls {
            let u = self.fb_url(spam_urls, short_p);
            tokens.push(u);
        }
        p.text = self.assemble(tokens);
        p.post_type = if n_urls > 0 {
            PostType::Link
        } else if self.rng.gen_bool(0.2) {
            PostType::Photo
        } else {
            PostType::Status
        };
        let automated = user.archetype != Archetype::Person;
        let apps = if automated { FB_SPAM_APPS } else { FB_LEGIT_APPS };
        if automated || self.rng.gen_bool(0.6) {
            let (app, ns) = *apps.choose(&mut self.rng).unwrap();
            p.app = Some(app.into());
            p.app_namespace = Some(ns.into());
        }
        if spam {
            p.likes = self.rng.gen_range(0..=6);
            p.comments = self.rng.gen_range(0..=2);
            p.shares = self.rng.gen_range(0..=3);
        } else if user.archetype == Archetype::Publisher {
            p.likes = self.engagement(120);
            p.comments = self.engagement(20);
            p.shares = self.engagement(30);
        } else {
            p.likes = self.engagement(40);
            p.comments = self.engagement(10);
            p.shares = self.engagement(8);
        }
        p
    }

    fn tw_post(&mut self, user: &User, spam: bool, vocab: &[String], used: &mut [bool], handles: &[String]) -> Post {
        let mut p = Post::new(Network::Twitter, "", user.id.clone(), self.time(), String::new());
        p.user_handle = Some(user.handle.clone());
        p.user_name = Some(user.name.clone());
        let (mut tokens, n_urls, short_p, spam_urls) = self.body(user, Network::Twitter, vocab, used);
        let n_mentions = match user.archetype {
            Archetype::Repeater => self.rng.gen_range(1..=4),
            Archetype::Linker => self.rng.gen_range(0..=2),
            Archetype::Publisher => usize::from(self.rng.gen_bool(0.1)),
            Archetype::Person => self.rng.gen_range(0..=2),
        };
        for _ in 0..n_urls {
            let u = self.tw_url(spam_urls, short_p);
            tokens.push(u);
        }
        let mentioned: Vec<String> = if user.archetype == Archetype::Repeater && n_mentions > 1 && self.rng.gen_bool(0.5) {
            // one target, mentioned repeatedly
            vec![handles.choose(&mut self.rng).unwrap().clone(); n_mentions]
        } else {
            (0..n_mentions).map(|_| handles.choose(&mut self.rng).unwrap().clone()).collect()
        };
        tokens.extend(mentioned.iter().map(|h| format!("@{h}")));
        let distinct: BTreeSet<String> = mentioned.into_iter().collect();
        p.mentions = distinct.into_iter().collect();
        p.text = self.assemble(tokens);
        p.is_retweet = self.rng.gen_bool(if spam { 0.05 } else { 0.25 });
        p.has_media = self.rng.gen_bool(if spam { 0.05 } else { 0.2 });
        let apps = if user.archetype == Archetype::Person { TW_LEGIT_APPS } else { TW_SPAM_APPS };
        p.app = Some(apps.choose(&mut self.rng).unwrap().to_string());
        p
    }
}

fn make_users(rng: &mut ChaCha8Rng, network: Network, n: usize, cfg: &SynthConfig) -> Vec<User> {
    let n_spam = (cfg.spammer_fraction * n as f64).round() as usize;
    let mut spam_flags: Vec<bool> = (0..n).map(|i| i < n_spam).collect();
    spam_flags.shuffle(rng);
    let prefix = match network {
        Network::Facebook => "fbu",
        Network::Twitter => "twu",
    };
    let mut handles = HashSet::new();
    spam_flags
        .into_iter()
        .enumerate()
        .map(|(i, spammer)| {
            let h = loop {
                let h = handle(rng);
                if handles.insert(h.clone()) {
                    break h;
                }
            };
            let archetype = match (spammer, rng.gen::<f64>()) {
                (true, x) if x < cfg.spam_style.linker_fraction => Archetype::Linker,
                (true, _) => Archetype::Repeater,
                (false, x) if x < cfg.spam_style.publisher_fraction => Archetype::Publisher,
                (false, _) => Archetype::Person,
            };
            let page_p = match archetype {
                Archetype::Publisher => 1.0,
                Archetype::Person => 0.05,
                _ => 0.5,
            };
            let is_page = network == Network::Facebook && rng.gen_bool(page_p);
            User {
                id: format!("{prefix}{i:05}"),
                handle: h,
                name: display_name(rng),
                spammer,
                archetype,
                is_page,
                page_likes: if spammer { rng.gen_range(0..=2000) } else { rng.gen_range(100..=50_000) },
                category: PAGE_CATEGORIES.choose(rng).unwrap().to_string(),
            }
        })
        .collect()
}

fn identity(u: &User) -> AccountIdentity {
    AccountIdentity::new(Some(u.handle.as_str()), Some(u.name.as_str()))
}

/// Generate both corpora and the planted ground truth.
pub fn generate(cfg: &SynthConfig) -> Result<SynthOutput> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let shared = cfg.shared_vocab();
    let pool = vocabulary(&mut rng, cfg.fb_vocab + cfg.tw_vocab - shared + 60);
    let (words, tags) = pool.split_at(cfg.fb_vocab + cfg.tw_vocab - shared);
    let shared_words = &words[..shared];
    let fb_vocab: Vec<String> = words[..cfg.fb_vocab].to_vec();
    let tw_vocab: Vec<String> = shared_words.iter().chain(&words[cfg.fb_vocab..]).cloned().collect();
    let topic_tags = tags[..40].to_vec();
    let spam_tags = tags[40..].to_vec();

    let fb_users = make_users(&mut rng, Network::Facebook, cfg.fb_users, cfg);
    let mut tw_users = make_users(&mut rng, Network::Twitter, cfg.tw_users, cfg);

    // twin accounts: a Twitter user takes over a Facebook user's identity
    let legit_fb: Vec<usize> = (0..fb_users.len()).filter(|&i| !fb_users[i].spammer).collect();
    let legit_tw: Vec<usize> = (0..tw_users.len()).filter(|&i| !tw_users[i].spammer).collect();
    let n_genuine = cfg.genuine_pairs();
    let n_twins = n_genuine.div_ceil(3).min(legit_fb.len()).min(legit_tw.len());
    let twin_fb: Vec<usize> = legit_fb.choose_multiple(&mut rng, n_twins).copied().collect();
    let twin_tw: Vec<usize> = legit_tw.choose_multiple(&mut rng, n_twins).copied().collect();
    for (&f, &t) in twin_fb.iter().zip(&twin_tw) {
        tw_users[t].handle = fb_users[f].handle.clone();
        tw_users[t].name = fb_users[f].name.clone();
    }
    let twin_set: HashSet<(usize, usize)> = twin_fb.iter().copied().zip(twin_tw.iter().copied()).collect();
    let tw_handles: Vec<String> = tw_users.iter().map(|u| u.handle.clone()).collect();

    let mut g = Gen {
        cfg,
        rng,
        url_map: BTreeMap::new(),
        url_counter: 0,
        topic_tags,
        spam_tags,
    };
    let mut fb_used = vec![false; fb_vocab.len()];
    let mut tw_used = vec![false; tw_vocab.len()];
    let mut shared_used_fb = vec![false; shared];
    let mut shared_used_tw = vec![false; shared];
    let mut fb_drafts = Vec::new();
    let mut tw_drafts = Vec::new();
    let mut pair_urls = Vec::with_capacity(cfg.same_time_pairs);

    for k in 0..cfg.same_time_pairs {
        let genuine = k < n_genuine && n_twins > 0;
        let (fi, ti) = if genuine {
            (twin_fb[k % n_twins], twin_tw[k % n_twins])
        } else {
            let mut found = None;
            for _ in 0..1000 {
                let f = *legit_fb.choose(&mut g.rng).unwrap();
                let t = *legit_tw.choose(&mut g.rng).unwrap();
                if twin_set.contains(&(f, t)) {
                    continue;
                }
                let linked = identity_scores(&identity(&tw_users[t]), &identity(&fb_users[f]))
                    .is_ok_and(|q| q.is_linked(DEFAULT_LINK_THRESHOLD));
                if !linked {
                    found = Some((f, t));
                    break;
                }
            }
            found.ok_or_else(|| Error::InfeasibleConfig("could not find an unrelated account pair".into()))?
        };
        let time = g.time();
        let long = g.expanded_url(false);
        let tw_link = g.short_url("t.co", long.clone());
        pair_urls.push(long.clone());
        let (app_fb, app_tw) = if genuine && g.rng.gen_bool(0.5) {
            ("HootSuite", "HootSuite")
        } else {
            ("Twitter", "Twitter for iPhone")
        };

        let n = g.legit_len(Network::Facebook);
        let mut tokens = g.draw_words(shared_words, n, &mut shared_used_fb);
        tokens.push(format!("#{EVENT_TAG}"));
        tokens.push(long.clone());
        let mut fp = Post::new(Network::Facebook, "", fb_users[fi].id.clone(), time, g.assemble(tokens));
        fp.user_handle = Some(fb_users[fi].handle.clone());
        fp.user_name = Some(fb_users[fi].name.clone());
        fp.post_type = PostType::Link;
        fp.app = Some(app_fb.into());
        fp.likes = g.rng.gen_range(0..=40);
        if fb_users[fi].is_page {
            fp.is_page = true;
            fp.page_likes = Some(fb_users[fi].page_likes);
            fp.page_category = Some(fb_users[fi].category.clone());
        }

        let n = g.legit_len(Network::Twitter);
        let mut tokens = g.draw_words(shared_words, n, &mut shared_used_tw);
        tokens.push(format!("#{EVENT_TAG}"));
        tokens.push(tw_link);
        let mut tp = Post::new(Network::Twitter, "", tw_users[ti].id.clone(), time, g.assemble(tokens));
        tp.user_handle = Some(tw_users[ti].handle.clone());
        tp.user_name = Some(tw_users[ti].name.clone());
        tp.app = Some(app_tw.into());

        fb_drafts.push(Draft { post: fp, pair: Some(k), spam: false });
        tw_drafts.push(Draft { post: tp, pair: Some(k), spam: false });
    }
    // shared words sit at the front of both vocabularies
    for (i, u) in shared_used_fb.iter().enumerate() {
        fb_used[i] |= *u;
    }
    for (i, u) in shared_used_tw.iter().enumerate() {
        tw_used[i] |= *u;
    }

    // spammers post three times as often as legitimate users
    let weights = |users: &[User]| {
        WeightedIndex::new(users.iter().map(|u| if u.spammer { 3u32 } else { 1 })).expect("at least one user")
    };
    let fb_w = weights(&fb_users);
    for _ in cfg.same_time_pairs..cfg.fb_posts {
        let u = &fb_users[fb_w.sample(&mut g.rng)];
        let post = g.fb_post(u, u.spammer, &fb_vocab, &mut fb_used);
        fb_drafts.push(Draft { post, pair: None, spam: u.spammer });
    }
    let tw_w = weights(&tw_users);
    for _ in cfg.same_time_pairs..cfg.tw_posts {
        let u = &tw_users[tw_w.sample(&mut g.rng)];
        let post = g.tw_post(u, u.spammer, &tw_vocab, &mut tw_used, &tw_handles);
        tw_drafts.push(Draft { post, pair: None, spam: u.spammer });
    }

    top_up(&mut fb_drafts, &fb_vocab, &fb_used);
    top_up(&mut tw_drafts, &tw_vocab, &tw_used);

    let fb_ids = finalize(&mut fb_drafts, "fb");
    let tw_ids = finalize(&mut tw_drafts, "tw");

    let mut pairs: Vec<PlantedPair> = (0..cfg.same_time_pairs)
        .map(|k| {
            let (f, t) = (&fb_drafts[fb_ids[k]].post, &tw_drafts[tw_ids[k]].post);
            PlantedPair {
                url: pair_urls[k].clone(),
                fb_post_id: f.id.clone(),
                tw_post_id: t.id.clone(),
                fb_user_id: f.user_id.clone(),
                tw_user_id: t.user_id.clone(),
                genuine: k < n_genuine && n_twins > 0,
            }
        })
        .collect();
    pairs.sort_by(|a, b| (&a.url, &a.fb_post_id).cmp(&(&b.url, &b.fb_post_id)));

    let mut labels = LabelSet::new();
    for (network, users) in [(Network::Facebook, &fb_users), (Network::Twitter, &tw_users)] {
        for u in users {
            labels
                .insert(UserLabel {
                    network,
                    user_id: u.id.clone(),
                    label: if u.spammer { UserLabelKind::Spammer } else { UserLabelKind::Legitimate },
                })
                .expect("user ids are unique per network");
        }
    }
    let spammers = |users: &[User]| users.iter().filter(|u| u.spammer).map(|u| u.id.clone()).collect();
    let truth = GroundTruth {
        fb_spammers: spammers(&fb_users),
        tw_spammers: spammers(&tw_users),
        fb_vocab: cfg.fb_vocab,
        tw_vocab: cfg.tw_vocab,
        shared_vocab: shared,
        planted_overlap_pct: 100.0 * shared as f64 / cfg.fb_vocab as f64,
        pairs,
    };
    let window_end = cfg.window_start + Duration::hours(i64::from(cfg.window_hours));
    let events = vec![Event {
        name: "synthetic".into(),
        keywords: vec![EVENT_TAG.into()],
        window_start: cfg.window_start,
        window_end,
        occurrence_time: Some(cfg.window_start),
    }];
    let fb = Corpus::new(fb_drafts.into_iter().map(|d| d.post).collect(), vec![])?;
    let tw = Corpus::new(tw_drafts.into_iter().map(|d| d.post).collect(), vec![])?;
    Ok(SynthOutput {
        config: cfg.clone(),
        fb,
        tw,
        labels,
        events,
        url_map: g.url_map.into_iter().collect(),
        truth,
    })
}

/// Append every never-drawn vocabulary word to a legitimate, unpaired post
/// so each planted word is actually observable.
fn top_up(drafts: &mut [Draft], vocab: &[String], used: &[bool]) {
    let mut targets: Vec<usize> = (0..drafts.len()).filter(|&i| drafts[i].pair.is_none() && !drafts[i].spam).collect();
    if targets.is_empty() {
        targets = (0..drafts.len()).filter(|&i| drafts[i].pair.is_none()).collect();
    }
    if targets.is_empty() {
        targets = (0..drafts.len()).collect();
    }
    if targets.is_empty() {
        return;
    }
    for (n, w) in vocab.iter().zip(used).filter(|(_, &u)| !u).map(|(w, _)| w).enumerate() {
        let text = &mut drafts[targets[n % targets.len()]].post.text;
        text.push(' ');
        text.push_str(w);
    }
}

/// Sort by time (creation order breaks ties), assign ids, and return the
/// final index of each pair's post.
fn finalize(drafts: &mut Vec<Draft>, prefix: &str) -> Vec<usize> {
    let mut order: Vec<usize> = (0..drafts.len()).collect();
    order.sort_by_key(|&i| (drafts[i].post.created_at, i));
    let mut taken: Vec<Option<Draft>> = std::mem::take(drafts).into_iter().map(Some).collect();
    let mut pair_pos = BTreeMap::new();
    for (pos, i) in order.into_iter().enumerate() {
        let mut d = taken[i].take().unwrap();
        d.post.id = format!("{prefix}{pos:06}");
        if let Some(k) = d.pair {
            pair_pos.insert(k, pos);
        }
        drafts.push(d);
    }
    pair_pos.into_values().collect()
}
