//! Cross-network URL sharing: same-second matches, account linking by Jaro
//! similarity, posting-application breakdown and per-network domain ranks.

mod domains;
mod jaro;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

pub use domains::{domain_rank_table, DomainRankTable, DomainRow, HIGHLIGHTED_DOMAINS};
pub use jaro::jaro;

use crate::corpus::{Corpus, Post};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::textproc::{post_urls, UrlResolver};

/// Default linking threshold; a quad links when a score strictly exceeds it.
pub const DEFAULT_LINK_THRESHOLD: f64 = 0.85;

/// Handle and display name of one account.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccountIdentity {
    pub handle: Option<String>,
    pub name: Option<String>,
}

impl AccountIdentity {
    pub fn new(handle: Option<&str>, name: Option<&str>) -> Self {
        AccountIdentity {
            handle: handle.map(str::to_string),
            name: name.map(str::to_string),
        }
    }

    pub fn of_post(post: &Post) -> Self {
        AccountIdentity {
            handle: post.user_handle.clone(),
            name: post.user_name.clone(),
        }
    }

    fn folded(field: &Option<String>) -> Option<String> {
        field
            .as_deref()
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::to_lowercase)
    }
}

/// The four Jaro scores in fixed order:
/// tw handle/fb handle, tw handle/fb name, tw name/fb handle, tw name/fb name.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityScoreQuad {
    pub handle_handle: Option<f64>,
    pub handle_name: Option<f64>,
    pub name_handle: Option<f64>,
    pub name_name: Option<f64>,
}

impl IdentityScoreQuad {
    pub fn scores(&self) -> [Option<f64>; 4] {
        [self.handle_handle, self.handle_name, self.name_handle, self.name_name]
    }

    pub fn max(&self) -> Option<f64> {
        self.scores().into_iter().flatten().reduce(f64::max)
    }

    pub fn is_linked(&self, threshold: f64) -> bool {
        self.max().is_some_and(|m| m > threshold)
    }

    pub fn is_exact(&self) -> bool {
        self.scores().into_iter().flatten().any(|s| s == 1.0)
    }
}

/// Score a Twitter account against a Facebook account on case-folded fields.
pub fn identity_scores(tw: &AccountIdentity, fb: &AccountIdentity) -> Result<IdentityScoreQuad> {
    let (th, tn) = (AccountIdentity::folded(&tw.handle), AccountIdentity::folded(&tw.name));
    let (fh, fname) = (AccountIdentity::folded(&fb.handle), AccountIdentity::folded(&fb.name));
    let score = |x: &Option<String>, y: &Option<String>| match (x, y) {
        (Some(x), Some(y)) => Some(jaro(x, y)),
        _ => None,
    };
    let quad = IdentityScoreQuad {
        handle_handle: score(&th, &fh),
        handle_name: score(&th, &fname),
        name_handle: score(&tn, &fh),
        name_name: score(&tn, &fname),
    };
    if quad.max().is_none() {
        return Err(Error::NoComparableFields);
    }
    Ok(quad)
}

/// A URL shared on both networks in the same UTC second.
#[derive(Debug, Clone, PartialEq)]
pub struct SameTimeUrlMatch<'a> {
    pub url: String,
    pub fb_post: &'a Post,
    pub tw_post: &'a Post,
    pub same_source: bool,
}

impl SameTimeUrlMatch<'_> {
    pub fn fb_app(&self) -> Option<&str> {
        self.fb_post.app.as_deref()
    }

    pub fn tw_app(&self) -> Option<&str> {
        self.tw_post.app.as_deref()
    }

    pub fn record(&self) -> SameTimeUrlRecord {
        SameTimeUrlRecord {
            url: self.url.clone(),
            created_at: crate::corpus::format_timestamp(&self.fb_post.created_at),
            fb_post_id: self.fb_post.id.clone(),
            tw_post_id: self.tw_post.id.clone(),
            fb_user_id: self.fb_post.user_id.clone(),
            tw_user_id: self.tw_post.user_id.clone(),
            fb_app: self.fb_app().map(str::to_string),
            tw_app: self.tw_app().map(str::to_string),
            same_source: self.same_source,
        }
    }
}

/// Owned, serializable view of a [`SameTimeUrlMatch`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SameTimeUrlRecord {
    pub url: String,
    pub created_at: String,
    pub fb_post_id: String,
    pub tw_post_id: String,
    pub fb_user_id: String,
    pub tw_user_id: String,
    pub fb_app: Option<String>,
    pub tw_app: Option<String>,
    pub same_source: bool,
}

fn same_app(a: Option<&str>, b: Option<&str>) -> bool {
    match (a, b) {
        (Some(a), Some(b)) => a.trim().to_lowercase() == b.trim().to_lowercase(),
        _ => false,
    }
}

fn expanded_urls(post: &Post, resolver: &UrlResolver) -> BTreeSet<String> {
    post_urls(post).iter().map(|u| resolver.expand(u)).collect()
}

/// Every (fb, tw) post pair sharing an expanded URL at the same second.
///
/// Multiple posts sharing one URL in the same second produce the full
/// cross product. Output is sorted by (url, fb id, tw id).
pub fn find_same_time_urls<'a>(
    fb: &'a Corpus,
    tw: &'a Corpus,
    resolver: &UrlResolver,
    exec: Execution,
) -> Vec<SameTimeUrlMatch<'a>> {
    let tw_urls = exec.map(tw.posts(), |p| expanded_urls(p, resolver));
    let mut index: HashMap<(&str, DateTime<Utc>), Vec<usize>> = HashMap::new();
    for (i, urls) in tw_urls.iter().enumerate() {
        for u in urls {
            index.entry((u.as_str(), tw.posts()[i].created_at)).or_default().push(i);
        }
    }
    let fb_urls = exec.map(fb.posts(), |p| expanded_urls(p, resolver));
    let per_post: Vec<Vec<SameTimeUrlMatch<'a>>> = exec.map_range(fb.len(), |i| {
        let fb_post = &fb.posts()[i];
        let mut out = Vec::new();
        for u in &fb_urls[i] {
            if let Some(hits) = index.get(&(u.as_str(), fb_post.created_at)) {
                for &j in hits {
                    let tw_post = &tw.posts()[j];
                    out.push(SameTimeUrlMatch {
                        url: u.clone(),
                        fb_post,
                        tw_post,
                        same_source: same_app(fb_post.app.as_deref(), tw_post.app.as_deref()),
                    });
                }
            }
        }
        out
    });
    let mut matches: Vec<_> = per_post.into_iter().flatten().collect();
    matches.sort_by(|a, b| {
        (&a.url, &a.fb_post.id, &a.tw_post.id).cmp(&(&b.url, &b.fb_post.id, &b.tw_post.id))
    });
    matches
}

/// Number of distinct URLs among the matches.
pub fn unique_match_urls(matches: &[SameTimeUrlMatch<'_>]) -> usize {
    matches.iter().map(|m| m.url.as_str()).collect::<BTreeSet<_>>().len()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkSummary {
    pub threshold: f64,
    pub total: usize,
    pub linked: usize,
    pub exact: usize,
    pub undeterminable: usize,
    pub linked_fraction: f64,
    pub exact_fraction: f64,
}

/// Score each match's accounts and count links above `threshold`.
/// Fractions are over all matches, undeterminable ones included.
pub fn link_same_time_users(matches: &[SameTimeUrlMatch<'_>], threshold: f64) -> Result<LinkSummary> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidParameter(format!(
            "threshold {threshold} outside [0, 1]"
        )));
    }
    let (mut linked, mut exact, mut undeterminable) = (0, 0, 0);
    for m in matches {
        match identity_scores(
            &AccountIdentity::of_post(m.tw_post),
            &AccountIdentity::of_post(m.fb_post),
        ) {
            Ok(q) => {
                linked += q.is_linked(threshold) as usize;
                exact += q.is_exact() as usize;
            }
            Err(_) => undeterminable += 1,
        }
    }
    let total = matches.len();
    let frac = |n: usize| if total == 0 { 0.0 } else { n as f64 / total as f64 };
    Ok(LinkSummary {
        threshold,
        total,
        linked,
        exact,
        undeterminable,
        linked_fraction: frac(linked),
        exact_fraction: frac(exact),
    })
}

pub const UNKNOWN_APP: &str = "unknown";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppPairCount {
    pub fb_app: String,
    pub tw_app: String,
    pub count: usize,
}

/// Posting-application breakdown of same-time matches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppDistribution {
    pub total: usize,
    pub same_source: usize,
    pub same_source_fraction: f64,
    pub pairs: Vec<AppPairCount>,
    pub facebook_apps: BTreeMap<String, usize>,
    pub twitter_apps: BTreeMap<String, usize>,
}

pub fn app_distribution(matches: &[SameTimeUrlMatch<'_>]) -> AppDistribution {
    let name = |a: Option<&str>| {
        a.map(str::trim)
            .filter(|s| !s.is_empty())
            .unwrap_or(UNKNOWN_APP)
            .to_string()
    };
    let mut pairs: BTreeMap<(String, String), usize> = BTreeMap::new();
    let mut facebook_apps = BTreeMap::new();
    let mut twitter_apps = BTreeMap::new();
    for m in matches {
        let (f, t) = (name(m.fb_app()), name(m.tw_app()));
        *facebook_apps.entry(f.clone()).or_insert(0) += 1;
        *twitter_apps.entry(t.clone()).or_insert(0) += 1;
        *pairs.entry((f, t)).or_insert(0) += 1;
    }
    let same_source = matches.iter().filter(|m| m.same_source).count();
    let mut pairs: Vec<AppPairCount> = pairs
        .into_iter()
        .map(|((fb_app, tw_app), count)| AppPairCount { fb_app, tw_app, count })
        .collect();
    pairs.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| (&a.fb_app, &a.tw_app).cmp(&(&b.fb_app, &b.tw_app))));
    AppDistribution {
        total: matches.len(),
        same_source,
        same_source_fraction: if matches.is_empty() {
            0.0
        } else {
            same_source as f64 / matches.len() as f64
        },
        pairs,
        facebook_apps,
        twitter_apps,
    }
}
