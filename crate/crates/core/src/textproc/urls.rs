use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use crate::error::{Error, Result};

/// Upper bound on mapping hops; guards against cycles in the table.
pub const MAX_EXPANSION_HOPS: usize = 10;

/// Shortener domains bundled as the default list.
pub const DEFAULT_SHORTENERS: &[&str] = &[
    "bit.ly",
    "t.co",
    "goo.gl",
    "ow.ly",
    "tinyurl.com",
    "fb.me",
    "j.mp",
];

/// Offline short-URL expansion table. Unmapped URLs pass through unchanged.
#[derive(Debug, Clone, Default)]
pub struct UrlResolver {
    mapping: HashMap<String, String>,
}

impl UrlResolver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, S, T>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        UrlResolver {
            mapping: pairs
                .into_iter()
                .map(|(s, t)| (s.into(), t.into()))
                .collect(),
        }
    }

    /// Parse a two-column `short<TAB>expanded` table. Blank lines are skipped.
    pub fn parse_tsv(text: &str) -> Result<Self> {
        let mut mapping = HashMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let mut cols = line.split('\t');
            let (Some(short), Some(expanded), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(Error::MalformedUrlMap {
                    line: idx + 1,
                    reason: "expected exactly two tab-separated columns".into(),
                });
            };
            if short.is_empty() || expanded.is_empty() {
                return Err(Error::MalformedUrlMap {
                    line: idx + 1,
                    reason: "empty column".into(),
                });
            }
            mapping.insert(short.to_string(), expanded.to_string());
        }
        Ok(UrlResolver { mapping })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_tsv(&text)
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    /// Follow the table to a fixed point, stopping after
    /// [`MAX_EXPANSION_HOPS`] hops.
    pub fn expand(&self, url: &str) -> String {
        let mut current = url;
        for _ in 0..MAX_EXPANSION_HOPS {
            match self.mapping.get(current) {
                Some(next) if next != current => current = next,
                _ => break,
            }
        }
        current.to_string()
    }
}

pub fn expand_url(url: &str, resolver: &UrlResolver) -> String {
    resolver.expand(url)
}

/// Lowered host of `url` with one leading `www.` removed.
///
/// Scheme-less URLs starting with `www.` are accepted.
pub fn extract_domain(url: &str) -> Result<String> {
    let candidate = if url.len() >= 4 && url[..4].eq_ignore_ascii_case("www.") {
        format!("http://{url}")
    } else {
        url.to_string()
    };
    let parsed = url::Url::parse(&candidate).map_err(|e| Error::InvalidUrl {
        url: url.to_string(),
        reason: e.to_string(),
    })?;
    let host = parsed
        .host_str()
        .filter(|h| !h.is_empty())
        .ok_or_else(|| Error::InvalidUrl {
            url: url.to_string(),
            reason: "no host".into(),
        })?
        .to_ascii_lowercase();
    Ok(host.strip_prefix("www.").map(str::to_string).unwrap_or(host))
}

/// `m.facebook.com` matches `facebook.com`; `notfacebook.com` does not.
pub fn domain_matches(domain: &str, target: &str) -> bool {
    domain == target
        || (domain.len() > target.len()
            && domain.ends_with(target)
            && domain.as_bytes()[domain.len() - target.len() - 1] == b'.')
}

/// Set of URL-shortener domains, matched by suffix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortenerList {
    domains: BTreeSet<String>,
}

impl Default for ShortenerList {
    fn default() -> Self {
        ShortenerList {
            domains: DEFAULT_SHORTENERS.iter().map(|d| d.to_string()).collect(),
        }
    }
}

impl ShortenerList {
    /// One domain per line; blank lines and `#` comments ignored.
    pub fn parse(text: &str) -> Self {
        ShortenerList {
            domains: text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_ascii_lowercase)
                .collect(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&text))
    }

    pub fn is_short(&self, url: &str) -> bool {
        extract_domain(url)
            .map(|d| self.domains.iter().any(|s| domain_matches(&d, s)))
            .unwrap_or(false)
    }
}
