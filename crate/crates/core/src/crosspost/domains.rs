use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::textproc::{domain_matches, extract_domain, post_urls, UrlResolver};

/// Domains whose subdomains are folded into the registered domain and
/// which are reported separately.
pub const HIGHLIGHTED_DOMAINS: [&str; 4] = ["facebook.com", "twitter.com", "youtube.com", "instagram.com"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainRow {
    pub domain: String,
    pub count: usize,
    pub percent: f64,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainRankTable {
    /// All URLs seen, including ones without a parseable host.
    pub total_urls: usize,
    pub unresolved: usize,
    pub rows: Vec<DomainRow>,
}

impl DomainRankTable {
    pub fn highlighted(&self) -> Vec<&DomainRow> {
        self.rows
            .iter()
            .filter(|r| HIGHLIGHTED_DOMAINS.contains(&r.domain.as_str()))
            .collect()
    }

    pub fn row(&self, domain: &str) -> Option<&DomainRow> {
        self.rows.iter().find(|r| r.domain == domain)
    }

    /// CSV `domain,count,percent,rank`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["domain", "count", "percent", "rank"])?;
        for r in &self.rows {
            w.write_record([
                r.domain.clone(),
                r.count.to_string(),
                format!("{:.2}", r.percent),
                r.rank.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<writer>", e))
    }
}

fn fold_domain(domain: String) -> String {
    HIGHLIGHTED_DOMAINS
        .iter()
        .find(|h| domain_matches(&domain, h))
        .map(|h| h.to_string())
        .unwrap_or(domain)
}

/// Count expanded-URL domains and competition-rank them by count, ties
/// broken lexicographically.
pub fn domain_rank_table(corpus: &Corpus, resolver: &UrlResolver) -> DomainRankTable {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut total_urls = 0;
    let mut unresolved = 0;
    for post in corpus.posts() {
        for url in post_urls(post) {
            total_urls += 1;
            match extract_domain(&resolver.expand(&url)) {
                Ok(d) => *counts.entry(fold_domain(d)).or_insert(0) += 1,
                Err(_) => unresolved += 1,
            }
        }
    }
    rank_counts(counts, total_urls, unresolved)
}

pub(crate) fn rank_counts(counts: BTreeMap<String, usize>, total_urls: usize, unresolved: usize) -> DomainRankTable {
    let mut sorted: Vec<(String, usize)> = counts.into_iter().collect();
    sorted.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let mut rows = Vec::with_capacity(sorted.len());
    for (i, (domain, count)) in sorted.into_iter().enumerate() {
        let rank = match rows.last() {
            Some(DomainRow { count: prev, rank, .. }) if *prev == count => *rank,
            _ => i + 1,
        };
        rows.push(DomainRow {
            domain,
            count,
            percent: 100.0 * count as f64 / total_urls as f64,
            rank,
        });
    }
    DomainRankTable {
        total_urls,
        unresolved,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Network, Post};
    use chrono::{TimeZone, Utc};

    fn corpus(texts: &[&str]) -> Corpus {
        let t = Utc.with_ymd_and_hms(2013, 1, 1, 0, 0, 0).unwrap();
        Corpus::new(
            texts
                .iter()
                .enumerate()
                .map(|(i, s)| Post::new(Network::Twitter, i.to_string(), "u", t, *s))
                .collect(),
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn direct_counts() {
        let c = corpus(&[
            "http://youtube.com/1 https://www.youtube.com/2",
            "http://m.youtube.com/3 http://twitter.com/x",
        ]);
        let t = domain_rank_table(&c, &UrlResolver::new());
        assert_eq!(t.rows.len(), 2);
        assert_eq!((t.rows[0].domain.as_str(), t.rows[0].rank), ("youtube.com", 1));
        assert_eq!(t.rows[0].percent, 75.0);
        assert_eq!((t.rows[1].domain.as_str(), t.rows[1].rank), ("twitter.com", 2));
        assert_eq!(t.rows[1].percent, 25.0);
        assert_eq!(t.highlighted().len(), 2);
    }

    #[test]
    fn competition_ranking() {
        let c = corpus(&["http://b.com http://a.com http://b.com http://a.com http://c.com"]);
        let t = domain_rank_table(&c, &UrlResolver::new());
        let got: Vec<_> = t.rows.iter().map(|r| (r.domain.as_str(), r.rank)).collect();
        assert_eq!(got, vec![("a.com", 1), ("b.com", 1), ("c.com", 3)]);
    }

    #[test]
    fn empty_and_expansion() {
        let t = domain_rank_table(&Corpus::empty(), &UrlResolver::new());
        assert!(t.rows.is_empty());
        assert_eq!(t.total_urls, 0);

        let c = corpus(&["http://bit.ly/1 http://fb.me/2"]);
        let r = UrlResolver::from_pairs([
            ("http://bit.ly/1", "https://www.facebook.com/story"),
            ("http://fb.me/2", "http://m.facebook.com/photo"),
        ]);
        let t = domain_rank_table(&c, &r);
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].domain, "facebook.com");
        assert_eq!(t.rows[0].count, 2);
    }

    #[test]
    fn csv_output() {
        let c = corpus(&["http://a.com http://a.com http://b.com"]);
        let t = domain_rank_table(&c, &UrlResolver::new());
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "domain,count,percent,rank\na.com,2,66.67,1\nb.com,1,33.33,2\n"
        );
    }
}
