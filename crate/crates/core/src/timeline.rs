//! Time-series views of a corpus: spam per hour, cross-network Pearson
//! correlation, first-relevant-post latency and term frequency tables.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Event, LabelSet, Post};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::stats::MeanStd;
use crate::textproc::{tokenize, KeywordMatcher};

pub const DEFAULT_WINDOW_HOURS: u32 = 240;
pub const DEFAULT_TOP_K: usize = 100;

const CHUNK: usize = 4096;

/// Post counts in half-open hourly buckets `[origin + h, origin + h + 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HourlySeries {
    #[serde(with = "crate::corpus::timestamp")]
    pub origin: DateTime<Utc>,
    pub buckets: Vec<usize>,
}

impl HourlySeries {
    pub fn total(&self) -> usize {
        self.buckets.iter().sum()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.buckets.iter().map(|&c| c as f64).collect()
    }

    /// Bucket index for `t`, if inside the window.
    pub fn bucket_of(&self, t: &DateTime<Utc>) -> Option<usize> {
        let secs = (*t - self.origin).num_seconds();
        if secs < 0 {
            return None;
        }
        let h = (secs / 3600) as usize;
        (h < self.buckets.len()).then_some(h)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["hour", "count"])?;
        for (h, c) in self.buckets.iter().enumerate() {
            w.write_record([h.to_string(), c.to_string()])?;
        }
        w.flush().map_err(|e| Error::io("<writer>", e))
    }
}

/// Hourly counts of posts by labelled spammers, `window_hours` buckets from
/// `origin`. Posts outside the window are ignored.
pub fn spam_per_hour(
    corpus: &Corpus,
    labels: &LabelSet,
    origin: DateTime<Utc>,
    window_hours: u32,
    exec: Execution,
) -> Result<HourlySeries> {
    if window_hours == 0 {
        return Err(Error::InvalidParameter("window_hours must be at least 1".into()));
    }
    let empty = HourlySeries {
        origin,
        buckets: vec![0; window_hours as usize],
    };
    let chunks: Vec<&[Post]> = corpus.posts().chunks(CHUNK).collect();
    let partial = exec.map(&chunks, |chunk| {
        let mut b = vec![0usize; window_hours as usize];
        for p in chunk.iter().filter(|p| labels.is_spammer(p.network, &p.user_id)) {
            if let Some(h) = empty.bucket_of(&p.created_at) {
                b[h] += 1;
            }
        }
        b
    });
    let mut series = empty.clone();
    for b in partial {
        for (acc, c) in series.buckets.iter_mut().zip(b) {
            *acc += c;
        }
    }
    Ok(series)
}

/// Pearson product-moment correlation. Integer-valued series use exact
/// moments; anything else is computed in two floating-point passes.
///
/// Undefined (an error) when the lengths differ, when there are fewer than
/// two points, or when either series is constant.
pub fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidParameter(format!(
            "series lengths differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(Error::UndefinedCorrelation("need at least two points"));
    }
    if let Some(r) = integer_pearson(a, b) {
        return r;
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::UndefinedCorrelation("a series is constant"));
    }
    Ok((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

/// Exact moments for integer-valued series such as hourly counts, so that
/// perfectly linear series give exactly ±1. `None` when a value is not an
/// integer or a sum would overflow.
fn integer_pearson(a: &[f64], b: &[f64]) -> Option<Result<f64>> {
    const LIMIT: f64 = (1u64 << 40) as f64;
    let int = |x: f64| (x.fract() == 0.0 && x.abs() <= LIMIT).then_some(x as i128);
    let n = a.len() as i128;
    let (mut sa, mut sb, mut saa, mut sbb, mut sab) = (0i128, 0i128, 0i128, 0i128, 0i128);
    for (&x, &y) in a.iter().zip(b) {
        let (x, y) = (int(x)?, int(y)?);
        sa += x;
        sb += y;
        saa = saa.checked_add(x * x)?;
        sbb = sbb.checked_add(y * y)?;
        sab = sab.checked_add(x * y)?;
    }
    let cov = n.checked_mul(sab)?.checked_sub(sa.checked_mul(sb)?)?;
    let va = n.checked_mul(saa)?.checked_sub(sa.checked_mul(sa)?)?;
    let vb = n.checked_mul(sbb)?.checked_sub(sb.checked_mul(sb)?)?;
    if va == 0 || vb == 0 {
        return Some(Err(Error::UndefinedCorrelation("a series is constant")));
    }
    let square = cov.unsigned_abs().checked_mul(cov.unsigned_abs());
    if square.is_some() && square == (va as u128).checked_mul(vb as u128) {
        return Some(Ok(cov.signum() as f64));
    }
    let r = cov as f64 / ((va as f64).sqrt() * (vb as f64).sqrt());
    Some(Ok(r.clamp(-1.0, 1.0)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventCorrelation {
    pub event: String,
    /// `None` when undefined (a constant series).
    pub correlation: Option<f64>,
    pub fb: HourlySeries,
    pub tw: HourlySeries,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub window_hours: u32,
    pub per_event: Vec<EventCorrelation>,
    /// Over events with a defined correlation.
    pub summary: Option<MeanStd>,
}

/// Per-event spam-per-hour correlation between the two networks, with the
/// series anchored at each event's window start.
pub fn spam_correlation(
    fb: &Corpus,
    tw: &Corpus,
    labels: &LabelSet,
    events: &[Event],
    window_hours: u32,
    exec: Execution,
) -> Result<CorrelationReport> {
    let per_event = events
        .iter()
        .map(|e| {
            let f = spam_per_hour(fb, labels, e.window_start, window_hours, exec)?;
            let t = spam_per_hour(tw, labels, e.window_start, window_hours, exec)?;
            let correlation = match pearson(&f.as_f64(), &t.as_f64()) {
                Ok(r) => Some(r),
                Err(Error::UndefinedCorrelation(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(EventCorrelation {
                event: e.name.clone(),
                correlation,
                fb: f,
                tw: t,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let defined: Vec<f64> = per_event.iter().filter_map(|e| e.correlation).collect();
    Ok(CorrelationReport {
        window_hours,
        summary: MeanStd::of(&defined),
        per_event,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Latency {
    pub event: String,
    pub post_id: String,
    #[serde(with = "crate::corpus::timestamp")]
    pub first_post_time: DateTime<Utc>,
    pub latency_seconds: i64,
    /// The first relevant post precedes the occurrence time.
    pub negative: bool,
}

/// Earliest relevant post (by time, then id) minus the event's occurrence
/// time. Relevance is a keyword match; `keywords` defaults to the event's
/// own list when empty.
pub fn first_post_latency<S: AsRef<str>>(corpus: &Corpus, event: &Event, keywords: &[S]) -> Result<Latency> {
    let Some(occurred) = event.occurrence_time else {
        return Err(Error::InvalidEvent {
            name: event.name.clone(),
            reason: "occurrence_time is required for latency".into(),
        });
    };
    let matcher = if keywords.is_empty() {
        event.matcher()
    } else {
        KeywordMatcher::new(keywords)
    };
    let first = corpus
        .posts()
        .iter()
        .filter(|p| matcher.matches(&p.text))
        .min_by(|a, b| a.created_at.cmp(&b.created_at).then_with(|| a.id.cmp(&b.id)))
        .ok_or_else(|| Error::NoRelevantPost(event.name.clone()))?;
    let latency_seconds = (first.created_at - occurred).num_seconds();
    Ok(Latency {
        event: event.name.clone(),
        post_id: first.id.clone(),
        first_post_time: first.created_at,
        latency_seconds,
        negative: latency_seconds < 0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatencyReport {
    /// Marks that relevance is keyword-based, not manual reading.
    pub relevance: String,
    pub per_event: Vec<Latency>,
    /// Events without an occurrence time or without any relevant post.
    pub skipped: Vec<String>,
    /// Over non-negative latencies only.
    pub summary: Option<MeanStd>,
}

impl LatencyReport {
    /// Mean latency as e.g. "11m 1.5s".
    pub fn mean_display(&self) -> Option<String> {
        self.summary.map(|s| {
            let m = (s.mean / 60.0).floor();
            format!("{}m {:.1}s", m as i64, s.mean - 60.0 * m)
        })
    }
}

pub fn latency_report(corpus: &Corpus, events: &[Event]) -> LatencyReport {
    let mut per_event = Vec::new();
    let mut skipped = Vec::new();
    for e in events {
        match first_post_latency::<&str>(corpus, e, &[]) {
            Ok(l) => per_event.push(l),
            Err(_) => skipped.push(e.name.clone()),
        }
    }
    let valid: Vec<f64> = per_event
        .iter()
        .filter(|l| !l.negative)
        .map(|l| l.latency_seconds as f64)
        .collect();
    LatencyReport {
        relevance: "keyword match".into(),
        summary: MeanStd::of(&valid),
        per_event,
        skipped,
    }
}

/// Whitespace-separated stopword list, case-folded; `#` starts a comment line.
pub fn parse_stopwords(text: &str) -> BTreeSet<String> {
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(str::split_whitespace)
        .map(str::to_lowercase)
        .collect()
}

/// Most frequent case-folded plain tokens, count descending then term.
pub fn top_k_terms(corpus: &Corpus, k: usize, stopwords: Option<&BTreeSet<String>>) -> Result<Vec<(String, usize)>> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for p in corpus.posts() {
        for w in tokenize(&p.text).plain_folded() {
            if stopwords.is_some_and(|s| s.contains(&w)) {
                continue;
            }
            *counts.entry(w).or_default() += 1;
        }
    }
    let mut terms: Vec<(String, usize)> = counts.into_iter().collect();
    terms.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    terms.truncate(k);
    Ok(terms)
}

pub fn write_terms_csv<W: Write>(terms: &[(String, usize)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["term", "count"])?;
    for (t, c) in terms {
        w.write_record([t.clone(), c.to_string()])?;
    }
    w.flush().map_err(|e| Error::io("<writer>", e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Network, UserLabel, UserLabelKind};
    use chrono::TimeZone;

    fn t(h: u32, m: u32, s: u32) -> DateTime<Utc> {
        Utc.with_ymd_and_hms(2013, 4, 15, h, m, s).unwrap()
    }

    fn post(id: &str, user: &str, at: DateTime<Utc>, text: &str) -> Post {
        Post::new(Network::Twitter, id, user, at, text)
    }

    fn spammer_labels() -> LabelSet {
        let mut l = LabelSet::new();
        l.insert(UserLabel {
            network: Network::Twitter,
            user_id: "spam".into(),
            label: UserLabelKind::Spammer,
        })
        .unwrap();
        l
    }

    #[test]
    fn hourly_buckets() {
        let posts = vec![
            post("1", "spam", t(0, 0, 0), "x"),
            post("2", "spam", t(0, 30, 0), "x"),
            post("3", "spam", t(0, 59, 59), "x"),
            post("4", "spam", t(5, 10, 0), "x"),
            post("5", "ham", t(1, 0, 0), "x"),
            post("6", "spam", t(1, 0, 0), "x"),
        ];
        let c = Corpus::new(posts, vec![]).unwrap();
        for exec in [Execution::Sequential, Execution::Parallel] {
            let s = spam_per_hour(&c, &spammer_labels(), t(0, 0, 0), 240, exec).unwrap();
            assert_eq!(s.buckets.len(), 240);
            assert_eq!(s.buckets[0], 3);
            // exactly on the boundary → later bucket
            assert_eq!(s.buckets[1], 1);
            assert_eq!(s.buckets[5], 1);
            assert_eq!(s.total(), 5);
        }
        let none = spam_per_hour(&c, &LabelSet::new(), t(0, 0, 0), 10, Execution::Sequential).unwrap();
        assert_eq!(none.buckets, vec![0; 10]);
        assert!(spam_per_hour(&c, &LabelSet::new(), t(0, 0, 0), 0, Execution::Sequential).is_err());
    }

    #[test]
    fn window_edges_excluded() {
        let posts = vec![post("1", "spam", t(0, 0, 0), "x"), post("2", "spam", t(3, 0, 1), "x")];
        let c = Corpus::new(posts, vec![]).unwrap();
        let s = spam_per_hour(&c, &spammer_labels(), t(0, 0, 1), 3, Execution::Sequential).unwrap();
        assert_eq!(s.total(), 0);
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "hour,count\n0,0\n1,0\n2,0\n");
    }

    #[test]
    fn pearson_basics() {
        assert!((pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
        let a = [1.0, 5.0, 2.0, 8.0];
        assert!((pearson(&a, &a).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(pearson(&[1.0, 1.0], &[1.0, 2.0]), Err(Error::UndefinedCorrelation(_))));
        assert!(pearson(&[1.0], &[1.0]).is_err());
        assert!(pearson(&[1.0, 2.0], &[1.0, 2.0, 3.0]).is_err());
    }

    fn event(occ: Option<DateTime<Utc>>) -> Event {
        Event {
            name: "boston".into(),
            keywords: vec!["boston".into(), "marathon".into()],
            window_start: t(0, 0, 0),
            window_end: t(23, 0, 0),
            occurrence_time: occ,
        }
    }

    #[test]
    fn latency_examples() {
        let c = Corpus::new(
            vec![
                post("1", "a", t(11, 0, 0), "lunch time"),
                post("3", "a", t(12, 1, 13), "explosion at the #Boston finish"),
                post("2", "b", t(12, 1, 13), "boston"),
                post("4", "b", t(13, 0, 0), "marathon news"),
            ],
            vec![],
        )
        .unwrap();
        let l = first_post_latency::<&str>(&c, &event(Some(t(12, 0, 0))), &[]).unwrap();
        assert_eq!(l.latency_seconds, 73);
        assert_eq!(l.post_id, "2");
        assert!(!l.negative);

        let early = first_post_latency::<&str>(&c, &event(Some(t(14, 0, 0))), &[]).unwrap();
        assert!(early.negative && early.latency_seconds < 0);

        assert!(matches!(
            first_post_latency(&c, &event(Some(t(12, 0, 0))), &["zebra"]),
            Err(Error::NoRelevantPost(_))
        ));
        assert!(first_post_latency::<&str>(&c, &event(None), &[]).is_err());
    }

    #[test]
    fn latency_report_excludes_negatives() {
        let c = Corpus::new(vec![post("1", "a", t(12, 1, 13), "boston")], vec![]).unwrap();
        let mut late = event(Some(t(13, 0, 0)));
        late.name = "late".into();
        let r = latency_report(&c, &[event(Some(t(12, 0, 0))), late, event(None)]);
        assert_eq!(r.per_event.len(), 2);
        assert_eq!(r.skipped.len(), 1);
        assert_eq!(r.summary.unwrap().mean, 73.0);
        assert_eq!(r.mean_display().unwrap(), "1m 13.0s");
    }

    #[test]
    fn top_terms() {
        let c = Corpus::new(vec![post("1", "a", t(0, 0, 0), "a b b c c c")], vec![]).unwrap();
        assert_eq!(
            top_k_terms(&c, 2, None).unwrap(),
            vec![("c".to_string(), 3), ("b".to_string(), 2)]
        );
        let stop = parse_stopwords("a b\n# comment\nC");
        assert!(top_k_terms(&c, 5, Some(&stop)).unwrap().is_empty());
        assert!(top_k_terms(&c, 0, None).is_err());

        let tie = Corpus::new(vec![post("1", "a", t(0, 0, 0), "zeta alpha Mid mid")], vec![]).unwrap();
        assert_eq!(
            top_k_terms(&tie, 2, None).unwrap(),
            vec![("mid".to_string(), 2), ("alpha".to_string(), 1)]
        );
        let mut buf = Vec::new();
        write_terms_csv(&top_k_terms(&tie, 2, None).unwrap(), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "term,count\nmid,2\nalpha,1\n");
    }
}
