//! Vocabulary and hashtag overlap between corpora.
//!
//! All overlaps are set-based (presence/absence). The symmetric figure uses
//! the union as denominator, the directional figures use one side's size.

use std::collections::BTreeSet;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::stats::MeanStd;
use crate::textproc::{tokenize, unique_stems};

fn intersection_size<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> usize {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small.iter().filter(|x| large.contains(x)).count()
}

/// 100·|A∩B| / |A∪B|; 0 when both sets are empty.
pub fn symmetric_overlap<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    let inter = intersection_size(a, b);
    let union = a.len() + b.len() - inter;
    if union == 0 {
        0.0
    } else {
        100.0 * inter as f64 / union as f64
    }
}

/// 100·|A∩B| / |A|; 0 when A is empty.
pub fn directional_overlap<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    if a.is_empty() {
        0.0
    } else {
        100.0 * intersection_size(a, b) as f64 / a.len() as f64
    }
}

/// |a| / |b|.
pub fn stem_ratio<T>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> Result<f64> {
    if b.is_empty() {
        return Err(Error::DivisionByZero("stem_ratio denominator set is empty"));
    }
    Ok(a.len() as f64 / b.len() as f64)
}

/// Hashtag occurrences (with repetition) per post.
pub fn hashtags_per_post(corpus: &Corpus) -> Result<f64> {
    if corpus.is_empty() {
        return Err(Error::EmptyInput("hashtags_per_post needs at least one post"));
    }
    let total: usize = corpus
        .posts()
        .iter()
        .map(|p| tokenize(&p.text).hashtags().len())
        .sum();
    Ok(total as f64 / corpus.len() as f64)
}

/// Overlap figures for one pair of sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairOverlap {
    pub label: String,
    pub set_a_size: usize,
    pub set_b_size: usize,
    pub intersection_size: usize,
    pub symmetric_pct: f64,
    pub a_in_b_pct: f64,
    pub b_in_a_pct: f64,
}

impl PairOverlap {
    pub fn compute<T: Ord>(label: impl Into<String>, a: &BTreeSet<T>, b: &BTreeSet<T>) -> Self {
        PairOverlap {
            label: label.into(),
            set_a_size: a.len(),
            set_b_size: b.len(),
            intersection_size: intersection_size(a, b),
            symmetric_pct: symmetric_overlap(a, b),
            a_in_b_pct: directional_overlap(a, b),
            b_in_a_pct: directional_overlap(b, a),
        }
    }
}

/// Per-event overlaps with unweighted mean and population σ across events.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub set_a_size: usize,
    pub set_b_size: usize,
    pub intersection_size: usize,
    pub symmetric_pct: f64,
    pub a_in_b_pct: f64,
    pub b_in_a_pct: f64,
    pub per_event: Vec<PairOverlap>,
    pub symmetric_summary: Option<MeanStd>,
    pub a_in_b_summary: Option<MeanStd>,
    pub b_in_a_summary: Option<MeanStd>,
}

impl OverlapReport {
    /// Pooled figures come from the union of all per-event sets; summaries
    /// average the per-event percentages.
    pub fn from_sets<T: Ord + Clone>(events: &[(String, BTreeSet<T>, BTreeSet<T>)]) -> Self {
        let per_event: Vec<PairOverlap> = events
            .iter()
            .map(|(label, a, b)| PairOverlap::compute(label.clone(), a, b))
            .collect();
        let all_a: BTreeSet<T> = events.iter().flat_map(|(_, a, _)| a.iter().cloned()).collect();
        let all_b: BTreeSet<T> = events.iter().flat_map(|(_, _, b)| b.iter().cloned()).collect();
        let pooled = PairOverlap::compute("pooled", &all_a, &all_b);
        let summary = |f: fn(&PairOverlap) -> f64| {
            MeanStd::of(&per_event.iter().map(f).collect::<Vec<_>>())
        };
        OverlapReport {
            set_a_size: pooled.set_a_size,
            set_b_size: pooled.set_b_size,
            intersection_size: pooled.intersection_size,
            symmetric_pct: pooled.symmetric_pct,
            a_in_b_pct: pooled.a_in_b_pct,
            b_in_a_pct: pooled.b_in_a_pct,
            symmetric_summary: summary(|p| p.symmetric_pct),
            a_in_b_summary: summary(|p| p.a_in_b_pct),
            b_in_a_summary: summary(|p| p.b_in_a_pct),
            per_event,
        }
    }
}

/// Square matrix of symmetric overlaps between labelled sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapMatrix {
    pub labels: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl OverlapMatrix {
    /// CSV with a header row of labels; values at 2 decimals.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec![String::new()];
        header.extend(self.labels.iter().cloned());
        w.write_record(&header)?;
        for (label, row) in self.labels.iter().zip(&self.values) {
            let mut rec = vec![label.clone()];
            rec.extend(row.iter().map(|v| format!("{v:.2}")));
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io("<writer>", e))
    }
}

/// Pairwise symmetric overlap of precomputed sets.
pub fn overlap_matrix<T: Ord + Sync>(
    entries: &[(String, BTreeSet<T>)],
    exec: Execution,
) -> OverlapMatrix {
    let n = entries.len();
    let values = exec.map_range(n, |i| {
        (0..n)
            .map(|j| symmetric_overlap(&entries[i].1, &entries[j].1))
            .collect()
    });
    OverlapMatrix {
        labels: entries.iter().map(|(l, _)| l.clone()).collect(),
        values,
    }
}

/// Stem-set overlap between every pair of (label, corpus) entries, within
/// and across networks.
pub fn cross_event_overlap(entries: &[(String, &Corpus)], exec: Execution) -> Result<OverlapMatrix> {
    if entries.len() < 2 {
        return Err(Error::InvalidParameter(
            "cross_event_overlap needs at least two entries".into(),
        ));
    }
    let sets: Vec<(String, BTreeSet<String>)> = exec
        .map(entries, |(label, corpus)| (label.clone(), unique_stems(corpus)));
    Ok(overlap_matrix(&sets, exec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Network, Post};
    use chrono::{TimeZone, Utc};

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

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
    fn subset_with_four_times_size_is_25_percent() {
        let a: BTreeSet<u32> = (0..25).collect();
        let b: BTreeSet<u32> = (0..100).collect();
        assert_eq!(symmetric_overlap(&a, &b), 25.0);
        assert_eq!(directional_overlap(&a, &b), 100.0);
    }

    #[test]
    fn symmetric_edges() {
        assert_eq!(symmetric_overlap(&set(&["a", "b"]), &set(&["b", "a"])), 100.0);
        assert_eq!(symmetric_overlap(&set(&["a"]), &set(&["b"])), 0.0);
        assert_eq!(symmetric_overlap(&set(&[]), &set(&[])), 0.0);
    }

    #[test]
    fn directional_examples() {
        let a = set(&["a", "b", "c"]);
        let b = set(&["b", "c", "d", "e"]);
        assert!((directional_overlap(&a, &b) - 200.0 / 3.0).abs() < 1e-12);
        assert_eq!(directional_overlap(&set(&["b"]), &b), 100.0);
        assert_eq!(directional_overlap(&set(&["z"]), &b), 0.0);
        assert_eq!(directional_overlap(&set(&[]), &b), 0.0);
    }

    #[test]
    fn ratios() {
        let a: BTreeSet<u32> = (0..369).collect();
        let b: BTreeSet<u32> = (0..100).collect();
        assert!((stem_ratio(&a, &b).unwrap() - 3.69).abs() < 1e-12);
        assert_eq!(stem_ratio(&b, &b).unwrap(), 1.0);
        let five: BTreeSet<u32> = (0..5).collect();
        assert_eq!(stem_ratio(&BTreeSet::new(), &five).unwrap(), 0.0);
        assert!(matches!(stem_ratio(&five, &BTreeSet::new()), Err(Error::DivisionByZero(_))));
    }

    #[test]
    fn hashtag_rates() {
        let c = corpus(&["#a #b", "#c", "#d #e #f", "plain"]);
        assert_eq!(hashtags_per_post(&c).unwrap(), 1.5);
        assert_eq!(hashtags_per_post(&corpus(&["x", "y"])).unwrap(), 0.0);
        assert_eq!(hashtags_per_post(&corpus(&["#a #a #b"])).unwrap(), 3.0);
        assert!(hashtags_per_post(&Corpus::empty()).is_err());
    }

    #[test]
    fn report_summaries() {
        let events = vec![
            ("e1".to_string(), set(&["a", "b"]), set(&["a", "b"])),
            ("e2".to_string(), set(&["c"]), set(&["d"])),
        ];
        let r = OverlapReport::from_sets(&events);
        let s = r.symmetric_summary.unwrap();
        assert_eq!(s.mean, 50.0);
        assert_eq!(s.std_dev, 50.0);
        assert_eq!(r.set_a_size, 3);
        assert_eq!(r.intersection_size, 2);
        assert_eq!(r.symmetric_pct, 50.0);
    }

    #[test]
    fn cross_event_identical_and_disjoint() {
        let a = corpus(&["running runs river"]);
        let b = corpus(&["running runs river"]);
        let c = corpus(&["zebra quilt"]);
        let m = cross_event_overlap(
            &[("a".into(), &a), ("b".into(), &b), ("c".into(), &c)],
            Execution::Sequential,
        )
        .unwrap();
        for i in 0..3 {
            assert_eq!(m.values[i][i], 100.0);
            for j in 0..3 {
                assert_eq!(m.values[i][j], m.values[j][i]);
            }
        }
        assert_eq!(m.values[0][1], 100.0);
        assert_eq!(m.values[0][2], 0.0);
        assert!(cross_event_overlap(&[("a".into(), &a)], Execution::Sequential).is_err());

        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), ",a,b,c");
        assert_eq!(text.lines().nth(1).unwrap(), "a,100.00,100.00,0.00");
    }
}
