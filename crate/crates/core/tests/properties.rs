use std::collections::BTreeSet;

use chrono::{TimeZone, Utc};
use proptest::prelude::*;

use eventlens::activeusers::{content_gain_trace, select_most_active};
use eventlens::corpus::{Corpus, Network, Post};
use eventlens::overlap::symmetric_overlap;
use eventlens::timeline::top_k_terms;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 1000,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn descending_counts() -> impl Strategy<Value = Vec<(String, usize)>> {
    prop::collection::vec(1usize..500, 0..60).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        v.into_iter().enumerate().map(|(i, c)| (format!("u{i:03}"), c)).collect()
    })
}

#[test]
fn hand_trace_selects_one_user() {
    let t = Utc.with_ymd_and_hms(2013, 4, 15, 12, 0, 0).unwrap();
    let mut posts = Vec::new();
    for (u, n) in [("a", 100), ("b", 3), ("c", 1)] {
        for i in 0..n {
            posts.push(Post::new(Network::Facebook, format!("{u}{i}"), u, t, "text"));
        }
    }
    let corpus = Corpus::new(posts, vec![]).unwrap();
    let (selected, _) = select_most_active(&corpus, 3.0).unwrap();
    assert_eq!(selected.len(), 1);
    assert_eq!(selected[0].user_id, "a");
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn selection_is_a_prefix(counts in descending_counts(), k in 0.0f64..100.0) {
        let trace = content_gain_trace(&counts, k).unwrap();
        let s = trace.selected_count();
        prop_assert!(trace.rows[..s].iter().all(|r| r.selected));
        prop_assert!(trace.rows[s..].iter().all(|r| !r.selected));
    }

    #[test]
    fn raising_k_never_selects_more(counts in descending_counts(), k1 in 0.0f64..100.0, dk in 0.0f64..50.0) {
        let lo = content_gain_trace(&counts, k1).unwrap().selected_count();
        let hi = content_gain_trace(&counts, k1 + dk).unwrap().selected_count();
        prop_assert!(hi <= lo);
    }

    #[test]
    fn overlap_is_symmetric_and_bounded(
        a in prop::collection::btree_set(0u8..64, 0..40),
        b in prop::collection::btree_set(0u8..64, 0..40),
    ) {
        let s = symmetric_overlap(&a, &b);
        prop_assert_eq!(s, symmetric_overlap(&b, &a));
        prop_assert!((0.0..=100.0).contains(&s));
        let same: BTreeSet<u8> = a.clone();
        if !a.is_empty() {
            prop_assert_eq!(symmetric_overlap(&a, &same), 100.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn top_k_is_a_prefix_of_larger_k(
        texts in prop::collection::vec(prop::collection::vec(0usize..30, 1..12), 1..40),
        k in 1usize..20,
        extra in 0usize..20,
    ) {
        let t = Utc.with_ymd_and_hms(2013, 4, 15, 12, 0, 0).unwrap();
        let posts = texts
            .iter()
            .enumerate()
            .map(|(i, words)| {
                let text: Vec<String> = words.iter().map(|w| format!("word{w}")).collect();
                Post::new(Network::Twitter, i.to_string(), "u", t, text.join(" "))
            })
            .collect();
        let corpus = Corpus::new(posts, vec![]).unwrap();
        let small = top_k_terms(&corpus, k, None).unwrap();
        let large = top_k_terms(&corpus, k + extra, None).unwrap();
        prop_assert!(small.len() <= k);
        prop_assert_eq!(&large[..small.len()], &small[..]);
        prop_assert!(small.windows(2).all(|w| w[0].1 >= w[1].1));
    }
}
