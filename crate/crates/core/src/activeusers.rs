//! Most-active-user extraction by content gain.
//!
//! Users are sorted by post count (descending, ties by user id). Walking
//! that order, the running post total `c_sum` grows by each user's count and
//! the user is kept when `100 * count / c_sum > k`.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::{filter_by_event, Corpus, Event, Network, Post};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Threshold used for the study-wide selection.
pub const DEFAULT_K: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct UserActivity<'a> {
    pub network: Network,
    pub user_id: String,
    pub posts: Vec<&'a Post>,
}

impl UserActivity<'_> {
    pub fn post_count(&self) -> usize {
        self.posts.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub user_id: String,
    pub post_count: usize,
    pub c_sum: usize,
    pub gain_percent: f64,
    pub selected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContentGainTrace {
    pub k: f64,
    pub rows: Vec<TraceRow>,
}

impl ContentGainTrace {
    pub fn selected_count(&self) -> usize {
        self.rows.iter().filter(|r| r.selected).count()
    }

    /// CSV `user_id,post_count,c_sum,gain_percent,selected`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["user_id", "post_count", "c_sum", "gain_percent", "selected"])?;
        for r in &self.rows {
            w.write_record([
                r.user_id.clone(),
                r.post_count.to_string(),
                r.c_sum.to_string(),
                format!("{:.4}", r.gain_percent),
                r.selected.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<writer>", e))
    }
}

/// Group posts by (network, user) in the content-gain order.
pub fn user_activity(corpus: &Corpus) -> Vec<UserActivity<'_>> {
    let mut by_user: BTreeMap<(Network, &str), Vec<&Post>> = BTreeMap::new();
    for p in corpus.posts() {
        by_user.entry((p.network, p.user_id.as_str())).or_default().push(p);
    }
    let mut users: Vec<UserActivity<'_>> = by_user
        .into_iter()
        .map(|((network, user_id), posts)| UserActivity {
            network,
            user_id: user_id.to_string(),
            posts,
        })
        .collect();
    users.sort_by(|a, b| {
        b.post_count()
            .cmp(&a.post_count())
            .then_with(|| a.user_id.cmp(&b.user_id))
            .then_with(|| a.network.cmp(&b.network))
    });
    users
}

/// Run the content-gain walk over counts already in selection order.
pub fn content_gain_trace(counts: &[(String, usize)], k: f64) -> Result<ContentGainTrace> {
    if k.is_nan() || k < 0.0 {
        return Err(Error::InvalidParameter(format!("k must be >= 0, got {k}")));
    }
    let mut c_sum = 0usize;
    let rows = counts
        .iter()
        .map(|(user_id, count)| {
            c_sum += count;
            let gain_percent = 100.0 * *count as f64 / c_sum as f64;
            TraceRow {
                user_id: user_id.clone(),
                post_count: *count,
                c_sum,
                gain_percent,
                selected: gain_percent > k,
            }
        })
        .collect();
    Ok(ContentGainTrace { k, rows })
}

/// Selected users and the full trace for one corpus (one event).
pub fn select_most_active(corpus: &Corpus, k: f64) -> Result<(Vec<UserActivity<'_>>, ContentGainTrace)> {
    let users = user_activity(corpus);
    let counts: Vec<(String, usize)> = users
        .iter()
        .map(|u| (u.user_id.clone(), u.post_count()))
        .collect();
    let trace = content_gain_trace(&counts, k)?;
    let selected = users
        .into_iter()
        .zip(&trace.rows)
        .filter(|(_, row)| row.selected)
        .map(|(u, _)| u)
        .collect();
    Ok((selected, trace))
}

/// Selected-user count at each k (k values must be ascending).
pub fn selection_curve(corpus: &Corpus, k_values: &[f64]) -> Result<Vec<(f64, usize)>> {
    if k_values.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter("k values must be sorted ascending".into()));
    }
    let users = user_activity(corpus);
    let counts: Vec<(String, usize)> = users
        .iter()
        .map(|u| (u.user_id.clone(), u.post_count()))
        .collect();
    k_values
        .iter()
        .map(|&k| Ok((k, content_gain_trace(&counts, k)?.selected_count())))
        .collect()
}

/// Per-event selection result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventSelection {
    pub event: String,
    pub selected_users: Vec<String>,
    pub selected_posts: usize,
    pub trace: ContentGainTrace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudySelection {
    pub k: f64,
    pub per_event: Vec<EventSelection>,
    /// Union of selected users across events.
    pub users: BTreeSet<String>,
    /// Posts (across events) authored by the union of selected users.
    pub posts: usize,
}

/// Run the selection per event and union the selected users.
pub fn select_across_events(corpus: &Corpus, events: &[Event], k: f64, exec: Execution) -> Result<StudySelection> {
    let per_event = exec.try_map_range(events.len(), |i| {
        let event = &events[i];
        let sub = filter_by_event(corpus, event);
        let (selected, trace) = select_most_active(&sub, k)?;
        Ok::<_, Error>(EventSelection {
            event: event.name.clone(),
            selected_users: selected.iter().map(|u| u.user_id.clone()).collect(),
            selected_posts: selected.iter().map(UserActivity::post_count).sum(),
            trace,
        })
    })?;
    let users: BTreeSet<String> = per_event
        .iter()
        .flat_map(|e| e.selected_users.iter().cloned())
        .collect();
    let mut post_ids = BTreeSet::new();
    for event in events {
        for p in filter_by_event(corpus, event).posts() {
            if users.contains(&p.user_id) {
                post_ids.insert(p.id.clone());
            }
        }
    }
    Ok(StudySelection {
        k,
        per_event,
        users,
        posts: post_ids.len(),
    })
}
