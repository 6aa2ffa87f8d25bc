//! Post/event data model, line-delimited corpus ingestion and label sets.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::{DateTime, SecondsFormat, Timelike, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textproc::KeywordMatcher;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Network {
    Facebook,
    Twitter,
}

impl Network {
    pub fn as_str(self) -> &'static str {
        match self {
            Network::Facebook => "facebook",
            Network::Twitter => "twitter",
        }
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Network {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "facebook" | "fb" => Ok(Network::Facebook),
            "twitter" | "tw" => Ok(Network::Twitter),
            other => Err(format!("unknown network {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PostType {
    #[default]
    Status,
    Link,
    Photo,
    Video,
    Other,
}

impl PostType {
    pub fn as_str(self) -> &'static str {
        match self {
            PostType::Status => "status",
            PostType::Link => "link",
            PostType::Photo => "photo",
            PostType::Video => "video",
            PostType::Other => "other",
        }
    }
}

/// UTC instants serialized as `YYYY-MM-DDThh:mm:ssZ`.
pub mod timestamp {
    use chrono::{DateTime, SecondsFormat, Utc};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(t: &DateTime<Utc>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&t.to_rfc3339_opts(SecondsFormat::Secs, true))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DateTime<Utc>, D::Error> {
        let raw = String::deserialize(d)?;
        super::parse_timestamp(&raw).map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(t: &Option<DateTime<Utc>>, s: S) -> Result<S::Ok, S::Error> {
            match t {
                Some(t) => super::serialize(t, s),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<DateTime<Utc>>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|raw| crate::corpus::parse_timestamp(&raw).map_err(serde::de::Error::custom))
                .transpose()
        }
    }
}

/// Parse an RFC 3339 instant, normalize to UTC and truncate to the second.
pub fn parse_timestamp(raw: &str) -> std::result::Result<DateTime<Utc>, String> {
    let t = DateTime::parse_from_rfc3339(raw.trim()).map_err(|e| format!("{raw:?}: {e}"))?;
    let t = t.with_timezone(&Utc);
    Ok(t.with_nanosecond(0).unwrap_or(t))
}

pub fn format_timestamp(t: &DateTime<Utc>) -> String {
    t.to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// One public message from either network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Post {
    pub network: Network,
    pub id: String,
    pub user_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub user_handle: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub user_name: Option<String>,
    #[serde(with = "timestamp")]
    pub created_at: DateTime<Utc>,
    pub text: String,
    #[serde(default)]
    pub post_type: PostType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub app: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub app_namespace: Option<String>,
    #[serde(default)]
    pub is_page: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub page_likes: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub page_category: Option<String>,
    #[serde(default)]
    pub likes: u64,
    #[serde(default)]
    pub comments: u64,
    #[serde(default)]
    pub shares: u64,
    #[serde(default)]
    pub is_retweet: bool,
    #[serde(default)]
    pub has_media: bool,
    #[serde(default)]
    pub mentions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub urls: Option<Vec<String>>,
}

impl Post {
    /// Minimal post; remaining fields take their defaults.
    pub fn new(
        network: Network,
        id: impl Into<String>,
        user_id: impl Into<String>,
        created_at: DateTime<Utc>,
        text: impl Into<String>,
    ) -> Self {
        Post {
            network,
            id: id.into(),
            user_id: user_id.into(),
            user_handle: None,
            user_name: None,
            created_at,
            text: text.into(),
            post_type: PostType::Status,
            app: None,
            app_namespace: None,
            is_page: false,
            page_likes: None,
            page_category: None,
            likes: 0,
            comments: 0,
            shares: 0,
            is_retweet: false,
            has_media: false,
            mentions: Vec::new(),
            urls: None,
        }
    }

    /// Network-specific field constraints.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.id.is_empty() {
            return Err("empty id".into());
        }
        if self.user_id.is_empty() {
            return Err("empty user_id".into());
        }
        match self.network {
            Network::Twitter => {
                if self.is_page {
                    return Err("twitter post cannot have is_page=true".into());
                }
                if self.page_likes.is_some() {
                    return Err("twitter post cannot carry page_likes".into());
                }
            }
            Network::Facebook => {
                if self.is_retweet {
                    return Err("facebook post cannot have is_retweet=true".into());
                }
                if !self.mentions.is_empty() {
                    return Err("facebook post cannot carry mentions".into());
                }
            }
        }
        Ok(())
    }

    /// Serialize as one JSONL record (no trailing newline).
    pub fn to_json_line(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Ordered, immutable post collection.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Corpus {
    posts: Vec<Post>,
    provenance: Vec<PathBuf>,
}

impl Corpus {
    /// Build a corpus, rejecting duplicate ids within a network.
    pub fn new(posts: Vec<Post>, provenance: Vec<PathBuf>) -> Result<Self> {
        let mut seen = HashMap::new();
        for p in &posts {
            if seen.insert((p.network, p.id.as_str()), ()).is_some() {
                return Err(Error::DuplicateId {
                    network: p.network,
                    id: p.id.clone(),
                });
            }
        }
        Ok(Corpus { posts, provenance })
    }

    pub fn empty() -> Self {
        Corpus::default()
    }

    pub fn posts(&self) -> &[Post] {
        &self.posts
    }

    pub fn provenance(&self) -> &[PathBuf] {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.posts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.posts.is_empty()
    }

    /// Corpus restricted to posts satisfying `keep`, order preserved.
    pub fn filter<F: Fn(&Post) -> bool>(&self, keep: F) -> Corpus {
        Corpus {
            posts: self.posts.iter().filter(|p| keep(p)).cloned().collect(),
            provenance: self.provenance.clone(),
        }
    }

    /// Write one JSON record per line.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for p in &self.posts {
            let line = p.to_json_line()?;
            writeln!(out, "{line}").map_err(|e| Error::io("<writer>", e))?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = std::io::BufWriter::new(file);
        self.write_jsonl(&mut w)?;
        w.flush().map_err(|e| Error::io(path, e))
    }
}

/// Parse JSONL text into a corpus. Records without a `network` key take
/// `network`; records naming a different network are rejected.
pub fn parse_corpus(text: &str, network: Network, source: Option<&Path>) -> Result<Corpus> {
    let mut posts = Vec::new();
    let mut first_seen: HashMap<String, usize> = HashMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut value: serde_json::Value =
            serde_json::from_str(line).map_err(|e| Error::MalformedRecord {
                line: line_no,
                reason: e.to_string(),
            })?;
        let obj = value.as_object_mut().ok_or_else(|| Error::MalformedRecord {
            line: line_no,
            reason: "record is not a JSON object".into(),
        })?;
        match obj.get("network") {
            None | Some(serde_json::Value::Null) => {
                obj.insert("network".into(), serde_json::Value::from(network.as_str()));
            }
            Some(v) => {
                let declared = v.as_str().and_then(|s| s.parse::<Network>().ok());
                if declared != Some(network) {
                    return Err(Error::MalformedRecord {
                        line: line_no,
                        reason: format!("network {v} does not match expected {network}"),
                    });
                }
            }
        }
        if let Some(raw) = obj.get("created_at") {
            let ok = raw.as_str().map(parse_timestamp).is_some_and(|r| r.is_ok());
            if !ok {
                return Err(Error::Timestamp {
                    line: line_no,
                    value: raw.as_str().map(str::to_string).unwrap_or_else(|| raw.to_string()),
                });
            }
        }
        let post: Post = serde_json::from_value(value).map_err(|e| Error::MalformedRecord {
            line: line_no,
            reason: e.to_string(),
        })?;
        post.validate().map_err(|reason| Error::MalformedRecord {
            line: line_no,
            reason,
        })?;
        if let Some(&first_line) = first_seen.get(&post.id) {
            return Err(Error::DuplicatePostId {
                id: post.id,
                first_line,
                second_line: line_no,
            });
        }
        first_seen.insert(post.id.clone(), line_no);
        posts.push(post);
    }
    Corpus::new(posts, source.map(|p| vec![p.to_path_buf()]).unwrap_or_default())
}

pub fn load_corpus(path: &Path, network: Network) -> Result<Corpus> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_corpus(&text, network, Some(path))
}

/// An event definition with its collection window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub name: String,
    pub keywords: Vec<String>,
    #[serde(with = "timestamp")]
    pub window_start: DateTime<Utc>,
    #[serde(with = "timestamp")]
    pub window_end: DateTime<Utc>,
    #[serde(default, with = "timestamp::option", skip_serializing_if = "Option::is_none")]
    pub occurrence_time: Option<DateTime<Utc>>,
}

impl Event {
    pub fn validate(&self) -> Result<()> {
        let invalid = |reason: &str| Error::InvalidEvent {
            name: self.name.clone(),
            reason: reason.to_string(),
        };
        if self.keywords.iter().all(|k| k.trim().is_empty()) {
            return Err(invalid("keywords must be non-empty"));
        }
        if self.window_start >= self.window_end {
            return Err(invalid("window_start must precede window_end"));
        }
        Ok(())
    }

    pub fn contains(&self, t: &DateTime<Utc>) -> bool {
        self.window_start <= *t && *t <= self.window_end
    }

    pub fn matcher(&self) -> KeywordMatcher {
        KeywordMatcher::new(&self.keywords)
    }
}

pub fn parse_events(text: &str) -> Result<Vec<Event>> {
    let events: Vec<Event> = serde_json::from_str(text)?;
    for e in &events {
        e.validate()?;
    }
    Ok(events)
}

pub fn load_events(path: &Path) -> Result<Vec<Event>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_events(&text)
}

/// Posts inside the event window that mention at least one keyword.
pub fn filter_by_event(corpus: &Corpus, event: &Event) -> Corpus {
    let matcher = event.matcher();
    corpus.filter(|p| event.contains(&p.created_at) && matcher.matches(&p.text))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UserLabelKind {
    Spammer,
    Legitimate,
    FalsePositive,
    Verified,
    Suspended,
    Deleted,
}

impl UserLabelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            UserLabelKind::Spammer => "spammer",
            UserLabelKind::Legitimate => "legitimate",
            UserLabelKind::FalsePositive => "false_positive",
            UserLabelKind::Verified => "verified",
            UserLabelKind::Suspended => "suspended",
            UserLabelKind::Deleted => "deleted",
        }
    }
}

impl FromStr for UserLabelKind {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        Ok(match s {
            "spammer" => UserLabelKind::Spammer,
            "legitimate" => UserLabelKind::Legitimate,
            "false_positive" => UserLabelKind::FalsePositive,
            "verified" => UserLabelKind::Verified,
            "suspended" => UserLabelKind::Suspended,
            "deleted" => UserLabelKind::Deleted,
            _ => return Err(()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserLabel {
    pub network: Network,
    pub user_id: String,
    pub label: UserLabelKind,
}

/// Labels keyed by (network, user_id).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelSet {
    labels: BTreeMap<(Network, String), UserLabelKind>,
}

impl LabelSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fails on a duplicate (network, user_id).
    pub fn insert(&mut self, label: UserLabel) -> std::result::Result<(), UserLabel> {
        let key = (label.network, label.user_id.clone());
        if self.labels.contains_key(&key) {
            return Err(label);
        }
        self.labels.insert(key, label.label);
        Ok(())
    }

    pub fn get(&self, network: Network, user_id: &str) -> Option<UserLabelKind> {
        self.labels.get(&(network, user_id.to_string())).copied()
    }

    pub fn is_spammer(&self, network: Network, user_id: &str) -> bool {
        self.get(network, user_id) == Some(UserLabelKind::Spammer)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = UserLabel> + '_ {
        self.labels.iter().map(|((network, user_id), label)| UserLabel {
            network: *network,
            user_id: user_id.clone(),
            label: *label,
        })
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["network", "user_id", "label"])?;
        for l in self.iter() {
            w.write_record([l.network.as_str(), l.user_id.as_str(), l.label.as_str()])?;
        }
        w.flush().map_err(|e| Error::io("<writer>", e))
    }
}

/// Parse a `network,user_id,label` CSV (header required).
pub fn parse_labels(text: &str) -> Result<LabelSet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["network", "user_id", "label"] {
        return Err(Error::MalformedRecord {
            line: 1,
            reason: format!("expected header network,user_id,label, got {:?}", headers.iter().collect::<Vec<_>>()),
        });
    }
    let mut set = LabelSet::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != 3 {
            return Err(Error::MalformedRecord {
                line,
                reason: format!("expected 3 columns, got {}", record.len()),
            });
        }
        let network = record[0].parse::<Network>().map_err(|_| Error::UnknownNetwork {
            line,
            value: record[0].to_string(),
        })?;
        let label = record[2].parse::<UserLabelKind>().map_err(|_| Error::UnknownLabel {
            line,
            value: record[2].to_string(),
        })?;
        set.insert(UserLabel {
            network,
            user_id: record[1].to_string(),
            label,
        })
        .map_err(|dup| Error::DuplicateLabel {
            network: dup.network,
            user_id: dup.user_id,
            line,
        })?;
    }
    Ok(set)
}

pub fn load_labels(path: &Path) -> Result<LabelSet> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_labels(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> DateTime<Utc> {
        parse_timestamp(s).unwrap()
    }

    const THREE: &str = r#"{"id":"1","user_id":"u1","created_at":"2013-04-15T18:50:00Z","text":"boston blasts update"}
{"id":"2","user_id":"u2","created_at":"2013-04-15T18:51:00Z","text":"pray for #boston","post_type":"link","app":"HootSuite","likes":4}
{"id":"3","user_id":"u1","created_at":"2013-04-15T19:00:00+02:00","text":"nothing relevant","is_page":true,"page_likes":12}
"#;

    #[test]
    fn loads_three_records() {
        let c = parse_corpus(THREE, Network::Facebook, None).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.posts()[1].app.as_deref(), Some("HootSuite"));
        assert_eq!(c.posts()[1].post_type, PostType::Link);
        // offset normalized to UTC
        assert_eq!(c.posts()[2].created_at, t("2013-04-15T17:00:00Z"));
        assert_eq!(c.posts()[2].page_likes, Some(12));
        assert_eq!(c.posts()[0].page_likes, None);
    }

    #[test]
    fn empty_file_is_empty_corpus() {
        let c = parse_corpus("", Network::Twitter, None).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn duplicate_ids_name_both_lines() {
        let text = r#"{"id":"a","user_id":"u","created_at":"2013-01-01T00:00:00Z","text":"x"}
{"id":"dup","user_id":"u","created_at":"2013-01-01T00:00:00Z","text":"x"}
{"id":"b","user_id":"u","created_at":"2013-01-01T00:00:00Z","text":"x"}
{"id":"c","user_id":"u","created_at":"2013-01-01T00:00:00Z","text":"x"}
{"id":"dup","user_id":"u","created_at":"2013-01-01T00:00:00Z","text":"y"}
"#;
        match parse_corpus(text, Network::Twitter, None) {
            Err(Error::DuplicatePostId {
                id,
                first_line,
                second_line,
            }) => {
                assert_eq!(id, "dup");
                assert_eq!((first_line, second_line), (2, 5));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_and_timestamp_errors_carry_line() {
        let text = "{\"id\":\"a\",\"user_id\":\"u\",\"created_at\":\"2013-01-01T00:00:00Z\",\"text\":\"x\"}\nnot json\n";
        assert!(matches!(
            parse_corpus(text, Network::Twitter, None),
            Err(Error::MalformedRecord { line: 2, .. })
        ));
        let text = "{\"id\":\"a\",\"user_id\":\"u\",\"created_at\":\"yesterday\",\"text\":\"x\"}\n";
        assert!(matches!(
            parse_corpus(text, Network::Twitter, None),
            Err(Error::Timestamp { line: 1, .. })
        ));
        let text = "{\"id\":\"a\",\"user_id\":\"u\",\"created_at\":\"2013-01-01T00:00:00Z\",\"text\":\"x\",\"likes\":-1}\n";
        assert!(matches!(
            parse_corpus(text, Network::Twitter, None),
            Err(Error::MalformedRecord { line: 1, .. })
        ));
    }

    #[test]
    fn network_invariants_enforced() {
        let tw_page = "{\"id\":\"a\",\"user_id\":\"u\",\"created_at\":\"2013-01-01T00:00:00Z\",\"text\":\"x\",\"is_page\":true}\n";
        assert!(parse_corpus(tw_page, Network::Twitter, None).is_err());
        let fb_mentions = "{\"id\":\"a\",\"user_id\":\"u\",\"created_at\":\"2013-01-01T00:00:00Z\",\"text\":\"x\",\"mentions\":[\"z\"]}\n";
        assert!(parse_corpus(fb_mentions, Network::Facebook, None).is_err());
        let wrong = "{\"network\":\"twitter\",\"id\":\"a\",\"user_id\":\"u\",\"created_at\":\"2013-01-01T00:00:00Z\",\"text\":\"x\"}\n";
        assert!(parse_corpus(wrong, Network::Facebook, None).is_err());
    }

    #[test]
    fn reserialization_is_lossless() {
        let c = parse_corpus(THREE, Network::Facebook, None).unwrap();
        let mut buf = Vec::new();
        c.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let again = parse_corpus(&text, Network::Facebook, None).unwrap();
        assert_eq!(c.posts(), again.posts());
        let mut buf2 = Vec::new();
        again.write_jsonl(&mut buf2).unwrap();
        assert_eq!(text.as_bytes(), &buf2[..]);
    }

    fn event() -> Event {
        Event {
            name: "Boston".into(),
            keywords: vec!["boston".into(), "bostonblasts".into()],
            window_start: t("2013-04-15T00:00:00Z"),
            window_end: t("2013-04-16T00:00:00Z"),
            occurrence_time: Some(t("2013-04-15T18:50:00Z")),
        }
    }

    #[test]
    fn event_filtering() {
        let posts = vec![
            Post::new(Network::Twitter, "1", "u", t("2013-04-15T19:00:00Z"), "boston blasts update"),
            Post::new(Network::Twitter, "2", "u", t("2013-04-15T19:00:00Z"), "nothing here"),
            Post::new(Network::Twitter, "3", "u", t("2013-04-15T19:00:00Z"), "#bostonblasts"),
            Post::new(Network::Twitter, "4", "u", t("2013-04-17T19:00:00Z"), "boston later"),
            Post::new(Network::Twitter, "5", "u", t("2013-04-16T00:00:00Z"), "boston at the edge"),
        ];
        let c = Corpus::new(posts, vec![]).unwrap();
        let f = filter_by_event(&c, &event());
        let ids: Vec<_> = f.posts().iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, vec!["1", "3", "5"]);
        assert_eq!(filter_by_event(&f, &event()), f);
    }

    #[test]
    fn events_validate() {
        let json = r#"[{"name":"e","keywords":["a"],"window_start":"2013-01-02T00:00:00Z","window_end":"2013-01-01T00:00:00Z"}]"#;
        assert!(matches!(parse_events(json), Err(Error::InvalidEvent { .. })));
        let json = r#"[{"name":"e","keywords":[],"window_start":"2013-01-01T00:00:00Z","window_end":"2013-01-02T00:00:00Z"}]"#;
        assert!(matches!(parse_events(json), Err(Error::InvalidEvent { .. })));
        let json = r#"[{"name":"e","keywords":["a"],"window_start":"2013-01-01T00:00:00Z","window_end":"2013-01-02T00:00:00Z","occurrence_time":"2013-01-01T05:00:00Z"}]"#;
        let events = parse_events(json).unwrap();
        assert_eq!(events[0].occurrence_time, Some(t("2013-01-01T05:00:00Z")));
        let back = serde_json::to_string(&events).unwrap();
        assert_eq!(parse_events(&back).unwrap(), events);
    }

    #[test]
    fn labels() {
        let set = parse_labels("network,user_id,label\nfacebook,u1,spammer\n").unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.get(Network::Facebook, "u1"), Some(UserLabelKind::Spammer));

        let err = parse_labels("network,user_id,label\nfacebook,u1,spammy\n").unwrap_err();
        assert!(err.to_string().contains("unknown label"));

        let err = parse_labels("network,user_id,label\ntwitter,u9,spammer\ntwitter,u9,legitimate\n").unwrap_err();
        assert!(matches!(err, Error::DuplicateLabel { line: 3, .. }));

        // same user id on two networks is fine
        let set = parse_labels("network,user_id,label\ntwitter,u9,spammer\nfacebook,u9,verified\n").unwrap();
        assert_eq!(set.len(), 2);

        let mut buf = Vec::new();
        set.write_csv(&mut buf).unwrap();
        assert_eq!(parse_labels(std::str::from_utf8(&buf).unwrap()).unwrap(), set);
    }
}
