//! Event-centric analytics over paired Facebook/Twitter post corpora.
//!
//! The crate covers the full measurement pipeline: corpus ingestion
//! ([`corpus`]), tokenization and stemming ([`textproc`]), vocabulary and
//! hashtag overlap ([`overlap`]), same-time URL cross-posting with account
//! linking ([`crosspost`]), most-active-user selection ([`activeusers`]),
//! stylometric spam features ([`features`]), from-scratch classifiers
//! ([`ml`]), time-series analytics ([`timeline`]) and a seeded synthetic
//! corpus generator ([`synth`]).

pub mod activeusers;
pub mod corpus;
pub mod crosspost;
mod error;
pub mod exec;
pub mod features;
pub mod ml;
pub mod overlap;
pub mod stats;
pub mod synth;
pub mod textproc;
pub mod timeline;

pub use error::{Error, Result};
pub use exec::Execution;
