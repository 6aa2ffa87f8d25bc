use std::fs;
use std::path::PathBuf;

use eventlens::corpus::{load_corpus, load_events, load_labels, Corpus, Event, LabelSet, Network};
use eventlens::features::{build_dataset, deplete_features, schema_sidecar, FeatureExtractor, LabeledDataset};
use eventlens::textproc::{ShortenerList, UrlResolver};
use eventlens::Execution;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::args::{Args, Command};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad invocation: missing flag, missing file, absent seed.
    #[error("{0}")]
    Usage(String),
    /// The inputs were read but could not be processed.
    #[error(transparent)]
    Data(#[from] eventlens::Error),
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) | CliError::Output { .. } => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Serialize)]
pub struct InputRecord {
    pub role: String,
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    subcommand: &'static str,
    status: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    seed: Option<u64>,
    parameters: Parameters,
    inputs: &'a [InputRecord],
    outputs: &'a [String],
}

#[derive(Debug, Serialize)]
struct Parameters {
    k: f64,
    threshold: f64,
    folds: usize,
    trees: usize,
    window_hours: u32,
    top_k: usize,
    variant: Option<String>,
    deplete: bool,
    parallel: bool,
}

/// State for one invocation: parsed flags, the inputs read so far and the
/// reports written.
pub struct Ctx {
    pub command: Command,
    pub args: Args,
    pub exec: Execution,
    inputs: Vec<InputRecord>,
    outputs: Vec<String>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl Ctx {
    pub fn new(command: Command, args: Args) -> Self {
        let exec = if args.sequential { Execution::Sequential } else { Execution::Parallel };
        Ctx {
            command,
            args,
            exec,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    fn usage(&self, msg: impl std::fmt::Display) -> CliError {
        CliError::Usage(format!("{}: {msg}", self.command.name()))
    }

    /// Check that `path` was given and exists, and record its digest.
    fn input(&mut self, role: &str, path: Option<&PathBuf>) -> CliResult<PathBuf> {
        let flag = role.replace('_', "-");
        let path = path
            .cloned()
            .ok_or_else(|| self.usage(format!("--{flag} is required")))?;
        let bytes = fs::read(&path).map_err(|e| self.usage(format!("cannot read --{flag} {}: {e}", path.display())))?;
        log::info!("input {role}: {} ({} bytes)", path.display(), bytes.len());
        self.inputs.push(InputRecord {
            role: role.to_string(),
            sha256: sha256_hex(&bytes),
            path: path.clone(),
        });
        Ok(path)
    }

    pub fn require_seed(&self) -> CliResult<u64> {
        self.args
            .seed
            .ok_or_else(|| self.usage("--seed is required (all randomness is explicitly seeded)"))
    }

    pub fn corpus(&mut self, network: Network) -> CliResult<Corpus> {
        let (role, path) = match network {
            Network::Facebook => ("fb", self.args.fb.clone()),
            Network::Twitter => ("tw", self.args.tw.clone()),
        };
        let path = self.input(role, path.as_ref())?;
        Ok(load_corpus(&path, network)?)
    }

    /// Corpora for whichever of --fb/--tw were given; at least one.
    pub fn corpora(&mut self) -> CliResult<Vec<(Network, Corpus)>> {
        let mut out = Vec::new();
        if self.args.fb.is_some() {
            out.push((Network::Facebook, self.corpus(Network::Facebook)?));
        }
        if self.args.tw.is_some() {
            out.push((Network::Twitter, self.corpus(Network::Twitter)?));
        }
        if out.is_empty() {
            return Err(self.usage("at least one of --fb and --tw is required"));
        }
        Ok(out)
    }

    pub fn events(&mut self) -> CliResult<Vec<Event>> {
        let path = self.args.events.clone();
        let path = self.input("events", path.as_ref())?;
        Ok(load_events(&path)?)
    }

    pub fn optional_events(&mut self) -> CliResult<Option<Vec<Event>>> {
        if self.args.events.is_some() {
            self.events().map(Some)
        } else {
            Ok(None)
        }
    }

    pub fn labels(&mut self) -> CliResult<LabelSet> {
        let path = self.args.labels.clone();
        let path = self.input("labels", path.as_ref())?;
        Ok(load_labels(&path)?)
    }

    pub fn resolver(&mut self) -> CliResult<UrlResolver> {
        match self.args.url_map.clone() {
            Some(p) => {
                let path = self.input("url_map", Some(&p))?;
                Ok(UrlResolver::load(&path)?)
            }
            None => Ok(UrlResolver::new()),
        }
    }

    pub fn extractor(&mut self) -> CliResult<FeatureExtractor> {
        match self.args.shorteners.clone() {
            Some(p) => {
                let path = self.input("shorteners", Some(&p))?;
                Ok(FeatureExtractor::new(ShortenerList::load(&path)?))
            }
            None => Ok(FeatureExtractor::default()),
        }
    }

    pub fn optional_text(&mut self, role: &str, path: Option<PathBuf>) -> CliResult<Option<String>> {
        match path {
            Some(p) => {
                let path = self.input(role, Some(&p))?;
                let text = fs::read_to_string(&path).map_err(|e| self.usage(format!("{}: {e}", path.display())))?;
                Ok(Some(text))
            }
            None => Ok(None),
        }
    }

    /// A feature table from --dataset, or built from one corpus plus
    /// --labels; depleted when --deplete is set.
    pub fn dataset(&mut self) -> CliResult<LabeledDataset> {
        let ds = if let Some(p) = self.args.dataset.clone() {
            let path = self.input("dataset", Some(&p))?;
            self.input("dataset_schema", Some(&schema_sidecar(&path)))?;
            LabeledDataset::load(&path)?
        } else {
            if self.args.labels.is_none() {
                return Err(self.usage("--labels (with --fb or --tw) or --dataset is required"));
            }
            if self.args.fb.is_some() && self.args.tw.is_some() {
                return Err(self.usage("give one of --fb and --tw, not both"));
            }
            let corpora = self.corpora()?;
            let labels = self.labels()?;
            let ex = self.extractor()?;
            build_dataset(&corpora[0].1, &labels, &ex, self.exec)?
        };
        if self.args.deplete {
            Ok(deplete_features(&ds)?)
        } else {
            Ok(ds)
        }
    }

    pub fn out_path(&mut self, name: &str) -> CliResult<PathBuf> {
        let dir = self.args.out.clone();
        fs::create_dir_all(&dir).map_err(|source| CliError::Output { path: dir.clone(), source })?;
        self.outputs.push(name.to_string());
        Ok(dir.join(name))
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> CliResult<()> {
        let path = self.out_path(name)?;
        log::info!("writing {}", path.display());
        fs::write(&path, text).map_err(|source| CliError::Output { path, source })
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<()> {
        let text = serde_json::to_string_pretty(value).map_err(eventlens::Error::from)? + "\n";
        self.write_text(name, &text)
    }

    /// Serialize into memory first so a failed run leaves no partial report.
    pub fn write_with<F>(&mut self, name: &str, f: F) -> CliResult<()>
    where
        F: FnOnce(&mut Vec<u8>) -> eventlens::Result<()>,
    {
        let mut buf = Vec::new();
        f(&mut buf)?;
        let text = String::from_utf8(buf).expect("reports are UTF-8");
        self.write_text(name, &text)
    }

    pub fn record_outputs(&mut self, names: impl IntoIterator<Item = String>) {
        self.outputs.extend(names);
    }

    /// Written after every run that got as far as naming an output
    /// directory, including failed ones.
    pub fn write_manifest(&mut self, outcome: &CliResult<()>) -> CliResult<()> {
        let a = &self.args;
        let manifest = Manifest {
            tool: "eventlens",
            version: env!("CARGO_PKG_VERSION"),
            subcommand: self.command.name(),
            status: if outcome.is_ok() { "ok" } else { "error" },
            error: outcome.as_ref().err().map(ToString::to_string),
            seed: a.seed,
            parameters: Parameters {
                k: a.k,
                threshold: a.threshold,
                folds: a.folds,
                trees: a.trees,
                window_hours: a.window_hours,
                top_k: a.top_k,
                variant: a.variant.map(|v| v.to_string()),
                deplete: a.deplete,
                parallel: self.exec.is_parallel(),
            },
            inputs: &self.inputs,
            outputs: &self.outputs,
        };
        let text = serde_json::to_string_pretty(&manifest).map_err(eventlens::Error::from)? + "\n";
        let dir = &self.args.out;
        fs::create_dir_all(dir).map_err(|source| CliError::Output { path: dir.clone(), source })?;
        let path = dir.join("manifest.json");
        fs::write(&path, text).map_err(|source| CliError::Output { path, source })
    }
}
