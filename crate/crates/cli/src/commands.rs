use std::collections::{BTreeMap, BTreeSet};

use eventlens::activeusers::select_across_events;
use eventlens::corpus::{filter_by_event, Corpus, Network};
use eventlens::crosspost::{
    app_distribution, domain_rank_table, find_same_time_urls, link_same_time_users, unique_match_urls, AppDistribution,
    LinkSummary, SameTimeUrlRecord,
};
use eventlens::ml::{cross_validate, rank_features, train, ClassifierSpec, Variant};
use eventlens::overlap::{hashtags_per_post, stem_ratio, OverlapReport, PairOverlap};
use eventlens::synth::{generate, SynthConfig};
use eventlens::textproc::{unique_hashtags, unique_stems};
use eventlens::timeline::{latency_report, parse_stopwords, spam_correlation, top_k_terms, write_terms_csv};
use serde::Serialize;

use crate::args::Command;
use crate::context::{CliError, CliResult, Ctx};

pub fn run(ctx: &mut Ctx) -> CliResult<()> {
    match ctx.command {
        Command::Validate => validate(ctx),
        Command::Overlap => overlap(ctx),
        Command::Hashtags => hashtags(ctx),
        Command::Latency => latency(ctx),
        Command::Crosspost => crosspost(ctx),
        Command::Domains => domains(ctx),
        Command::ActiveUsers => active_users(ctx),
        Command::Features => features(ctx),
        Command::Train => train_model(ctx),
        Command::Evaluate => evaluate(ctx),
        Command::RankFeatures => rank(ctx),
        Command::Timeline => timeline(ctx),
        Command::Terms => terms(ctx),
        Command::Synth => synth(ctx),
    }
}

#[derive(Serialize)]
struct CorpusSummary {
    posts: usize,
    users: usize,
}

fn summarize(c: &Corpus) -> CorpusSummary {
    CorpusSummary {
        posts: c.len(),
        users: c.posts().iter().map(|p| p.user_id.as_str()).collect::<BTreeSet<_>>().len(),
    }
}

fn validate(ctx: &mut Ctx) -> CliResult<()> {
    #[derive(Serialize, Default)]
    struct Validation {
        #[serde(skip_serializing_if = "Option::is_none")]
        facebook: Option<CorpusSummary>,
        #[serde(skip_serializing_if = "Option::is_none")]
        twitter: Option<CorpusSummary>,
        #[serde(skip_serializing_if = "Option::is_none")]
        events: Option<usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        labels: Option<usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        url_mappings: Option<usize>,
    }
    let a = &ctx.args;
    if a.fb.is_none() && a.tw.is_none() && a.events.is_none() && a.labels.is_none() && a.url_map.is_none() {
        return Err(CliError::Usage(
            "validate: give at least one of --fb, --tw, --events, --labels, --url-map".into(),
        ));
    }
    let mut v = Validation::default();
    if ctx.args.fb.is_some() {
        v.facebook = Some(summarize(&ctx.corpus(Network::Facebook)?));
    }
    if ctx.args.tw.is_some() {
        v.twitter = Some(summarize(&ctx.corpus(Network::Twitter)?));
    }
    if let Some(events) = ctx.optional_events()? {
        v.events = Some(events.len());
    }
    if ctx.args.labels.is_some() {
        v.labels = Some(ctx.labels()?.len());
    }
    if ctx.args.url_map.is_some() {
        v.url_mappings = Some(ctx.resolver()?.len());
    }
    ctx.write_json("validation.json", &v)
}

/// (label, facebook slice, twitter slice) per event, or one "all" entry.
fn event_slices(ctx: &mut Ctx, fb: &Corpus, tw: &Corpus) -> CliResult<Vec<(String, Corpus, Corpus)>> {
    Ok(match ctx.optional_events()? {
        Some(events) => events
            .iter()
            .map(|e| (e.name.clone(), filter_by_event(fb, e), filter_by_event(tw, e)))
            .collect(),
        None => vec![("all".to_string(), fb.clone(), tw.clone())],
    })
}

fn overlap(ctx: &mut Ctx) -> CliResult<()> {
    #[derive(Serialize)]
    struct Overlap {
        stems: OverlapReport,
        hashtags: OverlapReport,
        /// Facebook unique stems over Twitter unique stems, pooled.
        stem_ratio: Option<f64>,
    }
    let fb = ctx.corpus(Network::Facebook)?;
    let tw = ctx.corpus(Network::Twitter)?;
    let slices = event_slices(ctx, &fb, &tw)?;
    let stems: Vec<_> = slices
        .iter()
        .map(|(l, f, t)| (l.clone(), unique_stems(f), unique_stems(t)))
        .collect();
    let tags: Vec<_> = slices
        .iter()
        .map(|(l, f, t)| (l.clone(), unique_hashtags(f), unique_hashtags(t)))
        .collect();
    let report = Overlap {
        stem_ratio: stem_ratio(&unique_stems(&fb), &unique_stems(&tw)).ok(),
        stems: OverlapReport::from_sets(&stems),
        hashtags: OverlapReport::from_sets(&tags),
    };
    ctx.write_json("overlap.json", &report)
}

fn hashtags(ctx: &mut Ctx) -> CliResult<()> {
    #[derive(Serialize)]
    struct NetworkTags {
        posts: usize,
        hashtags_per_post: f64,
        unique_hashtags: usize,
    }
    #[derive(Serialize)]
    struct Hashtags {
        networks: BTreeMap<&'static str, NetworkTags>,
        #[serde(skip_serializing_if = "Option::is_none")]
        overlap: Option<PairOverlap>,
    }
    let corpora = ctx.corpora()?;
    let mut networks = BTreeMap::new();
    for (n, c) in &corpora {
        networks.insert(
            n.as_str(),
            NetworkTags {
                posts: c.len(),
                hashtags_per_post: hashtags_per_post(c)?,
                unique_hashtags: unique_hashtags(c).len(),
            },
        );
    }
    let overlap = match corpora.as_slice() {
        [(_, fb), (_, tw)] => Some(PairOverlap::compute("hashtags", &unique_hashtags(fb), &unique_hashtags(tw))),
        _ => None,
    };
    ctx.write_json("hashtags.json", &Hashtags { networks, overlap })
}

fn latency(ctx: &mut Ctx) -> CliResult<()> {
    let corpora = ctx.corpora()?;
    let events = ctx.events()?;
    let report: BTreeMap<&str, _> = corpora
        .iter()
        .map(|(n, c)| (n.as_str(), latency_report(c, &events)))
        .collect();
    ctx.write_json("latency.json", &report)
}

fn crosspost(ctx: &mut Ctx) -> CliResult<()> {
    #[derive(Serialize)]
    struct Crosspost {
        matches: usize,
        unique_urls: usize,
        links: LinkSummary,
        apps: AppDistribution,
        records: Vec<SameTimeUrlRecord>,
    }
    let fb = ctx.corpus(Network::Facebook)?;
    let tw = ctx.corpus(Network::Twitter)?;
    let resolver = ctx.resolver()?;
    let matches = find_same_time_urls(&fb, &tw, &resolver, ctx.exec);
    let report = Crosspost {
        matches: matches.len(),
        unique_urls: unique_match_urls(&matches),
        links: link_same_time_users(&matches, ctx.args.threshold)?,
        apps: app_distribution(&matches),
        records: matches.iter().map(|m| m.record()).collect(),
    };
    ctx.write_json("crosspost.json", &report)
}

fn domains(ctx: &mut Ctx) -> CliResult<()> {
    let corpora = ctx.corpora()?;
    let resolver = ctx.resolver()?;
    let mut all = BTreeMap::new();
    for (n, c) in &corpora {
        let table = domain_rank_table(c, &resolver);
        ctx.write_with(&format!("domains_{}.csv", n.as_str()), |w| table.write_csv(w))?;
        all.insert(n.as_str(), table);
    }
    ctx.write_json("domains.json", &all)
}

fn active_users(ctx: &mut Ctx) -> CliResult<()> {
    let corpora = ctx.corpora()?;
    let events = ctx.events()?;
    let mut report = BTreeMap::new();
    for (n, c) in &corpora {
        report.insert(n.as_str(), select_across_events(c, &events, ctx.args.k, ctx.exec)?);
    }
    ctx.write_json("active_users.json", &report)
}

fn features(ctx: &mut Ctx) -> CliResult<()> {
    let corpora = ctx.corpora()?;
    let labels = ctx.labels()?;
    let ex = ctx.extractor()?;
    for (n, c) in &corpora {
        let mut ds = eventlens::features::build_dataset(c, &labels, &ex, ctx.exec)?;
        if ctx.args.deplete && *n == Network::Facebook {
            ds = eventlens::features::deplete_features(&ds)?;
        }
        let name = format!("features_{}.csv", n.as_str());
        let path = ctx.out_path(&name)?;
        ds.save(&path)?;
        ctx.record_outputs([format!("{name}.schema.json")]);
    }
    Ok(())
}

fn spec_for(ctx: &Ctx, variant: Variant) -> ClassifierSpec {
    match ClassifierSpec::default_for(variant) {
        ClassifierSpec::RandomForest(mut p) => {
            p.n_trees = ctx.args.trees;
            ClassifierSpec::RandomForest(p)
        }
        other => other,
    }
}

fn train_model(ctx: &mut Ctx) -> CliResult<()> {
    let variant = ctx.args.variant.unwrap_or(Variant::RandomForest);
    let ds = ctx.dataset()?;
    // only the forest draws random numbers
    let seed = match variant {
        Variant::RandomForest => ctx.require_seed()?,
        _ => ctx.args.seed.unwrap_or(0),
    };
    let model = train(&ds, &spec_for(ctx, variant), seed, ctx.exec)?;
    let text = model.to_json()?;
    ctx.write_text("model.json", &(text + "\n"))
}

fn evaluate(ctx: &mut Ctx) -> CliResult<()> {
    let ds = ctx.dataset()?;
    let seed = ctx.require_seed()?;
    let variants = match ctx.args.variant {
        Some(v) => vec![v],
        None => Variant::ALL.to_vec(),
    };
    let mut reports = Vec::new();
    for v in variants {
        log::info!("cross-validating {v}");
        reports.push(cross_validate(&ds, &spec_for(ctx, v), ctx.args.folds, seed, ctx.exec)?);
    }
    ctx.write_json("evaluation.json", &reports)
}

fn rank(ctx: &mut Ctx) -> CliResult<()> {
    let ds = ctx.dataset()?;
    let ranking = rank_features(&ds, ctx.exec)?;
    ctx.write_with("ranking.csv", |w| ranking.write_csv(w))?;
    ctx.write_json("ranking.json", &ranking)
}

fn timeline(ctx: &mut Ctx) -> CliResult<()> {
    let fb = ctx.corpus(Network::Facebook)?;
    let tw = ctx.corpus(Network::Twitter)?;
    let labels = ctx.labels()?;
    let events = ctx.events()?;
    let report = spam_correlation(&fb, &tw, &labels, &events, ctx.args.window_hours, ctx.exec)?;
    for e in &report.per_event {
        for (net, series) in [("facebook", &e.fb), ("twitter", &e.tw)] {
            ctx.write_with(&format!("spam_per_hour_{}_{net}.csv", e.event), |w| series.write_csv(w))?;
        }
    }
    ctx.write_json("timeline.json", &report)
}

fn terms(ctx: &mut Ctx) -> CliResult<()> {
    let corpora = ctx.corpora()?;
    let stop_path = ctx.args.stopwords.clone();
    let stopwords = ctx.optional_text("stopwords", stop_path)?.map(|t| parse_stopwords(&t));
    for (n, c) in &corpora {
        let top = top_k_terms(c, ctx.args.top_k, stopwords.as_ref())?;
        ctx.write_with(&format!("terms_{}.csv", n.as_str()), |w| write_terms_csv(&top, w))?;
    }
    Ok(())
}

fn synth(ctx: &mut Ctx) -> CliResult<()> {
    let seed = ctx.require_seed()?;
    let cfg_path = ctx.args.synth_config.clone();
    let mut cfg = match ctx.optional_text("synth_config", cfg_path)? {
        Some(text) => serde_json::from_str::<SynthConfig>(&text).map_err(eventlens::Error::from)?,
        None => SynthConfig::default(),
    };
    cfg.seed = seed;
    let out = generate(&cfg)?;
    let dir = ctx.args.out.clone();
    out.write_dir(&dir)?;
    ctx.record_outputs(
        ["fb.jsonl", "tw.jsonl", "labels.csv", "url_map.tsv", "events.json", "ground_truth.json", "config.json"]
            .map(String::from),
    );
    Ok(())
}
