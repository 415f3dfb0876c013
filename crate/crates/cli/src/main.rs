//! `lmtc` is the pipeline driver: ingest → stats → reduce → split → train →
//! predict → evaluate → schedule.
//!
//! Outputs land under `--out-dir` with fixed names; stdout carries only
//! human-readable summaries. Exit codes: 0 success, 1 runtime/data error,
//! 2 usage/config error. `--seed` feeds every stochastic component and
//! defaults to 0, never wall-clock entropy.

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lmtc_cli::config::{ConfigError, PipelineConfig};
use lmtc_cli::formats::{
    import_split_dir, load_corpus_jsonl, load_model, load_predictions, load_split,
    save_corpus_jsonl, save_model, save_predictions, save_report, save_split,
    save_threshold_curve, FormatError,
};
use lmtc_cli::ingest::{files_with_extension, ingest_eurlex57k, ingest_jrc, IngestError};
use lmtc_core::corpus::{
    reduce_corpus, reduce_corpus_lossy, Corpus, CorpusError, CorpusSource, ReduceError,
};
use lmtc_core::metrics::{
    full_report, threshold_grid_search, GoldLabels, MetricsError, ThresholdGrid, DEFAULT_KS,
};
use lmtc_core::split::{
    corpus_part, deviation_report, iterative_stratify, random_split, Split, SplitError,
    SplitRatios,
};
use lmtc_core::taxonomy::{parse_turtle, LabelLevel, ReductionMode, TurtleError};
use lmtc_core::trainer::{
    emit_unfreeze_schedule, predict, train, DiscriminativeLrPolicy, ModelKind, StlrShape,
    TrainConfig, TrainerError,
};

#[derive(Parser)]
#[command(name = "lmtc", version, about = "Multi-label classification toolkit for EuroVoc-labeled legal corpora")]
struct Cli {
    /// JSON config file supplying defaults for flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for every stochastic component (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for all outputs (default `out`).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Suppress human-readable summaries.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SourceKind {
    Jrc,
    Eurlex57k,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SplitMethod {
    Iterative,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest a dataset directory into the canonical JSONL corpus format.
    Ingest {
        kind: SourceKind,
        in_dir: PathBuf,
        /// Output file (default `<out-dir>/corpus.jsonl`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Token and label statistics plus the label-frequency histogram.
    Stats { corpus: PathBuf },
    /// Replace document labels with top terms, microthesauri or domains.
    Reduce {
        corpus: PathBuf,
        thesaurus: PathBuf,
        /// Target level: DE, TT, MT or DO.
        #[arg(long)]
        level: Option<String>,
        /// Use only direct links instead of the broader-closure.
        #[arg(long)]
        direct_only: bool,
        /// Drop unresolvable labels (with a warning) instead of failing.
        #[arg(long)]
        drop_missing: bool,
    },
    /// Produce a stratified (or random) train/valid/test split.
    Split {
        corpus: PathBuf,
        /// Comma-separated ratios, e.g. 0.8,0.1,0.1.
        #[arg(long)]
        ratios: Option<String>,
        #[arg(long, value_enum, default_value = "iterative")]
        method: SplitMethod,
        /// Import a directory-based reference split (train/dev/test subdirs)
        /// instead of computing one.
        #[arg(long)]
        import_dir: Option<PathBuf>,
        /// Corpus source name recorded in the split header.
        #[arg(long, default_value = "Synthetic")]
        source: String,
    },
    /// Train the bag-of-words baseline on the train split.
    Train {
        corpus: PathBuf,
        split: PathBuf,
        #[arg(long)]
        hidden: Option<usize>,
        #[arg(long)]
        batch_size: Option<usize>,
        #[arg(long)]
        vocab_cap: Option<usize>,
        #[arg(long)]
        cut_frac: Option<f64>,
        #[arg(long)]
        lr_ratio: Option<f64>,
        #[arg(long)]
        decay: Option<f64>,
        /// Unfreezing schedule kind (must fit the two-group model).
        #[arg(long)]
        kind: Option<String>,
    },
    /// Score documents with a trained model.
    Predict {
        model: PathBuf,
        corpus: PathBuf,
        /// Restrict to one part of a split file.
        #[arg(long)]
        split: Option<PathBuf>,
        #[arg(long)]
        part: Option<String>,
    },
    /// Pick a threshold on validation predictions and evaluate on test.
    Evaluate {
        corpus: PathBuf,
        split: PathBuf,
        #[arg(long)]
        pred_valid: PathBuf,
        #[arg(long)]
        pred_test: PathBuf,
        /// Comma-separated Ks (default 1,3,5,10).
        #[arg(long)]
        ks: Option<String>,
        /// Threshold grid start:stop:step (default 0:1:0.01).
        #[arg(long)]
        grid: Option<String>,
    },
    /// Emit a gradual-unfreezing schedule as JSON.
    Schedule { kind: String },
}

enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    fn usage(msg: impl fmt::Display) -> Self {
        CliError::Usage(msg.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

macro_rules! runtime_from {
    ($($ty:ty),*) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::Runtime(e.to_string())
            }
        })*
    };
}

runtime_from!(
    FormatError,
    IngestError,
    CorpusError,
    SplitError,
    MetricsError,
    TurtleError,
    ReduceError,
    std::io::Error
);

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<TrainerError> for CliError {
    fn from(e: TrainerError) -> Self {
        match e {
            TrainerError::InvalidSchedule(_)
            | TrainerError::InvalidConfig(_)
            | TrainerError::UnknownKind(_)
            | TrainerError::ZeroCap => CliError::Usage(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

struct Ctx {
    seed: u64,
    out_dir: PathBuf,
    quiet: bool,
    config: PipelineConfig,
}

impl Ctx {
    fn say(&self, msg: impl fmt::Display) {
        if !self.quiet {
            println!("{msg}");
        }
    }

    fn warn(&self, msg: impl fmt::Display) {
        if !self.quiet {
            eprintln!("warning: {msg}");
        }
    }

    fn out(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    let out_dir = cli
        .out_dir
        .or_else(|| config.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Runtime(format!("create {}: {e}", out_dir.display())))?;
    let ctx = Ctx {
        seed: cli.seed.or(config.seed).unwrap_or(0),
        out_dir,
        quiet: cli.quiet,
        config,
    };

    match cli.command {
        Command::Ingest { kind, in_dir, out } => cmd_ingest(&ctx, kind, &in_dir, out),
        Command::Stats { corpus } => cmd_stats(&ctx, &corpus),
        Command::Reduce { corpus, thesaurus, level, direct_only, drop_missing } => {
            cmd_reduce(&ctx, &corpus, &thesaurus, level, direct_only, drop_missing)
        }
        Command::Split { corpus, ratios, method, import_dir, source } => {
            cmd_split(&ctx, &corpus, ratios, method, import_dir, &source)
        }
        Command::Train { corpus, split, hidden, batch_size, vocab_cap, cut_frac, lr_ratio, decay, kind } => {
            cmd_train(&ctx, &corpus, &split, TrainFlags {
                hidden,
                batch_size,
                vocab_cap,
                cut_frac,
                lr_ratio,
                decay,
                kind,
            })
        }
        Command::Predict { model, corpus, split, part } => {
            cmd_predict(&ctx, &model, &corpus, split, part)
        }
        Command::Evaluate { corpus, split, pred_valid, pred_test, ks, grid } => {
            cmd_evaluate(&ctx, &corpus, &split, &pred_valid, &pred_test, ks, grid)
        }
        Command::Schedule { kind } => cmd_schedule(&ctx, &kind),
    }
}

fn require_exists(path: &Path, what: &str) -> Result<(), CliError> {
    if path.exists() {
        Ok(())
    } else {
        Err(CliError::usage(format!("{what} `{}` does not exist", path.display())))
    }
}

fn load_corpus(path: &Path) -> Result<Corpus, CliError> {
    require_exists(path, "corpus file")?;
    Ok(load_corpus_jsonl(path, LabelLevel::De, CorpusSource::Synthetic)?)
}

fn cmd_ingest(
    ctx: &Ctx,
    kind: SourceKind,
    in_dir: &Path,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    if !in_dir.is_dir() {
        return Err(CliError::usage(format!("input directory `{}` does not exist", in_dir.display())));
    }
    let out = out.unwrap_or_else(|| ctx.out("corpus.jsonl"));
    let (corpus, skipped) = match kind {
        SourceKind::Jrc => {
            let files = files_with_extension(in_dir, "xml")?;
            let (corpus, warnings) = ingest_jrc(&files)?;
            for w in &warnings {
                ctx.warn(w);
            }
            (corpus, warnings.len())
        }
        SourceKind::Eurlex57k => {
            let files = files_with_extension(in_dir, "json")?;
            (ingest_eurlex57k(&files)?, 0)
        }
    };
    save_corpus_jsonl(&corpus, &out)?;
    ctx.say(format!(
        "ingested {} documents ({} skipped) -> {}",
        corpus.len(),
        skipped,
        out.display()
    ));
    Ok(())
}

fn cmd_stats(ctx: &Ctx, corpus_path: &Path) -> Result<(), CliError> {
    let corpus = load_corpus(corpus_path)?;
    let tokens = corpus.token_stats()?;
    let labels = corpus.label_stats()?;

    let stats_path = ctx.out("stats.json");
    let json = serde_json::json!({ "tokens": tokens, "labels": labels });
    std::fs::write(&stats_path, serde_json::to_string_pretty(&json).expect("stats serialize") + "\n")?;

    // Frequency histogram, most-used label first.
    let freq = corpus.label_frequencies();
    let mut rows: Vec<(&lmtc_core::taxonomy::ConceptId, u64)> =
        freq.iter().map(|(l, &c)| (l, c)).collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let mut csv = String::from("label,count\n");
    for (label, count) in &rows {
        csv.push_str(&format!("{label},{count}\n"));
    }
    let hist_path = ctx.out("label_histogram.csv");
    std::fs::write(&hist_path, csv)?;

    ctx.say(format!("documents: {}", tokens.n_docs));
    ctx.say(format!(
        "tokens/doc: max {} min {} mean {:.2} stddev {:.2} median {} mode {}",
        tokens.max, tokens.min, tokens.mean, tokens.stddev, tokens.median, tokens.mode
    ));
    ctx.say(format!(
        "labels/doc: max {} min {} mean {:.2} stddev {:.2} median {} mode {} (distinct {})",
        labels.max, labels.min, labels.mean, labels.stddev, labels.median, labels.mode,
        labels.n_distinct_labels
    ));
    ctx.say(format!("wrote {} and {}", stats_path.display(), hist_path.display()));
    Ok(())
}

fn cmd_reduce(
    ctx: &Ctx,
    corpus_path: &Path,
    thesaurus_path: &Path,
    level: Option<String>,
    direct_only: bool,
    drop_missing: bool,
) -> Result<(), CliError> {
    let level_str = level
        .or_else(|| ctx.config.label_level.clone())
        .ok_or_else(|| CliError::usage("--level is required (DE, TT, MT or DO)"))?;
    let level = LabelLevel::parse(&level_str)
        .ok_or_else(|| CliError::usage(format!("unknown label level `{level_str}`")))?;
    let corpus = load_corpus(corpus_path)?;
    require_exists(thesaurus_path, "thesaurus file")?;
    let ttl = std::fs::read_to_string(thesaurus_path)?;
    let thesaurus = parse_turtle(&ttl)?;
    let mode = if direct_only { ReductionMode::DirectOnly } else { ReductionMode::Closure };

    let reduced = if drop_missing {
        let (reduced, drops) = reduce_corpus_lossy(&thesaurus, &corpus, level, mode)?;
        for (doc, label) in &drops.labels {
            ctx.warn(format!("document `{doc}`: dropped unresolvable label {label}"));
        }
        for doc in &drops.docs {
            ctx.warn(format!("document `{doc}`: dropped (no resolvable labels)"));
        }
        reduced
    } else {
        reduce_corpus(&thesaurus, &corpus, level, mode)?
    };

    let out = ctx.out(&format!("corpus.{}.jsonl", level.as_str().to_lowercase()));
    save_corpus_jsonl(&reduced, &out)?;
    ctx.say(format!(
        "reduced {} documents to level {} -> {}",
        reduced.len(),
        level,
        out.display()
    ));
    Ok(())
}

fn parse_ratios(spec: &str) -> Result<SplitRatios, CliError> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::usage("ratios must be three comma-separated numbers"));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::usage(format!("ratios: {e}")))?;
    SplitRatios::new(nums[0], nums[1], nums[2]).map_err(CliError::usage)
}

fn cmd_split(
    ctx: &Ctx,
    corpus_path: &Path,
    ratios: Option<String>,
    method: SplitMethod,
    import_dir: Option<PathBuf>,
    source: &str,
) -> Result<(), CliError> {
    let corpus = load_corpus(corpus_path)?;
    let assignment = match import_dir {
        Some(dir) => {
            require_exists(&dir, "import directory")?;
            let imported = import_split_dir(&dir)?;
            ctx.say(format!(
                "imported split: {} train / {} valid / {} test",
                imported.counts()[0],
                imported.counts()[1],
                imported.counts()[2]
            ));
            imported
        }
        None => {
            let ratios = match ratios.as_deref() {
                Some(spec) => parse_ratios(spec)?,
                None => match ctx.config.ratios {
                    Some([a, b, c]) => SplitRatios::new(a, b, c).map_err(CliError::usage)?,
                    None => SplitRatios::new(0.8, 0.1, 0.1).expect("default ratios"),
                },
            };
            match method {
                SplitMethod::Iterative => iterative_stratify(&corpus, ratios, ctx.seed)?,
                SplitMethod::Random => random_split(&corpus, ratios, ctx.seed)?,
            }
        }
    };

    let out = ctx.out("split.jsonl");
    save_split(&assignment, source, &out)?;
    let counts = assignment.counts();
    ctx.say(format!(
        "split sizes: {} train / {} valid / {} test -> {}",
        counts[0], counts[1], counts[2],
        out.display()
    ));
    match deviation_report(&corpus, &assignment) {
        Ok(report) => ctx.say(format!(
            "label deviation: mean {:.5} max {:.5}; labels absent from train: {}",
            report.mean_deviation, report.max_deviation, report.labels_absent_from_train
        )),
        Err(SplitError::MissingDoc(id)) => {
            ctx.warn(format!("split does not cover corpus (e.g. document `{id}`); no deviation report"));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

struct TrainFlags {
    hidden: Option<usize>,
    batch_size: Option<usize>,
    vocab_cap: Option<usize>,
    cut_frac: Option<f64>,
    lr_ratio: Option<f64>,
    decay: Option<f64>,
    kind: Option<String>,
}

fn cmd_train(
    ctx: &Ctx,
    corpus_path: &Path,
    split_path: &Path,
    flags: TrainFlags,
) -> Result<(), CliError> {
    let corpus = load_corpus(corpus_path)?;
    require_exists(split_path, "split file")?;
    let (assignment, _) = load_split(split_path)?;
    let train_c = corpus_part(&corpus, &assignment, Split::Train)?;
    let valid_c = corpus_part(&corpus, &assignment, Split::Valid)?;

    let section = ctx.config.trainer.clone().unwrap_or_default();
    let kind_str = flags
        .kind
        .or(section.schedule_kind)
        .unwrap_or_else(|| "TOY".to_string());
    let kind = ModelKind::parse(&kind_str)?;
    let cfg = TrainConfig {
        hidden: flags.hidden.or(section.hidden).unwrap_or(64),
        batch_size: flags.batch_size.or(section.batch_size).unwrap_or(32),
        vocab_cap: flags.vocab_cap.or(ctx.config.vocab_cap).unwrap_or(20_000),
        stlr: StlrShape {
            cut_frac: flags.cut_frac.or(section.cut_frac).unwrap_or(0.1),
            ratio: flags.lr_ratio.or(section.lr_ratio).unwrap_or(32.0),
        },
        disc: DiscriminativeLrPolicy {
            base_lr: 1.0,
            decay_factor: flags.decay.or(section.decay_factor).unwrap_or(2.6),
        },
        schedule: emit_unfreeze_schedule(kind),
        seed: ctx.seed,
    };

    let outcome = train(&train_c, &valid_c, &cfg)?;
    let model_path = ctx.out("model.bin");
    save_model(&outcome.model, &cfg, &model_path)?;
    let log_path = ctx.out("train_log.json");
    std::fs::write(
        &log_path,
        serde_json::to_string_pretty(&outcome.log).expect("log serialize") + "\n",
    )?;
    let last_loss = outcome.log.epochs.last().map(|e| e.train_loss);
    ctx.say(format!(
        "trained on {} documents ({} labels); final train loss {} -> {}",
        train_c.len(),
        outcome.model.n_labels(),
        last_loss.map_or("n/a".to_string(), |l| format!("{l:.4}")),
        model_path.display()
    ));
    Ok(())
}

fn cmd_predict(
    ctx: &Ctx,
    model_path: &Path,
    corpus_path: &Path,
    split: Option<PathBuf>,
    part: Option<String>,
) -> Result<(), CliError> {
    require_exists(model_path, "model file")?;
    let (model, _) = load_model(model_path)?;
    let corpus = load_corpus(corpus_path)?;
    let (docs, suffix) = match (split, part) {
        (Some(split_path), Some(part_str)) => {
            let part = Split::parse(&part_str)
                .ok_or_else(|| CliError::usage(format!("unknown split part `{part_str}`")))?;
            require_exists(&split_path, "split file")?;
            let (assignment, _) = load_split(&split_path)?;
            let sub = corpus_part(&corpus, &assignment, part)?;
            (sub, format!(".{}", part.as_str()))
        }
        (None, None) => (corpus, String::new()),
        _ => return Err(CliError::usage("--split and --part must be given together")),
    };
    let scores = predict(&model, docs.docs())?;
    let out = ctx.out(&format!("predictions{suffix}.jsonl"));
    save_predictions(&scores, &out)?;
    ctx.say(format!("scored {} documents -> {}", docs.len(), out.display()));
    Ok(())
}

fn parse_ks(spec: &str) -> Result<Vec<usize>, CliError> {
    let ks: Vec<usize> = spec
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::usage(format!("ks: {e}")))?;
    if ks.is_empty() || ks.contains(&0) || ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::usage("ks must be ascending unique integers >= 1"));
    }
    Ok(ks)
}

fn parse_grid(spec: &str) -> Result<ThresholdGrid, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::usage("grid must be start:stop:step"));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::usage(format!("grid: {e}")))?;
    ThresholdGrid::new(nums[0], nums[1], nums[2]).map_err(CliError::usage)
}

fn cmd_evaluate(
    ctx: &Ctx,
    corpus_path: &Path,
    split_path: &Path,
    pred_valid: &Path,
    pred_test: &Path,
    ks: Option<String>,
    grid: Option<String>,
) -> Result<(), CliError> {
    let corpus = load_corpus(corpus_path)?;
    require_exists(split_path, "split file")?;
    let (assignment, _) = load_split(split_path)?;
    require_exists(pred_valid, "validation prediction file")?;
    require_exists(pred_test, "test prediction file")?;

    let ks = match ks {
        Some(spec) => parse_ks(&spec)?,
        None => match &ctx.config.ks {
            Some(ks) => ks.clone(),
            None => DEFAULT_KS.to_vec(),
        },
    };
    let grid = match grid {
        Some(spec) => parse_grid(&spec)?,
        None => match ctx.config.grid {
            Some(g) => ThresholdGrid::new(g.start, g.stop, g.step).map_err(CliError::usage)?,
            None => ThresholdGrid::default_grid(),
        },
    };

    let gold_valid = GoldLabels::from_corpus(&corpus_part(&corpus, &assignment, Split::Valid)?)?;
    let gold_test = GoldLabels::from_corpus(&corpus_part(&corpus, &assignment, Split::Test)?)?;
    let scores_valid = load_predictions(pred_valid)?;
    let scores_test = load_predictions(pred_test)?;

    let search = threshold_grid_search(&scores_valid, &gold_valid, &grid)?;
    let report = full_report(&scores_valid, &gold_valid, &scores_test, &gold_test, &ks, &grid)?;

    let report_path = ctx.out("report.json");
    save_report(&report, &report_path)?;
    let curve_path = ctx.out("threshold_curve.csv");
    save_threshold_curve(&search.curve, &curve_path)?;

    ctx.say(format!(
        "threshold {:.2} (validation micro-F1 {:.4})",
        report.threshold, search.best_micro_f1
    ));
    ctx.say(format!(
        "test micro-F1 {:.4} (P {:.4} / R {:.4}; TP {} FP {} FN {})",
        report.micro_f1,
        report.precision,
        report.recall,
        report.counts.true_positives,
        report.counts.false_positives,
        report.counts.false_negatives
    ));
    for k in &ks {
        ctx.say(format!("RP@{k} {:.4}   nDCG@{k} {:.4}", report.rp[k], report.ndcg[k]));
    }
    ctx.say(format!("wrote {} and {}", report_path.display(), curve_path.display()));
    Ok(())
}

fn cmd_schedule(ctx: &Ctx, kind: &str) -> Result<(), CliError> {
    let kind = ModelKind::parse(kind)?;
    let schedule = emit_unfreeze_schedule(kind);
    let out = ctx.out("schedule.json");
    std::fs::write(
        &out,
        serde_json::to_string_pretty(&schedule).expect("schedule serialize") + "\n",
    )?;
    ctx.say(format!("{} cycles for {} -> {}", schedule.cycles.len(), kind, out.display()));
    Ok(())
}
