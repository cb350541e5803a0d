//! Command-line frontend: `ingest`, `run`, `calibrate` and `report`.

use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{
    build_position_table, chi_square_independence, classify_pr, heatmap_matrix, reuse_rates, AnalysisError,
    ArticleLayout, PrType,
};
use crate::calibration::{
    aggregate, derive_threshold, load_pairs, score_pair, write_report_csv, CalibrationError, GroupBy,
};
use crate::config::{Config, ConfigError, ProviderKind};
use crate::corpus::{load_corpus, Corpus, CorpusError, Role};
use crate::embedding::{EmbeddingError, EmbeddingProvider, HashEmbedder, SidecarClient};
use crate::linguistic::{
    segment_corpus, Annotator, ExternalAnnotations, LinguisticError, Segmenter, Sentence, SentenceKey,
};
use crate::matcher::{match_pipeline, MatchError, MatchSet, SearchStats};
use crate::reporting::{
    chi_square_json, heatmap_json, heatmap_svg, reused_term_frequencies, terms_json, write_accounting_csv,
    write_contingency_csv, write_file, write_matches_csv, HeatmapStyle, ReportError, Stopwords,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISSING_INPUT: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_PROVIDER: i32 = 4;
pub const EXIT_INVARIANT: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("missing input: {0}")]
    MissingInput(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Linguistic(#[from] LinguisticError),
    #[error(transparent)]
    Match(#[from] MatchError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Calibration(#[from] CalibrationError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Report(#[from] ReportError),
}

fn embedding_code(e: &EmbeddingError) -> i32 {
    match e {
        EmbeddingError::ProviderUnavailable(_)
        | EmbeddingError::Provider(_)
        | EmbeddingError::DimMismatch { .. }
        | EmbeddingError::BatchTooLarge { .. } => EXIT_PROVIDER,
        EmbeddingError::BadMagic | EmbeddingError::TruncatedFile | EmbeddingError::BadKey => EXIT_PARSE,
        EmbeddingError::Io { .. } => EXIT_MISSING_INPUT,
        _ => EXIT_INVARIANT,
    }
}

fn linguistic_code(e: &LinguisticError) -> i32 {
    match e {
        LinguisticError::Io { .. } => EXIT_MISSING_INPUT,
        LinguisticError::RoleMismatch { .. } => EXIT_INVARIANT,
        _ => EXIT_PARSE,
    }
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::MissingInput(_) => EXIT_MISSING_INPUT,
            CliError::Config(ConfigError::Io { .. }) => EXIT_MISSING_INPUT,
            CliError::Config(_) => EXIT_PARSE,
            CliError::Corpus(CorpusError::Io { .. }) => EXIT_MISSING_INPUT,
            CliError::Corpus(_) => EXIT_PARSE,
            CliError::Linguistic(e) => linguistic_code(e),
            CliError::Match(MatchError::Embedding(e)) | CliError::Embedding(e) => embedding_code(e),
            CliError::Match(MatchError::Linguistic(e)) => linguistic_code(e),
            CliError::Match(MatchError::BadRecord { .. }) => EXIT_PARSE,
            CliError::Match(_) => EXIT_INVARIANT,
            CliError::Calibration(CalibrationError::Io { .. }) => EXIT_MISSING_INPUT,
            CliError::Calibration(CalibrationError::BadRecord { .. } | CalibrationError::EmptyText { .. }) => {
                EXIT_PARSE
            }
            CliError::Calibration(CalibrationError::MissingLabel(_)) => EXIT_PARSE,
            CliError::Calibration(CalibrationError::Embedding(e)) => embedding_code(e),
            CliError::Calibration(_) => EXIT_INVARIANT,
            CliError::Analysis(_) | CliError::Report(_) => EXIT_INVARIANT,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "newsreuse", version, about = "Sentence-level cross-lingual text reuse detection for news")]
pub struct Cli {
    /// Log verbosity (error, warn, info, debug, trace).
    #[arg(long, global = true, default_value = "warn")]
    pub log_level: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate and normalize both corpora, printing per-language counts.
    Ingest(Overrides),
    /// Run the full pipeline and write every artifact.
    Run(Overrides),
    /// Score known-reuse pairs and recommend a threshold.
    Calibrate(CalibrateArgs),
    /// Rebuild analysis artifacts from an existing matches.jsonl.
    Report(ReportArgs),
}

/// Flags shared by commands that read a config; each one wins over the file.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub target: Option<PathBuf>,
    #[arg(long)]
    pub source: Option<PathBuf>,
    #[arg(long)]
    pub threshold: Option<f32>,
    #[arg(long, value_enum)]
    pub provider: Option<ProviderKind>,
    #[arg(long)]
    pub sidecar_url: Option<String>,
    #[arg(long)]
    pub embed_dim: Option<usize>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub parallelism: Option<usize>,
    #[arg(long)]
    pub heatmap_max: Option<u32>,
    #[arg(long)]
    pub top_k_sentences: Option<usize>,
    #[arg(long)]
    pub annotations: Option<PathBuf>,
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
}

impl Overrides {
    /// Loads the config file (or defaults) and applies the flags.
    pub fn resolve(&self) -> Result<Config, CliError> {
        let mut c = match &self.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        macro_rules! set {
            ($($field:ident => $target:ident),* $(,)?) => {
                $(if let Some(v) = &self.$field { c.$target = v.clone().into(); })*
            };
        }
        set!(threshold => threshold, provider => provider, sidecar_url => sidecar_url, embed_dim => embed_dim,
             out_dir => out_dir, parallelism => parallelism, heatmap_max => heatmap_max,
             top_k_sentences => top_k_sentences);
        set!(target => target_path, source => source_path, annotations => annotations_path,
             stopwords => stopwords_path);
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// JSONL file of text pairs.
    #[arg(long)]
    pub pairs: PathBuf,
    /// `language` or `paraphrase`.
    #[arg(long, default_value = "language")]
    pub group_by: GroupBy,
    /// Also write the report CSV here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Match records; defaults to `<out-dir>/matches.jsonl`.
    #[arg(long)]
    pub matches: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: Overrides,
}

fn require(path: Option<&PathBuf>, what: &str) -> Result<PathBuf, CliError> {
    let path = path.ok_or_else(|| CliError::MissingInput(format!("no {what} path given")))?;
    if !path.is_file() {
        return Err(CliError::MissingInput(format!("{what} file {} not found", path.display())));
    }
    Ok(path.clone())
}

/// Loads both corpora named by the config.
pub fn load_corpora(config: &Config) -> Result<(Corpus, Corpus), CliError> {
    let langs = config.languages();
    let target = load_corpus(&require(config.target_path.as_ref(), "target corpus")?, Role::Target, &langs)?;
    let source = load_corpus(&require(config.source_path.as_ref(), "source corpus")?, Role::Source, &langs)?;
    Ok((target, source))
}

pub fn build_provider(config: &Config) -> Result<Box<dyn EmbeddingProvider>, CliError> {
    Ok(match config.provider {
        ProviderKind::Builtin => Box::new(HashEmbedder::new(config.embed_dim)),
        ProviderKind::Sidecar => Box::new(SidecarClient::connect(&config.sidecar_url, config.embed_dim)?),
    })
}

pub fn build_annotator(config: &Config) -> Result<Annotator, CliError> {
    Ok(match &config.annotations_path {
        Some(path) => Annotator::External(ExternalAnnotations::from_file(&require(Some(path), "annotations")?)?),
        None => Annotator::default(),
    })
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| ReportError::Io { path: dir.to_owned(), source }.into())
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> Result<(), ReportError>) -> Result<Vec<u8>, ReportError> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

#[derive(Serialize)]
struct PrPair<'a> {
    target_key: &'a SentenceKey,
    source_key: &'a SentenceKey,
    #[serde(rename = "type")]
    pr_type: PrType,
}

#[derive(Serialize)]
struct PrReport<'a> {
    #[serde(flatten)]
    distribution: &'a crate::analysis::PrDistribution,
    pairs: Vec<PrPair<'a>>,
}

#[derive(Serialize)]
struct DegenerateChiSquare<'a> {
    table: &'a crate::analysis::ContingencyTable,
    error: String,
}

/// Writes every analysis and report artifact for a finished match set and
/// returns the paths written, in order.
pub fn write_reports(
    config: &Config,
    target: &Corpus,
    source: &Corpus,
    match_set: &MatchSet,
    target_sentences: &[Sentence],
    source_sentences: &[Sentence],
) -> Result<Vec<PathBuf>, CliError> {
    let dir = &config.out_dir;
    ensure_dir(dir)?;
    let mut written = Vec::new();
    let mut emit = |name: &str, bytes: Vec<u8>| -> Result<(), CliError> {
        let path = dir.join(name);
        write_file(&path, bytes)?;
        written.push(path);
        Ok(())
    };

    emit("accounting.csv", csv_bytes(|b| write_accounting_csv(match_set, b))?)?;
    emit("rates.json", serde_json_bytes(&reuse_rates(match_set, target, source))?)?;

    let target_layout = ArticleLayout::build(target, target_sentences);
    let source_layout = ArticleLayout::build(source, source_sentences);
    let table = build_position_table(match_set.attributed(), &target_layout, &source_layout)?;
    emit("positions.csv", csv_bytes(|b| write_contingency_csv(&table, "source\\target", b))?)?;
    let chi = match chi_square_independence(&table) {
        Ok(result) => chi_square_json(&table, &result)?,
        Err(e @ (AnalysisError::DegenerateTable(_) | AnalysisError::NoDegreesOfFreedom { .. })) => {
            log::warn!("chi-square test skipped: {e}");
            serde_json::to_string_pretty(&DegenerateChiSquare { table: &table, error: e.to_string() })
                .map_err(ReportError::from)?
        }
        Err(e) => return Err(e.into()),
    };
    emit("chi_square.json", with_newline(chi))?;

    let pr = classify_pr(match_set.attributed());
    let report = PrReport {
        distribution: &pr.distribution,
        pairs: pr.pairs.iter().map(|((t, s), ty)| PrPair { target_key: t, source_key: s, pr_type: *ty }).collect(),
    };
    emit("pr.json", serde_json_bytes(&report)?)?;

    let style = HeatmapStyle { max: config.heatmap_max, divider: config.heatmap_divider };
    for (corpus, layout, name) in [(target, &target_layout, "target"), (source, &source_layout, "source")] {
        let matrix = heatmap_matrix(match_set.attributed(), corpus, layout, corpus.role())?;
        emit(&format!("heatmap_{name}.json"), with_newline(heatmap_json(&matrix)?))?;
        match heatmap_svg(&matrix, &style) {
            Ok(svg) => emit(&format!("heatmap_{name}.svg"), svg.into_bytes())?,
            Err(ReportError::EmptyMatrix) => log::warn!("{name} corpus is empty; no heatmap SVG"),
            Err(e) => return Err(e.into()),
        }
    }

    let stopwords = match &config.stopwords_path {
        Some(path) => Stopwords::from_file(&require(Some(path), "stopwords")?)
            .map_err(|source| ReportError::Io { path: path.clone(), source })?,
        None => Stopwords::builtin_english(),
    };
    let texts: HashMap<SentenceKey, &str> = target_sentences.iter().map(|s| (s.key(), s.text.as_str())).collect();
    let terms =
        reused_term_frequencies(match_set.attributed(), |k| texts.get(k).copied(), config.top_k_sentences, &stopwords);
    emit("terms.json", with_newline(terms_json(&terms)?))?;
    Ok(written)
}

fn with_newline(mut s: String) -> Vec<u8> {
    s.push('\n');
    s.into_bytes()
}

fn serde_json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, ReportError> {
    Ok(with_newline(serde_json::to_string_pretty(value)?))
}

/// Result of [`run`].
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub match_set: MatchSet,
    pub artifacts: Vec<PathBuf>,
}

/// Full pipeline plus every artifact under `config.out_dir`.
pub fn run(config: &Config) -> Result<RunOutcome, CliError> {
    let (target, source) = load_corpora(config)?;
    let annotator = build_annotator(config)?;
    let provider = build_provider(config)?;
    let segmenter = Segmenter::builtin();
    let output = match_pipeline(&target, &source, &segmenter, &annotator, provider.as_ref(), &config.match_config())?;

    let dir = &config.out_dir;
    ensure_dir(dir)?;
    let mut artifacts = Vec::new();
    let mut jsonl = Vec::new();
    output
        .match_set
        .write_jsonl(&mut jsonl)
        .map_err(|source| ReportError::Io { path: dir.join("matches.jsonl"), source })?;
    for (name, bytes) in [
        ("matches.jsonl", jsonl),
        ("matches.csv", csv_bytes(|b| write_matches_csv(&output.match_set, b))?),
        ("summary.json", with_newline(output.match_set.summary_json())),
    ] {
        let path = dir.join(name);
        write_file(&path, bytes)?;
        artifacts.push(path);
    }
    let store_path = dir.join("vectors.emb1");
    output.store.write(&store_path)?;
    artifacts.push(store_path);

    let target_sentences: Vec<Sentence> = output.target_sentences.iter().map(|s| s.sentence.clone()).collect();
    artifacts.extend(write_reports(
        config,
        &target,
        &source,
        &output.match_set,
        &target_sentences,
        &output.source_sentences,
    )?);
    Ok(RunOutcome { match_set: output.match_set, artifacts })
}

fn cmd_ingest(config: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let (target, source) = load_corpora(config)?;
    ensure_dir(&config.out_dir)?;
    for corpus in [&target, &source] {
        let role = corpus.role();
        let path = config.out_dir.join(format!("{role}.jsonl"));
        let mut buf = Vec::new();
        corpus.write_jsonl(&mut buf).map_err(|source| ReportError::Io { path: path.clone(), source })?;
        write_file(&path, buf)?;
        let stats = corpus.stats();
        let _ = writeln!(out, "{role}: {} articles", stats.articles);
        for (lang, n) in &stats.by_language {
            let _ = writeln!(out, "  {lang}\t{n}");
        }
    }
    Ok(())
}

fn cmd_run(config: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let outcome = run(config)?;
    let a = &outcome.match_set.accounting;
    let _ = writeln!(
        out,
        "{} raw pairs, {} true matches, {} attributed, {} false positives",
        a.raw.pairs, a.true_matches.pairs, a.earliest.pairs, a.false_positives.pairs
    );
    for path in &outcome.artifacts {
        let _ = writeln!(out, "wrote {}", path.display());
    }
    Ok(())
}

fn cmd_calibrate(args: &CalibrateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let config = args.overrides.resolve()?;
    let pairs = load_pairs(&require(Some(&args.pairs), "pairs")?)?;
    let provider = build_provider(&config)?;
    let segmenter = Segmenter::builtin();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| MatchError::ThreadPool(e.to_string()))?;
    let scores = pool.install(|| {
        use rayon::prelude::*;
        pairs.par_iter().map(|p| score_pair(p, &segmenter, provider.as_ref())).collect::<Result<Vec<_>, _>>()
    })?;
    let report = aggregate(&scores, args.group_by)?;

    let csv = csv_bytes(|b| write_report_csv(&report, b).map_err(ReportError::from))?;
    if let Some(path) = &args.out {
        write_file(path, &csv)?;
    }
    let _ = out.write_all(&csv);
    match derive_threshold(&report) {
        Ok(t) => {
            let _ = writeln!(out, "recommended threshold: {t:.2}");
        }
        Err(e @ (CalibrationError::NoSeparation { .. } | CalibrationError::NoMeans)) => {
            let _ = writeln!(err, "warning: {e}");
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn cmd_report(args: &ReportArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let config = args.overrides.resolve()?;
    let (target, source) = load_corpora(&config)?;
    let matches_path = args.matches.clone().unwrap_or_else(|| config.out_dir.join("matches.jsonl"));
    let text = fs::read_to_string(require(Some(&matches_path), "matches")?)
        .map_err(|e| CliError::MissingInput(format!("{}: {e}", matches_path.display())))?;
    let match_set = MatchSet::read_jsonl(&text, config.threshold, SearchStats::default())?;
    let segmenter = Segmenter::builtin();
    let target_sentences = segment_corpus(&target, &segmenter);
    let source_sentences = segment_corpus(&source, &segmenter);
    let written = write_reports(&config, &target, &source, &match_set, &target_sentences, &source_sentences)?;
    for path in written {
        let _ = writeln!(out, "wrote {}", path.display());
    }
    Ok(())
}

/// Dispatches a parsed command line. Output goes to `out`, warnings to `err`.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Ingest(o) => cmd_ingest(&o.resolve()?, out),
        Command::Run(o) => cmd_run(&o.resolve()?, out),
        Command::Calibrate(args) => cmd_calibrate(args, out, err),
        Command::Report(args) => cmd_report(args, out),
    }
}

/// Parses `args`, runs the command and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_MISSING_INPUT } else { EXIT_OK };
        }
    };
    let _ = env_logger::Builder::new().parse_filters(&cli.log_level).try_init();
    let stdout = io::stdout();
    let stderr = io::stderr();
    match execute(&cli, &mut stdout.lock(), &mut stderr.lock()) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
