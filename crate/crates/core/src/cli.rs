//! Command-line front end: `transform`, `stats`, `score` and `compose`.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::composer::{compose, Regime, RegimeSpec, TrainingVariant};
use crate::corpus::{read_corpus, write_corpus, CorpusReader, CorpusWriter, Kind, Lang};
use crate::extractiveness::corpus_extractiveness;
use crate::rouge::{corpus_rouge, read_candidates};
use crate::segmenter::SegmenterConfig;
use crate::transforms::{
    TransformReport, TransformSpec, Transformer, Variant, DEFAULT_NGRAM_SIZE, DEFAULT_SPEAKER_LABEL,
};

pub const SEED_ENV: &str = "DIALFORGE_SEED";
const STREAM_CHUNK: usize = 4096;

#[derive(Debug, Parser)]
#[command(name = "dialforge", version, about = "Turn document summarization corpora into dialogue summarization training data")]
pub struct Cli {
    /// TOML file with defaults for any flag; explicit flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write one transformed corpus per variant: <output-dir>/<input-stem>.<variant>.jsonl
    Transform(TransformArgs),
    /// Extractive fragment density and coverage of reference summaries
    Stats(StatsArgs),
    /// ROUGE-1/2/L F1 (x100) of candidate summaries against references, aligned by id
    Score(ScoreArgs),
    /// Build training mixes, one file per cell: <output-dir>/<variant>_<regime>[_k<k>]_s<seed>.jsonl
    Compose(ComposeArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct PipelineArgs {
    #[arg(long, value_parser = parse_lang)]
    pub lang: Option<Lang>,

    /// Base seed for all randomness
    #[arg(long, env = SEED_ENV)]
    pub seed: Option<u64>,

    #[arg(long)]
    pub speaker_label: Option<String>,

    /// Character n-gram size for sentence omission
    #[arg(long)]
    pub ngram_size: Option<usize>,

    /// Extra abbreviations, one token per line
    #[arg(long)]
    pub abbrev_file: Option<PathBuf>,

    /// Worker threads for per-record work; output does not depend on it
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct TransformArgs {
    /// Document corpus (alternative to --input)
    #[arg(value_name = "INPUT", conflicts_with = "input")]
    pub input_pos: Option<PathBuf>,

    #[arg(long)]
    pub input: Option<PathBuf>,

    #[arg(long)]
    pub output_dir: Option<PathBuf>,

    /// Comma-separated subset of D,S,O,D+S,D+O,S+O,D+S+O, or `all`
    #[arg(long)]
    pub variants: Option<String>,

    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

#[derive(Debug, Clone, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long, value_parser = parse_lang)]
    pub lang: Option<Lang>,

    #[arg(long, value_parser = parse_kind, default_value = "document")]
    pub kind: Kind,

    /// Output file (stdout when omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ScoreArgs {
    /// Records with `id` and `summary` fields
    #[arg(long)]
    pub candidates: PathBuf,

    #[arg(long)]
    pub references: PathBuf,

    #[arg(long, value_parser = parse_lang)]
    pub lang: Option<Lang>,

    #[arg(long, value_parser = parse_kind, default_value = "dialogue")]
    pub kind: Kind,

    /// Output file (stdout when omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ComposeArgs {
    /// Untransformed document corpus
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Dialogue corpus
    #[arg(long)]
    pub dialset: PathBuf,

    #[arg(long)]
    pub output_dir: Option<PathBuf>,

    /// Comma-separated list of Original, Naive and transform variants, or `all`
    #[arg(long)]
    pub variants: Option<String>,

    /// Comma-separated subset of zero,few,full
    #[arg(long, default_value = "few")]
    pub regime: String,

    /// Comma-separated few-shot sample sizes
    #[arg(long, default_value = "100,1000")]
    pub k: String,

    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

/// Optional file-based defaults.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CliConfig {
    pub output_dir: Option<PathBuf>,
    pub lang: Option<Lang>,
    pub variants: Option<String>,
    pub seed: Option<u64>,
    pub speaker_label: Option<String>,
    pub ngram_size: Option<usize>,
    pub abbrev_file: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl CliConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let body = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&body).with_context(|| format!("parsing {}", path.display()))
    }
}

fn parse_lang(s: &str) -> Result<Lang, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

/// Flags merged over the config file over built-in defaults.
#[derive(Debug, Clone)]
struct Resolved {
    lang: Lang,
    seed: u64,
    speaker_label: String,
    ngram_size: usize,
    segmenter: SegmenterConfig,
    workers: usize,
}

fn resolve(flags: &PipelineArgs, config: &CliConfig) -> anyhow::Result<Resolved> {
    let lang = flags.lang.or(config.lang).unwrap_or(Lang::En);
    let ngram_size = flags.ngram_size.or(config.ngram_size).unwrap_or(DEFAULT_NGRAM_SIZE);
    if ngram_size == 0 {
        bail!("--ngram-size must be at least 1");
    }
    let mut segmenter = SegmenterConfig::for_lang(lang);
    if let Some(path) = flags.abbrev_file.as_ref().or(config.abbrev_file.as_ref()) {
        segmenter.load_abbreviations(path)?;
    }
    Ok(Resolved {
        lang,
        seed: flags.seed.or(config.seed).unwrap_or(0),
        speaker_label: flags
            .speaker_label
            .clone()
            .or_else(|| config.speaker_label.clone())
            .unwrap_or_else(|| DEFAULT_SPEAKER_LABEL.to_string()),
        ngram_size,
        segmenter,
        workers: flags.workers.or(config.workers).unwrap_or(1).max(1),
    })
}

fn output_dir(flag: &Option<PathBuf>, config: &CliConfig) -> anyhow::Result<PathBuf> {
    let dir = flag
        .clone()
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct VariantOutput {
    pub variant: String,
    pub path: PathBuf,
    #[serde(flatten)]
    pub report: TransformReport,
}

pub fn cmd_transform(args: &TransformArgs, config: &CliConfig) -> anyhow::Result<Vec<VariantOutput>> {
    let Some(input) = args.input.as_ref().or(args.input_pos.as_ref()) else {
        bail!("an input corpus is required (positional or --input)");
    };
    let variants_arg = args.variants.clone().or_else(|| config.variants.clone()).unwrap_or_else(|| "all".into());
    let variants = Variant::parse_list(&variants_arg)?;
    let resolved = resolve(&args.pipeline, config)?;
    let dir = output_dir(&args.output_dir, config)?;

    let mut reader = CorpusReader::open(input, resolved.lang, Kind::Document)?;
    let stem = reader.name().to_string();
    let specs: Vec<TransformSpec> = variants
        .iter()
        .map(|&v| {
            TransformSpec::for_variant(v, resolved.seed)
                .with_speaker_label(resolved.speaker_label.clone())
                .with_ngram_size(resolved.ngram_size)
        })
        .collect();
    let paths: Vec<PathBuf> = variants.iter().map(|v| dir.join(format!("{stem}.{v}.jsonl"))).collect();
    let mut writers = paths.iter().map(CorpusWriter::create).collect::<Result<Vec<_>, _>>()?;

    let transformer = Transformer::new(resolved.segmenter).with_workers(resolved.workers);
    let reports = transformer.transform_stream(&mut reader, &specs, &mut writers, STREAM_CHUNK)?;
    let mut outputs = Vec::with_capacity(variants.len());
    for (((variant, path), writer), report) in variants.iter().zip(paths).zip(writers).zip(reports) {
        let written = writer.finish()?;
        if written != report.input_pairs {
            bail!("{}: wrote {written} of {} records", path.display(), report.input_pairs);
        }
        outputs.push(VariantOutput {
            variant: variant.to_string(),
            path,
            report,
        });
    }
    Ok(outputs)
}

fn open_output(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(
            fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    })
}

pub fn cmd_stats(args: &StatsArgs, config: &CliConfig) -> anyhow::Result<crate::extractiveness::ExtractivenessReport> {
    let lang = args.lang.or(config.lang).unwrap_or(Lang::En);
    let corpus = read_corpus(&args.input, lang, args.kind)?;
    let report = corpus_extractiveness(&corpus)?;
    let mut out = open_output(&args.output)?;
    for pair in &report.pairs {
        serde_json::to_writer(&mut out, pair)?;
        writeln!(out)?;
    }
    let aggregate = serde_json::json!({
        "aggregate": {
            "pairs": report.pairs.len(),
            "density": report.density,
            "coverage": report.coverage,
        }
    });
    serde_json::to_writer(&mut out, &aggregate)?;
    writeln!(out)?;
    out.flush()?;
    Ok(report)
}

pub fn cmd_score(args: &ScoreArgs, config: &CliConfig) -> anyhow::Result<crate::rouge::CorpusRouge> {
    let lang = args.lang.or(config.lang).unwrap_or(Lang::En);
    let references = read_corpus(&args.references, lang, args.kind)?;
    let candidates = read_candidates(&args.candidates)?;
    let scores = corpus_rouge(&candidates, &references)?;
    let mut out = open_output(&args.output)?;
    for pair in &scores.pairs {
        writeln!(
            out,
            "{{\"id\":{},\"r1\":{:.2},\"r2\":{:.2},\"rl\":{:.2}}}",
            serde_json::to_string(&pair.id)?,
            100.0 * pair.scores.rouge1.f1,
            100.0 * pair.scores.rouge2.f1,
            100.0 * pair.scores.rouge_l.f1,
        )?;
    }
    writeln!(
        out,
        "{{\"aggregate\":{{\"pairs\":{},\"r1\":{:.2},\"r2\":{:.2},\"rl\":{:.2}}}}}",
        scores.pairs.len(),
        scores.r1,
        scores.r2,
        scores.rl
    )?;
    out.flush()?;
    eprintln!("R1 / R2 / RL: {:.2} / {:.2} / {:.2}", scores.r1, scores.r2, scores.rl);
    Ok(scores)
}

fn parse_training_variants(list: &str) -> anyhow::Result<Vec<TrainingVariant>> {
    let mut out = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let expanded: Vec<TrainingVariant> = if item.eq_ignore_ascii_case("all") {
            Variant::ALL.into_iter().map(TrainingVariant::Transformed).collect()
        } else {
            vec![item.parse()?]
        };
        for v in expanded {
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    if out.is_empty() {
        bail!("no variants requested");
    }
    Ok(out)
}

fn parse_list<T: std::str::FromStr>(list: &str, what: &str) -> anyhow::Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    let items = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| anyhow::anyhow!("invalid {what} `{s}`: {e}")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    if items.is_empty() {
        bail!("no {what} given");
    }
    Ok(items)
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ComposedOutput {
    pub name: String,
    pub path: PathBuf,
    pub pairs: usize,
}

pub fn cmd_compose(args: &ComposeArgs, config: &CliConfig) -> anyhow::Result<Vec<ComposedOutput>> {
    let variants_arg = args.variants.clone().or_else(|| config.variants.clone()).unwrap_or_else(|| "all".into());
    let variants = parse_training_variants(&variants_arg)?;
    let regimes: Vec<Regime> = parse_list(&args.regime, "regime")?;
    let ks: Vec<usize> = parse_list(&args.k, "k")?;
    let resolved = resolve(&args.pipeline, config)?;

    let mut grid = Vec::new();
    for &variant in &variants {
        for &regime in &regimes {
            if regime == Regime::FewShot {
                for &k in &ks {
                    grid.push(RegimeSpec::new(regime, Some(k), resolved.seed, variant)?);
                }
            } else {
                grid.push(RegimeSpec::new(regime, None, resolved.seed, variant)?);
            }
        }
    }

    let dialset = read_corpus(&args.dialset, resolved.lang, Kind::Dialogue)?;
    if let Some(spec) = grid.iter().find(|s| s.k().is_some_and(|k| k > dialset.len())) {
        bail!("{spec}: k exceeds the {} pairs of {}", dialset.len(), args.dialset.display());
    }
    let needs_docs = variants.iter().any(|v| *v != TrainingVariant::Original);
    let docset = match (&args.input, needs_docs) {
        (Some(path), true) => Some(read_corpus(path, resolved.lang, Kind::Document)?),
        (None, true) => bail!("--input (document corpus) is required unless only Original is requested"),
        _ => None,
    };
    let dir = output_dir(&args.output_dir, config)?;
    let transformer = Transformer::new(resolved.segmenter.clone()).with_workers(resolved.workers);

    let mut outputs = Vec::new();
    for &variant in &variants {
        let newdocset = match (variant, &docset) {
            (TrainingVariant::Original, _) | (_, None) => dialset.clone(),
            (TrainingVariant::Naive, Some(docs)) => {
                let spec = TransformSpec::naive(resolved.seed);
                transformer.transform_corpus(docs, &spec, docs.name())?.0
            }
            (TrainingVariant::Transformed(v), Some(docs)) => {
                let spec = TransformSpec::for_variant(v, resolved.seed)
                    .with_speaker_label(resolved.speaker_label.clone())
                    .with_ngram_size(resolved.ngram_size);
                transformer.transform_corpus(docs, &spec, docs.name())?.0
            }
        };
        for spec in grid.iter().filter(|s| s.variant() == variant) {
            let composed = compose(&newdocset, &dialset, spec)?;
            let path = dir.join(format!("{}.jsonl", spec.name()));
            write_corpus(&composed, &path)?;
            outputs.push(ComposedOutput {
                name: spec.name(),
                path,
                pairs: composed.len(),
            });
        }
    }
    Ok(outputs)
}

/// Parses arguments, runs the subcommand and reports results on stdout.
pub fn run(cli: Cli) -> anyhow::Result<()> {
    let config = match &cli.config {
        Some(path) => CliConfig::load(path)?,
        None => CliConfig::default(),
    };
    match &cli.command {
        Command::Transform(args) => {
            for output in cmd_transform(args, &config)? {
                println!("{}", serde_json::to_string(&output)?);
            }
        }
        Command::Stats(args) => {
            cmd_stats(args, &config)?;
        }
        Command::Score(args) => {
            cmd_score(args, &config)?;
        }
        Command::Compose(args) => {
            for output in cmd_compose(args, &config)? {
                println!("{}", serde_json::to_string(&output)?);
            }
        }
    }
    Ok(())
}
