//! Sentence-level transformations that turn a document corpus into
//! dialogue-style training data.
//!
//! Three operations exist: omitting the sentence with the largest character
//! 3-gram overlap with the reference summary, shuffling sentence order, and
//! prefixing every sentence with a pseudo speaker. Whatever subset is
//! requested, they always run in that order (omit, shuffle, dialogue).
//!
//! Shuffles are seeded per record so that output never depends on the order
//! or the number of workers processing a corpus. The per-record seed is
//! `splitmix64(fnv1a64(base_seed.to_le_bytes() ++ id.as_bytes()))`, and it
//! seeds a `ChaCha8Rng` driving a Fisher-Yates shuffle.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{Corpus, CorpusReader, CorpusWriter, Kind, SentenceDoc, SummaryPair};
use crate::error::{Error, Result};
use crate::extractiveness::{ngram_set, NormalizedText};
use crate::segmenter::{segment_with_id, SegmenterConfig};

pub const DEFAULT_SPEAKER_LABEL: &str = "Speaker 1";
pub const DEFAULT_NGRAM_SIZE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Omit,
    Shuffle,
    Dialogue,
}

/// The seven non-empty compositions of the three operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    D,
    S,
    O,
    DS,
    DO,
    SO,
    DSO,
}

impl Variant {
    pub const ALL: [Variant; 7] = [
        Variant::D,
        Variant::S,
        Variant::O,
        Variant::DS,
        Variant::DO,
        Variant::SO,
        Variant::DSO,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::D => "D",
            Variant::S => "S",
            Variant::O => "O",
            Variant::DS => "D+S",
            Variant::DO => "D+O",
            Variant::SO => "S+O",
            Variant::DSO => "D+S+O",
        }
    }

    pub fn ops(self) -> &'static [Op] {
        match self {
            Variant::D => &[Op::Dialogue],
            Variant::S => &[Op::Shuffle],
            Variant::O => &[Op::Omit],
            Variant::DS => &[Op::Shuffle, Op::Dialogue],
            Variant::DO => &[Op::Omit, Op::Dialogue],
            Variant::SO => &[Op::Omit, Op::Shuffle],
            Variant::DSO => &[Op::Omit, Op::Shuffle, Op::Dialogue],
        }
    }

    /// Parses a comma-separated list; `all` expands to every variant.
    pub fn parse_list(list: &str) -> Result<Vec<Variant>> {
        let mut out: Vec<Variant> = Vec::new();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if item.eq_ignore_ascii_case("all") {
                for v in Variant::ALL {
                    if !out.contains(&v) {
                        out.push(v);
                    }
                }
                continue;
            }
            let v: Variant = item.parse()?;
            if !out.contains(&v) {
                out.push(v);
            }
        }
        if out.is_empty() {
            return Err(Error::InvalidVariant(list.to_string()));
        }
        Ok(out)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    /// Accepts the canonical names, case-insensitively and with the letters
    /// in any order (`O+D` is `D+O`).
    fn from_str(s: &str) -> Result<Self> {
        let mut letters: Vec<char> = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            let mut chars = part.chars();
            let (Some(c), None) = (chars.next(), chars.next()) else {
                return Err(Error::InvalidVariant(s.to_string()));
            };
            let c = c.to_ascii_uppercase();
            if !matches!(c, 'D' | 'S' | 'O') || letters.contains(&c) {
                return Err(Error::InvalidVariant(s.to_string()));
            }
            letters.push(c);
        }
        letters.sort_by_key(|c| match c {
            'D' => 0,
            'S' => 1,
            _ => 2,
        });
        let canonical: String = letters
            .iter()
            .map(char::to_string)
            .collect::<Vec<_>>()
            .join("+");
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == canonical)
            .ok_or_else(|| Error::InvalidVariant(s.to_string()))
    }
}

/// A composition of operations with its base seed. No operations means the
/// identity (naive) transform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformSpec {
    ops: Vec<Op>,
    pub seed: u64,
    pub speaker_label: String,
    pub ngram_size: usize,
}

impl TransformSpec {
    pub fn new(ops: &[Op], seed: u64) -> Result<Self> {
        let mut sorted = ops.to_vec();
        sorted.sort();
        let distinct: HashSet<_> = sorted.iter().collect();
        if distinct.len() != sorted.len() {
            return Err(Error::InvalidArgument(format!("duplicate operation in {ops:?}")));
        }
        Ok(TransformSpec {
            ops: sorted,
            seed,
            speaker_label: DEFAULT_SPEAKER_LABEL.to_string(),
            ngram_size: DEFAULT_NGRAM_SIZE,
        })
    }

    pub fn naive(seed: u64) -> Self {
        TransformSpec::new(&[], seed).expect("empty op list is valid")
    }

    pub fn for_variant(variant: Variant, seed: u64) -> Self {
        TransformSpec::new(variant.ops(), seed).expect("variant ops are distinct")
    }

    pub fn with_speaker_label(mut self, label: impl Into<String>) -> Self {
        self.speaker_label = label.into();
        self
    }

    pub fn with_ngram_size(mut self, n: usize) -> Self {
        self.ngram_size = n;
        self
    }

    /// Operations in application order.
    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn contains(&self, op: Op) -> bool {
        self.ops.contains(&op)
    }

    pub fn is_naive(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn output_kind(&self) -> Kind {
        if self.contains(Op::Dialogue) {
            Kind::Dialogue
        } else {
            Kind::Document
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TransformReport {
    pub input_pairs: usize,
    pub output_pairs: usize,
    pub omitted: usize,
    pub omit_skipped_single_sentence: usize,
    pub omit_skipped_zero_overlap: usize,
}

impl TransformReport {
    fn record(&mut self, outcome: OmitOutcome) {
        self.input_pairs += 1;
        self.output_pairs += 1;
        match outcome {
            OmitOutcome::Omitted(_) => self.omitted += 1,
            OmitOutcome::SingleSentence => self.omit_skipped_single_sentence += 1,
            OmitOutcome::ZeroOverlap => self.omit_skipped_zero_overlap += 1,
            OmitOutcome::NotRequested => {}
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmitOutcome {
    NotRequested,
    Omitted(usize),
    SingleSentence,
    ZeroOverlap,
}

/// Stable 64-bit seed for one record.
pub fn record_seed(base_seed: u64, id: &str) -> u64 {
    const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut hash = FNV_OFFSET;
    for byte in base_seed.to_le_bytes().iter().chain(id.as_bytes()) {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(FNV_PRIME);
    }
    splitmix64(hash)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// One `label: sentence` line per sentence.
pub fn to_dialogue_format(doc: &SentenceDoc, speaker_label: &str) -> Result<String> {
    if doc.is_empty() {
        return Err(Error::EmptyInput("document has no sentences"));
    }
    let mut out = String::new();
    for (i, sentence) in doc.sentences().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(speaker_label);
        out.push_str(": ");
        out.push_str(sentence);
    }
    Ok(out)
}

pub fn shuffle_sentences(doc: &SentenceDoc, seed: u64) -> SentenceDoc {
    let mut sentences = doc.sentences().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sentences.shuffle(&mut rng);
    SentenceDoc::from_sentences_unchecked(doc.source_id().to_string(), sentences)
}

/// Drops the sentence sharing the most distinct character 3-grams with
/// `reference`.
pub fn omit_most_extractive(
    doc: &SentenceDoc,
    reference: &str,
) -> Result<(SentenceDoc, Option<usize>)> {
    let (doc, outcome) = omit_with_ngram_size(doc, reference, DEFAULT_NGRAM_SIZE)?;
    match outcome {
        OmitOutcome::Omitted(i) => Ok((doc, Some(i))),
        _ => Ok((doc, None)),
    }
}

/// Like [`omit_most_extractive`] with a configurable n-gram size, reporting
/// why nothing was removed when that happens.
///
/// Ties go to the lowest sentence index. Single-sentence documents and
/// documents where no sentence shares an n-gram with the reference are
/// returned unchanged.
pub fn omit_with_ngram_size(
    doc: &SentenceDoc,
    reference: &str,
    n: usize,
) -> Result<(SentenceDoc, OmitOutcome)> {
    if n == 0 {
        return Err(Error::InvalidArgument("n-gram size must be at least 1".into()));
    }
    let reference = NormalizedText::new(reference);
    if reference.as_str().is_empty() {
        return Err(Error::EmptyInput("reference summary"));
    }
    if doc.is_empty() {
        return Err(Error::EmptyInput("document has no sentences"));
    }
    if doc.len() == 1 {
        return Ok((doc.clone(), OmitOutcome::SingleSentence));
    }
    let reference_grams = ngram_set(reference.as_str(), n);
    let mut best: Option<(usize, usize)> = None;
    for (index, sentence) in doc.sentences().iter().enumerate() {
        let normalized = NormalizedText::new(sentence);
        let score = ngram_set(normalized.as_str(), n)
            .iter()
            .filter(|g| reference_grams.contains(*g))
            .count();
        if score > 0 && best.is_none_or(|(_, s)| score > s) {
            best = Some((index, score));
        }
    }
    match best {
        Some((index, _)) => {
            let mut sentences = doc.sentences().to_vec();
            sentences.remove(index);
            Ok((
                SentenceDoc::from_sentences_unchecked(doc.source_id().to_string(), sentences),
                OmitOutcome::Omitted(index),
            ))
        }
        None => Ok((doc.clone(), OmitOutcome::ZeroOverlap)),
    }
}

/// Applies transform specs to document pairs and corpora.
#[derive(Debug, Clone)]
pub struct Transformer {
    pub segmenter: SegmenterConfig,
    pub workers: usize,
}

impl Transformer {
    pub fn new(segmenter: SegmenterConfig) -> Self {
        Transformer {
            segmenter,
            workers: 1,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn apply(&self, pair: &SummaryPair, spec: &TransformSpec) -> Result<(SummaryPair, OmitOutcome)> {
        if pair.kind != Kind::Document {
            return Err(Error::InvalidArgument(format!(
                "record `{}` is a {} pair; transforms take document pairs",
                pair.id, pair.kind
            )));
        }
        let mut doc = segment_with_id(&pair.id, &pair.text, &self.segmenter)?;
        let mut outcome = OmitOutcome::NotRequested;
        if spec.contains(Op::Omit) {
            let (omitted, o) = omit_with_ngram_size(&doc, &pair.summary, spec.ngram_size)?;
            doc = omitted;
            outcome = o;
        }
        if spec.contains(Op::Shuffle) {
            doc = shuffle_sentences(&doc, record_seed(spec.seed, &pair.id));
        }
        let text = if spec.contains(Op::Dialogue) {
            to_dialogue_format(&doc, &spec.speaker_label)?
        } else {
            doc.joined()
        };
        Ok((
            SummaryPair {
                id: pair.id.clone(),
                text,
                summary: pair.summary.clone(),
                lang: pair.lang,
                kind: spec.output_kind(),
            },
            outcome,
        ))
    }

    fn apply_all(
        &self,
        pairs: &[SummaryPair],
        spec: &TransformSpec,
        pool: Option<&rayon::ThreadPool>,
    ) -> Result<Vec<(SummaryPair, OmitOutcome)>> {
        match pool {
            Some(pool) => pool.install(|| {
                pairs
                    .par_iter()
                    .map(|p| self.apply(p, spec))
                    .collect::<Result<Vec<_>>>()
            }),
            None => pairs.iter().map(|p| self.apply(p, spec)).collect(),
        }
    }

    fn pool(&self) -> Result<Option<rayon::ThreadPool>> {
        if self.workers <= 1 {
            return Ok(None);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map(Some)
            .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))
    }

    pub fn transform_corpus(
        &self,
        docset: &Corpus,
        spec: &TransformSpec,
        name: impl Into<String>,
    ) -> Result<(Corpus, TransformReport)> {
        if docset.kind() != Kind::Document {
            return Err(Error::InvalidArgument(format!(
                "corpus `{}` is a {} corpus; transforms take document corpora",
                docset.name(),
                docset.kind()
            )));
        }
        let pool = self.pool()?;
        let results = self.apply_all(docset.pairs(), spec, pool.as_ref())?;
        let mut report = TransformReport::default();
        let pairs = results
            .into_iter()
            .map(|(pair, outcome)| {
                report.record(outcome);
                pair
            })
            .collect();
        Ok((
            Corpus::from_parts_unchecked(name.into(), docset.lang(), spec.output_kind(), pairs),
            report,
        ))
    }

    pub fn generate_variants(
        &self,
        docset: &Corpus,
        base_seed: u64,
        speaker_label: &str,
        ngram_size: usize,
    ) -> Result<BTreeMap<Variant, (Corpus, TransformReport)>> {
        Variant::ALL
            .into_iter()
            .map(|variant| {
                let spec = TransformSpec::for_variant(variant, base_seed)
                    .with_speaker_label(speaker_label)
                    .with_ngram_size(ngram_size);
                let name = format!("{}.{}", docset.name(), variant);
                self.transform_corpus(docset, &spec, name)
                    .map(|out| (variant, out))
            })
            .collect()
    }

    /// Streams a record file through several specs at once, writing one
    /// output per spec. At most `chunk_size` input records are held in
    /// memory at a time.
    pub fn transform_stream<R: BufRead, W: Write>(
        &self,
        reader: &mut CorpusReader<R>,
        specs: &[TransformSpec],
        writers: &mut [CorpusWriter<W>],
        chunk_size: usize,
    ) -> Result<Vec<TransformReport>> {
        assert_eq!(specs.len(), writers.len(), "one writer per spec");
        if reader.kind() != Kind::Document {
            return Err(Error::InvalidArgument(format!(
                "corpus `{}` is a {} corpus; transforms take document corpora",
                reader.name(),
                reader.kind()
            )));
        }
        let pool = self.pool()?;
        let chunk_size = chunk_size.max(1);
        let mut reports = vec![TransformReport::default(); specs.len()];
        let mut chunk: Vec<SummaryPair> = Vec::with_capacity(chunk_size);
        loop {
            chunk.clear();
            for pair in reader.by_ref().take(chunk_size) {
                chunk.push(pair?);
            }
            if chunk.is_empty() {
                break;
            }
            for ((spec, writer), report) in specs.iter().zip(writers.iter_mut()).zip(&mut reports) {
                for (pair, outcome) in self.apply_all(&chunk, spec, pool.as_ref())? {
                    writer.write(&pair)?;
                    report.record(outcome);
                }
            }
        }
        if reader.records() == 0 {
            return Err(Error::EmptyCorpus(reader.name().to_string()));
        }
        Ok(reports)
    }
}

/// Transforms one document pair: segment, then omit, shuffle and
/// dialogue-format as requested. The summary is carried over unchanged.
pub fn apply_spec(
    pair: &SummaryPair,
    spec: &TransformSpec,
    segmenter_config: &SegmenterConfig,
) -> Result<SummaryPair> {
    Transformer::new(segmenter_config.clone())
        .apply(pair, spec)
        .map(|(pair, _)| pair)
}

/// All seven variants of a document corpus with the default segmenter,
/// speaker label and n-gram size for its language.
pub fn generate_variants(docset: &Corpus, base_seed: u64) -> Result<BTreeMap<Variant, Corpus>> {
    let transformer = Transformer::new(SegmenterConfig::for_lang(docset.lang()));
    Ok(transformer
        .generate_variants(docset, base_seed, DEFAULT_SPEAKER_LABEL, DEFAULT_NGRAM_SIZE)?
        .into_iter()
        .map(|(v, (corpus, _))| (v, corpus))
        .collect())
}
