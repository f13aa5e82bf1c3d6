//! Adapt document summarization corpora into dialogue summarization
//! training data, and measure summaries with model-free metrics.
//!
//! The pipeline segments each source document into sentences, applies any
//! combination of three sentence-level transforms (omit the most extractive
//! sentence, shuffle, format as a single-speaker transcript), pairs the
//! result with the original reference summary, and mixes it with dialogue
//! data for zero-shot, few-shot or full training. ROUGE and extractive
//! fragment statistics score and profile the resulting corpora.

pub mod cli;
pub mod composer;
pub mod corpus;
mod error;
pub mod extractiveness;
pub mod rouge;
pub mod segmenter;
pub mod transforms;

pub use composer::{compose, sample_dialset, Regime, RegimeSpec, TrainingVariant};
pub use corpus::{
    concat_corpora, read_corpus, write_corpus, Corpus, CorpusReader, CorpusWriter, Kind, Lang, SentenceDoc,
    SummaryPair,
};
pub use error::{Error, Result};
pub use extractiveness::{
    char_ngrams, corpus_extractiveness, coverage, density, extractive_fragments, shared_ngram_count, FragmentSet,
    NormalizedText,
};
pub use rouge::{corpus_rouge, rouge_l, rouge_n, RougeScore};
pub use segmenter::{segment, SegmenterConfig};
pub use transforms::{
    apply_spec, generate_variants, omit_most_extractive, shuffle_sentences, to_dialogue_format, Op,
    TransformReport, TransformSpec, Transformer, Variant,
};
