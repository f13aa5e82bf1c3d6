//! Summarization corpora and their line-delimited record files.
//!
//! Each line of a corpus file is one JSON object with the fields `id`, `text`,
//! `summary` and optionally `lang` and `kind`. Dialogue transcripts keep one
//! `Speaker: utterance` turn per line inside `text`. Records without an `id`
//! receive `<corpus-name>-<zero-padded record index>`.

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lang {
    En,
    Ko,
}

impl Lang {
    pub fn as_str(self) -> &'static str {
        match self {
            Lang::En => "en",
            Lang::Ko => "ko",
        }
    }
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Lang {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "en" => Ok(Lang::En),
            "ko" => Ok(Lang::Ko),
            other => Err(Error::InvalidArgument(format!("unknown language `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Document,
    Dialogue,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Document => "document",
            Kind::Dialogue => "dialogue",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "document" => Ok(Kind::Document),
            "dialogue" => Ok(Kind::Dialogue),
            other => Err(Error::InvalidArgument(format!("unknown kind `{other}`"))),
        }
    }
}

/// One (source text, reference summary) record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SummaryPair {
    pub id: String,
    pub text: String,
    pub summary: String,
    pub lang: Lang,
    pub kind: Kind,
}

impl SummaryPair {
    pub fn new(
        id: impl Into<String>,
        text: impl Into<String>,
        summary: impl Into<String>,
        lang: Lang,
        kind: Kind,
    ) -> Self {
        SummaryPair {
            id: id.into(),
            text: text.into(),
            summary: summary.into(),
            lang,
            kind,
        }
    }

    fn check(&self) -> std::result::Result<(), String> {
        if self.id.is_empty() {
            return Err("empty id".into());
        }
        if self.text.trim().is_empty() {
            return Err(format!("record `{}` has empty text", self.id));
        }
        if self.summary.trim().is_empty() {
            return Err(format!("record `{}` has empty summary", self.id));
        }
        Ok(())
    }
}

/// An ordered collection of pairs sharing one language and kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    name: String,
    lang: Lang,
    kind: Kind,
    pairs: Vec<SummaryPair>,
}

impl Corpus {
    /// Builds a corpus, checking id uniqueness, non-empty fields and that
    /// every pair carries the corpus language and kind.
    pub fn new(
        name: impl Into<String>,
        lang: Lang,
        kind: Kind,
        pairs: Vec<SummaryPair>,
    ) -> Result<Self> {
        let name = name.into();
        let mut seen = HashSet::with_capacity(pairs.len());
        for (index, pair) in pairs.iter().enumerate() {
            pair.check().map_err(Error::InvalidArgument)?;
            if pair.lang != lang || pair.kind != kind {
                return Err(Error::InvalidArgument(format!(
                    "record `{}` is {}/{}, corpus `{name}` is {lang}/{kind}",
                    pair.id, pair.lang, pair.kind
                )));
            }
            if !seen.insert(pair.id.as_str()) {
                return Err(Error::DuplicateId {
                    id: pair.id.clone(),
                    line: index + 1,
                });
            }
        }
        Ok(Corpus {
            name,
            lang,
            kind,
            pairs,
        })
    }

    pub(crate) fn from_parts_unchecked(
        name: String,
        lang: Lang,
        kind: Kind,
        pairs: Vec<SummaryPair>,
    ) -> Self {
        Corpus {
            name,
            lang,
            kind,
            pairs,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lang(&self) -> Lang {
        self.lang
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn pairs(&self) -> &[SummaryPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SummaryPair> {
        self.pairs.iter()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn into_pairs(self) -> Vec<SummaryPair> {
        self.pairs
    }
}

impl<'a> IntoIterator for &'a Corpus {
    type Item = &'a SummaryPair;
    type IntoIter = std::slice::Iter<'a, SummaryPair>;

    fn into_iter(self) -> Self::IntoIter {
        self.pairs.iter()
    }
}

/// A source text resolved into its ordered, non-empty sentences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceDoc {
    source_id: String,
    sentences: Vec<String>,
}

impl SentenceDoc {
    pub fn new(source_id: impl Into<String>, sentences: Vec<String>) -> Result<Self> {
        if sentences.is_empty() {
            return Err(Error::EmptyInput("document has no sentences"));
        }
        if sentences.iter().any(|s| s.trim().is_empty()) {
            return Err(Error::InvalidArgument("empty sentence".into()));
        }
        Ok(SentenceDoc {
            source_id: source_id.into(),
            sentences,
        })
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    pub fn sentences(&self) -> &[String] {
        &self.sentences
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    /// Sentences joined by single spaces.
    pub fn joined(&self) -> String {
        self.sentences.join(" ")
    }

    pub(crate) fn from_sentences_unchecked(source_id: String, sentences: Vec<String>) -> Self {
        SentenceDoc {
            source_id,
            sentences,
        }
    }
}

#[derive(Deserialize)]
struct RecordIn {
    id: Option<String>,
    text: String,
    summary: String,
    lang: Option<Lang>,
    kind: Option<Kind>,
}

#[derive(Serialize)]
struct RecordOut<'a> {
    id: &'a str,
    text: &'a str,
    summary: &'a str,
    lang: Lang,
    kind: Kind,
}

/// Serializes one pair as a single compact JSON line (without the newline).
pub fn encode_record(pair: &SummaryPair) -> String {
    serde_json::to_string(&RecordOut {
        id: &pair.id,
        text: &pair.text,
        summary: &pair.summary,
        lang: pair.lang,
        kind: pair.kind,
    })
    .expect("record serialization is infallible")
}

/// Streams pairs out of a record file, validating each line as it goes.
pub struct CorpusReader<R> {
    input: R,
    path: PathBuf,
    name: String,
    lang: Lang,
    kind: Kind,
    line: usize,
    records: usize,
    seen: HashSet<String>,
    buf: String,
}

impl CorpusReader<BufReader<File>> {
    pub fn open(path: impl AsRef<Path>, lang: Lang, kind: Kind) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Ok(CorpusReader::new(
            BufReader::new(file),
            path,
            corpus_name_from_path(path),
            lang,
            kind,
        ))
    }
}

impl<R: BufRead> CorpusReader<R> {
    pub fn new(
        input: R,
        path: impl Into<PathBuf>,
        name: impl Into<String>,
        lang: Lang,
        kind: Kind,
    ) -> Self {
        CorpusReader {
            input,
            path: path.into(),
            name: name.into(),
            lang,
            kind,
            line: 0,
            records: 0,
            seen: HashSet::new(),
            buf: String::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lang(&self) -> Lang {
        self.lang
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// Number of records yielded so far.
    pub fn records(&self) -> usize {
        self.records
    }

    fn record_error(&self, message: impl Into<String>) -> Error {
        Error::Record {
            path: self.path.clone(),
            line: self.line,
            message: message.into(),
        }
    }

    fn parse_line(&mut self) -> Result<SummaryPair> {
        let line = self.buf.trim_end_matches(['\n', '\r']);
        let record: RecordIn =
            serde_json::from_str(line).map_err(|e| self.record_error(e.to_string()))?;
        if let Some(lang) = record.lang {
            if lang != self.lang {
                return Err(self.record_error(format!(
                    "record language {lang} does not match corpus language {}",
                    self.lang
                )));
            }
        }
        if let Some(kind) = record.kind {
            if kind != self.kind {
                return Err(self.record_error(format!(
                    "record kind {kind} does not match corpus kind {}",
                    self.kind
                )));
            }
        }
        let id = match record.id {
            Some(id) => id,
            None => format!("{}-{:08}", self.name, self.records),
        };
        let pair = SummaryPair {
            id,
            text: record.text,
            summary: record.summary,
            lang: self.lang,
            kind: self.kind,
        };
        pair.check().map_err(|m| self.record_error(m))?;
        if self.seen.contains(&pair.id) {
            return Err(Error::DuplicateId {
                id: pair.id,
                line: self.line,
            });
        }
        self.seen.insert(pair.id.clone());
        Ok(pair)
    }
}

impl<R: BufRead> Iterator for CorpusReader<R> {
    type Item = Result<SummaryPair>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            match self.input.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(Error::io(&self.path, e))),
            }
            self.line += 1;
            if self.buf.trim().is_empty() {
                continue;
            }
            let pair = self.parse_line();
            if pair.is_ok() {
                self.records += 1;
            }
            return Some(pair);
        }
    }
}

pub(crate) fn corpus_name_from_path(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "corpus".to_string())
}

/// Reads a whole record file. Blank lines are skipped.
pub fn read_corpus(path: impl AsRef<Path>, lang: Lang, kind: Kind) -> Result<Corpus> {
    let path = path.as_ref();
    let reader = CorpusReader::open(path, lang, kind)?;
    let name = reader.name().to_string();
    let pairs = reader.collect::<Result<Vec<_>>>()?;
    if pairs.is_empty() {
        return Err(Error::EmptyCorpus(path.display().to_string()));
    }
    Ok(Corpus::from_parts_unchecked(name, lang, kind, pairs))
}

/// Writes records one per line, refusing to produce an empty file.
pub struct CorpusWriter<W: Write> {
    out: W,
    path: PathBuf,
    written: usize,
}

impl CorpusWriter<BufWriter<File>> {
    pub fn create(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        Ok(CorpusWriter::new(BufWriter::new(file), path))
    }
}

impl<W: Write> CorpusWriter<W> {
    pub fn new(out: W, path: impl Into<PathBuf>) -> Self {
        CorpusWriter {
            out,
            path: path.into(),
            written: 0,
        }
    }

    pub fn write(&mut self, pair: &SummaryPair) -> Result<()> {
        let line = encode_record(pair);
        self.out
            .write_all(line.as_bytes())
            .and_then(|_| self.out.write_all(b"\n"))
            .map_err(|e| Error::io(&self.path, e))?;
        self.written += 1;
        Ok(())
    }

    pub fn written(&self) -> usize {
        self.written
    }

    /// Flushes and returns the record count; zero records is an error.
    pub fn finish(mut self) -> Result<usize> {
        self.out.flush().map_err(|e| Error::io(&self.path, e))?;
        if self.written == 0 {
            return Err(Error::EmptyCorpus(self.path.display().to_string()));
        }
        Ok(self.written)
    }
}

pub fn write_corpus(corpus: &Corpus, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus(corpus.name().to_string()));
    }
    let mut writer = CorpusWriter::create(path)?;
    for pair in corpus {
        writer.write(pair)?;
    }
    writer.finish().map(|_| ())
}

/// Appends `b` after `a`.
///
/// The result is a dialogue corpus when either input is, and every pair is
/// relabelled with the result kind. Ids of `b` that collide with ids of `a`
/// are prefixed with `b`'s corpus name.
pub fn concat_corpora(a: &Corpus, b: &Corpus) -> Result<Corpus> {
    if a.lang != b.lang {
        return Err(Error::LanguageMismatch {
            left: a.name.clone(),
            left_lang: a.lang.to_string(),
            right: b.name.clone(),
            right_lang: b.lang.to_string(),
        });
    }
    if b.is_empty() {
        return Ok(a.clone());
    }
    if a.is_empty() {
        return Ok(b.clone());
    }
    let kind = if a.kind == Kind::Dialogue || b.kind == Kind::Dialogue {
        Kind::Dialogue
    } else {
        Kind::Document
    };
    let mut ids: HashSet<String> = a.pairs.iter().map(|p| p.id.clone()).collect();
    let mut pairs = Vec::with_capacity(a.len() + b.len());
    pairs.extend(a.pairs.iter().cloned().map(|p| SummaryPair { kind, ..p }));
    for pair in &b.pairs {
        let mut id = pair.id.clone();
        if ids.contains(&id) {
            id = format!("{}/{}", b.name, pair.id);
            let mut suffix = 1;
            while ids.contains(&id) {
                id = format!("{}/{}#{suffix}", b.name, pair.id);
                suffix += 1;
            }
        }
        ids.insert(id.clone());
        pairs.push(SummaryPair {
            id,
            kind,
            ..pair.clone()
        });
    }
    Ok(Corpus::from_parts_unchecked(
        format!("{}+{}", a.name, b.name),
        a.lang,
        kind,
        pairs,
    ))
}
