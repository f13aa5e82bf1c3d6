//! Rule-based sentence segmentation.
//!
//! A boundary falls after a whitespace-delimited token whose last character,
//! ignoring trailing closing quotes and brackets, is terminal punctuation and
//! whose form is not a known abbreviation. Boundaries need whitespace or end
//! of text after them, so periods inside decimals (`3.5`) never split.
//! Sentences come back with their internal whitespace collapsed to single
//! spaces.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use crate::corpus::{Lang, SentenceDoc};
use crate::error::{Error, Result};

const TERMINALS: &[char] = &['.', '!', '?', '…', '．', '！', '？', '。', '｡'];

const CLOSERS: &[char] = &[
    '"', '\'', '”', '’', '»', ')', ']', '}', '」', '』', '）', '］', '》', '〉',
];

const OPENERS: &[char] = &['"', '\'', '“', '‘', '«', '(', '[', '{', '「', '『', '（', '［', '《', '〈'];

pub const ENGLISH_ABBREVIATIONS: &[&str] = &[
    "Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "Sr.", "Jr.", "St.", "Mt.", "Rev.", "Gen.", "Col.",
    "Lt.", "Sgt.", "Capt.", "Cmdr.", "Gov.", "Sen.", "Rep.", "Pres.", "Hon.", "Messrs.", "U.S.",
    "U.K.", "U.N.", "E.U.", "D.C.", "a.m.", "p.m.", "e.g.", "i.e.", "etc.", "vs.", "cf.", "al.",
    "approx.", "No.", "Nos.", "Fig.", "Inc.", "Ltd.", "Co.", "Corp.", "Jan.", "Feb.", "Mar.",
    "Apr.", "Jun.", "Jul.", "Aug.", "Sep.", "Sept.", "Oct.", "Nov.", "Dec.", "Ave.", "Blvd.",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmenterConfig {
    pub lang: Lang,
    abbreviations: BTreeSet<String>,
    pub min_sentence_chars: usize,
}

impl SegmenterConfig {
    /// Default configuration for a language: the built-in English
    /// abbreviation list, or an empty list for Korean.
    pub fn for_lang(lang: Lang) -> Self {
        let abbreviations = match lang {
            Lang::En => ENGLISH_ABBREVIATIONS.iter().map(|s| s.to_string()).collect(),
            Lang::Ko => BTreeSet::new(),
        };
        SegmenterConfig {
            lang,
            abbreviations,
            min_sentence_chars: 1,
        }
    }

    pub fn abbreviations(&self) -> &BTreeSet<String> {
        &self.abbreviations
    }

    pub fn add_abbreviation(&mut self, token: impl Into<String>) -> Result<()> {
        let token = token.into();
        if token.is_empty() || !token.ends_with('.') {
            return Err(Error::InvalidArgument(format!(
                "abbreviation `{token}` must be non-empty and end with '.'"
            )));
        }
        self.abbreviations.insert(token);
        Ok(())
    }

    pub fn with_abbreviations<I, S>(mut self, tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        for token in tokens {
            self.add_abbreviation(token)?;
        }
        Ok(self)
    }

    /// Extends the list from a plain-text file holding one token per line.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn load_abbreviations(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let body = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        for (index, line) in body.lines().enumerate() {
            let token = line.trim();
            if token.is_empty() || token.starts_with('#') {
                continue;
            }
            self.add_abbreviation(token).map_err(|e| Error::Record {
                path: path.to_path_buf(),
                line: index + 1,
                message: e.to_string(),
            })?;
        }
        Ok(())
    }

    fn is_abbreviation(&self, token: &str) -> bool {
        self.abbreviations.contains(token)
            || self
                .abbreviations
                .contains(token.trim_start_matches(OPENERS))
    }
}

impl Default for SegmenterConfig {
    fn default() -> Self {
        SegmenterConfig::for_lang(Lang::En)
    }
}

fn ends_sentence(token: &str, config: &SegmenterConfig) -> bool {
    let core = token.trim_end_matches(CLOSERS);
    let Some(last) = core.chars().next_back() else {
        return false;
    };
    if !TERMINALS.contains(&last) {
        return false;
    }
    !(last == '.' && config.is_abbreviation(core))
}

/// Splits `text` into sentences.
pub fn segment(text: &str, config: &SegmenterConfig) -> Result<SentenceDoc> {
    segment_with_id("", text, config)
}

pub fn segment_with_id(source_id: &str, text: &str, config: &SegmenterConfig) -> Result<SentenceDoc> {
    if text.trim().is_empty() {
        return Err(Error::EmptyInput("text to segment"));
    }
    let mut sentences: Vec<String> = Vec::new();
    let mut current = String::new();
    for token in text.split_whitespace() {
        if !current.is_empty() {
            current.push(' ');
        }
        current.push_str(token);
        if ends_sentence(token, config) {
            sentences.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        sentences.push(current);
    }
    if config.min_sentence_chars > 1 {
        sentences = merge_short(sentences, config.min_sentence_chars);
    }
    Ok(SentenceDoc::from_sentences_unchecked(
        source_id.to_string(),
        sentences,
    ))
}

/// Folds sentences shorter than `min_chars` into the following sentence, or
/// into the previous one when they come last.
fn merge_short(sentences: Vec<String>, min_chars: usize) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(sentences.len());
    let mut pending = String::new();
    for sentence in sentences {
        if !pending.is_empty() {
            pending.push(' ');
        }
        pending.push_str(&sentence);
        if pending.chars().count() >= min_chars {
            out.push(std::mem::take(&mut pending));
        }
    }
    if !pending.is_empty() {
        match out.last_mut() {
            Some(last) => {
                last.push(' ');
                last.push_str(&pending);
            }
            None => out.push(pending),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn en() -> SegmenterConfig {
        SegmenterConfig::for_lang(Lang::En)
    }

    fn split(text: &str) -> Vec<String> {
        segment(text, &en()).unwrap().sentences().to_vec()
    }

    #[test]
    fn unambiguous_boundaries() {
        assert_eq!(split("It rained. We stayed in."), ["It rained.", "We stayed in."]);
    }

    #[test]
    fn abbreviation_does_not_split() {
        let config = SegmenterConfig::for_lang(Lang::Ko).with_abbreviations(["Dr."]).unwrap();
        let doc = segment("Dr. Kim left. She ran.", &config).unwrap();
        assert_eq!(doc.sentences(), ["Dr. Kim left.", "She ran."]);
    }

    #[test]
    fn no_terminal_punctuation() {
        assert_eq!(split("No terminal punctuation here"), ["No terminal punctuation here"]);
    }

    #[test]
    fn decimals_and_quotes() {
        assert_eq!(
            split("It cost 3.5 dollars. He said \"no.\" Then left!"),
            ["It cost 3.5 dollars.", "He said \"no.\"", "Then left!"]
        );
    }

    #[test]
    fn question_exclamation_ellipsis_fullwidth() {
        assert_eq!(split("Why? Because! Well… ok"), ["Why?", "Because!", "Well…", "ok"]);
        assert_eq!(split("하나。 둘！ 셋？ 넷"), ["하나。", "둘！", "셋？", "넷"]);
    }

    #[test]
    fn korean_sentences() {
        let config = SegmenterConfig::for_lang(Lang::Ko);
        let doc = segment("오늘 비가 왔다. 우리는 집에 있었다.", &config).unwrap();
        assert_eq!(doc.sentences(), ["오늘 비가 왔다.", "우리는 집에 있었다."]);
    }

    #[test]
    fn internal_newlines_collapse() {
        assert_eq!(split("One\n two.\n\nThree."), ["One two.", "Three."]);
    }

    #[test]
    fn empty_input_is_error() {
        assert!(matches!(segment("  \n", &en()), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn min_sentence_chars_merges() {
        let mut config = en();
        config.min_sentence_chars = 5;
        let doc = segment("Hi. Ok. This is long. No.", &config).unwrap();
        assert_eq!(doc.sentences(), ["Hi. Ok.", "This is long. No."]);
    }

    #[test]
    fn abbreviation_validation() {
        let mut config = en();
        assert!(config.add_abbreviation("").is_err());
        assert!(config.add_abbreviation("Dr").is_err());
        assert!(config.add_abbreviation("Cpl.").is_ok());
    }

    #[test]
    fn abbreviation_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("abbr.txt");
        std::fs::write(&path, "# ko\n박사.\n\nca.\n").unwrap();
        let mut config = SegmenterConfig::for_lang(Lang::Ko);
        config.load_abbreviations(&path).unwrap();
        assert!(config.abbreviations().contains("ca."));
        assert_eq!(
            segment("김 박사. 님이 왔다. 끝.", &config).unwrap().sentences(),
            ["김 박사. 님이 왔다.", "끝."]
        );
        std::fs::write(&path, "ok.\nbad\n").unwrap();
        match config.load_abbreviations(&path) {
            Err(Error::Record { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    fn ws_norm(s: &str) -> String {
        s.split_whitespace().collect::<Vec<_>>().join(" ")
    }

    proptest! {
        #[test]
        fn lossless_ordered_and_fixpoint(
            words in prop::collection::vec("[A-Za-z0-9]{1,6}(\\.|!|\\?|,|\\.\"|)", 1..30),
            seps in prop::collection::vec("( |  |\n|\t )", 30),
        ) {
            let mut text = String::new();
            for (i, w) in words.iter().enumerate() {
                text.push_str(w);
                text.push_str(&seps[i]);
            }
            let doc = segment(&text, &en()).unwrap();
            prop_assert!(doc.sentences().iter().all(|s| !s.is_empty()));
            prop_assert_eq!(ws_norm(&doc.joined()), ws_norm(&text));

            let mut cursor = 0;
            let mut last = None;
            let normalized = ws_norm(&text);
            for s in doc.sentences() {
                let at = normalized[cursor..].find(s.as_str()).map(|p| p + cursor);
                prop_assert!(at.is_some());
                let at = at.unwrap();
                if let Some(prev) = last { prop_assert!(at > prev); }
                last = Some(at);
                cursor = at + s.len();
            }

            for s in doc.sentences() {
                let again = segment(s, &en()).unwrap();
                prop_assert_eq!(again.sentences(), std::slice::from_ref(s));
            }
        }
    }
}
