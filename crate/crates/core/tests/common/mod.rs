#![allow(dead_code)]

use dialforge::{Corpus, Kind, Lang, SummaryPair};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SYLLABLES: &[&str] = &[
    "ka", "lo", "mi", "ren", "tu", "sa", "vor", "en", "di", "pa", "qui", "zel", "bo", "nar", "te", "ish",
];

/// Deterministic generator of English-like synthetic corpora.
pub struct Synth {
    rng: ChaCha8Rng,
}

impl Synth {
    pub fn new(seed: u64) -> Self {
        Synth {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn word(&mut self) -> String {
        let n = self.rng.gen_range(1..=3);
        (0..n).map(|_| *SYLLABLES.choose(&mut self.rng).unwrap()).collect()
    }

    pub fn sentence(&mut self, min_words: usize, max_words: usize) -> String {
        let n = self.rng.gen_range(min_words.max(2)..=max_words.max(2));
        let mut words: Vec<String> = (0..n).map(|_| self.word()).collect();
        let mut first = words[0].chars();
        let head = first.next().unwrap().to_ascii_uppercase();
        words[0] = std::iter::once(head).chain(first).collect();
        let end = *[".", ".", ".", "!", "?"].choose(&mut self.rng).unwrap();
        format!("{}{end}", words.join(" "))
    }

    pub fn document(&mut self, min_sentences: usize, max_sentences: usize) -> Vec<String> {
        let n = self.rng.gen_range(min_sentences..=max_sentences);
        (0..n).map(|_| self.sentence(4, 12)).collect()
    }

    /// Summary copying a long run of words from the document.
    pub fn extractive_summary(&mut self, sentences: &[String]) -> String {
        let words: Vec<&str> = sentences.iter().flat_map(|s| s.split(' ')).collect();
        let len = self.rng.gen_range(4..=12).min(words.len());
        let start = self.rng.gen_range(0..=words.len() - len);
        words[start..start + len].join(" ")
    }

    /// Summary of fresh words, mixing in a few source words.
    pub fn abstractive_summary(&mut self, sentences: &[String]) -> String {
        let words: Vec<&str> = sentences.iter().flat_map(|s| s.split(' ')).collect();
        let n = self.rng.gen_range(5..=12);
        (0..n)
            .map(|_| {
                if self.rng.gen_bool(0.2) {
                    words.choose(&mut self.rng).unwrap().to_string()
                } else {
                    format!("{}x", self.word())
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn doc_pair(&mut self, id: String, extractive: bool) -> SummaryPair {
        let doc = self.document(1, 10);
        let summary = if extractive {
            self.extractive_summary(&doc)
        } else {
            self.abstractive_summary(&doc)
        };
        SummaryPair::new(id, doc.join(" "), summary, Lang::En, Kind::Document)
    }

    pub fn doc_corpus(&mut self, name: &str, n: usize) -> Corpus {
        let pairs = (0..n)
            .map(|i| {
                let extractive = self.rng.gen_bool(0.5);
                self.doc_pair(format!("{name}-{i:06}"), extractive)
            })
            .collect();
        Corpus::new(name, Lang::En, Kind::Document, pairs).unwrap()
    }

    pub fn doc_corpus_styled(&mut self, name: &str, n: usize, extractive: bool) -> Corpus {
        let pairs = (0..n).map(|i| self.doc_pair(format!("{name}-{i:06}"), extractive)).collect();
        Corpus::new(name, Lang::En, Kind::Document, pairs).unwrap()
    }

    pub fn dial_corpus(&mut self, name: &str, n: usize) -> Corpus {
        let pairs = (0..n)
            .map(|i| {
                let turns: Vec<String> = (0..self.rng.gen_range(2..6))
                    .map(|t| format!("Person{}: {}", t % 2 + 1, self.sentence(3, 8)))
                    .collect();
                let summary = self.sentence(4, 10);
                SummaryPair::new(format!("{name}-{i:06}"), turns.join("\n"), summary, Lang::En, Kind::Dialogue)
            })
            .collect();
        Corpus::new(name, Lang::En, Kind::Dialogue, pairs).unwrap()
    }
}

/// Lowercase and collapse whitespace; enough for the ASCII inputs the
/// oracles are fed.
pub fn ascii_normalize(s: &str) -> String {
    s.split_whitespace()
        .map(|w| w.to_ascii_lowercase())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn brute_trigram_set(s: &str) -> std::collections::BTreeSet<String> {
    let chars: Vec<char> = ascii_normalize(s).chars().collect();
    let mut out = std::collections::BTreeSet::new();
    if chars.len() >= 3 {
        for start in 0..=chars.len() - 3 {
            out.insert(chars[start..start + 3].iter().collect());
        }
    }
    out
}

/// Brute-force omission oracle: index of the sentence with the most distinct
/// shared 3-grams (lowest index on ties), None when nothing should be removed.
pub fn omit_oracle(sentences: &[String], reference: &str) -> Option<usize> {
    if sentences.len() < 2 {
        return None;
    }
    let reference = brute_trigram_set(reference);
    let scores: Vec<usize> = sentences
        .iter()
        .map(|s| brute_trigram_set(s).intersection(&reference).count())
        .collect();
    let max = *scores.iter().max().unwrap();
    if max == 0 {
        return None;
    }
    scores.iter().position(|&s| s == max)
}

/// Exhaustive greedy fragment oracle: at each summary position try every
/// (source start, length) and keep the longest, earliest-source match.
pub fn fragment_oracle(summary: &[&str], source: &[&str]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < summary.len() {
        let mut best: Option<(usize, usize)> = None;
        for j in 0..source.len() {
            for len in 1..=(summary.len() - i).min(source.len() - j) {
                if summary[i..i + len] == source[j..j + len] && best.is_none_or(|(_, l)| len > l) {
                    best = Some((j, len));
                }
            }
        }
        match best {
            Some((j, len)) => {
                out.push((i, j, len));
                i += len;
            }
            None => i += 1,
        }
    }
    out
}

/// LCS by enumerating every subsequence of the shorter sequence.
pub fn brute_lcs<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut best = 0;
    for mask in 0u32..(1u32 << short.len()) {
        let count = mask.count_ones() as usize;
        if count <= best {
            continue;
        }
        let mut it = long.iter();
        let ok = (0..short.len())
            .filter(|i| mask & (1 << i) != 0)
            .all(|i| it.any(|y| *y == short[i]));
        if ok {
            best = count;
        }
    }
    best
}
