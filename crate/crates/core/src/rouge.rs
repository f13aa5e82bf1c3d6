//! ROUGE-1, ROUGE-2 and ROUGE-L.
//!
//! Tokens come from the normalized text split on spaces, with every
//! punctuation or symbol character detached as its own token. There is no
//! stemming or stopword removal, so English and Korean are scored the same
//! way.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::extractiveness::NormalizedText;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct RougeScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl RougeScore {
    pub fn from_counts(matched: usize, candidate_total: usize, reference_total: usize) -> Self {
        let ratio = |total: usize| {
            if total == 0 {
                0.0
            } else {
                matched as f64 / total as f64
            }
        };
        let precision = ratio(candidate_total);
        let recall = ratio(reference_total);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        RougeScore {
            precision,
            recall,
            f1,
        }
    }
}

pub fn tokenize(text: &str) -> Vec<String> {
    let normalized = NormalizedText::new(text);
    let mut tokens = Vec::new();
    for word in normalized.as_str().split(' ').filter(|w| !w.is_empty()) {
        let mut current = String::new();
        for c in word.chars() {
            if c.is_alphanumeric() {
                current.push(c);
            } else {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
                tokens.push(c.to_string());
            }
        }
        if !current.is_empty() {
            tokens.push(current);
        }
    }
    tokens
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

fn score_n(candidate: &[String], reference: &[String], n: usize) -> RougeScore {
    let cand = ngram_counts(candidate, n);
    let refs = ngram_counts(reference, n);
    let matched: usize = cand
        .iter()
        .map(|(gram, &c)| c.min(refs.get(gram).copied().unwrap_or(0)))
        .sum();
    let cand_total = candidate.len().saturating_sub(n - 1);
    let ref_total = reference.len().saturating_sub(n - 1);
    RougeScore::from_counts(matched, cand_total, ref_total)
}

fn reference_tokens(reference: &str) -> Result<Vec<String>> {
    let tokens = tokenize(reference);
    if tokens.is_empty() {
        return Err(Error::EmptyInput("reference"));
    }
    Ok(tokens)
}

/// Clipped n-gram overlap.
pub fn rouge_n(candidate: &str, reference: &str, n: usize) -> Result<RougeScore> {
    if n == 0 {
        return Err(Error::InvalidArgument("ROUGE-N needs n >= 1".into()));
    }
    let reference = reference_tokens(reference)?;
    Ok(score_n(&tokenize(candidate), &reference, n))
}

/// Longest common subsequence length of two token sequences.
pub fn lcs_len<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; b.len() + 1];
    let mut row = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            row[j + 1] = if x == y {
                prev[j] + 1
            } else {
                row[j].max(prev[j + 1])
            };
        }
        std::mem::swap(&mut prev, &mut row);
    }
    prev[b.len()]
}

fn score_l(candidate: &[String], reference: &[String]) -> RougeScore {
    RougeScore::from_counts(lcs_len(candidate, reference), candidate.len(), reference.len())
}

pub fn rouge_l(candidate: &str, reference: &str) -> Result<RougeScore> {
    let reference = reference_tokens(reference)?;
    Ok(score_l(&tokenize(candidate), &reference))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RougeTriple {
    pub rouge1: RougeScore,
    pub rouge2: RougeScore,
    pub rouge_l: RougeScore,
}

pub fn rouge_all(candidate: &str, reference: &str) -> Result<RougeTriple> {
    let reference = reference_tokens(reference)?;
    let candidate = tokenize(candidate);
    Ok(RougeTriple {
        rouge1: score_n(&candidate, &reference, 1),
        rouge2: score_n(&candidate, &reference, 2),
        rouge_l: score_l(&candidate, &reference),
    })
}

/// A generated summary aligned to a reference record by id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub id: String,
    pub summary: String,
}

/// Reads candidate summaries from a record file holding `id` and `summary`
/// fields per line. Other fields are ignored.
pub fn read_candidates(path: impl AsRef<Path>) -> Result<Vec<Candidate>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (index, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let candidate: Candidate = serde_json::from_str(&line).map_err(|e| Error::Record {
            path: path.to_path_buf(),
            line: index + 1,
            message: e.to_string(),
        })?;
        out.push(candidate);
    }
    if out.is_empty() {
        return Err(Error::EmptyCorpus(path.display().to_string()));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairRouge {
    pub id: String,
    pub scores: RougeTriple,
}

/// Unweighted mean F1 over pairs, on a 0-100 scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusRouge {
    pub pairs: Vec<PairRouge>,
    pub r1: f64,
    pub r2: f64,
    pub rl: f64,
}

/// Scores candidates against the summaries of `references`, aligned by id
/// and reported in reference order.
pub fn corpus_rouge(candidates: &[Candidate], references: &Corpus) -> Result<CorpusRouge> {
    if references.is_empty() {
        return Err(Error::EmptyCorpus(references.name().to_string()));
    }
    let mut by_id: HashMap<&str, &Candidate> = HashMap::with_capacity(candidates.len());
    for c in candidates {
        if by_id.insert(c.id.as_str(), c).is_some() {
            return Err(Error::DuplicateId {
                id: c.id.clone(),
                line: 0,
            });
        }
    }
    let reference_ids: HashSet<&str> = references.iter().map(|p| p.id.as_str()).collect();
    if let Some(pair) = references.iter().find(|p| !by_id.contains_key(p.id.as_str())) {
        return Err(Error::IdMismatch(pair.id.clone()));
    }
    if let Some(c) = candidates.iter().find(|c| !reference_ids.contains(c.id.as_str())) {
        return Err(Error::IdMismatch(c.id.clone()));
    }
    let pairs = references
        .pairs()
        .par_iter()
        .map(|pair| {
            let candidate = by_id[pair.id.as_str()];
            rouge_all(&candidate.summary, &pair.summary).map(|scores| PairRouge {
                id: pair.id.clone(),
                scores,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = pairs.len() as f64;
    let mean = |f: fn(&RougeTriple) -> f64| 100.0 * pairs.iter().map(|p| f(&p.scores)).sum::<f64>() / n;
    Ok(CorpusRouge {
        r1: mean(|t| t.rouge1.f1),
        r2: mean(|t| t.rouge2.f1),
        rl: mean(|t| t.rouge_l.f1),
        pairs,
    })
}
