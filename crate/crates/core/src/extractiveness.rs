//! Character n-gram overlap and extractive fragment statistics.
//!
//! All comparisons run on [`NormalizedText`]: NFC, lowercased, whitespace
//! runs collapsed to one space and trimmed. Fragment tokens are the
//! space-separated pieces of the normalized text.

use std::collections::{BTreeSet, HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;
use unicode_normalization::UnicodeNormalization;

use crate::corpus::Corpus;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NormalizedText(String);

impl NormalizedText {
    pub fn new(text: &str) -> Self {
        let lowered: String = text.nfc().collect::<String>().to_lowercase();
        let composed: String = lowered.nfc().collect();
        let mut out = String::with_capacity(composed.len());
        for word in composed.split_whitespace() {
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(word);
        }
        NormalizedText(out)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn char_len(&self) -> usize {
        self.0.chars().count()
    }

    pub fn tokens(&self) -> Vec<&str> {
        if self.0.is_empty() {
            Vec::new()
        } else {
            self.0.split(' ').collect()
        }
    }
}

impl AsRef<str> for NormalizedText {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Distinct length-`n` character windows of an already normalized string.
pub(crate) fn ngram_set(normalized: &str, n: usize) -> HashSet<&str> {
    let bounds: Vec<usize> = normalized
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(normalized.len()))
        .collect();
    if bounds.len() <= n {
        return HashSet::new();
    }
    (0..bounds.len() - n)
        .map(|i| &normalized[bounds[i]..bounds[i + n]])
        .collect()
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("n-gram size must be at least 1".into()))
    } else {
        Ok(())
    }
}

pub fn char_ngrams(text: &str, n: usize) -> Result<BTreeSet<String>> {
    check_n(n)?;
    let normalized = NormalizedText::new(text);
    Ok(ngram_set(normalized.as_str(), n)
        .into_iter()
        .map(str::to_owned)
        .collect())
}

/// Number of distinct character n-grams the two texts have in common.
pub fn shared_ngram_count(a: &str, b: &str, n: usize) -> Result<usize> {
    check_n(n)?;
    let a = NormalizedText::new(a);
    let b = NormalizedText::new(b);
    let sa = ngram_set(a.as_str(), n);
    let sb = ngram_set(b.as_str(), n);
    let (small, large) = if sa.len() <= sb.len() { (&sa, &sb) } else { (&sb, &sa) };
    Ok(small.iter().filter(|g| large.contains(*g)).count())
}

/// A maximal verbatim token span shared by summary and source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fragment {
    pub summary_offset: usize,
    pub source_offset: usize,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FragmentSet {
    pub fragments: Vec<Fragment>,
    pub summary_tokens: usize,
}

impl FragmentSet {
    pub fn coverage(&self) -> f64 {
        let covered: usize = self.fragments.iter().map(|f| f.len).sum();
        covered as f64 / self.summary_tokens as f64
    }

    pub fn density(&self) -> f64 {
        let squared: usize = self.fragments.iter().map(|f| f.len * f.len).sum();
        squared as f64 / self.summary_tokens as f64
    }

    pub fn max_fragment_len(&self) -> usize {
        self.fragments.iter().map(|f| f.len).max().unwrap_or(0)
    }
}

/// Greedy left-to-right fragment extraction over tokens.
///
/// At each summary position the longest span that also occurs contiguously
/// in the source becomes a fragment, ties going to the earliest source
/// offset. Unmatched tokens advance the scan by one.
pub fn fragments_of_tokens(summary: &[&str], source: &[&str]) -> FragmentSet {
    let mut positions: HashMap<&str, Vec<usize>> = HashMap::new();
    for (j, tok) in source.iter().enumerate() {
        positions.entry(tok).or_default().push(j);
    }
    let mut fragments = Vec::new();
    let mut i = 0;
    while i < summary.len() {
        let mut best: Option<(usize, usize)> = None;
        if let Some(starts) = positions.get(summary[i]) {
            for &j in starts {
                let len = summary[i..]
                    .iter()
                    .zip(&source[j..])
                    .take_while(|(a, b)| a == b)
                    .count();
                if best.is_none_or(|(_, l)| len > l) {
                    best = Some((j, len));
                }
            }
        }
        match best {
            Some((j, len)) => {
                fragments.push(Fragment {
                    summary_offset: i,
                    source_offset: j,
                    len,
                });
                i += len;
            }
            None => i += 1,
        }
    }
    FragmentSet {
        fragments,
        summary_tokens: summary.len(),
    }
}

pub fn extractive_fragments(summary: &str, source: &str) -> Result<FragmentSet> {
    let summary = NormalizedText::new(summary);
    let source = NormalizedText::new(source);
    if summary.as_str().is_empty() {
        return Err(Error::EmptyInput("summary"));
    }
    if source.as_str().is_empty() {
        return Err(Error::EmptyInput("source"));
    }
    Ok(fragments_of_tokens(&summary.tokens(), &source.tokens()))
}

/// Mean squared fragment length per summary token.
pub fn density(summary: &str, source: &str) -> Result<f64> {
    extractive_fragments(summary, source).map(|f| f.density())
}

/// Fraction of summary tokens inside some fragment.
pub fn coverage(summary: &str, source: &str) -> Result<f64> {
    extractive_fragments(summary, source).map(|f| f.coverage())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairExtractiveness {
    pub id: String,
    pub density: f64,
    pub coverage: f64,
}

/// Mean and quartiles (linear interpolation between order statistics).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Distribution {
    pub mean: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl Distribution {
    pub fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let quantile = |q: f64| {
            let pos = q * (sorted.len() - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
        };
        Some(Distribution {
            mean: values.iter().sum::<f64>() / values.len() as f64,
            min: sorted[0],
            q1: quantile(0.25),
            median: quantile(0.5),
            q3: quantile(0.75),
            max: sorted[sorted.len() - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractivenessReport {
    pub pairs: Vec<PairExtractiveness>,
    pub density: Distribution,
    pub coverage: Distribution,
}

/// Density and coverage of every reference summary against its source.
pub fn corpus_extractiveness(corpus: &Corpus) -> Result<ExtractivenessReport> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus(corpus.name().to_string()));
    }
    let pairs = corpus
        .pairs()
        .par_iter()
        .map(|pair| {
            let fragments = extractive_fragments(&pair.summary, &pair.text)?;
            Ok(PairExtractiveness {
                id: pair.id.clone(),
                density: fragments.density(),
                coverage: fragments.coverage(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let densities: Vec<f64> = pairs.iter().map(|p| p.density).collect();
    let coverages: Vec<f64> = pairs.iter().map(|p| p.coverage).collect();
    Ok(ExtractivenessReport {
        density: Distribution::from_values(&densities).expect("non-empty"),
        coverage: Distribution::from_values(&coverages).expect("non-empty"),
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Kind, Lang, SummaryPair};
    use proptest::prelude::*;

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn normalization() {
        let n = NormalizedText::new("  The\tCAT \n sat  ");
        assert_eq!(n.as_str(), "the cat sat");
        // decomposed e + combining acute composes under NFC
        assert_eq!(NormalizedText::new("Cafe\u{301}").as_str(), "caf\u{e9}");
        assert!(NormalizedText::new("   ").tokens().is_empty());
    }

    #[test]
    fn char_ngram_examples() {
        assert_eq!(char_ngrams("abcab", 3).unwrap(), set(&["abc", "bca", "cab"]));
        assert!(char_ngrams("ab", 3).unwrap().is_empty());
        assert_eq!(char_ngrams("AB  cd", 2).unwrap(), set(&["ab", "b ", " c", "cd"]));
        assert!(char_ngrams("abc", 0).is_err());
        assert_eq!(char_ngrams("한국어", 2).unwrap(), set(&["한국", "국어"]));
    }

    #[test]
    fn shared_count_examples() {
        assert_eq!(shared_ngram_count("abc", "abc", 3).unwrap(), 1);
        assert_eq!(shared_ngram_count("abc", "xyz", 3).unwrap(), 0);
        // {" ca", " sa", "at ", "cat", "t s"} by explicit set enumeration
        assert_eq!(shared_ngram_count("the cat sat", "a cat sam", 3).unwrap(), 5);
    }

    #[test]
    fn fragment_examples() {
        let f = extractive_fragments("the cat sat quietly", "the cat sat on the mat").unwrap();
        assert_eq!(
            f.fragments,
            [Fragment { summary_offset: 0, source_offset: 0, len: 3 }]
        );
        assert_eq!(f.density(), 2.25);
        assert_eq!(f.coverage(), 0.75);

        let novel = extractive_fragments("dogs bark", "the cat sat").unwrap();
        assert!(novel.fragments.is_empty());
        assert_eq!(novel.density(), 0.0);
        assert_eq!(novel.coverage(), 0.0);

        assert!(extractive_fragments("", "x").is_err());
        assert!(extractive_fragments("x", " ").is_err());
    }

    #[test]
    fn longest_match_not_skipped_by_partial_match() {
        // a partial match at source 0 must not hide the full match at 1
        let f = extractive_fragments("a a b", "a a a b").unwrap();
        assert_eq!(
            f.fragments,
            [Fragment { summary_offset: 0, source_offset: 1, len: 3 }]
        );
    }

    #[test]
    fn earliest_source_offset_wins_ties() {
        let f = extractive_fragments("x y", "x y z x y").unwrap();
        assert_eq!(f.fragments[0].source_offset, 0);
    }

    #[test]
    fn verbatim_copy() {
        let s = "one two three four five";
        assert_eq!(density(s, s).unwrap(), 5.0);
        assert_eq!(coverage(s, s).unwrap(), 1.0);
    }

    #[test]
    fn distribution_quartiles() {
        let d = Distribution::from_values(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(d.mean, 2.5);
        assert_eq!(d.median, 2.5);
        assert_eq!(d.q1, 1.75);
        assert_eq!(d.q3, 3.25);
        assert!(Distribution::from_values(&[]).is_none());
    }

    #[test]
    fn corpus_level() {
        let pairs = vec![
            SummaryPair::new("copy", "a b c d", "a b c d", Lang::En, Kind::Document),
            SummaryPair::new("novel", "a b c d", "w x y z", Lang::En, Kind::Document),
        ];
        let corpus = Corpus::new("c", Lang::En, Kind::Document, pairs).unwrap();
        let report = corpus_extractiveness(&corpus).unwrap();
        assert_eq!(report.pairs[0].density, 4.0);
        assert_eq!(report.pairs[1].density, 0.0);
        assert_eq!(report.density.mean, 2.0);
        assert_eq!(report.coverage.mean, 0.5);

        let empty = Corpus::new("e", Lang::En, Kind::Document, vec![]).unwrap();
        assert!(corpus_extractiveness(&empty).is_err());
    }

    proptest! {
        #[test]
        fn shared_count_symmetric(a in "[ab c]{0,12}", b in "[ab c]{0,12}", n in 1usize..4) {
            prop_assert_eq!(
                shared_ngram_count(&a, &b, n).unwrap(),
                shared_ngram_count(&b, &a, n).unwrap()
            );
        }

        #[test]
        fn ngram_cardinality_bound(text in "[abc ]{0,20}", n in 1usize..5) {
            let len = NormalizedText::new(&text).char_len();
            prop_assert!(char_ngrams(&text, n).unwrap().len() <= (len + 1).saturating_sub(n));
        }

        #[test]
        fn fragment_bounds(summary in "[abcd]( [abcd]){0,10}", source in "[abcd]( [abcd]){0,14}") {
            let f = extractive_fragments(&summary, &source).unwrap();
            let cov = f.coverage();
            prop_assert!((0.0..=1.0).contains(&cov));
            prop_assert!(f.density() <= cov * f.max_fragment_len() as f64 + 1e-12);

            let s: Vec<&str> = summary.split(' ').collect();
            let a: Vec<&str> = source.split(' ').collect();
            let mut next = 0;
            for frag in &f.fragments {
                prop_assert!(frag.summary_offset >= next);
                next = frag.summary_offset + frag.len;
                prop_assert_eq!(
                    &s[frag.summary_offset..frag.summary_offset + frag.len],
                    &a[frag.source_offset..frag.source_offset + frag.len]
                );
            }
        }

        #[test]
        fn self_similarity(words in prop::collection::vec("[a-z]{1,5}", 1..12)) {
            let s = words.join(" ");
            prop_assert_eq!(density(&s, &s).unwrap(), words.len() as f64);
            prop_assert_eq!(coverage(&s, &s).unwrap(), 1.0);
        }
    }
}
