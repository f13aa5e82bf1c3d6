//! Training-set composition for the zero-shot, few-shot and full regimes.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{concat_corpora, Corpus};
use crate::error::{Error, Result};
use crate::transforms::Variant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    ZeroShot,
    FewShot,
    Full,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::ZeroShot => "zero",
            Regime::FewShot => "few",
            Regime::Full => "full",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zero" | "zero_shot" | "zero-shot" => Ok(Regime::ZeroShot),
            "few" | "few_shot" | "few-shot" => Ok(Regime::FewShot),
            "full" => Ok(Regime::Full),
            _ => Err(Error::InvalidRegime(format!("unknown regime `{s}`"))),
        }
    }
}

/// Which document data accompanies the dialogue samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrainingVariant {
    /// Dialogue data only.
    Original,
    /// Untransformed document data.
    Naive,
    Transformed(Variant),
}

impl TrainingVariant {
    pub fn name(self) -> &'static str {
        match self {
            TrainingVariant::Original => "Original",
            TrainingVariant::Naive => "Naive",
            TrainingVariant::Transformed(v) => v.name(),
        }
    }
}

impl fmt::Display for TrainingVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TrainingVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("original") {
            Ok(TrainingVariant::Original)
        } else if s.eq_ignore_ascii_case("naive") {
            Ok(TrainingVariant::Naive)
        } else {
            s.parse().map(TrainingVariant::Transformed)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RegimeSpec {
    regime: Regime,
    k: Option<usize>,
    seed: u64,
    variant: TrainingVariant,
}

impl RegimeSpec {
    pub fn new(regime: Regime, k: Option<usize>, seed: u64, variant: TrainingVariant) -> Result<Self> {
        match (regime, k) {
            (Regime::FewShot, None) => {
                return Err(Error::InvalidRegime("few-shot needs k".into()));
            }
            (Regime::FewShot, Some(0)) => {
                return Err(Error::InvalidRegime("few-shot needs k >= 1".into()));
            }
            (Regime::ZeroShot | Regime::Full, Some(_)) => {
                return Err(Error::InvalidRegime(format!("k only applies to few-shot, not {regime}")));
            }
            _ => {}
        }
        if variant == TrainingVariant::Original && regime == Regime::ZeroShot {
            return Err(Error::InvalidRegime(
                "Original has no document data, so zero-shot is undefined".into(),
            ));
        }
        Ok(RegimeSpec {
            regime,
            k,
            seed,
            variant,
        })
    }

    pub fn zero_shot(variant: TrainingVariant, seed: u64) -> Result<Self> {
        RegimeSpec::new(Regime::ZeroShot, None, seed, variant)
    }

    pub fn few_shot(variant: TrainingVariant, k: usize, seed: u64) -> Result<Self> {
        RegimeSpec::new(Regime::FewShot, Some(k), seed, variant)
    }

    pub fn full(variant: TrainingVariant, seed: u64) -> Result<Self> {
        RegimeSpec::new(Regime::Full, None, seed, variant)
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn k(&self) -> Option<usize> {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn variant(&self) -> TrainingVariant {
        self.variant
    }

    /// `<variant>_<regime>[_k<k>]_s<seed>`, e.g. `D+O_few_k100_s7`.
    pub fn name(&self) -> String {
        match self.k {
            Some(k) => format!("{}_{}_k{k}_s{}", self.variant, self.regime, self.seed),
            None => format!("{}_{}_s{}", self.variant, self.regime, self.seed),
        }
    }

    pub fn parse_name(name: &str) -> Result<Self> {
        let bad = || Error::InvalidRegime(format!("cannot parse composed name `{name}`"));
        let parts: Vec<&str> = name.split('_').collect();
        let (variant, regime, k, seed) = match parts.as_slice() {
            [v, r, s] => (*v, *r, None, *s),
            [v, r, k, s] => (*v, *r, Some(*k), *s),
            _ => return Err(bad()),
        };
        let seed = seed
            .strip_prefix('s')
            .and_then(|s| s.parse().ok())
            .ok_or_else(bad)?;
        let k = match k {
            Some(k) => Some(k.strip_prefix('k').and_then(|k| k.parse().ok()).ok_or_else(bad)?),
            None => None,
        };
        RegimeSpec::new(regime.parse()?, k, seed, variant.parse()?)
    }
}

impl fmt::Display for RegimeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Draws `k` pairs uniformly without replacement, keeping their original
/// relative order.
pub fn sample_dialset(dialset: &Corpus, k: usize, seed: u64) -> Result<Corpus> {
    if k == 0 || k > dialset.len() {
        return Err(Error::InvalidArgument(format!(
            "cannot sample {k} pairs from `{}` ({} pairs)",
            dialset.name(),
            dialset.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, dialset.len(), k).into_vec();
    picked.sort_unstable();
    let pairs = picked.into_iter().map(|i| dialset.pairs()[i].clone()).collect();
    Ok(Corpus::from_parts_unchecked(
        format!("{}_k{k}_s{seed}", dialset.name()),
        dialset.lang(),
        dialset.kind(),
        pairs,
    ))
}

/// Builds the training corpus for one regime. Document data precedes
/// dialogue data; the output is named after `spec`.
pub fn compose(newdocset: &Corpus, dialset: &Corpus, spec: &RegimeSpec) -> Result<Corpus> {
    if newdocset.lang() != dialset.lang() {
        return Err(Error::LanguageMismatch {
            left: newdocset.name().to_string(),
            left_lang: newdocset.lang().to_string(),
            right: dialset.name().to_string(),
            right_lang: dialset.lang().to_string(),
        });
    }
    let dialogue_part = match spec.regime {
        Regime::ZeroShot => None,
        Regime::FewShot => Some(sample_dialset(
            dialset,
            spec.k.expect("few-shot spec carries k"),
            spec.seed,
        )?),
        Regime::Full => Some(dialset.clone()),
    };
    let composed = match (spec.variant, dialogue_part) {
        (TrainingVariant::Original, Some(dialogue)) => dialogue,
        (TrainingVariant::Original, None) => unreachable!("rejected by RegimeSpec::new"),
        (_, None) => newdocset.clone(),
        (_, Some(dialogue)) => concat_corpora(newdocset, &dialogue)?,
    };
    Ok(composed.with_name(spec.name()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Kind, Lang, SummaryPair};
    use std::collections::HashSet;

    fn corpus(name: &str, kind: Kind, n: usize) -> Corpus {
        let pairs = (0..n)
            .map(|i| SummaryPair::new(format!("{name}-{i}"), "Some text.", "sum", Lang::En, kind))
            .collect();
        Corpus::new(name, Lang::En, kind, pairs).unwrap()
    }

    fn ids(c: &Corpus) -> Vec<String> {
        c.iter().map(|p| p.id.clone()).collect()
    }

    #[test]
    fn sample_all_is_identity_order() {
        let d = corpus("dial", Kind::Dialogue, 6);
        assert_eq!(ids(&sample_dialset(&d, 6, 3).unwrap()), ids(&d));
    }

    #[test]
    fn sample_is_deterministic_ordered_and_distinct() {
        let d = corpus("dial", Kind::Dialogue, 50);
        let a = sample_dialset(&d, 10, 5).unwrap();
        assert_eq!(a, sample_dialset(&d, 10, 5).unwrap());
        let positions: Vec<usize> = a
            .iter()
            .map(|p| d.iter().position(|q| q.id == p.id).unwrap())
            .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
        assert!(sample_dialset(&d, 51, 0).is_err());
        assert!(sample_dialset(&d, 0, 0).is_err());
    }

    #[test]
    fn sample_covers_support() {
        let d = corpus("dial", Kind::Dialogue, 2);
        let seen: HashSet<String> = (0..50)
            .map(|s| sample_dialset(&d, 1, s).unwrap().pairs()[0].id.clone())
            .collect();
        assert_eq!(seen.len(), 2);
    }

    #[test]
    fn seed_sensitivity() {
        let d = corpus("dial", Kind::Dialogue, 100);
        let sets: HashSet<Vec<String>> = (0..10).map(|s| ids(&sample_dialset(&d, 10, s).unwrap())).collect();
        assert!(sets.len() >= 2);
    }

    #[test]
    fn cardinalities() {
        let docs = corpus("docs", Kind::Dialogue, 30);
        let dial = corpus("dial", Kind::Dialogue, 20);
        let v = TrainingVariant::Transformed(Variant::DO);
        let zero = compose(&docs, &dial, &RegimeSpec::zero_shot(v, 1).unwrap()).unwrap();
        assert_eq!(zero.len(), 30);
        let few = compose(&docs, &dial, &RegimeSpec::few_shot(v, 7, 1).unwrap()).unwrap();
        assert_eq!(few.len(), 37);
        let full = compose(&docs, &dial, &RegimeSpec::full(v, 1).unwrap()).unwrap();
        assert_eq!(full.len(), 50);
        assert_eq!(full.name(), "D+O_full_s1");

        let orig = compose(&docs, &dial, &RegimeSpec::few_shot(TrainingVariant::Original, 5, 2).unwrap()).unwrap();
        assert_eq!(orig.len(), 5);
        let orig_full = compose(&docs, &dial, &RegimeSpec::full(TrainingVariant::Original, 2).unwrap()).unwrap();
        assert_eq!(ids(&orig_full), ids(&dial));
    }

    #[test]
    fn naive_composes_document_kind_into_dialogue() {
        let docs = corpus("docs", Kind::Document, 3);
        let dial = corpus("dial", Kind::Dialogue, 2);
        let c = compose(&docs, &dial, &RegimeSpec::full(TrainingVariant::Naive, 0).unwrap()).unwrap();
        assert_eq!(c.kind(), Kind::Dialogue);
        assert_eq!(c.len(), 5);
    }

    #[test]
    fn spec_invariants() {
        assert!(RegimeSpec::zero_shot(TrainingVariant::Original, 0).is_err());
        assert!(RegimeSpec::new(Regime::FewShot, None, 0, TrainingVariant::Naive).is_err());
        assert!(RegimeSpec::new(Regime::Full, Some(3), 0, TrainingVariant::Naive).is_err());
        let docs = corpus("docs", Kind::Dialogue, 3);
        let dial = corpus("dial", Kind::Dialogue, 2);
        let spec = RegimeSpec::few_shot(TrainingVariant::Naive, 3, 0).unwrap();
        assert!(compose(&docs, &dial, &spec).is_err());
    }

    #[test]
    fn names_round_trip() {
        let mut specs = vec![
            RegimeSpec::few_shot(TrainingVariant::Original, 100, 7).unwrap(),
            RegimeSpec::full(TrainingVariant::Original, 0).unwrap(),
            RegimeSpec::zero_shot(TrainingVariant::Naive, u64::MAX).unwrap(),
        ];
        for v in Variant::ALL {
            specs.push(RegimeSpec::few_shot(TrainingVariant::Transformed(v), 1000, 42).unwrap());
            specs.push(RegimeSpec::zero_shot(TrainingVariant::Transformed(v), 1).unwrap());
        }
        for spec in specs {
            assert_eq!(RegimeSpec::parse_name(&spec.name()).unwrap(), spec);
        }
        assert_eq!(
            RegimeSpec::few_shot(TrainingVariant::Transformed(Variant::DSO), 100, 7).unwrap().name(),
            "D+S+O_few_k100_s7"
        );
        assert!(RegimeSpec::parse_name("D_few_s1").is_err());
        assert!(RegimeSpec::parse_name("garbage").is_err());
    }
}
