//! Effective-learning experiments over structured hypothesis families.

mod experiments;
mod learning;
mod vc;
mod word_order;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use experiments::{
    compactness_check, dilution_experiment, sample_first_negative, witness_search_univ, CompactnessReport,
    DilutionReport, SampledString, UnivWitness, WitnessSearch, universal_family,
};
pub use learning::{
    effective_learning_test, label_samples, LearningOutcome, LearningRun, PosteriorSnapshot, SeparatingInterval,
};
pub use vc::{vc_dimension_bruteforce, VCReport};
pub use word_order::{bag_of_words_score, order_sensitive_score, pair_report, word_order_experiment, WordOrderReport};

use crate::borel::{BorelError, ClopenSet};
use crate::lang::{enumerate_words, parse_model_string, Alphabet, LangError, Polarity, Word};
use crate::prob::{Hypothesis, ProbError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LearnError {
    #[error("enumeration of {requested} strings exceeds the cap of {cap}")]
    SizeLimitExceeded { requested: u128, cap: u128 },
    #[error("{requested} subset checks exceed the cap of {cap}")]
    CapExceeded { requested: u128, cap: u128 },
    #[error("no permutation pair with opposite membership in the target")]
    NoSeparatingPair,
    #[error("model is not monotonically non-degenerate on the hypothesis: {0}")]
    DegenerateModel(String),
    #[error("invalid lengths: {0}")]
    InvalidLengths(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error(transparent)]
    Prob(ProbError),
    #[error(transparent)]
    Borel(BorelError),
    #[error(transparent)]
    Lang(LangError),
}

impl From<LangError> for LearnError {
    fn from(e: LangError) -> Self {
        match e {
            LangError::SizeLimitExceeded { requested, cap } => LearnError::SizeLimitExceeded { requested, cap },
            other => LearnError::Lang(other),
        }
    }
}

impl From<ProbError> for LearnError {
    fn from(e: ProbError) -> Self {
        match e {
            ProbError::SizeLimitExceeded { requested, cap } => LearnError::SizeLimitExceeded { requested, cap },
            other => LearnError::Prob(other),
        }
    }
}

impl From<BorelError> for LearnError {
    fn from(e: BorelError) -> Self {
        match e {
            BorelError::SizeLimitExceeded { requested, cap } => LearnError::SizeLimitExceeded { requested, cap },
            other => LearnError::Borel(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HypothesisKind {
    /// Every letter good.
    Universal,
    /// Some letter good.
    Existential,
    /// The first `k` letters good (all of them on shorter strings).
    FirstK { k: usize },
    /// At least `k` good letters.
    CountAtLeast { k: usize },
    /// Good letters at the given 0-based positions, where present.
    PositionSet { positions: BTreeSet<usize> },
    /// Membership by a fixed prefix set; `good` is ignored.
    Clopen { set: ClopenSet },
}

/// A hypothesis `n ↦ hⁿ` given by a rule over a mask of good letters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisDescriptor {
    pub name: String,
    #[serde(flatten)]
    pub kind: HypothesisKind,
    pub good: Vec<bool>,
}

impl HypothesisDescriptor {
    pub fn new(name: impl Into<String>, kind: HypothesisKind, good: Vec<bool>) -> Self {
        HypothesisDescriptor {
            name: name.into(),
            kind,
            good,
        }
    }

    pub fn universal(good: Vec<bool>) -> Self {
        Self::new("universal", HypothesisKind::Universal, good)
    }

    pub fn existential(good: Vec<bool>) -> Self {
        Self::new("existential", HypothesisKind::Existential, good)
    }

    pub fn first_k(k: usize, good: Vec<bool>) -> Self {
        Self::new(format!("first_{k}"), HypothesisKind::FirstK { k }, good)
    }

    pub fn count_at_least(k: usize, good: Vec<bool>) -> Self {
        Self::new(format!("count_at_least_{k}"), HypothesisKind::CountAtLeast { k }, good)
    }

    pub fn position_set(positions: impl IntoIterator<Item = usize>, good: Vec<bool>) -> Self {
        let positions: BTreeSet<usize> = positions.into_iter().collect();
        let name = format!(
            "positions{{{}}}",
            positions.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
        );
        Self::new(name, HypothesisKind::PositionSet { positions }, good)
    }

    pub fn clopen(set: ClopenSet) -> Self {
        let name = Hypothesis::name(&set);
        let good = vec![true; set.arity()];
        Self::new(name, HypothesisKind::Clopen { set }, good)
    }

    /// `V^ω` as a hypothesis.
    pub fn full(arity: usize) -> Self {
        let mut h = Self::clopen(ClopenSet::full(arity));
        h.name = "full".into();
        h
    }

    fn is_good(&self, l: u16) -> bool {
        self.good.get(l as usize).copied().unwrap_or(false)
    }

    /// Length of the prefix that decides membership, for Δ⁰₁ kinds.
    pub fn window(&self) -> Option<usize> {
        match &self.kind {
            HypothesisKind::FirstK { k } => Some(*k),
            HypothesisKind::Clopen { set } => Some(set.base().max_len()),
            _ => None,
        }
    }

    /// `hⁿ` as a set of words.
    pub fn instantiate(&self, arity: usize, n: usize, cap: u128) -> Result<BTreeSet<Word>, LearnError> {
        Ok(enumerate_words(arity, n, cap)?.filter(|w| self.contains(w)).collect())
    }
}

impl Hypothesis for HypothesisDescriptor {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn contains(&self, w: &Word) -> bool {
        let l = w.letters();
        match &self.kind {
            HypothesisKind::Universal => l.iter().all(|&x| self.is_good(x)),
            HypothesisKind::Existential => l.iter().any(|&x| self.is_good(x)),
            HypothesisKind::FirstK { k } => l.iter().take(*k).all(|&x| self.is_good(x)),
            HypothesisKind::CountAtLeast { k } => l.iter().filter(|&&x| self.is_good(x)).count() >= *k,
            HypothesisKind::PositionSet { positions } => positions
                .iter()
                .take_while(|&&p| p < l.len())
                .all(|&p| self.is_good(l[p])),
            HypothesisKind::Clopen { set } => set.contains_cylinder(w),
        }
    }
}

impl fmt::Display for HypothesisDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Config-file form of a hypothesis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HypothesisSpec {
    Universal {
        #[serde(default = "default_predicate")]
        predicate: String,
    },
    Existential {
        #[serde(default = "default_predicate")]
        predicate: String,
    },
    FirstK {
        k: usize,
        #[serde(default = "default_predicate")]
        predicate: String,
    },
    CountAtLeast {
        k: usize,
        #[serde(default = "default_predicate")]
        predicate: String,
    },
    PositionSet {
        positions: Vec<usize>,
        #[serde(default = "default_predicate")]
        predicate: String,
    },
    /// Prefixes in formal syntax.
    Clopen { prefixes: Vec<String> },
    Full,
}

fn default_predicate() -> String {
    "blue".into()
}

impl HypothesisSpec {
    pub fn build(&self, alphabet: &Alphabet) -> Result<HypothesisDescriptor, LearnError> {
        let good = |p: &str| {
            if alphabet.predicate_slot(p).is_none() {
                return Err(LearnError::UnknownPredicate(p.to_string()));
            }
            Ok(alphabet.letters_with(p, Polarity::Positive))
        };
        Ok(match self {
            HypothesisSpec::Universal { predicate } => HypothesisDescriptor::universal(good(predicate)?),
            HypothesisSpec::Existential { predicate } => HypothesisDescriptor::existential(good(predicate)?),
            HypothesisSpec::FirstK { k, predicate } => HypothesisDescriptor::first_k(*k, good(predicate)?),
            HypothesisSpec::CountAtLeast { k, predicate } => {
                HypothesisDescriptor::count_at_least(*k, good(predicate)?)
            }
            HypothesisSpec::PositionSet { positions, predicate } => {
                HypothesisDescriptor::position_set(positions.iter().copied(), good(predicate)?)
            }
            HypothesisSpec::Clopen { prefixes } => {
                let words = prefixes
                    .iter()
                    .map(|p| {
                        let d = parse_model_string(p, alphabet.vocabulary())?;
                        alphabet.diagram_to_word(&d)
                    })
                    .collect::<Result<Vec<_>, LangError>>()?;
                HypothesisDescriptor::clopen(ClopenSet::new(alphabet.size(), words))
            }
            HypothesisSpec::Full => HypothesisDescriptor::full(alphabet.size()),
        })
    }
}

impl std::str::FromStr for HypothesisSpec {
    type Err = LearnError;

    /// `universal`, `existential`, `first_k:K`, `count_at_least:K`,
    /// `positions:I,J,..`, `full`, or `clopen:P1;P2;..` with prefixes in
    /// formal syntax. The first four take an optional `@predicate` suffix.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LearnError::InvalidLengths(format!("cannot read hypothesis `{s}`"));
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("clopen:") {
            let prefixes: Vec<String> = rest.split(';').map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect();
            return Ok(HypothesisSpec::Clopen { prefixes });
        }
        let (body, predicate) = match s.split_once('@') {
            Some((b, p)) => (b, p.trim().to_string()),
            None => (s, default_predicate()),
        };
        let (head, arg) = match body.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (body.trim(), None),
        };
        let k = || arg.and_then(|a| a.parse::<usize>().ok()).ok_or_else(bad);
        Ok(match head {
            "universal" => HypothesisSpec::Universal { predicate },
            "existential" => HypothesisSpec::Existential { predicate },
            "first_k" => HypothesisSpec::FirstK { k: k()?, predicate },
            "count_at_least" => HypothesisSpec::CountAtLeast { k: k()?, predicate },
            "positions" => HypothesisSpec::PositionSet {
                positions: arg
                    .ok_or_else(bad)?
                    .split(',')
                    .filter(|p| !p.trim().is_empty())
                    .map(|p| p.trim().parse().map_err(|_| bad()))
                    .collect::<Result<_, _>>()?,
                predicate,
            },
            "full" => HypothesisSpec::Full,
            _ => return Err(bad()),
        })
    }
}

/// Every clopen set whose prefixes all have length `window`, one per subset
/// of `V^window`, the empty set excluded.
pub fn clopen_family(arity: usize, window: usize, cap: u128) -> Result<Vec<HypothesisDescriptor>, LearnError> {
    let words: Vec<Word> = enumerate_words(arity, window, cap)?.collect();
    if words.len() >= 64 || (1u128 << words.len()) > cap {
        return Err(LearnError::SizeLimitExceeded {
            requested: 1u128.checked_shl(words.len() as u32).unwrap_or(u128::MAX),
            cap,
        });
    }
    Ok((1u64..(1u64 << words.len()))
        .map(|mask| {
            let chosen = words
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, w)| w.clone());
            HypothesisDescriptor::clopen(ClopenSet::new(arity, chosen))
        })
        .collect())
}

/// Universal, existential, `first_k` and `count_at_least` for `k ≤ window`,
/// plus [`clopen_family`] at `window`.
pub fn standard_family(good: &[bool], window: usize, cap: u128) -> Result<Vec<HypothesisDescriptor>, LearnError> {
    let mut family = vec![
        HypothesisDescriptor::universal(good.to_vec()),
        HypothesisDescriptor::existential(good.to_vec()),
    ];
    for k in 1..=window {
        family.push(HypothesisDescriptor::first_k(k, good.to_vec()));
        family.push(HypothesisDescriptor::count_at_least(k, good.to_vec()));
    }
    family.extend(clopen_family(good.len(), window, cap)?);
    Ok(family)
}

/// Position-set hypotheses that agree with the universal one on every
/// length up to `n` and may differ at lengths `n+1 ..= total`: every
/// `S` with `{0..n-1} ⊆ S ⊆ {0..total-1}`, the full `S` excluded.
pub fn prefix_distinguishing_family(n: usize, total: usize, good: &[bool]) -> Vec<HypothesisDescriptor> {
    let free = total.saturating_sub(n);
    let mut family = Vec::new();
    for mask in 0u64..(1u64 << free) {
        if free > 0 && mask == (1u64 << free) - 1 {
            continue;
        }
        let positions = (0..n).chain((0..free).filter(|i| mask >> i & 1 == 1).map(|i| n + i));
        family.push(HypothesisDescriptor::position_set(positions, good.to_vec()));
    }
    family
}
