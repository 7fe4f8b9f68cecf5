//! Cantor-topology sets over infinite strings, handled at finite stages.
//!
//! `O(A) = A.V^ω` is represented by its finite prefix set `A`. Boolean
//! operations expand both operands to a common depth and work on the
//! resulting same-length prefix sets, so every result can be compared
//! extensionally by enumeration. Membership of an infinite string in a
//! Π⁰₁ or Σ⁰₁ family is never decided; a finite prefix is only ever
//! `excluded`, `possible` or `witnessed`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lang::{
    enumerate_words, parse_model_string, Alphabet, AtomicDiagram, LangError, Polarity, Quantifier, Sentence,
    Vocabulary, Word, DEFAULT_ENUMERATION_CAP,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BorelError {
    #[error("enumeration of {requested} strings exceeds the cap of {cap}")]
    SizeLimitExceeded { requested: u128, cap: u128 },
    #[error("prefix of length {len} is longer than the requested depth {depth}")]
    PrefixTooLong { len: usize, depth: usize },
    #[error("alphabet sizes differ ({0} vs {1})")]
    ArityMismatch(usize, usize),
    #[error("family `{family}` is not nested between stages {} and {stage}", stage - 1)]
    MonotonicityViolation { family: String, stage: usize },
    #[error("unsupported concept: {0}")]
    UnsupportedConcept(String),
    #[error(transparent)]
    Lang(LangError),
}

impl From<LangError> for BorelError {
    fn from(e: LangError) -> Self {
        match e {
            LangError::SizeLimitExceeded { requested, cap } => BorelError::SizeLimitExceeded { requested, cap },
            other => BorelError::Lang(other),
        }
    }
}

/// A finite set of finite strings, possibly of mixed lengths.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixSet {
    prefixes: BTreeSet<Word>,
    normalized: bool,
}

impl PrefixSet {
    pub fn new(prefixes: impl IntoIterator<Item = Word>) -> Self {
        PrefixSet {
            prefixes: prefixes.into_iter().collect(),
            normalized: false,
        }
    }

    pub fn prefixes(&self) -> &BTreeSet<Word> {
        &self.prefixes
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn len(&self) -> usize {
        self.prefixes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefixes.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.prefixes.iter().map(Word::len).max().unwrap_or(0)
    }

    /// Drops every member that extends another member.
    pub fn normalize(&self) -> PrefixSet {
        let mut kept: Vec<Word> = Vec::new();
        let mut by_len: Vec<&Word> = self.prefixes.iter().collect();
        by_len.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        for w in by_len {
            if !kept.iter().any(|k| k.is_prefix_of(w)) {
                kept.push(w.clone());
            }
        }
        PrefixSet {
            prefixes: kept.into_iter().collect(),
            normalized: true,
        }
    }
}

/// `O(A)`: every infinite string with a prefix in `A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClopenSet {
    arity: usize,
    base: PrefixSet,
}

impl ClopenSet {
    pub fn new(arity: usize, prefixes: impl IntoIterator<Item = Word>) -> Self {
        ClopenSet {
            arity,
            base: PrefixSet::new(prefixes),
        }
    }

    /// `V^ω`, based on the empty prefix.
    pub fn full(arity: usize) -> Self {
        Self::new(arity, [Word::empty()])
    }

    pub fn empty(arity: usize) -> Self {
        Self::new(arity, [])
    }

    pub fn from_diagrams<'a>(
        alphabet: &Alphabet,
        diagrams: impl IntoIterator<Item = &'a AtomicDiagram>,
    ) -> Result<Self, BorelError> {
        let words = diagrams
            .into_iter()
            .map(|d| alphabet.diagram_to_word(d))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(alphabet.size(), words))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn base(&self) -> &PrefixSet {
        &self.base
    }

    pub fn normalized(&self) -> ClopenSet {
        ClopenSet {
            arity: self.arity,
            base: self.base.normalize(),
        }
    }

    /// The cylinder of `w` lies inside the set.
    pub fn contains_cylinder(&self, w: &Word) -> bool {
        self.base.prefixes.iter().any(|p| p.is_prefix_of(w))
    }

    /// The cylinder of `w` meets the set.
    pub fn meets_cylinder(&self, w: &Word) -> bool {
        self.base
            .prefixes
            .iter()
            .any(|p| p.is_prefix_of(w) || w.is_prefix_of(p))
    }

    /// All strings of length `depth` whose cylinders lie in the set.
    pub fn expand(&self, depth: usize, cap: u128) -> Result<BTreeSet<Word>, BorelError> {
        let mut out = BTreeSet::new();
        for p in &self.base.prefixes {
            if p.len() > depth {
                return Err(BorelError::PrefixTooLong { len: p.len(), depth });
            }
            for tail in enumerate_words(self.arity, depth - p.len(), cap)? {
                out.insert(p.concat(&tail));
            }
            if out.len() as u128 > cap {
                return Err(BorelError::SizeLimitExceeded {
                    requested: out.len() as u128,
                    cap,
                });
            }
        }
        Ok(out)
    }

    /// Same denotation, checked on all strings of length `depth`.
    pub fn equivalent(&self, other: &ClopenSet, depth: usize) -> Result<bool, BorelError> {
        check_arity(self, other)?;
        Ok(self.expand(depth, DEFAULT_ENUMERATION_CAP)? == other.expand(depth, DEFAULT_ENUMERATION_CAP)?)
    }

    /// Prefixes rendered as diagrams.
    pub fn to_diagrams(&self, alphabet: &Alphabet) -> Result<Vec<AtomicDiagram>, BorelError> {
        Ok(self
            .base
            .prefixes
            .iter()
            .map(|w| alphabet.word_to_diagram(w))
            .collect::<Result<_, _>>()?)
    }
}

fn check_arity(a: &ClopenSet, b: &ClopenSet) -> Result<(), BorelError> {
    if a.arity != b.arity {
        return Err(BorelError::ArityMismatch(a.arity, b.arity));
    }
    Ok(())
}

/// Complement within `V^ω`, represented by length-`depth` prefixes.
pub fn complement_clopen(c: &ClopenSet, depth: usize) -> Result<ClopenSet, BorelError> {
    let inside = c.expand(depth, DEFAULT_ENUMERATION_CAP)?;
    let rest = enumerate_words(c.arity, depth, DEFAULT_ENUMERATION_CAP)?.filter(|w| !inside.contains(w));
    Ok(ClopenSet::new(c.arity, rest))
}

pub fn intersect_clopen(a: &ClopenSet, b: &ClopenSet, depth: usize) -> Result<ClopenSet, BorelError> {
    check_arity(a, b)?;
    let left = a.expand(depth, DEFAULT_ENUMERATION_CAP)?;
    let right = b.expand(depth, DEFAULT_ENUMERATION_CAP)?;
    Ok(ClopenSet::new(a.arity, left.intersection(&right).cloned()))
}

pub fn union_clopen(a: &ClopenSet, b: &ClopenSet, depth: usize) -> Result<ClopenSet, BorelError> {
    check_arity(a, b)?;
    let left = a.expand(depth, DEFAULT_ENUMERATION_CAP)?;
    let right = b.expand(depth, DEFAULT_ENUMERATION_CAP)?;
    Ok(ClopenSet::new(a.arity, left.union(&right).cloned()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// Decreasing intersection `⋂ O(B_n)`.
    Pi01,
    /// Increasing union `⋃ O(B_n)`.
    Sigma01,
}

/// Stage rules available to families.
#[derive(Clone)]
pub enum Generator {
    /// `B_n` = strings of length `n` made only of good letters.
    Universal { good: Vec<bool> },
    /// `B_n` = strings of length `n` containing a good letter.
    Existential { good: Vec<bool> },
    /// `B_n` = strings of length `n` with at least `at_least` good letters.
    CountingThreshold { good: Vec<bool>, at_least: usize },
    /// The same clopen set at every stage.
    PrefixWindow(ClopenSet),
    Custom(Arc<dyn Fn(usize) -> ClopenSet + Send + Sync>),
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Universal { good } => f.debug_struct("Universal").field("good", good).finish(),
            Generator::Existential { good } => f.debug_struct("Existential").field("good", good).finish(),
            Generator::CountingThreshold { good, at_least } => f
                .debug_struct("CountingThreshold")
                .field("good", good)
                .field("at_least", at_least)
                .finish(),
            Generator::PrefixWindow(c) => f.debug_tuple("PrefixWindow").field(c).finish(),
            Generator::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Rule-generated family `n ↦ B_n` of clopen stages.
#[derive(Debug, Clone)]
pub struct BorelFamily {
    pub name: String,
    pub kind: FamilyKind,
    pub generator: Generator,
    pub arity: usize,
    /// Whether stages must be nested; checked on every call to [`stage`].
    pub monotone: bool,
    pub cap: u128,
}

impl BorelFamily {
    pub fn new(name: impl Into<String>, kind: FamilyKind, generator: Generator, arity: usize) -> Self {
        BorelFamily {
            name: name.into(),
            kind,
            generator,
            arity,
            monotone: true,
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }

    /// `h_∀` for a predicate: Π⁰₁, stage `n` is the set of good strings of
    /// length `n`.
    pub fn universal(alphabet: &Alphabet, predicate: &str, polarity: Polarity) -> Self {
        Self::new(
            format!("forall {}", polarity_name(predicate, polarity)),
            FamilyKind::Pi01,
            Generator::Universal {
                good: alphabet.letters_with(predicate, polarity),
            },
            alphabet.size(),
        )
    }

    /// `h_∃` for a predicate: Σ⁰₁.
    pub fn existential(alphabet: &Alphabet, predicate: &str, polarity: Polarity) -> Self {
        Self::new(
            format!("exists {}", polarity_name(predicate, polarity)),
            FamilyKind::Sigma01,
            Generator::Existential {
                good: alphabet.letters_with(predicate, polarity),
            },
            alphabet.size(),
        )
    }

    pub fn for_sentence(alphabet: &Alphabet, sentence: &Sentence) -> Self {
        match sentence.quantifier {
            Quantifier::Forall => Self::universal(alphabet, &sentence.predicate, sentence.polarity),
            Quantifier::Exists => Self::existential(alphabet, &sentence.predicate, sentence.polarity),
        }
    }

    fn raw_stage(&self, n: usize) -> Result<ClopenSet, BorelError> {
        let filtered = |keep: &dyn Fn(&Word) -> bool| -> Result<ClopenSet, BorelError> {
            let words = enumerate_words(self.arity, n, self.cap)?.filter(|w| keep(w));
            Ok(ClopenSet::new(self.arity, words))
        };
        let is_good = |good: &[bool], l: u16| good.get(l as usize).copied().unwrap_or(false);
        match &self.generator {
            Generator::Universal { good } => {
                let letters: Vec<u16> = (0..self.arity as u16).filter(|&l| is_good(good, l)).collect();
                let words = enumerate_words(letters.len(), n, self.cap)?
                    .map(|w| Word::new(w.letters().iter().map(|&i| letters[i as usize]).collect()));
                Ok(ClopenSet::new(self.arity, words))
            }
            Generator::Existential { good } => filtered(&|w| w.letters().iter().any(|&l| is_good(good, l))),
            Generator::CountingThreshold { good, at_least } => {
                filtered(&|w| w.letters().iter().filter(|&&l| is_good(good, l)).count() >= *at_least)
            }
            Generator::PrefixWindow(c) => Ok(c.clone()),
            Generator::Custom(f) => Ok(f(n)),
        }
    }
}

fn polarity_name(predicate: &str, polarity: Polarity) -> String {
    if polarity.is_positive() {
        predicate.to_string()
    } else {
        format!("¬{predicate}")
    }
}

/// `B_n`. For monotone families the stage is checked against `B_{n-1}`.
pub fn stage(f: &BorelFamily, n: usize) -> Result<ClopenSet, BorelError> {
    let current = f.raw_stage(n)?;
    if f.monotone && n > 0 {
        let previous = f.raw_stage(n - 1)?;
        let depth = n.max(current.base.max_len()).max(previous.base.max_len());
        let cur = current.expand(depth, f.cap)?;
        let prev = previous.expand(depth, f.cap)?;
        let nested = match f.kind {
            FamilyKind::Pi01 => cur.is_subset(&prev),
            FamilyKind::Sigma01 => prev.is_subset(&cur),
        };
        if !nested {
            return Err(BorelError::MonotonicityViolation {
                family: f.name.clone(),
                stage: n,
            });
        }
    }
    Ok(current)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageMembership {
    /// Every infinite extension is outside (Π⁰₁ refutation).
    Excluded,
    /// Not settled at this stage.
    Possible,
    /// Every infinite extension is inside (Σ⁰₁ verification).
    Witnessed,
}

impl fmt::Display for StageMembership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StageMembership::Excluded => "excluded",
            StageMembership::Possible => "possible",
            StageMembership::Witnessed => "witnessed",
        })
    }
}

/// Status of a finite prefix at the stage equal to its length. A Π⁰₁ family
/// can only exclude, a Σ⁰₁ family can only witness.
pub fn membership_at_stage(f: &BorelFamily, prefix: &Word) -> Result<StageMembership, BorelError> {
    let b = stage(f, prefix.len())?;
    Ok(match f.kind {
        FamilyKind::Pi01 if !b.meets_cylinder(prefix) => StageMembership::Excluded,
        FamilyKind::Sigma01 if b.contains_cylinder(prefix) => StageMembership::Witnessed,
        _ => StageMembership::Possible,
    })
}

/// Levels of the Borel hierarchy distinguished here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HierarchyLevel {
    Delta01,
    Sigma01,
    Pi01,
    /// Beyond the first level (Π⁰₂ and up); label only.
    Higher,
}

impl PartialOrd for HierarchyLevel {
    /// Δ⁰₁ below Σ⁰₁ and Π⁰₁, which are incomparable, both below `Higher`.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use HierarchyLevel::*;
        let rank = |l: &HierarchyLevel| match l {
            Delta01 => 0,
            Sigma01 | Pi01 => 1,
            Higher => 2,
        };
        match (self, other) {
            (a, b) if a == b => Some(Ordering::Equal),
            (Sigma01, Pi01) | (Pi01, Sigma01) => None,
            (a, b) => rank(a).partial_cmp(&rank(b)),
        }
    }
}

impl fmt::Display for HierarchyLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HierarchyLevel::Delta01 => "Δ⁰₁",
            HierarchyLevel::Sigma01 => "Σ⁰₁",
            HierarchyLevel::Pi01 => "Π⁰₁",
            HierarchyLevel::Higher => "higher",
        })
    }
}

/// Something to classify.
#[derive(Debug, Clone)]
pub enum Concept {
    Sentence(Sentence),
    /// A property decided by a fixed finite prefix window.
    Clopen(ClopenSet),
    /// An externally described concept looked up in a [`ConceptRegistry`].
    Registered(String),
}

/// Static labels for concepts that have no computational representation
/// here, such as conversational coherence sets.
#[derive(Debug, Clone)]
pub struct ConceptRegistry {
    labels: BTreeMap<String, HierarchyLevel>,
}

impl Default for ConceptRegistry {
    fn default() -> Self {
        let mut labels = BTreeMap::new();
        labels.insert("conversational_consistency".to_string(), HierarchyLevel::Higher);
        labels.insert("conversational_coherence".to_string(), HierarchyLevel::Higher);
        labels.insert("conversational_success".to_string(), HierarchyLevel::Higher);
        ConceptRegistry { labels }
    }
}

impl ConceptRegistry {
    pub fn register(&mut self, name: impl Into<String>, level: HierarchyLevel) {
        self.labels.insert(name.into(), level);
    }

    pub fn get(&self, name: &str) -> Option<HierarchyLevel> {
        self.labels.get(name).copied()
    }
}

/// Syntax-driven classification of the supported fragment.
pub fn classify(
    concept: &Concept,
    vocab: &Vocabulary,
    registry: &ConceptRegistry,
) -> Result<HierarchyLevel, BorelError> {
    match concept {
        Concept::Sentence(s) => {
            if !vocab.has_predicate(&s.predicate) {
                return Err(BorelError::UnsupportedConcept(format!(
                    "predicate `{}` is not in the vocabulary",
                    s.predicate
                )));
            }
            Ok(match s.quantifier {
                Quantifier::Forall => HierarchyLevel::Pi01,
                Quantifier::Exists => HierarchyLevel::Sigma01,
            })
        }
        Concept::Clopen(_) => Ok(HierarchyLevel::Delta01),
        Concept::Registered(name) => registry
            .get(name)
            .ok_or_else(|| BorelError::UnsupportedConcept(format!("no registered concept `{name}`"))),
    }
}

/// Declarative family description, as found in config files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub name: String,
    pub kind: FamilyKind,
    pub generator: GeneratorSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Universal {
        predicate: String,
        #[serde(default = "positive")]
        polarity: Polarity,
    },
    Existential {
        predicate: String,
        #[serde(default = "positive")]
        polarity: Polarity,
    },
    CountingThreshold {
        predicate: String,
        #[serde(default = "positive")]
        polarity: Polarity,
        at_least: usize,
    },
    /// Prefixes in formal syntax, one diagram per entry.
    PrefixWindow { prefixes: Vec<String> },
}

fn positive() -> Polarity {
    Polarity::Positive
}

impl FamilySpec {
    pub fn build(&self, alphabet: &Alphabet) -> Result<BorelFamily, BorelError> {
        let check = |p: &str| {
            if alphabet.predicate_slot(p).is_none() {
                Err(BorelError::UnsupportedConcept(format!("predicate `{p}` is not in the vocabulary")))
            } else {
                Ok(())
            }
        };
        let generator = match &self.generator {
            GeneratorSpec::Universal { predicate, polarity } => {
                check(predicate)?;
                Generator::Universal {
                    good: alphabet.letters_with(predicate, *polarity),
                }
            }
            GeneratorSpec::Existential { predicate, polarity } => {
                check(predicate)?;
                Generator::Existential {
                    good: alphabet.letters_with(predicate, *polarity),
                }
            }
            GeneratorSpec::CountingThreshold {
                predicate,
                polarity,
                at_least,
            } => {
                check(predicate)?;
                Generator::CountingThreshold {
                    good: alphabet.letters_with(predicate, *polarity),
                    at_least: *at_least,
                }
            }
            GeneratorSpec::PrefixWindow { prefixes } => {
                let diagrams = prefixes
                    .iter()
                    .map(|p| parse_model_string(p, alphabet.vocabulary()))
                    .collect::<Result<Vec<_>, _>>()?;
                Generator::PrefixWindow(ClopenSet::from_diagrams(alphabet, &diagrams)?)
            }
        };
        Ok(BorelFamily::new(self.name.clone(), self.kind, generator, alphabet.size()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u16 = 0;
    const N: u16 = 1;

    fn w(letters: &[u16]) -> Word {
        Word::new(letters.to_vec())
    }

    fn binary() -> Alphabet {
        Alphabet::new(&Vocabulary::logical())
    }

    #[test]
    fn complement_examples() {
        let c = ClopenSet::new(2, [w(&[P])]);
        assert_eq!(complement_clopen(&c, 1).unwrap().base().prefixes(), &BTreeSet::from([w(&[N])]));
        assert!(complement_clopen(&ClopenSet::full(2), 3).unwrap().base().is_empty());
        let c = ClopenSet::new(2, [w(&[P, P]), w(&[P, N])]);
        assert_eq!(
            complement_clopen(&c, 2).unwrap().base().prefixes(),
            &BTreeSet::from([w(&[N, P]), w(&[N, N])])
        );
        let back = complement_clopen(&complement_clopen(&c, 2).unwrap(), 2).unwrap();
        assert!(back.equivalent(&c, 2).unwrap());
        assert!(back.equivalent(&c, 4).unwrap());
    }

    #[test]
    fn intersection_examples() {
        let first_p = ClopenSet::new(2, [w(&[P])]);
        let second_p = ClopenSet::new(2, [w(&[P, P]), w(&[N, P])]);
        let both = intersect_clopen(&first_p, &second_p, 2).unwrap();
        assert_eq!(both.base().prefixes(), &BTreeSet::from([w(&[P, P])]));
        let full = ClopenSet::full(2);
        assert!(intersect_clopen(&first_p, &full, 2).unwrap().equivalent(&first_p, 2).unwrap());
        let none = intersect_clopen(&first_p, &complement_clopen(&first_p, 1).unwrap(), 2).unwrap();
        assert!(none.base().is_empty());
    }

    #[test]
    fn depth_and_arity_errors() {
        let c = ClopenSet::new(2, [w(&[P, P, P])]);
        assert!(matches!(complement_clopen(&c, 2), Err(BorelError::PrefixTooLong { len: 3, depth: 2 })));
        assert!(matches!(
            intersect_clopen(&c, &ClopenSet::full(4), 3),
            Err(BorelError::ArityMismatch(2, 4))
        ));
        assert!(matches!(
            complement_clopen(&ClopenSet::full(2), 40),
            Err(BorelError::SizeLimitExceeded { .. })
        ));
    }

    #[test]
    fn normalization() {
        let c = ClopenSet::new(2, [w(&[P]), w(&[P, N]), w(&[N, N, P]), w(&[N, N])]);
        let n = c.normalized();
        assert!(n.base().is_normalized());
        assert_eq!(n.base().prefixes(), &BTreeSet::from([w(&[P]), w(&[N, N])]));
        assert!(n.equivalent(&c, 3).unwrap());
    }

    #[test]
    fn universal_stages() {
        let f = BorelFamily::universal(&binary(), "blue", Polarity::Positive);
        assert_eq!(stage(&f, 0).unwrap(), ClopenSet::full(2));
        for n in 1..6 {
            let s = stage(&f, n).unwrap();
            assert_eq!(s.base().prefixes(), &BTreeSet::from([Word::new(vec![P; n])]));
        }
    }

    #[test]
    fn existential_stages() {
        let f = BorelFamily::existential(&binary(), "blue", Polarity::Positive);
        assert!(stage(&f, 0).unwrap().base().is_empty());
        assert_eq!(stage(&f, 2).unwrap().base().len(), 3);
    }

    #[test]
    fn monotonicity_violation() {
        let f = BorelFamily::new(
            "alternating",
            FamilyKind::Pi01,
            Generator::Custom(Arc::new(|n| {
                ClopenSet::new(2, [Word::new(vec![if n % 2 == 0 { P } else { N }; n])])
            })),
            2,
        );
        assert!(stage(&f, 1).is_ok());
        assert!(matches!(
            stage(&f, 2),
            Err(BorelError::MonotonicityViolation { stage: 2, .. })
        ));
        let lax = BorelFamily { monotone: false, ..f };
        assert!(stage(&lax, 2).is_ok());
    }

    #[test]
    fn membership_examples() {
        let a = binary();
        let all = BorelFamily::universal(&a, "blue", Polarity::Positive);
        assert_eq!(membership_at_stage(&all, &w(&[N])).unwrap(), StageMembership::Excluded);
        assert_eq!(membership_at_stage(&all, &w(&[P, P])).unwrap(), StageMembership::Possible);
        let some = BorelFamily::existential(&a, "blue", Polarity::Positive);
        assert_eq!(membership_at_stage(&some, &w(&[P])).unwrap(), StageMembership::Witnessed);
        assert_eq!(membership_at_stage(&some, &w(&[N, N])).unwrap(), StageMembership::Possible);
    }

    #[test]
    fn classification() {
        let v = Vocabulary::logical();
        let reg = ConceptRegistry::default();
        let c = |s: Sentence| classify(&Concept::Sentence(s), &v, &reg).unwrap();
        assert_eq!(c(Sentence::forall("blue")), HierarchyLevel::Pi01);
        assert_eq!(c(Sentence::exists("blue").negated_predicate()), HierarchyLevel::Sigma01);
        let first_blue = ClopenSet::new(2, [w(&[P])]);
        assert_eq!(classify(&Concept::Clopen(first_blue), &v, &reg).unwrap(), HierarchyLevel::Delta01);
        assert_eq!(
            classify(&Concept::Registered("conversational_coherence".into()), &v, &reg).unwrap(),
            HierarchyLevel::Higher
        );
        assert!(classify(&Concept::Registered("nope".into()), &v, &reg).is_err());
        assert!(classify(&Concept::Sentence(Sentence::forall("red")), &v, &reg).is_err());
    }

    #[test]
    fn level_order() {
        use HierarchyLevel::*;
        assert!(Delta01 < Pi01 && Delta01 < Sigma01 && Pi01 < Higher && Sigma01 < Higher);
        assert_eq!(Pi01.partial_cmp(&Sigma01), None);
    }

    #[test]
    fn family_spec_from_toml() {
        let spec: FamilySpec = toml::from_str(
            r#"
            name = "first blue"
            kind = "pi01"
            [generator]
            rule = "prefix_window"
            prefixes = ["blue(a1)"]
            "#,
        )
        .unwrap();
        let f = spec.build(&binary()).unwrap();
        assert_eq!(membership_at_stage(&f, &w(&[N, P])).unwrap(), StageMembership::Excluded);
        assert_eq!(membership_at_stage(&f, &w(&[P, N])).unwrap(), StageMembership::Possible);

        let spec: FamilySpec = toml::from_str(
            r#"
            name = "two blue"
            kind = "sigma01"
            generator = { rule = "counting_threshold", predicate = "blue", at_least = 2 }
            "#,
        )
        .unwrap();
        let f = spec.build(&binary()).unwrap();
        assert_eq!(stage(&f, 3).unwrap().base().len(), 4);
        assert_eq!(membership_at_stage(&f, &w(&[P, N, P])).unwrap(), StageMembership::Witnessed);
    }
}
