//! Model checking of quantified sentences on atomic diagrams, prefix
//! consistency, continuation sets and semantic consequence.
//!
//! A diagram `d` defines the model whose domain is the objects `d` mentions.
//! An object's status for a predicate `P` is fixed by a literal `P(o)` or
//! `¬P(o)`, or negatively by a positive literal of a predicate exclusive
//! with `P`. Otherwise the status is open.

mod oracle;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lang::{
    enumerate_diagrams, parse_model_string, Alphabet, AtomicDiagram, LangError, Quantifier, Sentence,
    Vocabulary, Word,
};

pub use oracle::brute_force_oracle;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("status of `{object}` for `{predicate}` is not fixed by the diagram")]
    UnderdeterminedObject { object: String, predicate: String },
    #[error("diagram assigns `{object}` contradictory statuses for `{predicate}`")]
    InconsistentDiagram { object: String, predicate: String },
    #[error("predicate `{0}` is not in the vocabulary")]
    UnknownPredicate(String),
    #[error(transparent)]
    Lang(#[from] LangError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruthVerdict {
    True,
    False,
    Undetermined,
}

impl fmt::Display for TruthVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TruthVerdict::True => "true",
            TruthVerdict::False => "false",
            TruthVerdict::Undetermined => "undetermined",
        })
    }
}

/// How [`satisfies`] treats objects whose status is open.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strictness {
    /// Open objects are tolerated as long as the verdict does not depend on
    /// them (a counterexample to `∀` or a witness for `∃` settles it).
    #[default]
    Lenient,
    /// Any open object is an error.
    Strict,
}

/// Status of every mentioned object for one predicate, in first-mention order.
fn statuses<'d>(
    d: &'d AtomicDiagram,
    predicate: &str,
    vocab: &Vocabulary,
) -> Result<Vec<(&'d str, Option<bool>)>, SemanticsError> {
    if !vocab.has_predicate(predicate) {
        return Err(SemanticsError::UnknownPredicate(predicate.to_string()));
    }
    let mut order: Vec<&str> = Vec::new();
    let mut status: BTreeMap<&str, Option<bool>> = BTreeMap::new();
    for lit in d {
        let entry = status.entry(&lit.constant).or_insert_with(|| {
            order.push(&lit.constant);
            None
        });
        let fixed = if lit.predicate == predicate {
            Some(lit.polarity.is_positive())
        } else if lit.polarity.is_positive() && vocab.excludes(&lit.predicate, predicate) {
            Some(false)
        } else {
            None
        };
        if let Some(v) = fixed {
            match entry {
                Some(old) if *old != v => {
                    return Err(SemanticsError::InconsistentDiagram {
                        object: lit.constant.clone(),
                        predicate: predicate.to_string(),
                    })
                }
                _ => *entry = Some(v),
            }
        }
    }
    Ok(order.into_iter().map(|o| (o, status[o])).collect())
}

/// Three-valued evaluation of `phi` on the model defined by `d`.
/// `Undetermined` arises only from open object statuses.
pub fn evaluate(d: &AtomicDiagram, phi: &Sentence, vocab: &Vocabulary) -> Result<TruthVerdict, SemanticsError> {
    let st = statuses(d, &phi.predicate, vocab)?;
    let want = phi.polarity.is_positive();
    let open = st.iter().any(|(_, s)| s.is_none());
    Ok(match phi.quantifier {
        Quantifier::Forall => {
            if st.iter().any(|(_, s)| *s == Some(!want)) {
                TruthVerdict::False
            } else if open {
                TruthVerdict::Undetermined
            } else {
                TruthVerdict::True
            }
        }
        Quantifier::Exists => {
            if st.iter().any(|(_, s)| *s == Some(want)) {
                TruthVerdict::True
            } else if open {
                TruthVerdict::Undetermined
            } else {
                TruthVerdict::False
            }
        }
    })
}

/// Whether the model defined by `d` satisfies `phi`. The empty model makes
/// `∀` true and `∃` false.
pub fn satisfies(
    d: &AtomicDiagram,
    phi: &Sentence,
    vocab: &Vocabulary,
    strictness: Strictness,
) -> Result<bool, SemanticsError> {
    let open_object = |d: &AtomicDiagram| -> Result<Option<String>, SemanticsError> {
        Ok(statuses(d, &phi.predicate, vocab)?
            .into_iter()
            .find(|(_, s)| s.is_none())
            .map(|(o, _)| o.to_string()))
    };
    let underdetermined = |object: String| SemanticsError::UnderdeterminedObject {
        object,
        predicate: phi.predicate.clone(),
    };
    if strictness == Strictness::Strict {
        if let Some(o) = open_object(d)? {
            return Err(underdetermined(o));
        }
    }
    match evaluate(d, phi, vocab)? {
        TruthVerdict::True => Ok(true),
        TruthVerdict::False => Ok(false),
        TruthVerdict::Undetermined => Err(underdetermined(open_object(d)?.unwrap_or_default())),
    }
}

/// Whether a finite prefix is still consistent with `phi` when further
/// objects may follow. A counterexample refutes `∀` for good and a witness
/// verifies `∃` for good; nothing else is settled at a finite stage.
pub fn consistent_with(
    prefix: &AtomicDiagram,
    phi: &Sentence,
    vocab: &Vocabulary,
) -> Result<TruthVerdict, SemanticsError> {
    let st = statuses(prefix, &phi.predicate, vocab)?;
    let want = phi.polarity.is_positive();
    Ok(match phi.quantifier {
        Quantifier::Forall if st.iter().any(|(_, s)| *s == Some(!want)) => TruthVerdict::False,
        Quantifier::Exists if st.iter().any(|(_, s)| *s == Some(want)) => TruthVerdict::True,
        _ => TruthVerdict::Undetermined,
    })
}

/// The length-`n` strings (models of `n` objects) in which a sentence holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuationSet {
    length: usize,
    members: BTreeSet<AtomicDiagram>,
    sentence: Option<Sentence>,
}

impl ContinuationSet {
    pub fn new(length: usize, members: BTreeSet<AtomicDiagram>, sentence: Option<Sentence>) -> Self {
        ContinuationSet {
            length,
            members,
            sentence,
        }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn members(&self) -> &BTreeSet<AtomicDiagram> {
        &self.members
    }

    pub fn sentence(&self) -> Option<&Sentence> {
        self.sentence.as_ref()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, d: &AtomicDiagram) -> bool {
        self.members.contains(d)
    }

    /// Members as letter strings over `alphabet`.
    pub fn words(&self, alphabet: &Alphabet) -> Result<BTreeSet<Word>, LangError> {
        self.members.iter().map(|d| alphabet.diagram_to_word(d)).collect()
    }

    /// One diagram per line in formal syntax, sorted, every line terminated
    /// by a newline. The empty diagram is an empty line; the empty set is
    /// the empty text.
    pub fn to_lines(&self) -> String {
        let mut lines: Vec<String> = self.members.iter().map(|d| d.to_string()).collect();
        lines.sort();
        lines.into_iter().map(|l| l + "\n").collect()
    }

    pub fn from_lines(text: &str, length: usize, vocab: &Vocabulary) -> Result<Self, LangError> {
        let mut members = BTreeSet::new();
        if text.is_empty() {
            return Ok(ContinuationSet::new(length, members, None));
        }
        let body = text.strip_suffix('\n').unwrap_or(text);
        for line in body.split('\n') {
            members.insert(parse_model_string(line, vocab)?);
        }
        Ok(ContinuationSet::new(length, members, None))
    }
}

/// `{ d ∈ Vⁿ : the model of d satisfies phi }`. For universal sentences this
/// is exactly the set of length-`n` strings not refuted at a finite stage.
pub fn continuation_set(
    phi: &Sentence,
    n: usize,
    vocab: &Vocabulary,
    cap: u128,
) -> Result<ContinuationSet, SemanticsError> {
    let mut members = BTreeSet::new();
    for d in enumerate_diagrams(n, vocab, cap)? {
        if evaluate(&d, phi, vocab)? == TruthVerdict::True {
            members.insert(d);
        }
    }
    Ok(ContinuationSet::new(n, members, Some(phi.clone())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntailmentOptions {
    /// Whether the empty model (size 0) is among the checked structures.
    pub include_empty: bool,
    pub cap: u128,
}

impl Default for EntailmentOptions {
    fn default() -> Self {
        EntailmentOptions {
            include_empty: false,
            cap: crate::lang::DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// Result of a bounded entailment check. `holds` is only claimed for models
/// of size up to `up_to`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entailment {
    pub holds: bool,
    pub up_to: usize,
    pub counterexample: Option<AtomicDiagram>,
}

impl fmt::Display for Entailment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "holds on all models up to size {}", self.up_to),
            Some(d) if d.is_empty() => write!(f, "fails: the empty model is a counterexample"),
            Some(d) => write!(f, "fails: counterexample {d}"),
        }
    }
}

/// `Γ ⊨ φ` restricted to models of size at most `n`: for every size `m`, the
/// intersection of the continuation sets of `Γ` is included in that of `φ`.
pub fn semantic_consequence(
    gamma: &[Sentence],
    phi: &Sentence,
    n: usize,
    vocab: &Vocabulary,
    options: EntailmentOptions,
) -> Result<Entailment, SemanticsError> {
    let start = if options.include_empty { 0 } else { 1 };
    for m in start..=n {
        let goal = continuation_set(phi, m, vocab, options.cap)?;
        let premises: Vec<ContinuationSet> = gamma
            .iter()
            .map(|g| continuation_set(g, m, vocab, options.cap))
            .collect::<Result<_, _>>()?;
        for d in enumerate_diagrams(m, vocab, options.cap)? {
            if premises.iter().all(|p| p.contains(&d)) && !goal.contains(&d) {
                return Ok(Entailment {
                    holds: false,
                    up_to: n,
                    counterexample: Some(d),
                });
            }
        }
    }
    Ok(Entailment {
        holds: true,
        up_to: n,
        counterexample: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{Literal, DEFAULT_ENUMERATION_CAP as CAP};

    fn every_blue() -> Sentence {
        Sentence::forall("blue")
    }

    fn d(text: &str, v: &Vocabulary) -> AtomicDiagram {
        parse_model_string(text, v).unwrap()
    }

    #[test]
    fn satisfies_everyday_examples() {
        let v = Vocabulary::everyday();
        let ok = d("The car is blue. The house is blue.", &v);
        assert!(satisfies(&ok, &every_blue(), &v, Strictness::Lenient).unwrap());
        let bad = d("The car is blue. The house is red.", &v);
        assert!(!satisfies(&bad, &every_blue(), &v, Strictness::Lenient).unwrap());
        assert!(satisfies(&AtomicDiagram::empty(), &every_blue(), &v, Strictness::Strict).unwrap());
        assert!(!satisfies(&AtomicDiagram::empty(), &Sentence::exists("blue"), &v, Strictness::Strict).unwrap());
    }

    #[test]
    fn underdetermined_objects() {
        let v = Vocabulary::everyday();
        let hearts = d("The car is blue. The house is large.", &v);
        assert_eq!(evaluate(&hearts, &every_blue(), &v).unwrap(), TruthVerdict::Undetermined);
        assert!(matches!(
            satisfies(&hearts, &every_blue(), &v, Strictness::Lenient),
            Err(SemanticsError::UnderdeterminedObject { ref object, .. }) if object == "house"
        ));
        // a counterexample settles ∀ in lenient mode but not in strict mode
        let settled = d("The car is red. The house is large.", &v);
        assert!(!satisfies(&settled, &every_blue(), &v, Strictness::Lenient).unwrap());
        assert!(satisfies(&settled, &every_blue(), &v, Strictness::Strict).is_err());
    }

    #[test]
    fn contradictions_are_errors() {
        let v = Vocabulary::everyday();
        let c = d("The car is blue. The car is red.", &v);
        assert!(matches!(
            evaluate(&c, &every_blue(), &v),
            Err(SemanticsError::InconsistentDiagram { .. })
        ));
        let l = Vocabulary::logical();
        assert!(evaluate(&d("blue(a1) ¬blue(a1)", &l), &every_blue(), &l).is_err());
        // repeated, agreeing literals are fine
        assert!(satisfies(&d("blue(a1) blue(a1)", &l), &every_blue(), &l, Strictness::Strict).unwrap());
    }

    #[test]
    fn unknown_predicate() {
        let v = Vocabulary::logical();
        assert!(matches!(
            evaluate(&AtomicDiagram::empty(), &Sentence::forall("red"), &v),
            Err(SemanticsError::UnknownPredicate(_))
        ));
    }

    #[test]
    fn prefix_consistency() {
        let v = Vocabulary::logical();
        let pos = AtomicDiagram::new(vec![Literal::positive("blue", "a1")]);
        let neg = AtomicDiagram::new(vec![Literal::negative("blue", "a1")]);
        assert_eq!(consistent_with(&pos, &every_blue(), &v).unwrap(), TruthVerdict::Undetermined);
        assert_eq!(consistent_with(&neg, &every_blue(), &v).unwrap(), TruthVerdict::False);
        assert_eq!(consistent_with(&pos, &Sentence::exists("blue"), &v).unwrap(), TruthVerdict::True);
        assert_eq!(
            consistent_with(&neg, &Sentence::exists("blue"), &v).unwrap(),
            TruthVerdict::Undetermined
        );
    }

    #[test]
    fn continuation_set_examples() {
        let l = Vocabulary::logical();
        let all = continuation_set(&every_blue(), 3, &l, CAP).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all.members().iter().next().unwrap().to_string(), "blue(a1) blue(a2) blue(a3)");
        assert_eq!(continuation_set(&Sentence::exists("blue"), 2, &l, CAP).unwrap().len(), 3);
        let plus = Vocabulary::logical_plus();
        assert_eq!(continuation_set(&every_blue(), 2, &plus, CAP).unwrap().len(), 4);
    }

    #[test]
    fn continuation_set_lines_round_trip() {
        let l = Vocabulary::logical();
        for n in [0, 1, 3] {
            let cs = continuation_set(&Sentence::exists("blue").negated_predicate(), n, &l, CAP).unwrap();
            let text = cs.to_lines();
            let back = ContinuationSet::from_lines(&text, n, &l).unwrap();
            assert_eq!(back.members(), cs.members());
        }
        let empty_model = continuation_set(&every_blue(), 0, &l, CAP).unwrap();
        assert_eq!(empty_model.to_lines(), "\n");
    }

    #[test]
    fn entailment_examples() {
        let l = Vocabulary::logical();
        let opts = EntailmentOptions::default();
        let r = semantic_consequence(&[every_blue()], &Sentence::exists("blue"), 4, &l, opts).unwrap();
        assert!(r.holds);
        let with_empty = EntailmentOptions {
            include_empty: true,
            ..opts
        };
        let r = semantic_consequence(&[every_blue()], &Sentence::exists("blue"), 4, &l, with_empty).unwrap();
        assert!(!r.holds);
        assert_eq!(r.counterexample, Some(AtomicDiagram::empty()));

        let some_not_blue = Sentence::exists("blue").negated_predicate();
        let r = semantic_consequence(&[some_not_blue], &every_blue(), 3, &l, opts).unwrap();
        assert!(!r.holds);
        assert_eq!(r.counterexample.unwrap().to_string(), "¬blue(a1)");

        let r = semantic_consequence(&[], &every_blue(), 2, &l, opts).unwrap();
        assert!(!r.holds);
    }
}
