//! Vocabulary, literals, atomic-diagram strings and the quantified sentence
//! fragment.
//!
//! A model is written down as a finite string of literals (its atomic
//! diagram). Two surface syntaxes are accepted, see `docs/grammar.md`:
//!
//! * formal: `blue(a1) ¬blue(a2)`
//! * natural: `The car is blue. The house is not blue.`
//!
//! Semantic operations consume [`AtomicDiagram`]; the word-level
//! [`TokenString`] exists only for word-order experiments.

mod alphabet;
mod syntax;
mod tokens;
mod vocab;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use alphabet::{enumerate_diagrams, enumerate_words, Alphabet, Letter, Word, WordIter};
pub use syntax::{parse_literal, parse_model_string};
pub use tokens::{detokenize, permute, text_tokens, tokenize, TokenString};
pub use vocab::{ObjectNaming, Vocabulary};

/// Default cap on the number of strings any exhaustive enumeration may visit.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LangError {
    #[error("unknown {kind} `{symbol}`")]
    UnknownSymbol { kind: &'static str, symbol: String },
    #[error("malformed literal `{0}`")]
    MalformedLiteral(String),
    #[error("malformed sentence `{0}`")]
    MalformedSentence(String),
    #[error("literal {position}: {source}")]
    AtPosition {
        /// 1-based index of the offending literal.
        position: usize,
        #[source]
        source: Box<LangError>,
    },
    #[error("enumeration of {requested} strings exceeds the cap of {cap}")]
    SizeLimitExceeded { requested: u128, cap: u128 },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid vocabulary: {0}")]
    InvalidVocabulary(String),
    #[error("diagram is not in canonical one-block-per-object form: {0}")]
    NonCanonical(String),
    #[error("malformed token string: {0}")]
    MalformedTokens(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn is_positive(self) -> bool {
        matches!(self, Polarity::Positive)
    }

    pub fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

/// `predicate(constant)` or its negation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub predicate: String,
    pub constant: String,
    pub polarity: Polarity,
}

impl Literal {
    pub fn new(predicate: impl Into<String>, constant: impl Into<String>, polarity: Polarity) -> Self {
        Literal {
            predicate: predicate.into(),
            constant: constant.into(),
            polarity,
        }
    }

    pub fn positive(predicate: impl Into<String>, constant: impl Into<String>) -> Self {
        Self::new(predicate, constant, Polarity::Positive)
    }

    pub fn negative(predicate: impl Into<String>, constant: impl Into<String>) -> Self {
        Self::new(predicate, constant, Polarity::Negative)
    }

    /// Renders the literal as a sentence of the natural syntax.
    pub fn to_natural(&self, vocab: &Vocabulary) -> String {
        let not = if self.polarity.is_positive() { "" } else { "not " };
        match vocab.naming() {
            ObjectNaming::Named(_) => format!("The {} is {}{}.", self.constant, not, self.predicate),
            ObjectNaming::Indexed => format!("{} is {}{}.", self.constant, not, self.predicate),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.polarity.is_positive() {
            f.write_str("¬")?;
        }
        write!(f, "{}({})", self.predicate, self.constant)
    }
}

/// A finite string of literals. Order is significant: two diagrams with the
/// same literals in a different order are different strings.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AtomicDiagram {
    literals: Vec<Literal>,
}

impl AtomicDiagram {
    pub fn new(literals: Vec<Literal>) -> Self {
        AtomicDiagram { literals }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Literal> {
        self.literals.iter()
    }

    pub fn push(&mut self, literal: Literal) {
        self.literals.push(literal);
    }

    pub fn concat(&self, other: &AtomicDiagram) -> AtomicDiagram {
        let mut literals = self.literals.clone();
        literals.extend(other.literals.iter().cloned());
        AtomicDiagram { literals }
    }

    /// The first `k` literals.
    pub fn truncate_to(&self, k: usize) -> AtomicDiagram {
        AtomicDiagram::new(self.literals.iter().take(k).cloned().collect())
    }

    /// Objects mentioned, in order of first mention.
    pub fn objects(&self) -> Vec<&str> {
        let mut seen: Vec<&str> = Vec::new();
        for lit in &self.literals {
            if !seen.contains(&lit.constant.as_str()) {
                seen.push(&lit.constant);
            }
        }
        seen
    }

    pub fn to_natural(&self, vocab: &Vocabulary) -> String {
        self.literals
            .iter()
            .map(|l| l.to_natural(vocab))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for AtomicDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, lit) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{lit}")?;
        }
        Ok(())
    }
}

impl FromIterator<Literal> for AtomicDiagram {
    fn from_iter<T: IntoIterator<Item = Literal>>(iter: T) -> Self {
        AtomicDiagram::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a AtomicDiagram {
    type Item = &'a Literal;
    type IntoIter = std::slice::Iter<'a, Literal>;

    fn into_iter(self) -> Self::IntoIter {
        self.literals.iter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantifier {
    Forall,
    Exists,
}

/// `∀x [¬]P(x)` or `∃x [¬]P(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sentence {
    pub quantifier: Quantifier,
    pub predicate: String,
    pub polarity: Polarity,
}

impl Sentence {
    pub fn forall(predicate: impl Into<String>) -> Self {
        Sentence {
            quantifier: Quantifier::Forall,
            predicate: predicate.into(),
            polarity: Polarity::Positive,
        }
    }

    pub fn exists(predicate: impl Into<String>) -> Self {
        Sentence {
            quantifier: Quantifier::Exists,
            predicate: predicate.into(),
            polarity: Polarity::Positive,
        }
    }

    pub fn negated_predicate(mut self) -> Self {
        self.polarity = self.polarity.flip();
        self
    }

    /// The classical negation: `¬∀x P(x)` is `∃x ¬P(x)` and vice versa.
    pub fn negation(&self) -> Self {
        Sentence {
            quantifier: match self.quantifier {
                Quantifier::Forall => Quantifier::Exists,
                Quantifier::Exists => Quantifier::Forall,
            },
            predicate: self.predicate.clone(),
            polarity: self.polarity.flip(),
        }
    }

    /// Accepts `∀blue`, `forall not blue`, `exists ¬blue`, `Every object is
    /// blue.`, `Is everything blue?`, `Is something not blue?` and similar.
    pub fn parse(text: &str, vocab: &Vocabulary) -> Result<Self, LangError> {
        syntax::parse_sentence(text, vocab)
    }

    /// Natural-language yes/no question asking whether the sentence holds.
    pub fn question(&self) -> String {
        let q = match self.quantifier {
            Quantifier::Forall => "everything",
            Quantifier::Exists => "something",
        };
        let not = if self.polarity.is_positive() { "" } else { "not " };
        format!("Is {q} {not}{}?", self.predicate)
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = match self.quantifier {
            Quantifier::Forall => "∀",
            Quantifier::Exists => "∃",
        };
        let not = if self.polarity.is_positive() { "" } else { "¬" };
        write!(f, "{q}{not}{}", self.predicate)
    }
}
