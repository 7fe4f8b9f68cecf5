use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AtomicDiagram, LangError, Literal, Polarity, Vocabulary};

/// One position of a canonical string: a polarity for every predicate of the
/// vocabulary, all about the same object.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Letter {
    polarities: Vec<Polarity>,
}

impl Letter {
    pub fn polarities(&self) -> &[Polarity] {
        &self.polarities
    }
}

/// A finite string over a per-position alphabet, stored as letter indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<u16>);

impl Word {
    pub fn new(letters: Vec<u16>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u16] {
        &self.0
    }

    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k.min(self.0.len())].to_vec())
    }

    pub fn suffix_from(&self, k: usize) -> Word {
        Word(self.0[k.min(self.0.len())..].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pushed(&self, letter: u16) -> Word {
        let mut v = self.0.clone();
        v.push(letter);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl From<Vec<u16>> for Word {
    fn from(v: Vec<u16>) -> Self {
        Word(v)
    }
}

/// The per-position alphabet of a vocabulary: every assignment of polarities
/// to all predicates, minus assignments that make two exclusive predicates
/// both true. Letters are ordered with positive before negative, first
/// predicate most significant, so for `{blue}` letter 0 is `blue` and letter
/// 1 is `¬blue`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    vocab: Vocabulary,
    letters: Vec<Letter>,
}

impl Alphabet {
    pub fn new(vocab: &Vocabulary) -> Self {
        let preds = vocab.predicates();
        let k = preds.len();
        assert!(k <= 16, "alphabet over more than 16 predicates");
        let mut letters = Vec::new();
        for code in 0u32..(1u32 << k) {
            let polarities: Vec<Polarity> = (0..k)
                .map(|i| {
                    if code >> (k - 1 - i) & 1 == 0 {
                        Polarity::Positive
                    } else {
                        Polarity::Negative
                    }
                })
                .collect();
            let clash = (0..k).any(|i| {
                (i + 1..k).any(|j| {
                    polarities[i].is_positive()
                        && polarities[j].is_positive()
                        && vocab.excludes(&preds[i], &preds[j])
                })
            });
            if !clash {
                letters.push(Letter { polarities });
            }
        }
        Alphabet {
            vocab: vocab.clone(),
            letters,
        }
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn size(&self) -> usize {
        self.letters.len()
    }

    pub fn letter(&self, i: u16) -> &Letter {
        &self.letters[i as usize]
    }

    /// Object-independent label: `blue`, `¬blue`, `blue,¬A`, ...
    pub fn label(&self, i: u16) -> String {
        self.vocab
            .predicates()
            .iter()
            .zip(self.letter(i).polarities())
            .map(|(p, pol)| if pol.is_positive() { p.clone() } else { format!("¬{p}") })
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_label(&self, label: &str) -> Option<u16> {
        (0..self.letters.len() as u16).find(|&i| self.label(i) == label.trim())
    }

    /// Index of a predicate within each letter.
    pub fn predicate_slot(&self, predicate: &str) -> Option<usize> {
        self.vocab.predicates().iter().position(|p| p == predicate)
    }

    /// Letters whose literal for `predicate` has the given polarity, taking
    /// exclusivity into account (a letter with `red` positive has `blue`
    /// negative already, but both slots are explicit here).
    pub fn letters_with(&self, predicate: &str, polarity: Polarity) -> Vec<bool> {
        let slot = self.predicate_slot(predicate);
        (0..self.letters.len())
            .map(|i| match slot {
                Some(s) => self.letters[i].polarities[s] == polarity,
                None => false,
            })
            .collect()
    }

    pub fn word_to_diagram(&self, word: &Word) -> Result<AtomicDiagram, LangError> {
        let preds = self.vocab.predicates();
        let mut literals = Vec::with_capacity(word.len() * preds.len());
        for (pos, &l) in word.letters().iter().enumerate() {
            let letter = self
                .letters
                .get(l as usize)
                .ok_or_else(|| LangError::NonCanonical(format!("letter {l} out of range")))?;
            let obj = self
                .vocab
                .object(pos)
                .ok_or_else(|| LangError::NonCanonical(format!("no object name for position {}", pos + 1)))?;
            for (p, pol) in preds.iter().zip(&letter.polarities) {
                literals.push(Literal::new(p.clone(), obj.to_string(), *pol));
            }
        }
        Ok(AtomicDiagram::new(literals))
    }

    /// Inverse of [`Alphabet::word_to_diagram`]. Object blocks must appear in
    /// canonical object order; within a block predicates may come in any
    /// order but each must occur exactly once.
    pub fn diagram_to_word(&self, d: &AtomicDiagram) -> Result<Word, LangError> {
        let preds = self.vocab.predicates();
        let k = preds.len();
        if d.len() % k != 0 {
            return Err(LangError::NonCanonical(format!(
                "{} literals is not a multiple of {k} predicates",
                d.len()
            )));
        }
        let mut out = Vec::with_capacity(d.len() / k);
        for (pos, block) in d.literals().chunks(k).enumerate() {
            let expected = self
                .vocab
                .object(pos)
                .ok_or_else(|| LangError::NonCanonical(format!("no object name for position {}", pos + 1)))?;
            let mut pols: Vec<Option<Polarity>> = vec![None; k];
            for lit in block {
                if lit.constant != expected {
                    return Err(LangError::NonCanonical(format!(
                        "expected object `{expected}` at position {}, found `{}`",
                        pos + 1,
                        lit.constant
                    )));
                }
                let slot = preds.iter().position(|p| *p == lit.predicate).ok_or_else(|| {
                    LangError::UnknownSymbol {
                        kind: "predicate",
                        symbol: lit.predicate.clone(),
                    }
                })?;
                if pols[slot].replace(lit.polarity).is_some() {
                    return Err(LangError::NonCanonical(format!(
                        "predicate `{}` repeated for `{expected}`",
                        lit.predicate
                    )));
                }
            }
            let pols: Vec<Polarity> = pols.into_iter().map(|p| p.unwrap()).collect();
            let idx = self
                .letters
                .iter()
                .position(|l| l.polarities == pols)
                .ok_or_else(|| LangError::NonCanonical(format!("contradictory block for `{expected}`")))?;
            out.push(idx as u16);
        }
        Ok(Word(out))
    }
}

fn checked_count(arity: usize, n: usize, cap: u128) -> Result<u128, LangError> {
    let mut total: u128 = 1;
    for _ in 0..n {
        total = total.saturating_mul(arity as u128);
        if total > cap {
            return Err(LangError::SizeLimitExceeded { requested: total, cap });
        }
    }
    Ok(total)
}

/// All words of length `n` over `arity` letters, in lexicographic order.
#[derive(Debug, Clone)]
pub struct WordIter {
    arity: u16,
    current: Option<Vec<u16>>,
}

impl Iterator for WordIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.current.as_mut()?;
        let out = Word(cur.clone());
        // odometer step, rightmost position fastest
        let mut i = cur.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < self.arity {
                break;
            }
            cur[i] = 0;
        }
        Some(out)
    }
}

pub fn enumerate_words(arity: usize, n: usize, cap: u128) -> Result<WordIter, LangError> {
    checked_count(arity, n, cap)?;
    let current = if arity == 0 && n > 0 { None } else { Some(vec![0u16; n]) };
    Ok(WordIter {
        arity: arity as u16,
        current,
    })
}

/// Every canonical diagram describing `n` objects: object `i` gets one
/// letter of the alphabet. Yields exactly `|alphabet|^n` distinct diagrams.
pub fn enumerate_diagrams(
    n: usize,
    vocab: &Vocabulary,
    cap: u128,
) -> Result<impl Iterator<Item = AtomicDiagram>, LangError> {
    if let Some(c) = vocab.object_capacity() {
        if n > c {
            return Err(LangError::NonCanonical(format!(
                "vocabulary names only {c} objects, {n} requested"
            )));
        }
    }
    let alphabet = Alphabet::new(vocab);
    let words = enumerate_words(alphabet.size(), n, cap)?;
    Ok(words.map(move |w| alphabet.word_to_diagram(&w).expect("canonical word")))
}
