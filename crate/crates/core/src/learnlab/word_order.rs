use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::LearnError;
use crate::borel::ClopenSet;
use crate::lang::{detokenize, enumerate_words, permute, tokenize, Alphabet, TokenString, DEFAULT_ENUMERATION_CAP};
use crate::prob::{conditional_given_hypothesis, ConditionalModel, ExactProb};

/// Conditional probability of the token string's diagram given the target
/// under `model`, or 0 when the tokens do not read back as a canonical
/// string.
pub fn order_sensitive_score(
    alphabet: &Alphabet,
    model: &ConditionalModel,
    target: &ClopenSet,
    ts: &TokenString,
) -> Result<ExactProb, LearnError> {
    let Ok(d) = detokenize(ts, alphabet.vocabulary()) else {
        return Ok(ExactProb::zero());
    };
    let Ok(w) = alphabet.diagram_to_word(&d) else {
        return Ok(ExactProb::zero());
    };
    Ok(conditional_given_hypothesis(model, &w, target)?)
}

/// Unigram model fitted to the tokens of the target's members at one
/// length, add-one smoothed over `vocabulary`.
#[derive(Debug, Clone)]
struct Unigram {
    counts: BTreeMap<String, u64>,
    total: u64,
    vocabulary: u64,
}

impl Unigram {
    fn prob(&self, tok: &str) -> BigRational {
        let c = self.counts.get(tok).copied().unwrap_or(0);
        BigRational::new(BigInt::from(c + 1), BigInt::from(self.total + self.vocabulary))
    }
}

fn fit_unigram(alphabet: &Alphabet, target: &ClopenSet, n: usize) -> Result<Unigram, LearnError> {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut vocabulary = std::collections::BTreeSet::new();
    let mut total = 0;
    for w in enumerate_words(alphabet.size(), n, DEFAULT_ENUMERATION_CAP)? {
        let ts = tokenize(&alphabet.word_to_diagram(&w)?);
        for t in ts.tokens() {
            vocabulary.insert(t.clone());
            if target.contains_cylinder(&w) {
                *counts.entry(t.clone()).or_default() += 1;
                total += 1;
            }
        }
    }
    Ok(Unigram {
        counts,
        total,
        vocabulary: vocabulary.len() as u64,
    })
}

/// Product of smoothed unigram probabilities: depends on the token
/// multiset only.
pub fn bag_of_words_score(
    alphabet: &Alphabet,
    target: &ClopenSet,
    n: usize,
    ts: &TokenString,
) -> Result<ExactProb, LearnError> {
    let uni = fit_unigram(alphabet, target, n)?;
    Ok(score_with(&uni, ts))
}

fn score_with(uni: &Unigram, ts: &TokenString) -> ExactProb {
    let mut p = BigRational::one();
    for t in ts.tokens() {
        p *= uni.prob(t);
    }
    ExactProb::new(p).expect("product of probabilities")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordOrderReport {
    pub first: TokenString,
    pub second: TokenString,
    /// `second = permute(first, permutation)`.
    pub permutation: Vec<usize>,
    pub first_in_target: bool,
    pub second_in_target: bool,
    pub order_sensitive: (ExactProb, ExactProb),
    pub bag_of_words: (ExactProb, ExactProb),
}

impl WordOrderReport {
    pub fn order_separates(&self) -> bool {
        self.order_sensitive.0 != self.order_sensitive.1
    }

    pub fn bag_separates(&self) -> bool {
        self.bag_of_words.0 != self.bag_of_words.1
    }
}

/// Scores an explicit pair related by `permutation`.
pub fn pair_report(
    alphabet: &Alphabet,
    model: &ConditionalModel,
    target: &ClopenSet,
    first: &TokenString,
    permutation: &[usize],
) -> Result<WordOrderReport, LearnError> {
    let second = permute(first, permutation)?;
    let n = detokenize(first, alphabet.vocabulary())
        .ok()
        .and_then(|d| alphabet.diagram_to_word(&d).ok())
        .map(|w| w.len())
        .unwrap_or_else(|| target.base().max_len());
    let uni = fit_unigram(alphabet, target, n)?;
    let member = |ts: &TokenString| -> bool {
        detokenize(ts, alphabet.vocabulary())
            .ok()
            .and_then(|d| alphabet.diagram_to_word(&d).ok())
            .is_some_and(|w| target.contains_cylinder(&w))
    };
    Ok(WordOrderReport {
        first_in_target: member(first),
        second_in_target: member(&second),
        order_sensitive: (
            order_sensitive_score(alphabet, model, target, first)?,
            order_sensitive_score(alphabet, model, target, &second)?,
        ),
        bag_of_words: (score_with(&uni, first), score_with(&uni, &second)),
        first: first.clone(),
        permutation: permutation.to_vec(),
        second,
    })
}

/// Single-token moves: take the token at `from` out and reinsert it at `to`.
fn moves(len: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..len).flat_map(move |from| {
        (0..len).filter(move |&to| to != from).map(move |to| {
            let mut order: Vec<usize> = (0..len).collect();
            let t = order.remove(from);
            order.insert(to, t);
            order
        })
    })
}

/// Finds a member of the target and a token permutation of it that falls
/// outside (or the reverse), and scores both with each scorer. Prefixes are
/// tried in order; permutations are single-token moves, then
/// transpositions.
pub fn word_order_experiment(
    alphabet: &Alphabet,
    model: &ConditionalModel,
    target: &ClopenSet,
) -> Result<WordOrderReport, LearnError> {
    let n = target.base().max_len();
    for w in enumerate_words(alphabet.size(), n, DEFAULT_ENUMERATION_CAP)? {
        let ts = tokenize(&alphabet.word_to_diagram(&w)?);
        let inside = target.contains_cylinder(&w);
        let len = ts.len();
        let swaps = (0..len).flat_map(|i| {
            (i + 1..len).map(move |j| {
                let mut p: Vec<usize> = (0..len).collect();
                p.swap(i, j);
                p
            })
        });
        for p in moves(len).chain(swaps) {
            let other = permute(&ts, &p)?;
            let Ok(d) = detokenize(&other, alphabet.vocabulary()) else { continue };
            let Ok(v) = alphabet.diagram_to_word(&d) else { continue };
            if target.contains_cylinder(&v) != inside {
                return pair_report(alphabet, model, target, &ts, &p);
            }
        }
    }
    Err(LearnError::NoSeparatingPair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{Vocabulary, Word};

    fn setup() -> (Alphabet, ConditionalModel) {
        let a = Alphabet::new(&Vocabulary::logical_plus());
        let m = ConditionalModel::uniform(&a);
        (a, m)
    }

    fn not_blue_and_a(a: &Alphabet) -> ClopenSet {
        ClopenSet::new(a.size(), [Word::new(vec![a.parse_label("¬blue,A").unwrap()])])
    }

    #[test]
    fn negation_pair() {
        let (a, m) = setup();
        let target = not_blue_and_a(&a);
        let ts = TokenString::new(["a1", "is", "not", "blue", "a1", "is", "A"]);
        let r = pair_report(&a, &m, &target, &ts, &[0, 1, 3, 4, 5, 2, 6]).unwrap();
        assert_eq!(r.second.to_string(), "a1 is blue a1 is not A");
        assert!(r.first_in_target && !r.second_in_target);
        assert_eq!(r.bag_of_words.0, r.bag_of_words.1);
        assert!(r.order_separates());
        assert_eq!(r.order_sensitive, (ExactProb::one(), ExactProb::zero()));
    }

    #[test]
    fn identical_strings_agree() {
        let (a, m) = setup();
        let target = not_blue_and_a(&a);
        let ts = TokenString::new(["a1", "is", "not", "blue", "a1", "is", "A"]);
        let r = pair_report(&a, &m, &target, &ts, &[0, 1, 2, 3, 4, 5, 6]).unwrap();
        assert!(!r.order_separates() && !r.bag_separates());
    }

    #[test]
    fn search_finds_a_pair() {
        let (a, m) = setup();
        let r = word_order_experiment(&a, &m, &not_blue_and_a(&a)).unwrap();
        assert_ne!(r.first_in_target, r.second_in_target);
        assert!(r.order_separates());
        assert!(!r.bag_separates());
    }

    #[test]
    fn full_target_has_no_pair() {
        let (a, m) = setup();
        assert!(matches!(
            word_order_experiment(&a, &m, &ClopenSet::new(a.size(), [Word::new(vec![0]), Word::new(vec![1]), Word::new(vec![2]), Word::new(vec![3])])),
            Err(LearnError::NoSeparatingPair)
        ));
    }
}
