use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AtomicDiagram, LangError, Literal, Polarity, Vocabulary};

/// Word-level tokens, e.g. `a1 is not blue`. Permuting tokens can move a
/// negation from one predicate to another, which is what word-order
/// experiments need.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenString {
    tokens: Vec<String>,
}

impl TokenString {
    pub fn new<S: Into<String>>(tokens: impl IntoIterator<Item = S>) -> Self {
        TokenString {
            tokens: tokens.into_iter().map(Into::into).collect(),
        }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Sorted copy of the tokens: the token multiset.
    pub fn multiset(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.tokens.iter().map(|s| s.as_str()).collect();
        v.sort_unstable();
        v
    }
}

impl fmt::Display for TokenString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tokens.join(" "))
    }
}

pub fn tokenize(d: &AtomicDiagram) -> TokenString {
    let mut tokens = Vec::with_capacity(d.len() * 4);
    for lit in d {
        tokens.push(lit.constant.clone());
        tokens.push("is".to_string());
        if !lit.polarity.is_positive() {
            tokens.push("not".to_string());
        }
        tokens.push(lit.predicate.clone());
    }
    TokenString { tokens }
}

/// Reads `constant is [not] predicate` groups back into a diagram.
pub fn detokenize(ts: &TokenString, vocab: &Vocabulary) -> Result<AtomicDiagram, LangError> {
    let t = &ts.tokens;
    let mut i = 0;
    let mut literals = Vec::new();
    let bad = |i: usize, what: &str| LangError::MalformedTokens(format!("token {}: expected {what}", i + 1));
    while i < t.len() {
        let constant = &t[i];
        if !vocab.has_constant(constant) {
            return Err(bad(i, "an object name"));
        }
        if t.get(i + 1).map(String::as_str) != Some("is") {
            return Err(bad(i + 1, "`is`"));
        }
        i += 2;
        let polarity = if t.get(i).map(String::as_str) == Some("not") {
            i += 1;
            Polarity::Negative
        } else {
            Polarity::Positive
        };
        let predicate = t.get(i).ok_or_else(|| bad(i, "a predicate"))?;
        if !vocab.has_predicate(predicate) {
            return Err(bad(i, "a predicate"));
        }
        literals.push(Literal::new(predicate.clone(), constant.clone(), polarity));
        i += 1;
    }
    Ok(AtomicDiagram::new(literals))
}

/// Reorders tokens so that output position `i` holds input token
/// `permutation[i]`.
pub fn permute(ts: &TokenString, permutation: &[usize]) -> Result<TokenString, LangError> {
    let n = ts.tokens.len();
    if permutation.len() != n {
        return Err(LangError::InvalidPermutation(format!(
            "length {} does not match {n} tokens",
            permutation.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in permutation {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(LangError::InvalidPermutation(format!("{permutation:?} is not a bijection")));
        }
    }
    Ok(TokenString {
        tokens: permutation.iter().map(|&p| ts.tokens[p].clone()).collect(),
    })
}

/// Lowercased word tokens of free text with punctuation stripped.
pub fn text_tokens(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|w| {
            w.trim_matches(|c: char| !c.is_alphanumeric() && c != '_')
                .to_lowercase()
        })
        .filter(|w| !w.is_empty())
        .collect()
}
