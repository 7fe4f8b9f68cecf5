use std::sync::LazyLock;

use regex::Regex;

use super::{AtomicDiagram, LangError, Literal, Polarity, Quantifier, Sentence, Vocabulary};

static FORMAL: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^(¬|~|!)?\s*([\p{L}_][\p{L}\p{N}_]*)\(\s*([\p{L}_][\p{L}\p{N}_]*)\s*\)$").unwrap()
});

static NATURAL: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)^(?:(?:the|my|a|an)\s+)?([\p{L}_][\p{L}\p{N}_]*)\s+is\s+(not\s+)?([\p{L}_][\p{L}\p{N}_]*)\s*\.?$")
        .unwrap()
});

/// A formal literal at the start of the input, including its leading negation.
static FORMAL_PREFIX: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^(?:¬|~|!)?\s*[\p{L}_][\p{L}\p{N}_]*\(\s*[\p{L}_][\p{L}\p{N}_]*\s*\)").unwrap()
});

fn resolve(predicate: &str, constant: &str, polarity: Polarity, vocab: &Vocabulary) -> Result<Literal, LangError> {
    if !vocab.has_predicate(predicate) {
        return Err(LangError::UnknownSymbol {
            kind: "predicate",
            symbol: predicate.to_string(),
        });
    }
    if !vocab.has_constant(constant) {
        return Err(LangError::UnknownSymbol {
            kind: "constant",
            symbol: constant.to_string(),
        });
    }
    Ok(Literal::new(predicate, constant, polarity))
}

/// Parses one literal in either surface syntax: `blue(a3)`, `¬blue(a3)`,
/// `The car is blue.`, `a2 is not blue`.
pub fn parse_literal(text: &str, vocab: &Vocabulary) -> Result<Literal, LangError> {
    let t = text.trim();
    if let Some(c) = FORMAL.captures(t) {
        let polarity = if c.get(1).is_some() { Polarity::Negative } else { Polarity::Positive };
        return resolve(&c[2], &c[3], polarity, vocab);
    }
    if let Some(c) = NATURAL.captures(t) {
        let polarity = if c.get(2).is_some() { Polarity::Negative } else { Polarity::Positive };
        // object names are matched case-insensitively in the natural syntax
        let constant = c[1].to_string();
        let constant = if vocab.has_constant(&constant) { constant } else { constant.to_lowercase() };
        return resolve(&c[3], &constant, polarity, vocab);
    }
    Err(LangError::MalformedLiteral(t.to_string()))
}

/// Parses a sequence of literals. Formal literals are separated by
/// whitespace; natural sentences end with a period. Surface order is kept.
pub fn parse_model_string(text: &str, vocab: &Vocabulary) -> Result<AtomicDiagram, LangError> {
    let mut literals = Vec::new();
    let mut rest = text.trim_start();
    while !rest.is_empty() {
        let (piece, tail) = match FORMAL_PREFIX.find(rest) {
            Some(m) => (&rest[..m.end()], &rest[m.end()..]),
            None => match rest.find('.') {
                Some(i) => (&rest[..=i], &rest[i + 1..]),
                None => (rest, ""),
            },
        };
        let lit = parse_literal(piece, vocab).map_err(|e| LangError::AtPosition {
            position: literals.len() + 1,
            source: Box::new(e),
        })?;
        literals.push(lit);
        rest = tail.trim_start();
    }
    Ok(AtomicDiagram::new(literals))
}

pub(super) fn parse_sentence(text: &str, vocab: &Vocabulary) -> Result<Sentence, LangError> {
    let malformed = || LangError::MalformedSentence(text.trim().to_string());
    let cleaned = text
        .trim()
        .trim_end_matches(['?', '.', '!'])
        .replace('¬', " not ")
        .replace('∀', " forall ")
        .replace('∃', " exists ");
    let words: Vec<String> = cleaned.split_whitespace().map(|w| w.to_string()).collect();
    let lower: Vec<String> = words.iter().map(|w| w.to_lowercase()).collect();
    let lw: Vec<&str> = lower.iter().map(|s| s.as_str()).collect();

    let quantifier_word = |w: &str| match w {
        "forall" | "every" | "everything" | "all" | "each" | "everyone" => Some(Quantifier::Forall),
        "exists" | "some" | "something" | "someone" | "there" => Some(Quantifier::Exists),
        _ => None,
    };

    // locate the quantifier and the predicate (last word), with an optional
    // `not` in between
    let qpos = lw.iter().position(|w| quantifier_word(w).is_some()).ok_or_else(malformed)?;
    let quantifier = quantifier_word(lw[qpos]).unwrap();
    if qpos > 1 || (qpos == 1 && lw[0] != "is" && lw[0] != "are") {
        return Err(malformed());
    }
    let predicate = words.last().ok_or_else(malformed)?.clone();
    if lw.len() <= qpos + 1 {
        return Err(malformed());
    }
    let middle = &lw[qpos + 1..lw.len() - 1];
    let negated = middle.iter().filter(|w| **w == "not").count();
    let allowed = ["not", "object", "objects", "thing", "things", "is", "are", "x", "of", "them"];
    if negated > 1 || middle.iter().any(|w| !allowed.contains(w)) {
        return Err(malformed());
    }
    let predicate = if vocab.has_predicate(&predicate) { predicate } else { predicate.to_lowercase() };
    if !vocab.has_predicate(&predicate) {
        return Err(LangError::UnknownSymbol {
            kind: "predicate",
            symbol: predicate,
        });
    }
    Ok(Sentence {
        quantifier,
        predicate,
        polarity: if negated == 1 { Polarity::Negative } else { Polarity::Positive },
    })
}
