use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{parse_rational, ExactProb, ProbError};
use crate::lang::{Alphabet, Word};

/// What to do when a context has no table entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fallback {
    #[default]
    Uniform,
    Error,
}

#[derive(Debug, Clone, PartialEq)]
enum Rule {
    Uniform,
    /// Probability of letter 0; binary alphabets only.
    Biased(BigRational),
    /// Always emits the same letter.
    Constant(u16),
    Table {
        table: BTreeMap<Word, Vec<BigRational>>,
        fallback: Fallback,
    },
}

/// A next-letter predictor `f : V^{≤n} → distributions over V`, immutable
/// once built.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalModel {
    labels: Vec<String>,
    rule: Rule,
}

impl ConditionalModel {
    fn labels_of(alphabet: &Alphabet) -> Vec<String> {
        (0..alphabet.size() as u16).map(|i| alphabet.label(i)).collect()
    }

    pub fn uniform(alphabet: &Alphabet) -> Self {
        ConditionalModel {
            labels: Self::labels_of(alphabet),
            rule: Rule::Uniform,
        }
    }

    /// Independent letters with `P(letter 0) = p`.
    pub fn biased_coin(alphabet: &Alphabet, p: ExactProb) -> Result<Self, ProbError> {
        if alphabet.size() != 2 {
            return Err(ProbError::InvalidModel(format!(
                "a biased coin needs a binary alphabet, got {} letters",
                alphabet.size()
            )));
        }
        Ok(ConditionalModel {
            labels: Self::labels_of(alphabet),
            rule: Rule::Biased(p.into_inner()),
        })
    }

    /// Puts all mass on one infinite string `letter letter ...`.
    pub fn constant(alphabet: &Alphabet, letter: u16) -> Result<Self, ProbError> {
        if letter as usize >= alphabet.size() {
            return Err(ProbError::InvalidModel(format!("letter {letter} is not in the alphabet")));
        }
        Ok(ConditionalModel {
            labels: Self::labels_of(alphabet),
            rule: Rule::Constant(letter),
        })
    }

    /// Explicit distributions per context. Every row must have one entry per
    /// letter, no negative mass and total exactly 1.
    pub fn from_table(
        alphabet: &Alphabet,
        table: BTreeMap<Word, Vec<BigRational>>,
        fallback: Fallback,
    ) -> Result<Self, ProbError> {
        for (ctx, row) in &table {
            if row.len() != alphabet.size() {
                return Err(ProbError::InvalidModel(format!(
                    "context {ctx}: {} entries for {} letters",
                    row.len(),
                    alphabet.size()
                )));
            }
            if row.iter().any(|x| *x < BigRational::zero()) {
                return Err(ProbError::InvalidModel(format!("context {ctx}: negative mass")));
            }
            let total: BigRational = row.iter().sum();
            if !total.is_one() {
                return Err(ProbError::NotNormalized {
                    context: ctx.to_string(),
                    total: total.to_string(),
                });
            }
        }
        Ok(ConditionalModel {
            labels: Self::labels_of(alphabet),
            rule: Rule::Table { table, fallback },
        })
    }

    /// Reads `context<TAB>token<TAB>rational` lines. Contexts are letter
    /// labels separated by spaces, with `ε` or an empty field for the empty
    /// context; letters left out of a context get mass 0. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn load_tsv(text: &str, alphabet: &Alphabet, fallback: Fallback) -> Result<Self, ProbError> {
        let k = alphabet.size();
        let mut table: BTreeMap<Word, Vec<BigRational>> = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let bad = |message: String| ProbError::MalformedTable { line: line_no, message };
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw.split('\t').collect();
            if fields.len() != 3 {
                return Err(bad(format!("expected 3 tab-separated fields, found {}", fields.len())));
            }
            let ctx_text = fields[0].trim();
            let mut ctx = Vec::new();
            if !ctx_text.is_empty() && ctx_text != "ε" {
                for label in ctx_text.split_whitespace() {
                    ctx.push(
                        alphabet
                            .parse_label(label)
                            .ok_or_else(|| bad(format!("unknown letter `{label}` in context")))?,
                    );
                }
            }
            let ctx = Word::new(ctx);
            let token = alphabet
                .parse_label(fields[1].trim())
                .ok_or_else(|| bad(format!("unknown letter `{}`", fields[1].trim())))?;
            let mass = parse_rational(fields[2].trim()).map_err(|e| bad(e.to_string()))?;
            if !seen.insert((ctx.clone(), token)) {
                return Err(bad(format!("duplicate entry for context `{ctx_text}`")));
            }
            table.entry(ctx).or_insert_with(|| vec![BigRational::zero(); k])[token as usize] = mass;
        }
        Self::from_table(alphabet, table, fallback)
    }

    pub fn arity(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `μ(· | context)` as one rational per letter.
    pub fn next_distribution(&self, context: &Word) -> Result<Vec<BigRational>, ProbError> {
        let k = self.arity();
        let uniform = || vec![BigRational::new(BigInt::one(), BigInt::from(k)); k];
        Ok(match &self.rule {
            Rule::Uniform => uniform(),
            Rule::Biased(p) => vec![p.clone(), BigRational::one() - p],
            Rule::Constant(l) => {
                let mut v = vec![BigRational::zero(); k];
                v[*l as usize] = BigRational::one();
                v
            }
            Rule::Table { table, fallback } => match table.get(context) {
                Some(row) => row.clone(),
                None if *fallback == Fallback::Uniform => uniform(),
                None => {
                    return Err(ProbError::MissingConditional {
                        context: context.to_string(),
                    })
                }
            },
        })
    }

    /// `μ(letter | context)`.
    pub fn conditional(&self, context: &Word, letter: u16) -> Result<BigRational, ProbError> {
        let mut dist = self.next_distribution(context)?;
        if letter as usize >= dist.len() {
            return Err(ProbError::InvalidModel(format!("letter {letter} is not in the alphabet")));
        }
        Ok(dist.swap_remove(letter as usize))
    }
}
