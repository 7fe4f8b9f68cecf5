//! Consistency probes: datasets of model strings with a quantified
//! question, answers from an external model under test, and pass-fraction
//! reports by object count.

mod adapter;
mod report;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use adapter::{
    builtin_stub, run_adapter, serve_stdio, serve_tcp, stub_answer, AdapterConfig, Endpoint, ProbeRequest,
    StubKind, WireResponse,
};
pub use report::{parse_report_tsv, render_report, render_table, render_tsv, Fraction, PositionRow, ProbeReport, SizeRow};

use crate::lang::{AtomicDiagram, LangError, Literal, Polarity, Sentence, Vocabulary};
use crate::semantics::{evaluate, SemanticsError, TruthVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbeError {
    #[error("{requested} objects requested but the vocabulary names only {cap}")]
    SizeLimitExceeded { requested: u128, cap: u128 },
    #[error("no response for case `{0}`")]
    MissingResponse(String),
    #[error("more than one response for case `{0}`")]
    DuplicateResponse(String),
    #[error("response for unknown case `{0}`")]
    UnexpectedResponse(String),
    #[error("adapter `{endpoint}` unreachable after {attempts} attempts: {message}")]
    AdapterUnreachable {
        endpoint: String,
        attempts: u32,
        message: String,
    },
    #[error("protocol violation: {0}")]
    ProtocolViolation(String),
    #[error("malformed report: {0}")]
    MalformedReport(String),
    #[error("invalid endpoint `{0}`")]
    InvalidEndpoint(String),
    #[error("vocabulary unsuitable for probing: {0}")]
    InvalidVocabulary(String),
    #[error("line {line}: {message}")]
    MalformedRecord { line: usize, message: String },
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

impl From<std::io::Error> for ProbeError {
    fn from(e: std::io::Error) -> Self {
        ProbeError::Io(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gold {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeCase {
    pub id: String,
    pub context: String,
    pub question: String,
    pub object_count: usize,
    pub gold: Gold,
    /// 1-based position of the literal that breaks the universal claim.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inconsistency_position: Option<usize>,
}

impl ProbeCase {
    pub fn is_inconsistent(&self) -> bool {
        self.inconsistency_position.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Yes,
    No,
    Unknown,
    Unparseable,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Unknown => "unknown",
            Answer::Unparseable => "unparseable",
        })
    }
}

impl Answer {
    pub fn matches(self, gold: Gold) -> bool {
        matches!(
            (self, gold),
            (Answer::Yes, Gold::Yes) | (Answer::No, Gold::No) | (Answer::Unknown, Gold::Unknown)
        )
    }
}

/// Lowercases, skips leading punctuation and whitespace, and reads the
/// first word with surrounding punctuation removed. `yes`, `no` and
/// `unknown` are recognised; everything else is unparseable.
pub fn normalize_answer(raw: &str) -> Answer {
    let lowered = raw.to_lowercase();
    let first = lowered
        .split(|c: char| c.is_whitespace())
        .map(|w| w.trim_matches(|c: char| !c.is_alphanumeric()))
        .find(|w| !w.is_empty());
    match first {
        Some("yes") => Answer::Yes,
        Some("no") => Answer::No,
        Some("unknown") => Answer::Unknown,
        _ => Answer::Unparseable,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeResponse {
    pub id: String,
    pub raw: String,
    pub normalized: Answer,
}

impl ProbeResponse {
    pub fn new(id: impl Into<String>, raw: impl Into<String>) -> Self {
        let raw = raw.into();
        ProbeResponse {
            id: id.into(),
            normalized: normalize_answer(&raw),
            raw,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// One inconsistent case at size 2, one per position above.
    #[default]
    PaperCounts,
    /// One inconsistent case per position at every size.
    FullPositions,
}

impl std::str::FromStr for Scheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "paper_counts" => Ok(Scheme::PaperCounts),
            "full_positions" => Ok(Scheme::FullPositions),
            other => Err(format!("unknown scheme `{other}` (paper_counts, full_positions)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub sizes: RangeInclusive<usize>,
    pub seed: u64,
    pub scheme: Scheme,
    /// The colour every question asks about.
    pub target: String,
    /// Add one case per size whose last object has no colour at all.
    pub underspecified: bool,
}

impl Default for DatasetSpec {
    fn default() -> Self {
        DatasetSpec {
            sizes: 2..=10,
            seed: 0,
            scheme: Scheme::PaperCounts,
            target: "blue".into(),
            underspecified: false,
        }
    }
}

/// Builds the dataset. Objects are taken from the vocabulary in order; the
/// colour that breaks an inconsistent case is drawn from the target's
/// exclusivity group with a ChaCha generator seeded by `seed`. Gold labels
/// come from evaluating the universal question on the case's diagram.
pub fn generate_dataset(spec: &DatasetSpec, vocab: &Vocabulary) -> Result<Vec<ProbeCase>, ProbeError> {
    let target = spec.target.as_str();
    let rivals: Vec<&String> = vocab
        .group_of(target)
        .ok_or_else(|| ProbeError::InvalidVocabulary(format!("`{target}` has no exclusivity group")))?
        .iter()
        .filter(|p| p.as_str() != target)
        .collect();
    let filler = vocab
        .predicates()
        .iter()
        .find(|p| vocab.group_of(p).is_none())
        .cloned();
    if spec.underspecified && filler.is_none() {
        return Err(ProbeError::InvalidVocabulary(
            "underspecified cases need a predicate outside every exclusivity group".into(),
        ));
    }
    let largest = *spec.sizes.end();
    if let Some(capacity) = vocab.object_capacity() {
        if largest > capacity {
            return Err(ProbeError::SizeLimitExceeded {
                requested: largest as u128,
                cap: capacity as u128,
            });
        }
    }
    let question = Sentence::forall(target);
    let q_text = question.question();
    let object = |i: usize| vocab.object(i).expect("within capacity").into_owned();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut cases = Vec::new();
    let mut push = |id: String, d: AtomicDiagram, position: Option<usize>| -> Result<(), ProbeError> {
        let gold = match evaluate(&d, &question, vocab)? {
            TruthVerdict::True => Gold::Yes,
            TruthVerdict::False => Gold::No,
            TruthVerdict::Undetermined => Gold::Unknown,
        };
        cases.push(ProbeCase {
            id,
            context: d.to_natural(vocab),
            question: q_text.clone(),
            object_count: d.len(),
            gold,
            inconsistency_position: position,
        });
        Ok(())
    };
    for n in spec.sizes.clone() {
        if n == 0 {
            continue;
        }
        let all_target: AtomicDiagram = (0..n).map(|i| Literal::new(target, object(i), Polarity::Positive)).collect();
        push(format!("n{n:02}-consistent"), all_target.clone(), None)?;
        let positions: Vec<usize> = match spec.scheme {
            Scheme::PaperCounts if n == 2 => vec![2],
            _ => (1..=n).collect(),
        };
        for p in positions {
            let colour = rivals[rng.gen_range(0..rivals.len())];
            let mut lits = all_target.literals().to_vec();
            lits[p - 1] = Literal::new(colour.as_str(), object(p - 1), Polarity::Positive);
            push(format!("n{n:02}-p{p:02}"), AtomicDiagram::new(lits), Some(p))?;
        }
        if let Some(f) = filler.as_ref().filter(|_| spec.underspecified) {
            let mut lits = all_target.literals().to_vec();
            lits[n - 1] = Literal::new(f.as_str(), object(n - 1), Polarity::Positive);
            push(format!("n{n:02}-open"), AtomicDiagram::new(lits), None)?;
        }
    }
    Ok(cases)
}

/// One JSON record per line.
pub fn to_ndjson<T: Serialize>(items: &[T]) -> String {
    items
        .iter()
        .map(|i| serde_json::to_string(i).expect("serializable record") + "\n")
        .collect()
}

/// Blank lines are skipped.
pub fn from_ndjson<T: DeserializeOwned>(text: &str) -> Result<Vec<T>, ProbeError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| ProbeError::MalformedRecord {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Pass fractions on inconsistent cases by object count, accuracy on the
/// consistent and underspecified cases, and passes by inconsistency
/// position. An unparseable answer is a failure.
pub fn score(cases: &[ProbeCase], responses: &[ProbeResponse]) -> Result<ProbeReport, ProbeError> {
    let mut by_id: HashMap<&str, &ProbeResponse> = HashMap::new();
    for r in responses {
        if by_id.insert(r.id.as_str(), r).is_some() {
            return Err(ProbeError::DuplicateResponse(r.id.clone()));
        }
    }
    let known: std::collections::HashSet<&str> = cases.iter().map(|c| c.id.as_str()).collect();
    if let Some(r) = responses.iter().find(|r| !known.contains(r.id.as_str())) {
        return Err(ProbeError::UnexpectedResponse(r.id.clone()));
    }
    let mut sizes: BTreeMap<usize, Fraction> = BTreeMap::new();
    let mut positions: BTreeMap<usize, Fraction> = BTreeMap::new();
    let mut consistent = Fraction::default();
    let mut open = Fraction::default();
    for c in cases {
        let r = by_id
            .get(c.id.as_str())
            .ok_or_else(|| ProbeError::MissingResponse(c.id.clone()))?;
        let pass = r.normalized.matches(c.gold);
        match c.inconsistency_position {
            Some(p) => {
                sizes.entry(c.object_count).or_default().add(pass);
                positions.entry(p).or_default().add(pass);
            }
            None if c.gold == Gold::Unknown => open.add(pass),
            None => consistent.add(pass),
        }
    }
    Ok(ProbeReport {
        rows: sizes
            .into_iter()
            .map(|(object_count, f)| SizeRow {
                object_count,
                passed: f.num,
                total: f.den,
            })
            .collect(),
        consistent_accuracy: consistent,
        underspecified_accuracy: (open.den > 0).then_some(open),
        by_position: positions
            .into_iter()
            .map(|(position, f)| PositionRow {
                position,
                passed: f.num,
                total: f.den,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{satisfies, Strictness};
    use crate::lang::parse_model_string;

    fn default_cases() -> Vec<ProbeCase> {
        generate_dataset(&DatasetSpec::default(), &Vocabulary::everyday()).unwrap()
    }

    #[test]
    fn paper_counts_shape() {
        let cases = default_cases();
        let inconsistent = cases.iter().filter(|c| c.is_inconsistent()).count();
        assert_eq!(cases.len() - inconsistent, 9);
        assert_eq!(inconsistent, 53);
        assert_eq!(cases[0].context, "The car is blue. The house is blue.");
        assert_eq!(cases[0].question, "Is everything blue?");
        assert_eq!(cases[0].gold, Gold::Yes);
        assert_eq!(cases[1].inconsistency_position, Some(2));
        assert!(cases[1].context.starts_with("The car is blue. The house is "));
    }

    #[test]
    fn full_positions_single_size() {
        let spec = DatasetSpec {
            sizes: 3..=3,
            scheme: Scheme::FullPositions,
            ..DatasetSpec::default()
        };
        let cases = generate_dataset(&spec, &Vocabulary::everyday()).unwrap();
        let pos: Vec<_> = cases.iter().filter_map(|c| c.inconsistency_position).collect();
        assert_eq!(pos, [1, 2, 3]);
    }

    #[test]
    fn gold_agrees_with_satisfies() {
        let v = Vocabulary::everyday();
        let spec = DatasetSpec {
            underspecified: true,
            ..DatasetSpec::default()
        };
        for c in generate_dataset(&spec, &v).unwrap() {
            let d = parse_model_string(&c.context, &v).unwrap();
            assert_eq!(d.len(), c.object_count);
            let phi = Sentence::parse(&c.question, &v).unwrap();
            match satisfies(&d, &phi, &v, Strictness::Lenient) {
                Ok(true) => assert_eq!(c.gold, Gold::Yes),
                Ok(false) => assert_eq!(c.gold, Gold::No),
                Err(_) => assert_eq!(c.gold, Gold::Unknown),
            }
            assert_eq!(c.gold == Gold::No, c.is_inconsistent());
        }
    }

    #[test]
    fn seeded_and_sized() {
        let v = Vocabulary::everyday();
        let a = to_ndjson(&default_cases());
        assert_eq!(a, to_ndjson(&default_cases()));
        let other = DatasetSpec {
            seed: 99,
            ..DatasetSpec::default()
        };
        assert_ne!(a, to_ndjson(&generate_dataset(&other, &v).unwrap()));
        let big = DatasetSpec {
            sizes: 2..=40,
            ..DatasetSpec::default()
        };
        assert!(matches!(generate_dataset(&big, &v), Err(ProbeError::SizeLimitExceeded { .. })));
        let back: Vec<ProbeCase> = from_ndjson(&a).unwrap();
        assert_eq!(back, default_cases());
    }

    #[test]
    fn normalization_rules() {
        assert_eq!(normalize_answer("Yes."), Answer::Yes);
        assert_eq!(normalize_answer("  NO, the house is red"), Answer::No);
        assert_eq!(normalize_answer("\"unknown\""), Answer::Unknown);
        assert_eq!(normalize_answer("Maybe"), Answer::Unparseable);
        assert_eq!(normalize_answer(""), Answer::Unparseable);
        assert_eq!(normalize_answer("yesterday"), Answer::Unparseable);
    }

    #[test]
    fn scoring() {
        let spec = DatasetSpec {
            sizes: 3..=3,
            scheme: Scheme::FullPositions,
            ..DatasetSpec::default()
        };
        let cases = generate_dataset(&spec, &Vocabulary::everyday()).unwrap();
        let answers = ["yes", "no", "no", "yes"];
        let responses: Vec<_> = cases.iter().zip(answers).map(|(c, a)| ProbeResponse::new(&c.id, a)).collect();
        let r = score(&cases, &responses).unwrap();
        assert_eq!(r.rows, [SizeRow { object_count: 3, passed: 2, total: 3 }]);
        assert_eq!(r.consistent_accuracy, Fraction { num: 1, den: 1 });
        assert_eq!(r.by_position.len(), 3);

        assert!(matches!(score(&cases, &responses[1..]), Err(ProbeError::MissingResponse(_))));
        let mut dup = responses.clone();
        dup.push(responses[0].clone());
        assert!(matches!(score(&cases, &dup), Err(ProbeError::DuplicateResponse(_))));
        let mut extra = responses.clone();
        extra.push(ProbeResponse::new("nope", "yes"));
        assert!(matches!(score(&cases, &extra), Err(ProbeError::UnexpectedResponse(_))));
        let garbled: Vec<_> = cases.iter().map(|c| ProbeResponse::new(&c.id, "??")).collect();
        assert_eq!(score(&cases, &garbled).unwrap().rows[0].passed, 0);
    }
}
