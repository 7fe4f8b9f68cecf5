use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{HypothesisDescriptor, LearnError};
use crate::lang::{enumerate_words, Alphabet, Word, DEFAULT_ENUMERATION_CAP};
use crate::prob::{
    bayes_update_all, conditional_given_hypothesis, maxent_prior, ConditionalModel, ExactProb, Hypothesis,
    HypothesisPrior, Label, Observation,
};

/// All strings of length `n`, labelled by the target.
pub fn label_samples<H: Hypothesis + ?Sized>(target: &H, arity: usize, n: usize, cap: u128) -> Result<Vec<Observation>, LearnError> {
    Ok(enumerate_words(arity, n, cap)?
        .map(|word| {
            let label = if target.contains(&word) { Label::In } else { Label::Out };
            Observation { word, label }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosteriorSnapshot {
    pub length: usize,
    pub weights: Vec<(String, ExactProb)>,
    /// Highest-weight hypothesis, first on ties.
    pub selected: String,
    /// Empirical risk of `selected` minus the least empirical risk in the
    /// family, on this length's samples.
    pub risk_gap: ExactProb,
}

/// `lower = max μ₀(s|h)`, `upper = min μ^β(s|h)` over target members;
/// any `α` strictly between separates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatingInterval {
    pub lower: ExactProb,
    pub upper: ExactProb,
}

impl SeparatingInterval {
    pub fn is_nonempty(&self) -> bool {
        self.lower < self.upper
    }

    pub fn contains(&self, alpha: &ExactProb) -> bool {
        &self.lower < alpha && alpha < &self.upper
    }

    pub fn midpoint(&self) -> ExactProb {
        let two = BigRational::from_integer(2.into());
        ExactProb::new((self.lower.value() + self.upper.value()) / two).expect("midpoint of probabilities")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum LearningOutcome {
    Learned,
    WitnessFound {
        /// The failing string in formal syntax.
        string: String,
        length: usize,
        value: ExactProb,
        /// `trained` when the trained score is not above `α`, `prior` when
        /// the untrained score is not below it.
        side: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearningRun {
    pub target: String,
    pub family: Vec<String>,
    pub alpha: ExactProb,
    pub train_lengths: Vec<usize>,
    pub test_length: usize,
    pub snapshots: Vec<PosteriorSnapshot>,
    pub interval: Option<SeparatingInterval>,
    pub outcome: LearningOutcome,
}

impl LearningRun {
    pub fn learned(&self) -> bool {
        self.outcome == LearningOutcome::Learned
    }
}

fn snapshot(prior: &HypothesisPrior<HypothesisDescriptor>, samples: &[Observation], length: usize) -> PosteriorSnapshot {
    let weights: Vec<(String, ExactProb)> = prior
        .hypotheses()
        .iter()
        .enumerate()
        .map(|(i, h)| (h.name.clone(), prior.weight(i)))
        .collect();
    let mut best = 0;
    for (i, w) in prior.weights().iter().enumerate() {
        if *w > prior.weights()[best] {
            best = i;
        }
    }
    let errors = |h: &HypothesisDescriptor| {
        samples
            .iter()
            .filter(|o| h.contains(&o.word) != (o.label == Label::In))
            .count()
    };
    let selected_err = errors(&prior.hypotheses()[best]);
    let least = prior.hypotheses().iter().map(errors).min().unwrap_or(0);
    let risk_gap = if samples.is_empty() {
        ExactProb::zero()
    } else {
        ExactProb::new(BigRational::new(
            ((selected_err - least) as i64).into(),
            (samples.len() as i64).into(),
        ))
        .expect("risk gap in [0, 1]")
    };
    PosteriorSnapshot {
        length,
        weights,
        selected: prior.hypotheses()[best].name.clone(),
        risk_gap,
    }
}

/// Trains a Max-Ent prior over `family ∪ {target}` by Bayesian updates on
/// every oracle-labelled string of each training length, then scores every
/// string `s` of each length `T` from the longest training length `N` to
/// `test_length`:
///
/// `score(s) = ω_T · μ^N(s[..N] | target) · [s ∈ target^T]`
///
/// where `ω_T` is the posterior weight of hypotheses whose length-`T`
/// instantiation equals the target's; the untrained score uses the prior
/// weight instead. The run is learned when `score > α > untrained score`
/// holds exactly for the members and for no other string. Ties fail. A
/// failing trained score is reported in preference to a failing untrained
/// one.
#[allow(clippy::too_many_arguments)]
pub fn effective_learning_test(
    alphabet: &Alphabet,
    target: &HypothesisDescriptor,
    family: &[HypothesisDescriptor],
    model: &ConditionalModel,
    alpha: &ExactProb,
    train_lengths: &[usize],
    test_length: usize,
) -> Result<LearningRun, LearnError> {
    let cap = DEFAULT_ENUMERATION_CAP;
    let arity = alphabet.size();
    let Some(&n) = train_lengths.iter().max() else {
        return Err(LearnError::InvalidLengths("no training lengths".into()));
    };
    if test_length < n {
        return Err(LearnError::InvalidLengths(format!(
            "test length {test_length} is shorter than training length {n}"
        )));
    }
    let mut hyps = family.to_vec();
    if !hyps.contains(target) {
        hyps.push(target.clone());
    }
    let prior = maxent_prior(hyps)?;
    let mut posterior = prior.clone();
    let mut snapshots = Vec::new();
    for &len in train_lengths {
        let samples = label_samples(target, arity, len, cap)?;
        posterior = bayes_update_all(&posterior, model, &samples)?;
        snapshots.push(snapshot(&posterior, &samples, len));
    }

    let mut base: BTreeMap<Word, BigRational> = BTreeMap::new();
    let mut lower: Option<BigRational> = None;
    let mut upper: Option<BigRational> = None;
    let mut trained_failure: Option<LearningOutcome> = None;
    let mut prior_failure: Option<LearningOutcome> = None;
    let witness = |s: &Word, length: usize, value: BigRational, side: &str| -> Result<LearningOutcome, LearnError> {
        Ok(LearningOutcome::WitnessFound {
            string: alphabet.word_to_diagram(s)?.to_string(),
            length,
            value: ExactProb::new(value)?,
            side: side.into(),
        })
    };
    for t in n..=test_length {
        let members = target.instantiate(arity, t, cap)?;
        if members.is_empty() {
            continue;
        }
        let same = |h: &HypothesisDescriptor| -> Result<bool, LearnError> { Ok(h.instantiate(arity, t, cap)? == members) };
        let mut agrees = Vec::with_capacity(prior.len());
        for h in prior.hypotheses() {
            agrees.push(same(h)?);
        }
        let share = |p: &HypothesisPrior<HypothesisDescriptor>| -> BigRational {
            p.weights()
                .iter()
                .zip(&agrees)
                .filter(|(_, a)| **a)
                .map(|(w, _)| w.clone())
                .sum()
        };
        let omega = share(&posterior);
        let omega0 = share(&prior);
        for s in &members {
            let prefix = s.prefix(n);
            let b = match base.get(&prefix) {
                Some(b) => b.clone(),
                None => {
                    let b = conditional_given_hypothesis(model, &prefix, target)?.into_inner();
                    base.insert(prefix, b.clone());
                    b
                }
            };
            let trained = &omega * &b;
            let untrained = &omega0 * &b;
            if trained_failure.is_none() && trained <= *alpha.value() {
                trained_failure = Some(witness(s, t, trained.clone(), "trained")?);
            }
            if prior_failure.is_none() && untrained >= *alpha.value() {
                prior_failure = Some(witness(s, t, untrained.clone(), "prior")?);
            }
            lower = Some(match lower {
                Some(l) if l >= untrained => l,
                _ => untrained,
            });
            upper = Some(match upper {
                Some(u) if u <= trained => u,
                _ => trained,
            });
        }
    }
    let interval = match (lower, upper) {
        (Some(l), Some(u)) => Some(SeparatingInterval {
            lower: ExactProb::new(l)?,
            upper: ExactProb::new(u)?,
        }),
        _ => None,
    };
    Ok(LearningRun {
        target: target.name.clone(),
        family: prior.hypotheses().iter().map(|h| h.name.clone()).collect(),
        alpha: alpha.clone(),
        train_lengths: train_lengths.to_vec(),
        test_length,
        snapshots,
        interval,
        outcome: trained_failure.or(prior_failure).unwrap_or(LearningOutcome::Learned),
    })
}

#[cfg(test)]
fn distinct_instantiations(hyps: &[HypothesisDescriptor], arity: usize, n: usize) -> Result<usize, LearnError> {
    let mut seen = std::collections::BTreeSet::new();
    for h in hyps {
        seen.insert(h.instantiate(arity, n, DEFAULT_ENUMERATION_CAP)?);
    }
    Ok(seen.len())
}
