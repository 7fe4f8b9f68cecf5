use std::collections::BTreeSet;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{HypothesisDescriptor, LearnError};
use crate::borel::{membership_at_stage, BorelFamily, StageMembership};
use crate::lang::{enumerate_words, Alphabet, Word, DEFAULT_ENUMERATION_CAP};
use crate::prob::{
    bayes_update_all, check_nondegenerate, conditional_given_hypothesis, extension_value, maxent_dilution,
    maxent_prior, ConditionalModel, ExactProb,
};

use super::learning::label_samples;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnivWitness {
    /// Extension length.
    pub m: usize,
    pub base: Word,
    pub extension: Word,
    /// `μⁿ(s|h_∀)·μ(a|s)`, below `α`.
    pub value: ExactProb,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSearch {
    pub alpha: ExactProb,
    pub base_length: usize,
    pub horizon: usize,
    /// Every `s ∈ h_∀ⁿ` has `μⁿ(s|h_∀) > α`.
    pub alpha_established: bool,
    pub witness: Option<UnivWitness>,
}

/// Looks for `s.a ∈ h_∀^{n+m}` with `μ(s.a|h_∀) < α`, breadth-first over
/// `m ≤ horizon`, then lexicographically over `s` and `a`. The model must
/// first pass the monotone non-degeneracy check on `h_∀`.
pub fn witness_search_univ(
    model: &ConditionalModel,
    universal: &HypothesisDescriptor,
    alpha: &ExactProb,
    n: usize,
    horizon: usize,
) -> Result<WitnessSearch, LearnError> {
    let cap = DEFAULT_ENUMERATION_CAP;
    let report = check_nondegenerate(model, universal, n, &[], horizon)?;
    if !report.monotone {
        return Err(LearnError::DegenerateModel(format!(
            "an extension of length ≤ {horizon} gains conditional mass"
        )));
    }
    let mut bases = Vec::new();
    for s in universal.instantiate(model.arity(), n, cap)? {
        let mu = conditional_given_hypothesis(model, &s, universal)?.into_inner();
        bases.push((s, mu));
    }
    let alpha_established = bases.iter().all(|(_, mu)| mu > alpha.value());
    let mut witness = None;
    'outer: for m in 1..=horizon {
        for (s, mu) in &bases {
            for a in enumerate_words(model.arity(), m, cap)? {
                if let Some(v) = extension_value(model, mu, s, &a, universal)? {
                    if v < *alpha.value() {
                        witness = Some(UnivWitness {
                            m,
                            base: s.clone(),
                            extension: a,
                            value: ExactProb::new(v)?,
                        });
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(WitnessSearch {
        alpha: alpha.clone(),
        base_length: n,
        horizon,
        alpha_established,
        witness,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DilutionReport {
    pub n: usize,
    pub m: usize,
    /// Distinct length-`n` instantiations of the position-set family.
    pub family_size_n: usize,
    pub family_size_n_plus_m: usize,
    pub cardinality_holds: bool,
    /// `μⁿ(s|h_∀)` for the all-good string.
    pub mu_n: ExactProb,
    /// Posterior share of hypotheses equal to `h_∀` at `n+m` after training
    /// on every string of length `≤ n`.
    pub universal_share: ExactProb,
    pub mu_n_plus_m: ExactProb,
    pub expected: ExactProb,
    pub dilution_holds: bool,
}

/// Trains a Max-Ent prior over all position-set hypotheses on positions
/// `0..n+m` and checks `μ^{n+m}(s|h_∀) = 2^{-m}·μⁿ(s|h_∀)` together with
/// `|H^{n+m}| = |Hⁿ|·2^m`. Needs a binary alphabet.
pub fn dilution_experiment(
    model: &ConditionalModel,
    good: &[bool],
    n: usize,
    m: usize,
) -> Result<DilutionReport, LearnError> {
    let cap = DEFAULT_ENUMERATION_CAP;
    if model.arity() != 2 {
        return Err(LearnError::InvalidLengths(format!(
            "dilution needs a binary alphabet, got {} letters",
            model.arity()
        )));
    }
    let total = n + m;
    if total >= 20 {
        return Err(LearnError::SizeLimitExceeded {
            requested: 1u128 << total,
            cap: 1 << 20,
        });
    }
    let family: Vec<HypothesisDescriptor> = (0u64..(1u64 << total))
        .map(|mask| HypothesisDescriptor::position_set((0..total).filter(|i| mask >> i & 1 == 1), good.to_vec()))
        .collect();
    let distinct = |k: usize| -> Result<usize, LearnError> {
        let mut seen = BTreeSet::new();
        for h in &family {
            if h.kind_positions_below(k) {
                seen.insert(h.instantiate(2, k, cap)?);
            }
        }
        Ok(seen.len())
    };
    let size_n = distinct(n)?;
    let size_nm = distinct(total)?;

    let universal = HypothesisDescriptor::universal(good.to_vec());
    let mut posterior = maxent_prior(family)?;
    for len in 1..=n {
        let samples = label_samples(&universal, 2, len, cap)?;
        posterior = bayes_update_all(&posterior, model, &samples)?;
    }
    let target_nm = universal.instantiate(2, total, cap)?;
    let mut share = BigRational::from_integer(0.into());
    for (h, w) in posterior.hypotheses().iter().zip(posterior.weights()) {
        if h.instantiate(2, total, cap)? == target_nm {
            share += w;
        }
    }
    let all_good: Word = universal
        .instantiate(2, n, cap)?
        .into_iter()
        .next()
        .ok_or_else(|| LearnError::InvalidLengths("no good letter".into()))?;
    let mu_n = conditional_given_hypothesis(model, &all_good, &universal)?;
    let universal_share = ExactProb::new(share)?;
    let mu_nm = &universal_share * &mu_n;
    let expected = maxent_dilution(&mu_n, m as u32, 2);
    Ok(DilutionReport {
        n,
        m,
        family_size_n: size_n,
        family_size_n_plus_m: size_nm,
        cardinality_holds: size_nm == size_n << m,
        dilution_holds: mu_nm == expected,
        mu_n,
        universal_share,
        mu_n_plus_m: mu_nm,
        expected,
    })
}

impl HypothesisDescriptor {
    /// Position-set hypotheses only mention positions below `k`.
    fn kind_positions_below(&self, k: usize) -> bool {
        match &self.kind {
            super::HypothesisKind::PositionSet { positions } => positions.iter().all(|&p| p < k),
            _ => true,
        }
    }
}

/// A string with its recorded first bad position (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledString {
    pub word: Word,
    pub first_negative: Option<usize>,
}

/// Seeded strings of length `len`: good letters up to a chosen position,
/// a bad letter there, anything after. About one string in `len + 1` has
/// no bad letter.
pub fn sample_first_negative(seed: u64, count: usize, len: usize, good: &[bool]) -> Vec<SampledString> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let good_letters: Vec<u16> = (0..good.len() as u16).filter(|&l| good[l as usize]).collect();
    let bad_letters: Vec<u16> = (0..good.len() as u16).filter(|&l| !good[l as usize]).collect();
    (0..count)
        .map(|_| {
            let p = rng.gen_range(1..=len + 1);
            let first_negative = (p <= len && !bad_letters.is_empty()).then_some(p);
            let letters = (1..=len)
                .map(|i| match first_negative {
                    Some(p) if i == p => bad_letters[rng.gen_range(0..bad_letters.len())],
                    Some(p) if i > p => rng.gen_range(0..good.len() as u16),
                    _ => good_letters[rng.gen_range(0..good_letters.len())],
                })
                .collect();
            SampledString {
                word: Word::new(letters),
                first_negative,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompactnessReport {
    pub total: usize,
    pub matches: usize,
    /// Strings whose observed exclusion stage differs from the recorded one.
    pub mismatches: Vec<(SampledString, Option<usize>)>,
}

/// For each sample, the first stage `k` at which its length-`k` prefix is
/// excluded from the Π⁰₁ family must equal the recorded first bad
/// position, and a string without one must stay possible throughout.
pub fn compactness_check(family: &BorelFamily, samples: &[SampledString]) -> Result<CompactnessReport, LearnError> {
    let mut matches = 0;
    let mut mismatches = Vec::new();
    for s in samples {
        let mut excluded_at = None;
        for k in 1..=s.word.len() {
            if membership_at_stage(family, &s.word.prefix(k))? == StageMembership::Excluded {
                excluded_at = Some(k);
                break;
            }
        }
        if excluded_at == s.first_negative {
            matches += 1;
        } else {
            mismatches.push((s.clone(), excluded_at));
        }
    }
    Ok(CompactnessReport {
        total: samples.len(),
        matches,
        mismatches,
    })
}

/// The Π⁰₁ family of a universal descriptor.
pub fn universal_family(alphabet: &Alphabet, predicate: &str) -> BorelFamily {
    BorelFamily::universal(alphabet, predicate, crate::lang::Polarity::Positive)
}
