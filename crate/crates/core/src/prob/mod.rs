//! Exact probabilities over letter strings.
//!
//! Everything is a [`BigRational`]; threshold crossings such as `μ < α`
//! are decided exactly.

mod model;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use model::{ConditionalModel, Fallback};

use crate::borel::ClopenSet;
use crate::lang::{enumerate_words, LangError, Word, DEFAULT_ENUMERATION_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbError {
    #[error("probability {0} is outside [0, 1]")]
    OutOfRange(String),
    #[error("cannot read `{0}` as a rational")]
    BadRational(String),
    #[error("no conditional distribution for context `{context}`")]
    MissingConditional { context: String },
    #[error("the hypothesis family is empty")]
    EmptyFamily,
    #[error("hypothesis `{0}` has zero mass at this length")]
    ZeroMassHypothesis(String),
    #[error("every hypothesis gives the evidence zero likelihood")]
    InconsistentEvidence,
    #[error("string of length {found} does not match hypothesis length {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("model table line {line}: {message}")]
    MalformedTable { line: usize, message: String },
    #[error("distribution for context `{context}` sums to {total}, not 1")]
    NotNormalized { context: String, total: String },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("enumeration of {requested} strings exceeds the cap of {cap}")]
    SizeLimitExceeded { requested: u128, cap: u128 },
    #[error(transparent)]
    Lang(LangError),
}

impl From<LangError> for ProbError {
    fn from(e: LangError) -> Self {
        match e {
            LangError::SizeLimitExceeded { requested, cap } => ProbError::SizeLimitExceeded { requested, cap },
            other => ProbError::Lang(other),
        }
    }
}

/// Reads `a/b`, an integer, or a finite decimal such as `0.25`.
pub fn parse_rational(text: &str) -> Result<BigRational, ProbError> {
    let t = text.trim();
    let bad = || ProbError::BadRational(text.to_string());
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = BigInt::from_str(&format!("{int}{frac}")).map_err(|_| bad())?;
        return Ok(BigRational::new(digits, BigInt::from(10).pow(frac.len())));
    }
    let r = BigRational::from_str(t).map_err(|_| bad())?;
    Ok(r)
}

/// A rational in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactProb(BigRational);

impl ExactProb {
    pub fn new(value: BigRational) -> Result<Self, ProbError> {
        if value < BigRational::zero() || value > BigRational::one() {
            return Err(ProbError::OutOfRange(value.to_string()));
        }
        Ok(ExactProb(value))
    }

    /// `num/den`; panics if the result is not a probability.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::new(BigRational::new(num.into(), den.into())).expect("ratio outside [0, 1]")
    }

    pub fn zero() -> Self {
        ExactProb(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactProb(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_inner(self) -> BigRational {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl std::ops::Mul for &ExactProb {
    type Output = ExactProb;
    fn mul(self, rhs: &ExactProb) -> ExactProb {
        ExactProb(&self.0 * &rhs.0)
    }
}

impl fmt::Display for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for ExactProb {
    type Err = ProbError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExactProb::new(parse_rational(s)?)
    }
}

impl Serialize for ExactProb {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactProb {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Eq. (1): `μ(w₁|s)·μ(w₂|s w₁)·…`.
pub fn chain_probability(m: &ConditionalModel, context: &Word, continuation: &Word) -> Result<ExactProb, ProbError> {
    let mut p = BigRational::one();
    let mut ctx = context.clone();
    for &l in continuation.letters() {
        if p.is_zero() {
            break;
        }
        p *= m.conditional(&ctx, l)?;
        ctx = ctx.pushed(l);
    }
    Ok(ExactProb(p))
}

/// `μ(s)`, the chain probability from the empty context.
pub fn string_probability(m: &ConditionalModel, s: &Word) -> Result<ExactProb, ProbError> {
    chain_probability(m, &Word::empty(), s)
}

/// A set of strings indexed by length, `n ↦ hⁿ ⊆ Vⁿ`.
pub trait Hypothesis {
    fn name(&self) -> String;

    /// Whether `w` belongs to the instantiation at `w.len()`.
    fn contains(&self, w: &Word) -> bool;

    /// The one length this hypothesis is defined at, if fixed.
    fn fixed_length(&self) -> Option<usize> {
        None
    }

    /// Members of `hⁿ`. The default filters all of `Vⁿ`.
    fn members(&self, arity: usize, n: usize, cap: u128) -> Result<Vec<Word>, ProbError> {
        Ok(enumerate_words(arity, n, cap)?.filter(|w| self.contains(w)).collect())
    }
}

/// A fixed-length hypothesis given by its members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSet {
    pub name: String,
    pub length: usize,
    pub words: BTreeSet<Word>,
}

impl WordSet {
    pub fn new(name: impl Into<String>, length: usize, words: impl IntoIterator<Item = Word>) -> Self {
        WordSet {
            name: name.into(),
            length,
            words: words.into_iter().collect(),
        }
    }
}

impl Hypothesis for WordSet {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }

    fn fixed_length(&self) -> Option<usize> {
        Some(self.length)
    }

    fn members(&self, _arity: usize, n: usize, _cap: u128) -> Result<Vec<Word>, ProbError> {
        if n != self.length {
            return Ok(Vec::new());
        }
        Ok(self.words.iter().cloned().collect())
    }
}

impl Hypothesis for ClopenSet {
    fn name(&self) -> String {
        let prefixes: Vec<String> = self.base().prefixes().iter().map(|w| w.to_string()).collect();
        format!("O{{{}}}", prefixes.join(", "))
    }

    fn contains(&self, w: &Word) -> bool {
        self.contains_cylinder(w)
    }
}

/// `Σ_{t ∈ hⁿ} μ(t)`.
pub fn hypothesis_mass<H: Hypothesis + ?Sized>(m: &ConditionalModel, h: &H, n: usize) -> Result<BigRational, ProbError> {
    let mut total = BigRational::zero();
    for t in h.members(m.arity(), n, DEFAULT_ENUMERATION_CAP)? {
        total += string_probability(m, &t)?.0;
    }
    Ok(total)
}

/// `μ(s|h) = μ(s)·[s∈h] / Σ_{t∈h} μ(t)` at length `|s|`.
pub fn conditional_given_hypothesis<H: Hypothesis + ?Sized>(
    m: &ConditionalModel,
    s: &Word,
    h: &H,
) -> Result<ExactProb, ProbError> {
    if let Some(expected) = h.fixed_length() {
        if expected != s.len() {
            return Err(ProbError::LengthMismatch {
                expected,
                found: s.len(),
            });
        }
    }
    let mass = hypothesis_mass(m, h, s.len())?;
    if mass.is_zero() {
        return Err(ProbError::ZeroMassHypothesis(h.name()));
    }
    if !h.contains(s) {
        return Ok(ExactProb::zero());
    }
    Ok(ExactProb(string_probability(m, s)?.0 / mass))
}

/// Finite family of hypotheses with exact weights summing to 1.
#[derive(Debug, Clone)]
pub struct HypothesisPrior<H> {
    hypotheses: Vec<H>,
    weights: Vec<BigRational>,
}

impl<H: Hypothesis> HypothesisPrior<H> {
    pub fn hypotheses(&self) -> &[H] {
        &self.hypotheses
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> ExactProb {
        ExactProb(self.weights[i].clone())
    }

    pub fn total(&self) -> BigRational {
        self.weights.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hypotheses.is_empty()
    }

    /// Total weight of the hypotheses selected by `keep`.
    pub fn weight_where(&self, mut keep: impl FnMut(&H) -> bool) -> ExactProb {
        let w = self
            .hypotheses
            .iter()
            .zip(&self.weights)
            .filter(|(h, _)| keep(h))
            .map(|(_, w)| w)
            .sum();
        ExactProb(w)
    }
}

/// Equal weights `1/|family|`.
pub fn maxent_prior<H: Hypothesis>(hyps: Vec<H>) -> Result<HypothesisPrior<H>, ProbError> {
    if hyps.is_empty() {
        return Err(ProbError::EmptyFamily);
    }
    let w = BigRational::new(BigInt::one(), BigInt::from(hyps.len()));
    Ok(HypothesisPrior {
        weights: vec![w; hyps.len()],
        hypotheses: hyps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    In,
    Out,
}

/// A labelled string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Observation {
    pub word: Word,
    pub label: Label,
}

/// Posterior ∝ prior × likelihood, normalized exactly.
pub fn bayes_update_with_likelihoods<H: Hypothesis + Clone>(
    prior: &HypothesisPrior<H>,
    likelihoods: &[BigRational],
) -> Result<HypothesisPrior<H>, ProbError> {
    assert_eq!(likelihoods.len(), prior.len(), "one likelihood per hypothesis");
    let unnorm: Vec<BigRational> = prior.weights.iter().zip(likelihoods).map(|(w, l)| w * l).collect();
    let z: BigRational = unnorm.iter().sum();
    if z.is_zero() {
        return Err(ProbError::InconsistentEvidence);
    }
    Ok(HypothesisPrior {
        hypotheses: prior.hypotheses.clone(),
        weights: unnorm.into_iter().map(|w| w / &z).collect(),
    })
}

struct Likelihood {
    mass: Vec<Option<BigRational>>,
    length: Option<usize>,
}

impl Likelihood {
    fn new(k: usize) -> Self {
        Likelihood {
            mass: vec![None; k],
            length: None,
        }
    }

    /// `μ(s|h)` for an `in` label, `μ(s|complement of h)` for `out`.
    fn of<H: Hypothesis>(
        &mut self,
        m: &ConditionalModel,
        i: usize,
        h: &H,
        obs: &Observation,
    ) -> Result<BigRational, ProbError> {
        let n = obs.word.len();
        if self.length != Some(n) {
            self.mass.iter_mut().for_each(|x| *x = None);
            self.length = Some(n);
        }
        if let Some(expected) = h.fixed_length() {
            if expected != n {
                return Err(ProbError::LengthMismatch { expected, found: n });
            }
        }
        let inside = h.contains(&obs.word);
        if inside != (obs.label == Label::In) {
            return Ok(BigRational::zero());
        }
        let mass = match &self.mass[i] {
            Some(x) => x.clone(),
            None => {
                let x = hypothesis_mass(m, h, n)?;
                self.mass[i] = Some(x.clone());
                x
            }
        };
        let region = if inside { mass } else { BigRational::one() - mass };
        let p = string_probability(m, &obs.word)?.0;
        Ok(if region.is_zero() { BigRational::zero() } else { p / region })
    }
}

/// One Bayesian step on a labelled string.
pub fn bayes_update<H: Hypothesis + Clone>(
    prior: &HypothesisPrior<H>,
    m: &ConditionalModel,
    observation: &Observation,
) -> Result<HypothesisPrior<H>, ProbError> {
    bayes_update_all(prior, m, std::slice::from_ref(observation))
}

/// Sequential Bayesian updates, sharing hypothesis masses between
/// observations of the same length.
pub fn bayes_update_all<H: Hypothesis + Clone>(
    prior: &HypothesisPrior<H>,
    m: &ConditionalModel,
    observations: &[Observation],
) -> Result<HypothesisPrior<H>, ProbError> {
    let mut cache = Likelihood::new(prior.len());
    let mut current = prior.clone();
    for obs in observations {
        let lik = prior
            .hypotheses
            .iter()
            .enumerate()
            .map(|(i, h)| cache.of(m, i, h, obs))
            .collect::<Result<Vec<_>, _>>()?;
        current = bayes_update_with_likelihoods(&current, &lik)?;
    }
    Ok(current)
}

/// `mu_n / branching^m`: the share of one string's hypothesis when Max-Ent
/// weight is spread over `branching^m` extensions.
///
/// Panics if `branching` is zero.
pub fn maxent_dilution(mu_n: &ExactProb, m: u32, branching: u32) -> ExactProb {
    assert!(branching > 0, "branching must be positive");
    ExactProb(&mu_n.0 / BigRational::from_integer(BigInt::from(branching).pow(m)))
}

/// `μ(O(A)) = Σ μ(p)` over the normalized prefixes of `A`.
pub fn cylinder_measure(m: &ConditionalModel, c: &ClopenSet) -> Result<ExactProb, ProbError> {
    let mut total = BigRational::zero();
    for p in c.normalized().base().prefixes() {
        total += string_probability(m, p)?.0;
    }
    ExactProb::new(total)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaOutcome {
    pub delta: ExactProb,
    /// Least `m` with `μ(s.a|h) = max{0, μ(s|h) − δ}` for all tested pairs.
    pub exact_drop_at: Option<usize>,
    /// Least `m` with `μ(s.a|h) ≤ max{0, μ(s|h) − δ}` for all tested pairs.
    pub at_least_drop_at: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NondegeneracyReport {
    pub base_length: usize,
    pub horizon: usize,
    /// `(s, a)` pairs examined over all `m`.
    pub tested_pairs: usize,
    /// `μ(s.a|h) ≤ μ(s|h)` everywhere.
    pub monotone: bool,
    /// `μ(s.a|h) < μ(s|h)` everywhere.
    pub strictly_monotone: bool,
    pub per_delta: Vec<DeltaOutcome>,
}

impl NondegeneracyReport {
    pub fn least_exact_m(&self, delta: &ExactProb) -> Option<usize> {
        self.per_delta.iter().find(|d| &d.delta == delta).and_then(|d| d.exact_drop_at)
    }
}

/// Projected conditional of an extension: `μⁿ(s|h)·μ(a|s)` when `s.a` stays
/// in `h`, the value the dilution argument tracks.
pub fn extension_value<H: Hypothesis + ?Sized>(
    m: &ConditionalModel,
    s_given_h: &BigRational,
    s: &Word,
    a: &Word,
    h: &H,
) -> Result<Option<BigRational>, ProbError> {
    let sa = s.concat(a);
    if !h.contains(&sa) {
        return Ok(None);
    }
    Ok(Some(s_given_h * chain_probability(m, s, a)?.0))
}

/// Searches for the uniform drop of the non-degeneracy definition and for
/// the weaker monotone decrease, on extensions `s.a ∈ h` of every
/// `s ∈ hⁿ`, for `1 ≤ |a| ≤ horizon`.
pub fn check_nondegenerate<H: Hypothesis + ?Sized>(
    m: &ConditionalModel,
    h: &H,
    n: usize,
    delta_grid: &[ExactProb],
    horizon: usize,
) -> Result<NondegeneracyReport, ProbError> {
    let cap = DEFAULT_ENUMERATION_CAP;
    let mass = hypothesis_mass(m, h, n)?;
    if mass.is_zero() {
        return Err(ProbError::ZeroMassHypothesis(h.name()));
    }
    let bases: Vec<(Word, BigRational)> = h
        .members(m.arity(), n, cap)?
        .into_iter()
        .map(|s| {
            let p = string_probability(m, &s)?.0 / &mass;
            Ok((s, p))
        })
        .collect::<Result<_, ProbError>>()?;

    let mut exact: Vec<Option<usize>> = vec![None; delta_grid.len()];
    let mut at_least: Vec<Option<usize>> = vec![None; delta_grid.len()];
    let mut monotone = true;
    let mut strictly = true;
    let mut tested = 0usize;
    for ext in 1..=horizon {
        let mut exact_ok = vec![true; delta_grid.len()];
        let mut at_least_ok = vec![true; delta_grid.len()];
        let mut any = false;
        for (s, mu) in &bases {
            for a in enumerate_words(m.arity(), ext, cap)? {
                let Some(v) = extension_value(m, mu, s, &a, h)? else { continue };
                any = true;
                tested += 1;
                monotone &= v <= *mu;
                strictly &= v < *mu;
                for (j, d) in delta_grid.iter().enumerate() {
                    let target = (mu - &d.0).max(BigRational::zero());
                    exact_ok[j] &= v == target;
                    at_least_ok[j] &= v <= target;
                }
            }
        }
        if !any {
            continue;
        }
        for j in 0..delta_grid.len() {
            if exact_ok[j] && exact[j].is_none() {
                exact[j] = Some(ext);
            }
            if at_least_ok[j] && at_least[j].is_none() {
                at_least[j] = Some(ext);
            }
        }
    }
    Ok(NondegeneracyReport {
        base_length: n,
        horizon,
        tested_pairs: tested,
        monotone,
        strictly_monotone: strictly && tested > 0,
        per_delta: delta_grid
            .iter()
            .enumerate()
            .map(|(j, d)| DeltaOutcome {
                delta: d.clone(),
                exact_drop_at: exact[j],
                at_least_drop_at: at_least[j],
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::lang::{Alphabet, Vocabulary};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn w(l: &[u16]) -> Word {
        Word::new(l.to_vec())
    }

    fn bin() -> Alphabet {
        Alphabet::new(&Vocabulary::logical())
    }

    struct Universal;
    impl Hypothesis for Universal {
        fn name(&self) -> String {
            "forall blue".into()
        }
        fn contains(&self, w: &Word) -> bool {
            w.letters().iter().all(|&l| l == 0)
        }
    }

    #[derive(Clone)]
    struct Existential;
    impl Hypothesis for Existential {
        fn name(&self) -> String {
            "exists blue".into()
        }
        fn contains(&self, w: &Word) -> bool {
            w.letters().contains(&0)
        }
    }

    #[test]
    fn exact_prob_parsing() {
        assert_eq!("1/4".parse::<ExactProb>().unwrap(), ExactProb::ratio(1, 4));
        assert_eq!("0.25".parse::<ExactProb>().unwrap(), ExactProb::ratio(1, 4));
        assert_eq!("2/8".parse::<ExactProb>().unwrap().to_string(), "1/4");
        assert!("5/4".parse::<ExactProb>().is_err());
        assert!("-1/4".parse::<ExactProb>().is_err());
        assert!("x".parse::<ExactProb>().is_err());
        let json = serde_json::to_string(&ExactProb::ratio(1, 8)).unwrap();
        assert_eq!(json, "\"1/8\"");
        assert_eq!(serde_json::from_str::<ExactProb>(&json).unwrap(), ExactProb::ratio(1, 8));
    }

    #[test]
    fn chain_examples() {
        let u = ConditionalModel::uniform(&bin());
        assert_eq!(chain_probability(&u, &w(&[1]), &w(&[0, 1, 0])).unwrap(), ExactProb::ratio(1, 8));
        assert_eq!(chain_probability(&u, &w(&[1]), &Word::empty()).unwrap(), ExactProb::one());
        let mut t = BTreeMap::new();
        t.insert(Word::empty(), vec![q(1, 2), q(1, 2)]);
        t.insert(w(&[0]), vec![q(2, 3), q(1, 3)]);
        let m = ConditionalModel::from_table(&bin(), t, Fallback::Error).unwrap();
        assert_eq!(string_probability(&m, &w(&[0, 1])).unwrap(), ExactProb::ratio(1, 6));
        assert!(matches!(
            string_probability(&m, &w(&[1, 1])),
            Err(ProbError::MissingConditional { .. })
        ));
    }

    #[test]
    fn tsv_loading() {
        let text = "# ctx\ttoken\tp\nε\tblue\t1/2\nε\t¬blue\t1/2\nblue\t¬blue\t1\n";
        let m = ConditionalModel::load_tsv(text, &bin(), Fallback::Uniform).unwrap();
        assert_eq!(m.conditional(&w(&[0]), 0).unwrap(), q(0, 1));
        assert_eq!(m.conditional(&w(&[1]), 0).unwrap(), q(1, 2));
        let unnormalized = "ε\tblue\t1/2\n";
        assert!(matches!(
            ConditionalModel::load_tsv(unnormalized, &bin(), Fallback::Uniform),
            Err(ProbError::NotNormalized { .. })
        ));
        assert!(matches!(
            ConditionalModel::load_tsv("ε\tred\t1\n", &bin(), Fallback::Uniform),
            Err(ProbError::MalformedTable { line: 1, .. })
        ));
        assert!(matches!(
            ConditionalModel::load_tsv("ε\tblue\t1\nε\tblue\t0\n", &bin(), Fallback::Uniform),
            Err(ProbError::MalformedTable { line: 2, .. })
        ));
    }

    #[test]
    fn biased_and_constant() {
        let b = ConditionalModel::biased_coin(&bin(), ExactProb::ratio(1, 3)).unwrap();
        assert_eq!(string_probability(&b, &w(&[0, 1])).unwrap(), ExactProb::ratio(2, 9));
        let c = ConditionalModel::constant(&bin(), 0).unwrap();
        assert_eq!(string_probability(&c, &w(&[0, 0, 0])).unwrap(), ExactProb::one());
        assert!(string_probability(&c, &w(&[0, 1])).unwrap().is_zero());
        let plus = Alphabet::new(&Vocabulary::logical_plus());
        assert!(ConditionalModel::biased_coin(&plus, ExactProb::ratio(1, 2)).is_err());
    }

    #[test]
    fn maxent_examples() {
        let p = maxent_prior(vec![Existential, Existential]).unwrap();
        assert_eq!(p.weights(), [q(1, 2), q(1, 2)]);
        let p = maxent_prior(vec![Existential; 5]).unwrap();
        assert!(p.weights().iter().all(|x| *x == q(1, 5)));
        assert!(matches!(maxent_prior(Vec::<Existential>::new()), Err(ProbError::EmptyFamily)));
    }

    #[test]
    fn conditional_examples() {
        let u = ConditionalModel::uniform(&bin());
        assert_eq!(conditional_given_hypothesis(&u, &w(&[0, 0, 0]), &Universal).unwrap(), ExactProb::one());
        assert!(conditional_given_hypothesis(&u, &w(&[0, 1]), &Universal).unwrap().is_zero());
        assert_eq!(conditional_given_hypothesis(&u, &w(&[1, 0]), &Existential).unwrap(), ExactProb::ratio(1, 3));
        let h = WordSet::new("two", 2, [w(&[0, 0])]);
        assert!(matches!(
            conditional_given_hypothesis(&u, &w(&[0]), &h),
            Err(ProbError::LengthMismatch { expected: 2, found: 1 })
        ));
        let none = WordSet::new("none", 1, []);
        assert!(matches!(
            conditional_given_hypothesis(&u, &w(&[0]), &none),
            Err(ProbError::ZeroMassHypothesis(_))
        ));
    }

    #[test]
    fn bayes_examples() {
        let u = ConditionalModel::uniform(&bin());
        let hs = vec![
            WordSet::new("h1", 1, [w(&[0])]),
            WordSet::new("h2", 1, [w(&[1])]),
            WordSet::new("h3", 1, [w(&[1])]),
        ];
        let prior = maxent_prior(hs.clone()).unwrap();
        let post = bayes_update_with_likelihoods(&prior, &[q(1, 2), q(1, 4), q(0, 1)]).unwrap();
        assert_eq!(post.weights(), [q(2, 3), q(1, 3), q(0, 1)]);

        let two = maxent_prior(hs[..2].to_vec()).unwrap();
        let post = bayes_update(
            &two,
            &u,
            &Observation {
                word: w(&[0]),
                label: Label::In,
            },
        )
        .unwrap();
        assert_eq!(post.weights(), [q(1, 1), q(0, 1)]);
        // labelled out of h2: h1 agrees, h2 does not
        let post = bayes_update(
            &two,
            &u,
            &Observation {
                word: w(&[0]),
                label: Label::Out,
            },
        )
        .unwrap();
        assert_eq!(post.weights(), [q(0, 1), q(1, 1)]);

        let same = maxent_prior(vec![Existential, Existential]).unwrap();
        let post = bayes_update(
            &same,
            &u,
            &Observation {
                word: w(&[0, 1]),
                label: Label::In,
            },
        )
        .unwrap();
        assert_eq!(post.weights(), same.weights());

        assert!(matches!(
            bayes_update_with_likelihoods(&two, &[q(0, 1), q(0, 1)]),
            Err(ProbError::InconsistentEvidence)
        ));
    }

    #[test]
    fn dilution_examples() {
        assert_eq!(maxent_dilution(&ExactProb::one(), 3, 2), ExactProb::ratio(1, 8));
        assert_eq!(maxent_dilution(&ExactProb::ratio(2, 3), 0, 2), ExactProb::ratio(2, 3));
        assert_eq!(maxent_dilution(&ExactProb::ratio(1, 2), 1, 4), ExactProb::ratio(1, 8));
    }

    #[test]
    fn cylinder_measure_sums_prefixes() {
        let u = ConditionalModel::uniform(&bin());
        let c = ClopenSet::new(2, [w(&[0]), w(&[0, 1]), w(&[1, 1])]);
        assert_eq!(cylinder_measure(&u, &c).unwrap(), ExactProb::ratio(3, 4));
        assert_eq!(cylinder_measure(&u, &ClopenSet::full(2)).unwrap(), ExactProb::one());
    }

    #[test]
    fn nondegeneracy_uniform() {
        let u = ConditionalModel::uniform(&bin());
        let grid = [ExactProb::ratio(1, 2), ExactProb::ratio(1, 4), ExactProb::one()];
        let r = check_nondegenerate(&u, &Universal, 2, &grid, 8).unwrap();
        assert!(r.monotone && r.strictly_monotone);
        assert_eq!(r.tested_pairs, 8);
        assert_eq!(r.per_delta[0].exact_drop_at, Some(1));
        assert_eq!(r.per_delta[1].exact_drop_at, None);
        assert_eq!(r.per_delta[1].at_least_drop_at, Some(1));
        assert_eq!(r.per_delta[2].exact_drop_at, None);
        assert_eq!(r.least_exact_m(&ExactProb::ratio(1, 2)), Some(1));
    }

    #[test]
    fn nondegeneracy_excluding_model() {
        let mut t = BTreeMap::new();
        t.insert(w(&[0]), vec![q(0, 1), q(1, 1)]);
        let m = ConditionalModel::from_table(&bin(), t, Fallback::Uniform).unwrap();
        let r = check_nondegenerate(&m, &Universal, 1, &[ExactProb::one()], 3).unwrap();
        assert_eq!(r.per_delta[0].exact_drop_at, Some(1));
    }

    #[test]
    fn nondegeneracy_constant() {
        let c = ConditionalModel::constant(&bin(), 0).unwrap();
        let r = check_nondegenerate(&c, &Universal, 1, &[ExactProb::ratio(1, 2)], 12).unwrap();
        assert!(r.monotone);
        assert!(!r.strictly_monotone);
        assert_eq!(r.per_delta[0].exact_drop_at, None);
        assert_eq!(r.per_delta[0].at_least_drop_at, None);
    }
}
