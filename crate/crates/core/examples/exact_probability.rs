// Exact string probabilities, conditioning on a hypothesis and the
// non-degeneracy check.
//
// `cargo run --example exact_probability`

use std::fmt::Write;

use quantlab::lang::{Alphabet, Polarity, Vocabulary, Word};
use quantlab::learnlab::HypothesisDescriptor;
use quantlab::prob::{
    chain_probability, check_nondegenerate, conditional_given_hypothesis, string_probability, ConditionalModel, ExactProb,
    Fallback,
};

const TABLE: &str = "\
# context\tletter\tprobability
ε\tblue\t2/3
ε\t¬blue\t1/3
blue\tblue\t3/4
blue\t¬blue\t1/4
";

pub fn run_example() -> String {
    let mut out = String::new();
    let alphabet = Alphabet::new(&Vocabulary::logical());
    let uniform = ConditionalModel::uniform(&alphabet);
    let table = ConditionalModel::load_tsv(TABLE, &alphabet, Fallback::Uniform).unwrap();
    let s = Word::new(vec![0, 0, 1]);
    for (name, m) in [("uniform", &uniform), ("table", &table)] {
        let whole = string_probability(m, &s).unwrap();
        let split = &string_probability(m, &s.prefix(1)).unwrap() * &chain_probability(m, &s.prefix(1), &s.suffix_from(1)).unwrap();
        writeln!(out, "{name}: μ({s}) = {whole} = {split}").unwrap();
    }

    let univ = HypothesisDescriptor::universal(alphabet.letters_with("blue", Polarity::Positive));
    let some = HypothesisDescriptor::existential(alphabet.letters_with("blue", Polarity::Positive));
    let w = Word::new(vec![0, 1]);
    writeln!(out, "μ({w} | ∃blue) = {}", conditional_given_hypothesis(&uniform, &w, &some).unwrap()).unwrap();

    let grid = [ExactProb::ratio(1, 2), ExactProb::ratio(1, 4)];
    let r = check_nondegenerate(&uniform, &univ, 1, &grid, 4).unwrap();
    writeln!(out, "uniform on ∀blue: monotone {}, strict {}", r.monotone, r.strictly_monotone).unwrap();
    for d in &r.per_delta {
        writeln!(out, "  δ = {}: exact at {:?}, at least at {:?}", d.delta, d.exact_drop_at, d.at_least_drop_at).unwrap();
    }
    out
}

fn main() {
    print!("{}", run_example());
}
