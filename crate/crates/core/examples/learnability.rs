// Effective learning of a clopen target, the universal witness and
// Max-Ent dilution.
//
// `cargo run --example learnability`

use std::fmt::Write;

use quantlab::lang::{Alphabet, Polarity, Vocabulary, DEFAULT_ENUMERATION_CAP};
use quantlab::learnlab::{
    dilution_experiment, effective_learning_test, standard_family, witness_search_univ, HypothesisDescriptor,
};
use quantlab::prob::{ConditionalModel, ExactProb};

pub fn run_example() -> String {
    let mut out = String::new();
    let alphabet = Alphabet::new(&Vocabulary::logical());
    let model = ConditionalModel::uniform(&alphabet);
    let good = alphabet.letters_with("blue", Polarity::Positive);

    let family = standard_family(&good, 3, DEFAULT_ENUMERATION_CAP).unwrap();
    let target = HypothesisDescriptor::first_k(1, good.clone());
    let run = effective_learning_test(&alphabet, &target, &family, &model, &ExactProb::ratio(1, 8), &[2, 3], 5).unwrap();
    for s in &run.snapshots {
        writeln!(out, "after length {}: {}", s.length, s.selected).unwrap();
    }
    writeln!(out, "{} with α = {}: {:?}", run.target, run.alpha, run.outcome).unwrap();

    let univ = HypothesisDescriptor::universal(good.clone());
    let w = witness_search_univ(&model, &univ, &ExactProb::ratio(1, 4), 1, 10).unwrap().witness.unwrap();
    writeln!(out, "universal witness: m = {}, {}{} has value {}", w.m, w.base, w.extension, w.value).unwrap();

    for m in 0..=3 {
        let d = dilution_experiment(&model, &good, 2, m).unwrap();
        writeln!(out, "n=2 m={m}: μ = {} (expected {})", d.mu_n_plus_m, d.expected).unwrap();
    }
    out
}

fn main() {
    print!("{}", run_example());
}
