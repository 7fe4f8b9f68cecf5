// Brute-force VC dimension of a few families on small universes.
//
// `cargo run --example vc_dimension`

use std::fmt::Write;

use quantlab::lang::{enumerate_words, Alphabet, Polarity, Vocabulary, Word, DEFAULT_ENUMERATION_CAP};
use quantlab::learnlab::{clopen_family, vc_dimension_bruteforce, HypothesisDescriptor};

pub fn run_example() -> String {
    let mut out = String::new();
    let good = Alphabet::new(&Vocabulary::logical()).letters_with("blue", Polarity::Positive);
    let universe: Vec<Word> = enumerate_words(2, 3, DEFAULT_ENUMERATION_CAP).unwrap().collect();

    let nested: Vec<_> = (0..=3).map(|k| HypothesisDescriptor::first_k(k, good.clone())).collect();
    let counting: Vec<_> = (0..=3).map(|k| HypothesisDescriptor::count_at_least(k, good.clone())).collect();
    let clopens = clopen_family(2, 2, DEFAULT_ENUMERATION_CAP).unwrap();
    for (name, family) in [("first_k", &nested), ("count_at_least", &counting), ("window-2 clopens", &clopens)] {
        let r = vc_dimension_bruteforce(family, &universe, DEFAULT_ENUMERATION_CAP).unwrap();
        let shattered: Vec<String> = r.shattered.iter().map(|w| w.to_string()).collect();
        writeln!(out, "{name:<17} dimension {} shattering {{{}}}", r.vc_dimension, shattered.join(", ")).unwrap();
    }
    out
}

fn main() {
    print!("{}", run_example());
}
