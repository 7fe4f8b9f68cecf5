// Stages of the Π⁰₁ family for `∀blue`, where a prefix gets excluded, and
// hierarchy levels.
//
// `cargo run --example borel_stages`

use std::fmt::Write;

use quantlab::borel::{classify, complement_clopen, membership_at_stage, stage, BorelFamily, ClopenSet, Concept, ConceptRegistry};
use quantlab::lang::{Alphabet, Polarity, Sentence, Vocabulary, Word};

pub fn run_example() -> String {
    let mut out = String::new();
    let v = Vocabulary::logical();
    let alphabet = Alphabet::new(&v);
    let family = BorelFamily::universal(&alphabet, "blue", Polarity::Positive);
    for n in 0..=3 {
        writeln!(out, "stage {n}: {:?}", stage(&family, n).unwrap().base()).unwrap();
    }
    let w = Word::new(vec![0, 0, 1, 0]);
    for k in 0..=w.len() {
        writeln!(out, "prefix {}: {}", w.prefix(k), membership_at_stage(&family, &w.prefix(k)).unwrap()).unwrap();
    }

    let first_good = ClopenSet::new(2, [Word::new(vec![0])]);
    writeln!(out, "complement of {:?}: {:?}", first_good.base(), complement_clopen(&first_good, 2).unwrap().base()).unwrap();

    let registry = ConceptRegistry::default();
    for c in [
        Concept::Sentence(Sentence::forall("blue")),
        Concept::Sentence(Sentence::exists("blue")),
        Concept::Clopen(first_good),
        Concept::Registered("conversational_consistency".into()),
    ] {
        writeln!(out, "{c:?}: {}", classify(&c, &v, &registry).unwrap()).unwrap();
    }
    out
}

fn main() {
    print!("{}", run_example());
}
