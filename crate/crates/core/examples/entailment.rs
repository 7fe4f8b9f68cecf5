// Truth in a finite model, continuation sets and bounded entailment.
//
// `cargo run --example entailment`

use std::fmt::Write;

use quantlab::lang::{parse_model_string, Sentence, Vocabulary, DEFAULT_ENUMERATION_CAP};
use quantlab::semantics::{continuation_set, evaluate, semantic_consequence, EntailmentOptions};

pub fn run_example() -> String {
    let mut out = String::new();
    let v = Vocabulary::everyday();
    let every_blue = Sentence::parse("Is everything blue?", &v).unwrap();
    for context in [
        "The car is blue. The house is blue.",
        "The car is blue. The house is red.",
        "The car is blue. The house is large.",
    ] {
        let d = parse_model_string(context, &v).unwrap();
        writeln!(out, "{context:<38} {:?}", evaluate(&d, &every_blue, &v).unwrap()).unwrap();
    }

    let l = Vocabulary::logical();
    for n in 1..=4 {
        let all = continuation_set(&Sentence::forall("blue"), n, &l, DEFAULT_ENUMERATION_CAP).unwrap();
        let some = continuation_set(&Sentence::exists("blue"), n, &l, DEFAULT_ENUMERATION_CAP).unwrap();
        writeln!(out, "n={n}: |∀blue| = {}, |∃blue| = {}", all.len(), some.len()).unwrap();
    }

    let premises = [Sentence::forall("blue")];
    let goal = Sentence::exists("blue");
    for include_empty in [false, true] {
        let options = EntailmentOptions {
            include_empty,
            ..EntailmentOptions::default()
        };
        let e = semantic_consequence(&premises, &goal, 4, &l, options).unwrap();
        writeln!(out, "∀blue ⊨ ∃blue (empty model {}): {e}", if include_empty { "allowed" } else { "excluded" }).unwrap();
    }
    out
}

fn main() {
    print!("{}", run_example());
}
