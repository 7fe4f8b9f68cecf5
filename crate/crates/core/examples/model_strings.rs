// Parsing model strings in both surface syntaxes, the binary encoding
// and token permutations.
//
// `cargo run --example model_strings`

use std::fmt::Write;

use quantlab::lang::{parse_model_string, permute, tokenize, Alphabet, Vocabulary};

pub fn run_example() -> String {
    let mut out = String::new();
    let everyday = Vocabulary::everyday();
    let d = parse_model_string("The car is blue. The house is not blue.", &everyday).unwrap();
    writeln!(out, "formal:  {d}").unwrap();
    writeln!(out, "natural: {}", d.to_natural(&everyday)).unwrap();

    let logical = Vocabulary::logical();
    let alphabet = Alphabet::new(&logical);
    let d = parse_model_string("blue(a1) ¬blue(a2) blue(a3)", &logical).unwrap();
    let w = alphabet.diagram_to_word(&d).unwrap();
    writeln!(out, "word over {} letters: {w}", alphabet.size()).unwrap();
    writeln!(out, "decoded: {}", alphabet.word_to_diagram(&w).unwrap()).unwrap();

    let ts = tokenize(&d);
    let reversed: Vec<usize> = (0..ts.len()).rev().collect();
    writeln!(out, "tokens:   {ts}").unwrap();
    writeln!(out, "reversed: {}", permute(&ts, &reversed).unwrap()).unwrap();
    out
}

fn main() {
    print!("{}", run_example());
}
