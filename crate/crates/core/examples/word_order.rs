// A bag-of-words scorer cannot tell apart two strings with the same
// tokens; an order-sensitive one can.
//
// `cargo run --example word_order`

use std::fmt::Write;

use quantlab::borel::ClopenSet;
use quantlab::lang::{Alphabet, TokenString, Vocabulary, Word};
use quantlab::learnlab::pair_report;
use quantlab::prob::ConditionalModel;

pub fn run_example() -> String {
    let mut out = String::new();
    let alphabet = Alphabet::new(&Vocabulary::logical_plus());
    let model = ConditionalModel::uniform(&alphabet);
    let target = ClopenSet::new(alphabet.size(), [Word::new(vec![alphabet.parse_label("¬blue,A").unwrap()])]);
    let first = TokenString::new(["a1", "is", "not", "blue", "a1", "is", "A"]);
    let r = pair_report(&alphabet, &model, &target, &first, &[0, 1, 3, 4, 5, 2, 6]).unwrap();
    writeln!(out, "{:<24} in target: {}", r.first.to_string(), r.first_in_target).unwrap();
    writeln!(out, "{:<24} in target: {}", r.second.to_string(), r.second_in_target).unwrap();
    writeln!(out, "bag of words:    {} vs {}", r.bag_of_words.0, r.bag_of_words.1).unwrap();
    writeln!(out, "order-sensitive: {} vs {}", r.order_sensitive.0, r.order_sensitive.1).unwrap();
    out
}

fn main() {
    print!("{}", run_example());
}
