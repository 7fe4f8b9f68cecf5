//! Every example runs and prints what it promises.

#[allow(dead_code)]
mod model_strings {
    include!("../examples/model_strings.rs");
}

#[allow(dead_code)]
mod entailment {
    include!("../examples/entailment.rs");
}

#[allow(dead_code)]
mod borel_stages {
    include!("../examples/borel_stages.rs");
}

#[allow(dead_code)]
mod exact_probability {
    include!("../examples/exact_probability.rs");
}

#[allow(dead_code)]
mod learnability {
    include!("../examples/learnability.rs");
}

#[allow(dead_code)]
mod vc_dimension {
    include!("../examples/vc_dimension.rs");
}

#[allow(dead_code)]
mod word_order {
    include!("../examples/word_order.rs");
}

#[allow(dead_code)]
mod probe_harness {
    include!("../examples/probe_harness.rs");
}

#[test]
fn model_strings_round_trip() {
    let out = model_strings::run_example();
    assert!(out.contains("formal:  blue(car) ¬blue(house)"));
    assert!(out.contains("word over 2 letters: 0.1.0"));
    assert!(out.contains("reversed: blue is a3 blue not is a2 blue is a1"));
}

#[test]
fn entailment_verdicts() {
    let out = entailment::run_example();
    assert!(out.contains("n=4: |∀blue| = 1, |∃blue| = 15"));
    assert!(out.contains("(empty model excluded): holds"));
    assert!(out.contains("(empty model allowed): fails"));
}

#[test]
fn borel_stages_exclude_at_first_bad_letter() {
    let out = borel_stages::run_example();
    assert!(out.contains("prefix 0.0: possible"));
    assert!(out.contains("prefix 0.0.1: excluded"));
    assert!(out.contains("Π⁰₁") && out.contains("Σ⁰₁") && out.contains("Δ⁰₁"));
}

#[test]
fn exact_probability_values() {
    let out = exact_probability::run_example();
    assert!(out.contains("uniform: μ(0.0.1) = 1/8 = 1/8"));
    assert!(out.contains("table: μ(0.0.1) = 1/4 = 1/4"));
    assert!(out.contains("μ(0.1 | ∃blue) = 1/3"));
}

#[test]
fn learnability_outcomes() {
    let out = learnability::run_example();
    assert!(out.contains("first_1 with α = 1/8: Learned"));
    assert!(out.contains("universal witness: m = 3"));
    assert!(out.contains("n=2 m=3: μ = 1/8 (expected 1/8)"));
}

#[test]
fn vc_dimensions() {
    let out = vc_dimension::run_example();
    assert!(out.contains("first_k           dimension 1"));
    assert!(out.contains("count_at_least    dimension 1"));
}

#[test]
fn word_order_pair() {
    let out = word_order::run_example();
    assert!(out.contains("order-sensitive: 1 vs 0"));
    let bag = out.lines().find(|l| l.starts_with("bag of words")).unwrap();
    let (a, b) = bag.trim_start_matches("bag of words:").split_once(" vs ").unwrap();
    assert_eq!(a.trim(), b.trim());
}

#[test]
fn probe_harness_report() {
    let out = probe_harness::run_example();
    assert!(out.starts_with("63 cases"));
    assert!(out.contains("10           | 2/10"));
}
