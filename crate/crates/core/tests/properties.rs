use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use quantlab::borel::{complement_clopen, intersect_clopen, stage, union_clopen, BorelFamily, ClopenSet};
use quantlab::lang::{
    parse_model_string, permute, tokenize, Alphabet, AtomicDiagram, Literal, Polarity, Sentence, TokenString,
    Vocabulary, Word,
};
use quantlab::learnlab::{bag_of_words_score, vc_dimension_bruteforce, HypothesisDescriptor};
use quantlab::prob::{
    bayes_update_all, chain_probability, cylinder_measure, maxent_dilution, maxent_prior, string_probability,
    ConditionalModel, ExactProb, Label, Observation,
};
use quantlab::probe::{parse_report_tsv, render_tsv, stub_answer, ProbeReport, ProbeRequest, SizeRow, StubKind};
use quantlab::semantics::{brute_force_oracle, satisfies, Strictness};

fn logical() -> Alphabet {
    Alphabet::new(&Vocabulary::logical())
}

fn word(max_len: usize, arity: u16) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..arity, 0..=max_len).prop_map(Word::new)
}

fn coin() -> impl Strategy<Value = ExactProb> {
    (0i64..=12, 1i64..=12).prop_filter_map("p ≤ 1", |(a, b)| (a <= b).then(|| ExactProb::ratio(a, b)))
}

fn clopen(depth: usize) -> impl Strategy<Value = ClopenSet> {
    prop::collection::vec(word(depth, 2), 0..5).prop_map(|ws| ClopenSet::new(2, ws))
}

/// Everyday-vocabulary diagram with colour literals only, possibly
/// inconsistent or open.
fn everyday_diagram() -> impl Strategy<Value = AtomicDiagram> {
    let colours = ["blue", "red", "green", "large"];
    let objects = ["car", "house", "shirt"];
    prop::collection::vec((0..3usize, 0..4usize, any::<bool>()), 0..6).prop_map(move |lits| {
        AtomicDiagram::new(
            lits.into_iter()
                .map(|(o, p, pos)| {
                    let pol = if pos { Polarity::Positive } else { Polarity::Negative };
                    Literal::new(colours[p], objects[o], pol)
                })
                .collect(),
        )
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// Tokens of a random word over `alphabet` with a shuffle of their positions.
fn tokens_with_permutation(alphabet: Alphabet, max_len: usize) -> impl Strategy<Value = (TokenString, Vec<usize>)> {
    word(max_len, alphabet.size() as u16).prop_flat_map(move |w| {
        let ts = tokenize(&alphabet.word_to_diagram(&w).unwrap());
        let n = ts.len();
        (Just(ts), permutation(n))
    })
}

proptest! {
    #[test]
    fn formal_rendering_parses_back(w in word(8, 2)) {
        let a = logical();
        let d = a.word_to_diagram(&w).unwrap();
        let again = parse_model_string(&d.to_string(), a.vocabulary()).unwrap();
        prop_assert_eq!(&again, &d);
        prop_assert_eq!(a.diagram_to_word(&again).unwrap(), w);
    }

    #[test]
    fn natural_rendering_parses_back(d in everyday_diagram()) {
        let v = Vocabulary::everyday();
        prop_assert_eq!(parse_model_string(&d.to_natural(&v), &v).unwrap(), d);
    }

    #[test]
    fn inverse_permutation_restores((ts, p) in tokens_with_permutation(logical(), 6)) {
        let mut inv = vec![0; p.len()];
        for (i, &j) in p.iter().enumerate() {
            inv[j] = i;
        }
        let there = permute(&ts, &p).unwrap();
        prop_assert_eq!(permute(&there, &inv).unwrap(), ts);
    }

    #[test]
    fn satisfies_matches_oracle(d in everyday_diagram(), forall in any::<bool>(), neg in any::<bool>(), strict in any::<bool>()) {
        let v = Vocabulary::everyday();
        let mut phi = if forall { Sentence::forall("blue") } else { Sentence::exists("blue") };
        if neg {
            phi = phi.negated_predicate();
        }
        let s = if strict { Strictness::Strict } else { Strictness::Lenient };
        let a = satisfies(&d, &phi, &v, s);
        let b = brute_force_oracle(&d, &phi, &v, s);
        prop_assert_eq!(a.is_ok(), b.is_ok());
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn chain_rule_splits(p in coin(), w in word(7, 2), j in 0usize..8) {
        let m = ConditionalModel::biased_coin(&logical(), p).unwrap();
        let j = j.min(w.len());
        let whole = string_probability(&m, &w).unwrap();
        let split = &string_probability(&m, &w.prefix(j)).unwrap() * &chain_probability(&m, &w.prefix(j), &w.suffix_from(j)).unwrap();
        prop_assert_eq!(whole, split);
    }

    #[test]
    fn continuation_masses_sum_to_one(p in coin(), ctx in word(4, 2), k in 0usize..5) {
        let m = ConditionalModel::biased_coin(&logical(), p).unwrap();
        let mut total = BigRational::zero();
        for a in quantlab::lang::enumerate_words(2, k, 1 << 10).unwrap() {
            total += chain_probability(&m, &ctx, &a).unwrap().into_inner();
        }
        prop_assert!(total.is_one());
    }

    #[test]
    fn clopen_de_morgan(a in clopen(3), b in clopen(3)) {
        let lhs = complement_clopen(&union_clopen(&a, &b, 3).unwrap(), 3).unwrap();
        let rhs = intersect_clopen(&complement_clopen(&a, 3).unwrap(), &complement_clopen(&b, 3).unwrap(), 3).unwrap();
        prop_assert!(lhs.equivalent(&rhs, 3).unwrap());
        let full = union_clopen(&a, &complement_clopen(&a, 3).unwrap(), 3).unwrap();
        prop_assert!(full.equivalent(&ClopenSet::full(2), 3).unwrap());
    }

    #[test]
    fn cylinder_measure_is_additive(a in clopen(3), p in coin()) {
        let m = ConditionalModel::biased_coin(&logical(), p).unwrap();
        let inside = cylinder_measure(&m, &a).unwrap().into_inner();
        let outside = cylinder_measure(&m, &complement_clopen(&a, 3).unwrap()).unwrap().into_inner();
        prop_assert!((inside + outside).is_one());
    }

    #[test]
    fn universal_stages_shrink(n in 0usize..8) {
        let f = BorelFamily::universal(&logical(), "blue", Polarity::Positive);
        let later = stage(&f, n + 1).unwrap();
        let earlier = stage(&f, n).unwrap();
        let both = intersect_clopen(&later, &earlier, n + 1).unwrap();
        prop_assert!(both.equivalent(&later, n + 1).unwrap());
    }

    #[test]
    fn posterior_sums_to_one(ks in prop::collection::btree_set(0usize..4, 1..4), obs in prop::collection::vec(word(3, 2), 1..5)) {
        let good = vec![true, false];
        let mut family: Vec<HypothesisDescriptor> = ks.iter().map(|&k| HypothesisDescriptor::first_k(k, good.clone())).collect();
        family.push(HypothesisDescriptor::full(2));
        let target = HypothesisDescriptor::first_k(1, good.clone());
        let observations: Vec<Observation> = obs
            .into_iter()
            .filter(|w| !w.is_empty())
            .map(|w| {
                use quantlab::prob::Hypothesis;
                let label = if target.contains(&w) { Label::In } else { Label::Out };
                Observation { word: w, label }
            })
            .collect();
        let m = ConditionalModel::uniform(&logical());
        let prior = maxent_prior(family).unwrap();
        match bayes_update_all(&prior, &m, &observations) {
            Ok(post) => prop_assert!(post.total().is_one()),
            // every hypothesis ruled out
            Err(_) => {}
        }
    }

    #[test]
    fn dilution_composes(num in 0i64..10, m1 in 0u32..5, m2 in 0u32..5) {
        let mu = ExactProb::ratio(num, 10);
        prop_assert_eq!(maxent_dilution(&maxent_dilution(&mu, m1, 2), m2, 2), maxent_dilution(&mu, m1 + m2, 2));
    }

    #[test]
    fn bag_of_words_ignores_order((ts, p) in tokens_with_permutation(Alphabet::new(&Vocabulary::logical_plus()), 3)) {
        let a = Alphabet::new(&Vocabulary::logical_plus());
        let n = ts.len() / 6;
        let target = ClopenSet::new(a.size(), [Word::new(vec![1])]);
        let other = permute(&ts, &p).unwrap();
        prop_assert_eq!(
            bag_of_words_score(&a, &target, n.max(1), &ts).unwrap(),
            bag_of_words_score(&a, &target, n.max(1), &other).unwrap()
        );
    }

    #[test]
    fn bag_stub_ignores_order(d in everyday_diagram(), p in permutation(30)) {
        let v = Vocabulary::everyday();
        let text = d.to_natural(&v);
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let order: Vec<usize> = p.into_iter().filter(|&i| i < tokens.len()).collect();
        let shuffled = permute(&TokenString::new(tokens.iter().copied()), &order).unwrap();
        let ask = |context: String| stub_answer(StubKind::BagOfWords, &v, &ProbeRequest {
            id: "x".into(),
            context,
            question: "Is everything blue?".into(),
        });
        prop_assert_eq!(ask(text.clone()), ask(shuffled.to_string()));
    }

    #[test]
    fn vc_witness_reverifies(sets in prop::collection::vec(prop::collection::btree_set(0usize..3, 0..4), 1..6), len in 1usize..4) {
        let good = vec![true, false];
        let family: Vec<HypothesisDescriptor> = sets.iter().map(|s| HypothesisDescriptor::position_set(s.iter().copied(), good.clone())).collect();
        let universe: Vec<Word> = quantlab::lang::enumerate_words(2, len, 1 << 10).unwrap().collect();
        let r = vc_dimension_bruteforce(&family, &universe, 1 << 20).unwrap();
        use quantlab::prob::Hypothesis;
        let labelings: BTreeSet<Vec<bool>> = family.iter().map(|h| r.shattered.iter().map(|w| h.contains(w)).collect()).collect();
        prop_assert_eq!(labelings.len(), 1usize << r.shattered.len());
        prop_assert!(1usize << r.vc_dimension <= family.len());
    }

    #[test]
    fn exact_prob_text_round_trip(a in 0i64..1000, b in 1i64..1000) {
        prop_assume!(a <= b);
        let p = ExactProb::ratio(a, b);
        prop_assert_eq!(p.to_string().parse::<ExactProb>().unwrap(), p);
    }

    #[test]
    fn report_tsv_round_trip(rows in prop::collection::vec((0usize..20, 1usize..20), 0..8)) {
        let mut sizes = BTreeSet::new();
        let rows: Vec<SizeRow> = rows
            .into_iter()
            .enumerate()
            .filter(|(i, _)| sizes.insert(*i))
            .map(|(i, (p, t))| SizeRow { object_count: i + 2, passed: p.min(t), total: t })
            .collect();
        let report = ProbeReport { rows: rows.clone(), ..ProbeReport::default() };
        prop_assert_eq!(parse_report_tsv(&render_tsv(&report)).unwrap(), rows);
        prop_assert_eq!(ProbeReport::from_json(&report.to_json()).unwrap(), report);
    }
}
