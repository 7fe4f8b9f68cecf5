//! Object-by-object re-implementation of [`super::satisfies`], kept free of
//! shared helpers so the two can cross-check each other.

use crate::lang::{AtomicDiagram, Quantifier, Sentence, Vocabulary};

use super::{SemanticsError, Strictness};

pub fn brute_force_oracle(
    d: &AtomicDiagram,
    phi: &Sentence,
    vocab: &Vocabulary,
    strictness: Strictness,
) -> Result<bool, SemanticsError> {
    if !vocab.predicates().iter().any(|p| *p == phi.predicate) {
        return Err(SemanticsError::UnknownPredicate(phi.predicate.clone()));
    }
    let rivals: Vec<&String> = vocab
        .exclusivity_groups()
        .iter()
        .filter(|g| g.contains(&phi.predicate))
        .flat_map(|g| g.iter())
        .filter(|p| **p != phi.predicate)
        .collect();

    let lits = d.literals();
    let mut counterexample = false;
    let mut witness = false;
    let mut first_open: Option<String> = None;
    for i in 0..lits.len() {
        let obj = &lits[i].constant;
        if lits[..i].iter().any(|l| l.constant == *obj) {
            continue;
        }
        let mut says_true = false;
        let mut says_false = false;
        for l in lits.iter().filter(|l| l.constant == *obj) {
            if l.predicate == phi.predicate {
                if l.polarity.is_positive() {
                    says_true = true;
                } else {
                    says_false = true;
                }
            } else if l.polarity.is_positive() && rivals.contains(&&l.predicate) {
                says_false = true;
            }
        }
        if says_true && says_false {
            return Err(SemanticsError::InconsistentDiagram {
                object: obj.clone(),
                predicate: phi.predicate.clone(),
            });
        }
        if !says_true && !says_false {
            if first_open.is_none() {
                first_open = Some(obj.clone());
            }
            continue;
        }
        let satisfied = says_true == phi.polarity.is_positive();
        if satisfied {
            witness = true;
        } else {
            counterexample = true;
        }
    }

    let open = |object: String| SemanticsError::UnderdeterminedObject {
        object,
        predicate: phi.predicate.clone(),
    };
    if strictness == Strictness::Strict {
        if let Some(o) = first_open {
            return Err(open(o));
        }
    }
    match phi.quantifier {
        Quantifier::Forall if counterexample => Ok(false),
        Quantifier::Exists if witness => Ok(true),
        _ => match first_open {
            Some(o) => Err(open(o)),
            None => Ok(phi.quantifier == Quantifier::Forall),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_model_string;

    #[test]
    fn examples() {
        let l = Vocabulary::logical();
        let d = parse_model_string("blue(a1) blue(a2) ¬blue(a3)", &l).unwrap();
        assert!(!brute_force_oracle(&d, &Sentence::forall("blue"), &l, Strictness::Lenient).unwrap());
        let v = Vocabulary::everyday();
        let d = parse_model_string("The cup is black. The plate is black.", &v).unwrap();
        assert!(brute_force_oracle(&d, &Sentence::forall("black"), &v, Strictness::Lenient).unwrap());
        let d = parse_model_string("The cup is black. The plate is white.", &v).unwrap();
        assert!(!brute_force_oracle(&d, &Sentence::forall("black"), &v, Strictness::Lenient).unwrap());
    }
}
