use serde::{Deserialize, Serialize};

use super::LearnError;
use crate::lang::Word;
use crate::prob::Hypothesis;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VCReport {
    pub family: Vec<String>,
    pub universe: Vec<Word>,
    pub vc_dimension: usize,
    /// A set of that size which the family shatters.
    pub shattered: Vec<Word>,
}

/// Exact VC dimension of `family` restricted to `universe`, found by
/// checking subsets in order of size. The empty family shatters nothing,
/// not even the empty set; its dimension is reported as 0.
pub fn vc_dimension_bruteforce<H: Hypothesis>(
    family: &[H],
    universe: &[Word],
    cap: u128,
) -> Result<VCReport, LearnError> {
    let u = universe.len();
    let requested = if u >= 127 { u128::MAX } else { 1u128 << u };
    if u > 63 || requested > cap {
        return Err(LearnError::CapExceeded { requested, cap });
    }
    // one bitmask over the universe per hypothesis
    let masks: Vec<u64> = family
        .iter()
        .map(|h| {
            universe
                .iter()
                .enumerate()
                .filter(|(_, w)| h.contains(w))
                .fold(0u64, |m, (i, _)| m | 1 << i)
        })
        .collect();
    let shatters = |subset: u64| -> bool {
        let need = 1usize << subset.count_ones();
        let mut seen = std::collections::HashSet::with_capacity(need);
        for m in &masks {
            seen.insert(m & subset);
            if seen.len() == need {
                return true;
            }
        }
        false
    };
    let mut best: Option<u64> = None;
    for d in 0..=u {
        // shattered sets are closed under subsets, so the first size with
        // no shattered set ends the search
        let found = (0u64..(1u64 << u)).find(|s| s.count_ones() as usize == d && shatters(*s));
        match found {
            Some(s) => best = Some(s),
            None => break,
        }
    }
    let (vc_dimension, shattered) = match best {
        Some(s) => (
            s.count_ones() as usize,
            (0..u).filter(|i| s >> i & 1 == 1).map(|i| universe[i].clone()).collect(),
        ),
        None => (0, Vec::new()),
    };
    Ok(VCReport {
        family: family.iter().map(|h| h.name()).collect(),
        universe: universe.to_vec(),
        vc_dimension,
        shattered,
    })
}
