//! Partial approximations: cubes to insert and remove relative to the
//! original cover, with the literal reduction and EICs they introduce.

use std::cmp::Ordering;

use crate::cube::{Cube, LiteralRule};
use crate::error::{Error, Result};
use crate::error_model::EicSet;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Solution {
    /// Sorted, no duplicates, disjoint from `removed`.
    pub inserted: Vec<Cube>,
    pub removed: Vec<Cube>,
    /// Literals of `removed` minus literals of `inserted`.
    pub reduction: i64,
    pub eics: EicSet,
    inserted_literals: u64,
}

fn normalize(mut v: Vec<Cube>) -> Vec<Cube> {
    v.sort_unstable();
    v.dedup();
    v
}

impl Solution {
    pub fn empty() -> Solution {
        Solution::default()
    }

    /// Builds a solution; a cube both inserted and removed cancels out.
    pub fn new(
        inserted: Vec<Cube>,
        removed: Vec<Cube>,
        eics: EicSet,
        rule: LiteralRule,
    ) -> Solution {
        let inserted = normalize(inserted);
        let removed = normalize(removed);
        let keep_ins: Vec<Cube> = inserted
            .iter()
            .filter(|c| removed.binary_search(c).is_err())
            .copied()
            .collect();
        let keep_rem: Vec<Cube> = removed
            .iter()
            .filter(|c| inserted.binary_search(c).is_err())
            .copied()
            .collect();
        let lits = |v: &[Cube]| v.iter().map(|c| c.literals(rule) as u64).sum::<u64>();
        let inserted_literals = lits(&keep_ins);
        Solution {
            reduction: lits(&keep_rem) as i64 - inserted_literals as i64,
            inserted: keep_ins,
            removed: keep_rem,
            eics,
            inserted_literals,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.inserted.is_empty() && self.removed.is_empty() && self.eics.is_empty()
    }

    pub fn error_count(&self) -> usize {
        self.eics.len()
    }

    pub fn inserted_literals(&self) -> u64 {
        self.inserted_literals
    }

    /// Total order used everywhere a best solution is picked. `Less` means
    /// better: larger reduction, then fewer EICs, then fewer inserted
    /// literals, then the lexicographically smaller cube patterns.
    pub fn rank_cmp(&self, other: &Solution) -> Ordering {
        other
            .reduction
            .cmp(&self.reduction)
            .then(self.eics.len().cmp(&other.eics.len()))
            .then(self.inserted_literals.cmp(&other.inserted_literals))
            .then_with(|| self.inserted.cmp(&other.inserted))
            .then_with(|| self.removed.cmp(&other.removed))
            .then_with(|| self.eics.cmp(&other.eics))
    }

    pub fn is_better_than(&self, other: &Solution) -> bool {
        self.rank_cmp(other) == Ordering::Less
    }

    /// Same cube edits, regardless of bookkeeping.
    pub fn same_edits(&self, other: &Solution) -> bool {
        self.inserted == other.inserted && self.removed == other.removed
    }
}

/// Merges a new partial solution into `s`. EIC sets must be disjoint.
pub fn update_solution(new_part: &Solution, s: &Solution, rule: LiteralRule) -> Result<Solution> {
    if !new_part.eics.is_disjoint(&s.eics) {
        return Err(Error::EicOverlap(
            new_part.eics.intersection(&s.eics).iter().collect(),
        ));
    }
    Ok(merge_with_eics(
        new_part,
        s,
        new_part.eics.union(&s.eics),
        rule,
    ))
}

/// Merges edit lists and takes `eics` as the resulting EIC set verbatim.
pub(crate) fn merge_with_eics(
    new_part: &Solution,
    s: &Solution,
    eics: EicSet,
    rule: LiteralRule,
) -> Solution {
    let mut inserted: Vec<Cube> = s.inserted.clone();
    let mut removed: Vec<Cube> = s.removed.clone();
    // an insert later removed cancels, and so does re-inserting a removed cube
    for c in &new_part.removed {
        if let Some(at) = inserted.iter().position(|x| x == c) {
            inserted.remove(at);
        } else {
            removed.push(*c);
        }
    }
    for c in &new_part.inserted {
        if let Some(at) = removed.iter().position(|x| x == c) {
            removed.remove(at);
        } else {
            inserted.push(*c);
        }
    }
    Solution::new(inserted, removed, eics, rule)
}
