//! Greedy cube removal under a remaining error budget.

use std::cmp::Ordering;
use std::fmt;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::cover::{Cover, CubeId};
use crate::cube::{Cube, Minterm};
use crate::error::Result;
use crate::error_model::EicSet;
use crate::solution::{merge_with_eics, Solution};

/// `literals / max(0.01, eics)`, compared exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gain {
    pub literals: u32,
    pub eics: usize,
}

impl Gain {
    fn scaled_denominator(&self) -> u128 {
        (self.eics as u128 * 100).max(1)
    }

    pub fn value(&self) -> f64 {
        self.literals as f64 / (self.eics as f64).max(0.01)
    }
}

impl Ord for Gain {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.literals as u128 * other.scaled_denominator())
            .cmp(&(other.literals as u128 * self.scaled_denominator()))
    }
}

impl PartialOrd for Gain {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Gain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.2}", self.value())
    }
}

pub fn removal_gain(literals: u32, eics: &EicSet) -> f64 {
    Gain {
        literals,
        eics: eics.len(),
    }
    .value()
}

/// Original function, consulted to detect corrected EICs.
#[derive(Clone, Debug)]
pub struct Reference {
    cubes: Vec<Cube>,
}

impl Reference {
    pub fn new(cubes: Vec<Cube>) -> Reference {
        Reference { cubes }
    }

    pub fn from_cover(cover: &Cover) -> Reference {
        Reference::new(cover.to_vec())
    }

    pub fn outputs_at(&self, input: u64) -> u128 {
        self.cubes
            .iter()
            .filter(|c| c.matches_input(input))
            .fold(0, |acc, c| acc | c.outputs())
    }
}

/// Inputs of the minterms only `c` covers, minus those already erroneous.
pub fn get_cube_eic(c: &Cube, cover: &Cover, new_eic: &EicSet) -> Result<EicSet> {
    Ok(cover
        .unique_inputs(c)?
        .into_iter()
        .filter(|v| !new_eic.contains(*v))
        .collect())
}

fn eic_count(cover: &Cover, id: CubeId, new_eic: &EicSet) -> usize {
    let m = cover.m();
    let mut seen: FxHashSet<u64> = FxHashSet::default();
    for &slot in cover.unique_slots(id) {
        let v = (slot as usize / m) as u64;
        if !new_eic.contains(v) {
            seen.insert(v);
        }
    }
    seen.len()
}

/// Adds `best_eic` to `new_eic`, then drops members inside `removed` at which
/// the cover once again agrees with the original function.
pub fn update_eics(
    new_eic: &EicSet,
    best_eic: &EicSet,
    removed: &Cube,
    cover_after: &Cover,
    reference: &Reference,
) -> EicSet {
    let mut out = new_eic.union(best_eic);
    let corrected: Vec<u64> = new_eic
        .iter()
        .filter(|&v| removed.matches_input(v))
        .filter(|&v| cover_after.outputs_at(v) == reference.outputs_at(v))
        .collect();
    for v in corrected {
        out.remove(v);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct RemovalStep {
    pub cube: Cube,
    pub literals: u32,
    pub eics: EicSet,
    pub gain: Gain,
    /// Best gain among all other qualifying cubes at this step.
    pub runner_up: Option<Gain>,
}

/// Greedy removal on a cover already modified by `s`. The cover is restored
/// before returning.
pub fn cube_removal(
    cover: &mut Cover,
    budget: u64,
    s: &Solution,
    reference: &Reference,
) -> Result<Solution> {
    Ok(cube_removal_traced(cover, budget, s, reference)?.0)
}

pub fn cube_removal_traced(
    cover: &mut Cover,
    budget: u64,
    s: &Solution,
    reference: &Reference,
) -> Result<(Solution, Vec<RemovalStep>)> {
    let n = cover.n();
    let m = cover.m();
    let mut remaining = budget;
    let mut new_eic = s.eics.clone();
    let mut removed: Vec<Cube> = Vec::new();
    let mut steps = Vec::new();
    let mut counts: FxHashMap<CubeId, usize> = cover
        .cubes()
        .map(|c| {
            let id = cover.id_of(c).unwrap();
            (id, eic_count(cover, id, &new_eic))
        })
        .collect();

    loop {
        let mut best: Option<(Cube, Gain)> = None;
        let mut runner_up: Option<Gain> = None;
        for c in cover.cubes() {
            let k = counts[&cover.id_of(c).unwrap()];
            if k as u64 > remaining {
                continue;
            }
            let gain = Gain {
                literals: cover.literals_of(c),
                eics: k,
            };
            match best {
                Some((_, g)) if gain <= g => {
                    runner_up = Some(runner_up.map_or(gain, |r| r.max(gain)));
                }
                _ => {
                    if let Some((_, g)) = best {
                        runner_up = Some(runner_up.map_or(g, |r| r.max(g)));
                    }
                    best = Some((*c, gain));
                }
            }
        }
        let Some((cube, gain)) = best else { break };
        let best_eic = get_cube_eic(&cube, cover, &new_eic)?;
        debug_assert_eq!(best_eic.len(), gain.eics);
        let id = cover.id_of(&cube).unwrap();
        cover.remove(&cube)?;
        counts.remove(&id);
        remaining -= best_eic.len() as u64;
        let updated = update_eics(&new_eic, &best_eic, &cube, cover, reference);

        // cubes whose unique sets or EIC exclusions changed
        let mut touched: FxHashSet<CubeId> = FxHashSet::default();
        for t in cube.minterms(n) {
            touched.extend(cover.coverer_ids(t).iter().copied());
        }
        let changed: Vec<u64> = updated
            .as_set()
            .symmetric_difference(new_eic.as_set())
            .copied()
            .collect();
        for v in changed {
            for output in 0..m {
                touched.extend(
                    cover
                        .coverer_ids(Minterm { input: v, output })
                        .iter()
                        .copied(),
                );
            }
        }
        new_eic = updated;
        for id in touched {
            counts.insert(id, eic_count(cover, id, &new_eic));
        }

        log::debug!(
            "remove {} lits={} eics={} gain={}",
            cube.pattern(n, m),
            gain.literals,
            best_eic.len(),
            gain
        );
        steps.push(RemovalStep {
            cube,
            literals: gain.literals,
            eics: best_eic,
            gain,
            runner_up,
        });
        removed.push(cube);
    }

    for c in removed.iter().rev() {
        cover.insert(*c)?;
    }
    let part = Solution::new(Vec::new(), removed, EicSet::new(), cover.rule());
    Ok((merge_with_eics(&part, s, new_eic, cover.rule()), steps))
}
