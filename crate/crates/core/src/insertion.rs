//! Cube insertion through SICC-cube trees (SCTs).
//!
//! Every single-literal expansion of a cover cube is a candidate for
//! insertion. An expansion that needs one or two new EICs becomes a leaf of
//! the SCT keyed by exactly those EICs. Inserting a leaf always allows its
//! originating cube to be dropped, and possibly other cubes as well; the
//! estimate simulates that removal on the coverage maps.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::cover::{Cover, CubeId};
use crate::cube::{Cube, Minterm};
use crate::error::Result;
use crate::error_model::{insertion_eics_bounded, EicSet};
use crate::solution::{update_solution, Solution};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leaf {
    pub cube: Cube,
    /// Cube of the cover this leaf was expanded from.
    pub origin: Cube,
    /// EICs inserting this leaf alone would introduce.
    pub eics: EicSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sct {
    pub root: EicSet,
    pub leaves: Vec<Leaf>,
    pub estimated_reduction: Option<i64>,
}

impl Sct {
    fn new(root: EicSet) -> Sct {
        Sct {
            root,
            leaves: Vec::new(),
            estimated_reduction: None,
        }
    }

    fn add_leaf(&mut self, leaf: Leaf) {
        let dup = self
            .leaves
            .iter()
            .any(|l| l.cube == leaf.cube && l.origin == leaf.origin);
        if !dup {
            self.leaves.push(leaf);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InsertionConfig {
    /// First SCT of a combined pair must rank within this percentage.
    pub top_pct: f64,
    /// Second SCT of a combined pair must rank within this percentage.
    pub partner_pct: f64,
    /// Leaf subsets are searched exhaustively up to this many distinct leaves.
    pub exhaustive_leaf_limit: usize,
}

impl Default for InsertionConfig {
    fn default() -> Self {
        InsertionConfig {
            top_pct: 25.0,
            partner_pct: 80.0,
            exhaustive_leaf_limit: 8,
        }
    }
}

/// Builds SCTs with roots of 1..=`max_errors` new EICs from all single-literal
/// expansions of the cover. Error-free expansions are skipped.
pub fn generate_scts(cover: &Cover, max_errors: usize, prior: &EicSet) -> Vec<Sct> {
    let mut trees: BTreeMap<EicSet, Sct> = BTreeMap::new();
    for origin in cover.cubes() {
        let mut care = origin.care();
        while care != 0 {
            let bit = care & care.wrapping_neg();
            care &= !bit;
            let leaf = Cube::from_masks(origin.care() & !bit, origin.value(), origin.outputs());
            if cover.contains(&leaf) {
                continue;
            }
            // the half shared with `origin` is covered already
            let other_half =
                Cube::from_masks(origin.care(), origin.value() ^ bit, origin.outputs());
            let Some(eics) = insertion_eics_bounded(&other_half, cover, prior, max_errors) else {
                continue;
            };
            if eics.is_empty() {
                continue;
            }
            trees
                .entry(eics.clone())
                .or_insert_with(|| Sct::new(eics.clone()))
                .add_leaf(Leaf {
                    cube: leaf,
                    origin: *origin,
                    eics,
                });
        }
    }
    trees.into_values().collect()
}

/// Copies the leaves of every one-EIC SCT into each two-EIC SCT whose root
/// contains it.
pub fn augment(scts: &mut [Sct]) {
    let singles: BTreeMap<u64, Vec<Leaf>> = scts
        .iter()
        .filter(|t| t.root.len() == 1)
        .map(|t| (t.root.iter().next().unwrap(), t.leaves.clone()))
        .collect();
    for tree in scts.iter_mut().filter(|t| t.root.len() == 2) {
        let root: Vec<u64> = tree.root.iter().collect();
        for v in root {
            if let Some(leaves) = singles.get(&v) {
                for leaf in leaves {
                    tree.add_leaf(leaf.clone());
                }
            }
        }
    }
}

/// Removal candidates per leaf cube, in removal order: more literals first,
/// then cube order.
type Candidates = FxHashMap<Cube, Vec<Candidate>>;
type Candidate = (Reverse<u32>, Cube, CubeId);

/// Cubes that could be dropped after inserting `leaf`: those intersecting it
/// with no unique minterm, or with a unique minterm inside it (a cube whose
/// unique minterms all lie outside every inserted leaf stays).
fn leaf_candidates(cover: &Cover, leaf: &Cube) -> Vec<Candidate> {
    let mut v: Vec<Candidate> = cover
        .intersecting_ids(leaf)
        .into_iter()
        .filter(|&id| {
            let u = cover.unique_slots(id);
            u.is_empty() || u.iter().any(|&s| leaf.covers(cover.minterm_of_slot(s)))
        })
        .map(|id| {
            let c = cover.cube_of(id);
            (Reverse(cover.literals_of(&c)), c, id)
        })
        .collect();
    v.sort_unstable();
    v
}

fn candidates_for(cover: &Cover, leaves: &[&Leaf]) -> Candidates {
    leaves
        .iter()
        .map(|l| (l.cube, leaf_candidates(cover, &l.cube)))
        .collect()
}

/// Cubes of `cover` among `candidates` that become redundant once
/// `inserted` is added, picked greedily (more literals first) so that the
/// remaining cubes plus the insertions still cover every removed minterm.
fn removable_among(cover: &Cover, inserted: &[Cube], order: Vec<Candidate>) -> Vec<Cube> {
    let n = cover.n();
    let by_leaf = |t: Minterm| inserted.iter().any(|l| l.covers(t));
    let mut removed: Vec<(CubeId, Cube)> = Vec::new();
    for (_, cube, id) in order {
        // a minterm of `cube` loses all cover only if it is unique to `cube`
        // or shared solely with cubes already removed
        let unique_ok = cover
            .unique_slots(id)
            .iter()
            .all(|&s| by_leaf(cover.minterm_of_slot(s)));
        let ok = unique_ok
            && removed.iter().all(|(_, r)| match cube.intersection(r) {
                None => true,
                Some(x) => x.minterms(n).all(|t| {
                    by_leaf(t)
                        || cover
                            .coverer_ids(t)
                            .iter()
                            .any(|&o| o != id && !removed.iter().any(|(rid, _)| *rid == o))
                }),
            });
        if ok {
            removed.push((id, cube));
        }
    }
    removed.into_iter().map(|(_, c)| c).collect()
}

fn solution_for(cover: &Cover, leaves: &[&Leaf], cands: &Candidates) -> Solution {
    let inserted: Vec<Cube> = leaves.iter().map(|l| l.cube).collect();
    let order: Vec<Candidate> = if leaves.len() == 1 {
        cands[&leaves[0].cube].clone()
    } else {
        let mut v: Vec<Candidate> = leaves
            .iter()
            .flat_map(|l| cands[&l.cube].iter().copied())
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let removed = removable_among(cover, &inserted, order);
    let mut eics = EicSet::new();
    for l in leaves {
        eics.extend(&l.eics);
    }
    Solution::new(inserted, removed, eics, cover.rule())
}

/// Distinct leaf cubes, best origin gain first.
fn distinct_leaves<'a>(cover: &Cover, sct: &'a Sct) -> Vec<&'a Leaf> {
    let gain = |l: &Leaf| cover.literals_of(&l.origin) as i64 - cover.literals_of(&l.cube) as i64;
    let mut sorted: Vec<&Leaf> = sct.leaves.iter().collect();
    sorted.sort_by(|a, b| gain(b).cmp(&gain(a)).then(a.cube.cmp(&b.cube)));
    let mut seen = BTreeSet::new();
    sorted.retain(|l| seen.insert(l.cube));
    sorted
}

/// Best insertion/removal move an SCT supports, relative to the cover as it
/// stands. The returned solution's EICs are those of the chosen leaves.
pub fn estimate_solution(cover: &Cover, sct: &Sct, cfg: &InsertionConfig) -> Solution {
    let leaves = distinct_leaves(cover, sct);
    let cands = candidates_for(cover, &leaves);
    estimate_cached(cover, leaves, cfg, &cands)
}

fn estimate_cached(
    cover: &Cover,
    leaves: Vec<&Leaf>,
    cfg: &InsertionConfig,
    cands: &Candidates,
) -> Solution {
    if leaves.is_empty() {
        return Solution::empty();
    }
    if leaves.len() <= cfg.exhaustive_leaf_limit {
        let mut best: Option<Solution> = None;
        for mask in 1u32..(1 << leaves.len()) {
            let subset: Vec<&Leaf> = leaves
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, l)| *l)
                .collect();
            let sol = solution_for(cover, &subset, cands);
            if best.as_ref().is_none_or(|b| sol.is_better_than(b)) {
                best = Some(sol);
            }
        }
        return best.unwrap();
    }
    let mut accepted: Vec<&Leaf> = Vec::new();
    let mut current = Solution::empty();
    for leaf in leaves {
        let mut trial = accepted.clone();
        trial.push(leaf);
        let sol = solution_for(cover, &trial, cands);
        let newly: i64 = sol
            .removed
            .iter()
            .filter(|c| !current.removed.contains(c))
            .map(|c| cover.literals_of(c) as i64)
            .sum();
        if newly - cover.literals_of(&leaf.cube) as i64 > 0 {
            accepted = trial;
            current = sol;
        }
    }
    current
}

/// Estimated literal reduction of an SCT.
pub fn estimate_reduction(cover: &Cover, sct: &Sct, cfg: &InsertionConfig) -> i64 {
    estimate_solution(cover, sct, cfg).reduction
}

fn combine(a: &Sct, b: &Sct) -> Sct {
    let mut out = Sct::new(a.root.union(&b.root));
    for l in a.leaves.iter().chain(&b.leaves) {
        out.add_leaf(l.clone());
    }
    out
}

/// Estimate for two combined SCTs: the union of the leaves each chose on its
/// own, against a greedy pass over all merged leaves.
fn estimate_pair(
    cover: &Cover,
    a: &Sct,
    b: &Sct,
    ea: &Solution,
    eb: &Solution,
    cfg: &InsertionConfig,
    cands: &Candidates,
) -> Solution {
    let merged = combine(a, b);
    let leaves = distinct_leaves(cover, &merged);
    let chosen: Vec<&Leaf> = leaves
        .iter()
        .filter(|l| ea.inserted.contains(&l.cube) || eb.inserted.contains(&l.cube))
        .copied()
        .collect();
    let greedy_cfg = InsertionConfig {
        exhaustive_leaf_limit: 0,
        ..*cfg
    };
    let greedy = estimate_cached(cover, leaves, &greedy_cfg, cands);
    if chosen.is_empty() {
        return greedy;
    }
    let union = solution_for(cover, &chosen, cands);
    if greedy.is_better_than(&union) {
        greedy
    } else {
        union
    }
}

fn pick_best(best: &mut Option<Solution>, cand: Solution) {
    if best.as_ref().is_none_or(|b| cand.is_better_than(b)) {
        *best = Some(cand);
    }
}

fn better(a: Option<Solution>, b: Option<Solution>) -> Option<Solution> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.is_better_than(&x) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Estimates every SCT, combines pairs of one-EIC SCTs under the percentile
/// pruning rule, and returns the best one-EIC and two-EIC moves. A missing
/// move is returned as the empty solution.
pub fn combine_and_estimate(
    cover: &Cover,
    scts: &mut [Sct],
    cfg: &InsertionConfig,
) -> (Solution, Solution) {
    let mut all_leaves: Vec<Cube> = scts
        .iter()
        .flat_map(|t| t.leaves.iter().map(|l| l.cube))
        .collect();
    all_leaves.sort_unstable();
    all_leaves.dedup();
    let cands: Candidates = all_leaves
        .par_iter()
        .map(|c| (*c, leaf_candidates(cover, c)))
        .collect();
    let estimates: Vec<Solution> = scts
        .par_iter()
        .map(|t| estimate_cached(cover, distinct_leaves(cover, t), cfg, &cands))
        .collect();
    for (t, e) in scts.iter_mut().zip(&estimates) {
        t.estimated_reduction = Some(e.reduction);
    }

    let mut best1: Option<Solution> = None;
    let mut best2: Option<Solution> = None;
    for sol in &estimates {
        match sol.eics.len() {
            1 => pick_best(&mut best1, sol.clone()),
            2 => pick_best(&mut best2, sol.clone()),
            _ => {}
        }
    }

    let mut singles: Vec<(usize, &Solution)> = scts
        .iter()
        .enumerate()
        .filter(|(_, t)| t.root.len() == 1)
        .map(|(i, _)| (i, &estimates[i]))
        .collect();
    singles.sort_by(|a, b| a.1.rank_cmp(b.1).then(scts[a.0].root.cmp(&scts[b.0].root)));
    let count = singles.len();
    let cut = |pct: f64| ((count as f64 * pct / 100.0).ceil() as usize).min(count);
    let top = cut(cfg.top_pct);
    let partner = cut(cfg.partner_pct);

    let pairs: Vec<(usize, usize)> = (0..top)
        .flat_map(|a| {
            (0..partner)
                .filter(move |&b| b != a && !(b < top && b < a))
                .map(move |b| (a, b))
        })
        .collect();
    let (p1, p2) = pairs
        .par_iter()
        .map(|&(a, b)| {
            let (ia, ib) = (singles[a].0, singles[b].0);
            let sol = estimate_pair(
                cover,
                &scts[ia],
                &scts[ib],
                &estimates[ia],
                &estimates[ib],
                cfg,
                &cands,
            );
            match sol.eics.len() {
                1 => (Some(sol), None),
                2 => (None, Some(sol)),
                _ => (None, None),
            }
        })
        .reduce(|| (None, None), |x, y| (better(x.0, y.0), better(x.1, y.1)));
    best1 = better(best1, p1);
    best2 = better(best2, p2);
    (best1.unwrap_or_default(), best2.unwrap_or_default())
}

/// One insertion step on a cover already modified by `s`: returns the best
/// one-error and two-error extensions of `s` (empty when none exists).
pub fn cube_insertion(
    cover: &Cover,
    max_errors: usize,
    s: &Solution,
    cfg: &InsertionConfig,
) -> Result<(Solution, Solution)> {
    let mut trees = generate_scts(cover, max_errors, &s.eics);
    augment(&mut trees);
    let (p1, p2) = combine_and_estimate(cover, &mut trees, cfg);
    let lift = |p: Solution| -> Result<Solution> {
        if p.is_empty() {
            Ok(p)
        } else {
            update_solution(&p, s, cover.rule())
        }
    };
    Ok((lift(p1)?, lift(p2)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::LiteralRule;

    fn c(p: &str) -> Cube {
        Cube::parse(p).unwrap().0
    }

    fn v(bits: &str) -> u64 {
        bits.chars()
            .enumerate()
            .filter(|(_, ch)| *ch == '1')
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    fn eics(items: &[&str]) -> EicSet {
        items.iter().map(|b| v(b)).collect()
    }

    fn f0() -> Cover {
        Cover::build([c("-10|1"), c("1-1|1")], 3, 1).unwrap()
    }

    fn summary(scts: &[Sct]) -> Vec<(EicSet, Vec<(String, String)>)> {
        scts.iter()
            .map(|t| {
                let mut leaves: Vec<_> = t
                    .leaves
                    .iter()
                    .map(|l| (l.cube.pattern(3, 1), l.origin.pattern(3, 1)))
                    .collect();
                leaves.sort();
                (t.root.clone(), leaves)
            })
            .collect()
    }

    fn leaf(cube: &str, origin: &str) -> (String, String) {
        (cube.to_string(), origin.to_string())
    }

    #[test]
    fn generate_two_error_trees() {
        let got = summary(&generate_scts(&f0(), 2, &EicSet::new()));
        let mut want = vec![
            (eics(&["011"]), vec![leaf("-1-|1", "-10|1")]),
            (eics(&["100"]), vec![leaf("1--|1", "1-1|1")]),
            (eics(&["000", "100"]), vec![leaf("--0|1", "-10|1")]),
            (eics(&["001", "011"]), vec![leaf("--1|1", "1-1|1")]),
        ];
        want.sort();
        let mut got = got;
        got.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn generate_single_error_trees() {
        let got = generate_scts(&f0(), 1, &EicSet::new());
        assert_eq!(got.len(), 2);
        assert!(got.iter().all(|t| t.root.len() == 1));
    }

    #[test]
    fn prior_eics_make_insertions_free() {
        let got = generate_scts(&f0(), 1, &eics(&["011"]));
        let roots: Vec<_> = got.iter().map(|t| t.root.clone()).collect();
        // 0-1 would add 001 and 011; only 001 is new
        assert_eq!(roots, vec![eics(&["100"]), eics(&["001"])]);
    }

    #[test]
    fn augment_copies_subset_leaves() {
        let mut trees = generate_scts(&f0(), 2, &EicSet::new());
        augment(&mut trees);
        let find = |r: &[&str]| trees.iter().find(|t| t.root == eics(r)).unwrap().clone();
        let t = find(&["000", "100"]);
        let cubes: BTreeSet<_> = t.leaves.iter().map(|l| l.cube.pattern(3, 1)).collect();
        assert_eq!(
            cubes,
            ["--0|1", "1--|1"].iter().map(|s| s.to_string()).collect()
        );
        let t = find(&["001", "011"]);
        let cubes: BTreeSet<_> = t.leaves.iter().map(|l| l.cube.pattern(3, 1)).collect();
        assert_eq!(
            cubes,
            ["--1|1", "-1-|1"].iter().map(|s| s.to_string()).collect()
        );
        assert_eq!(find(&["011"]).leaves.len(), 1);
    }

    #[test]
    fn augment_leaves_disjoint_roots_alone() {
        let mut trees = vec![Sct::new(eics(&["000", "001"])), Sct::new(eics(&["111"]))];
        trees[1].add_leaf(Leaf {
            cube: c("-1-|1"),
            origin: c("-10|1"),
            eics: eics(&["111"]),
        });
        let before = trees.clone();
        augment(&mut trees);
        assert_eq!(trees, before);
    }

    #[test]
    fn estimates() {
        let f = f0();
        let cfg = InsertionConfig::default();
        let mut trees = generate_scts(&f, 2, &EicSet::new());
        augment(&mut trees);
        let single = trees.iter().find(|t| t.root == eics(&["011"])).unwrap();
        assert_eq!(estimate_reduction(&f, single, &cfg), 1);
        let aug = trees
            .iter()
            .find(|t| t.root == eics(&["000", "100"]))
            .unwrap();
        let sol = estimate_solution(&f, aug, &cfg);
        assert_eq!(sol.reduction, 2);
        assert_eq!(sol.removed, vec![c("-10|1"), c("1-1|1")]);
    }

    #[test]
    fn zero_gain_tree() {
        // origin has as many literals as the leaf when counting inputs only
        // and the leaf needs an extra output: craft a tree by hand
        let f = Cover::build([c("11|10")], 2, 2).unwrap();
        let mut t = Sct::new(eics(&["01"]));
        t.add_leaf(Leaf {
            cube: c("1-|11"),
            origin: c("11|10"),
            eics: eics(&["01"]),
        });
        assert_eq!(estimate_reduction(&f, &t, &InsertionConfig::default()), 0);
    }

    #[test]
    fn combine_running_example() {
        let f = f0();
        let mut trees = generate_scts(&f, 2, &EicSet::new());
        augment(&mut trees);
        let (s1, s2) = combine_and_estimate(&f, &mut trees, &InsertionConfig::default());
        assert_eq!(s1.inserted, vec![c("-1-|1")]);
        assert_eq!(s1.removed, vec![c("-10|1")]);
        assert_eq!(s1.reduction, 1);
        assert_eq!(s1.eics, eics(&["011"]));
        assert_eq!(s2.reduction, 2);
        assert_eq!(s2.eics.len(), 2);
        // three moves tie at +2 with two EICs and four inserted literals; the
        // pattern order picks {--0, 1--}
        assert_eq!(s2.inserted, vec![c("--0|1"), c("1--|1")]);
        assert_eq!(s2.removed, vec![c("-10|1"), c("1-1|1")]);
        assert!(trees.iter().all(|t| t.estimated_reduction.is_some()));
    }

    #[test]
    fn combine_nothing() {
        let f = f0();
        let (s1, s2) = combine_and_estimate(&f, &mut [], &InsertionConfig::default());
        assert!(s1.is_empty() && s2.is_empty());
    }

    #[test]
    fn leaves_strictly_contain_origins() {
        let f = f0();
        for t in generate_scts(&f, 2, &EicSet::new()) {
            for l in &t.leaves {
                assert!(l.cube.contains(&l.origin) && l.cube != l.origin);
            }
        }
    }

    #[test]
    fn insertion_lifts_onto_prior_solution() {
        let mut f = f0();
        let s = Solution::new(
            vec![c("-1-|1")],
            vec![c("-10|1")],
            eics(&["011"]),
            LiteralRule::default(),
        );
        f.insert(c("-1-|1")).unwrap();
        f.remove(&c("-10|1")).unwrap();
        let (s1, _) = cube_insertion(&f, 2, &s, &InsertionConfig::default()).unwrap();
        assert_eq!(s1.eics.len(), 2);
        assert!(s1.eics.contains(v("011")));
        assert!(s1.reduction > s.reduction);
    }
}
