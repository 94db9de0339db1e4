//! Level-by-level search over partial solutions under an EIC budget.

use std::time::Instant;

use crate::cover::Cover;
use crate::cube::Cube;
use crate::error::{Error, Result};
use crate::error_model::noe_from_er;
use crate::insertion::{cube_insertion, InsertionConfig};
use crate::minimize::{Minimizer, MinimizerPath};
use crate::removal::{cube_removal, Reference};
use crate::solution::Solution;

/// Solutions kept per level when moving to the next one.
pub const TOP_K: usize = 2;

#[derive(Clone, Debug, Default)]
pub struct EngineConfig {
    pub insertion: InsertionConfig,
    /// Hand the EICs of the chosen solution to the final minimization as
    /// don't-cares.
    pub dc_eic: bool,
    pub minimizer: Minimizer,
}

/// Applies the edits of `s` to `f`.
pub fn modify_sop(f: &mut Cover, s: &Solution) -> Result<()> {
    for c in &s.removed {
        if !f.contains(c) {
            return Err(corrupt("remove", c, f));
        }
        f.remove(c)?;
    }
    for c in &s.inserted {
        if f.contains(c) {
            return Err(corrupt("insert", c, f));
        }
        f.insert(*c)?;
    }
    Ok(())
}

/// Undoes [`modify_sop`].
pub fn restore_sop(f: &mut Cover, s: &Solution) -> Result<()> {
    for c in &s.inserted {
        if !f.contains(c) {
            return Err(corrupt("un-insert", c, f));
        }
        f.remove(c)?;
    }
    for c in &s.removed {
        if f.contains(c) {
            return Err(corrupt("restore", c, f));
        }
        f.insert(*c)?;
    }
    Ok(())
}

fn corrupt(what: &str, c: &Cube, f: &Cover) -> Error {
    Error::LedgerCorruption(format!("cannot {what} cube {}", c.pattern(f.n(), f.m())))
}

/// The `k` best solutions of a level, best first.
pub fn top_solutions(level: &[Solution], k: usize) -> Vec<Solution> {
    let mut v: Vec<&Solution> = level.iter().collect();
    v.sort_by(|a, b| a.rank_cmp(b));
    v.into_iter().take(k).cloned().collect()
}

/// Per-level solution sets plus the best solution seen so far.
#[derive(Clone, Debug)]
pub struct SolutionLedger {
    levels: Vec<Vec<Solution>>,
    best: Solution,
}

impl SolutionLedger {
    pub fn new(max_errors: u64) -> SolutionLedger {
        let mut levels = vec![Vec::new(); max_errors as usize + 1];
        levels[0].push(Solution::empty());
        SolutionLedger {
            levels,
            best: Solution::empty(),
        }
    }

    pub fn max_errors(&self) -> u64 {
        self.levels.len() as u64 - 1
    }

    /// Files `s` at the level given by its EIC count; solutions past the
    /// budget, empty ones and duplicate edit sets are ignored.
    pub fn add(&mut self, s: Solution) -> bool {
        let level = s.eics.len();
        if s.is_empty() || level >= self.levels.len() {
            return false;
        }
        let slot = &mut self.levels[level];
        if slot.iter().any(|x| x.same_edits(&s)) {
            return false;
        }
        slot.push(s);
        true
    }

    /// Replaces the best solution if `s` ranks strictly higher.
    pub fn offer(&mut self, s: &Solution) -> bool {
        if s.eics.len() as u64 <= self.max_errors() && s.is_better_than(&self.best) {
            self.best = s.clone();
            true
        } else {
            false
        }
    }

    pub fn level(&self, i: usize) -> &[Solution] {
        &self.levels[i]
    }

    /// Takes the top solutions of level `i` and frees the level.
    pub fn take_top(&mut self, i: usize, k: usize) -> Vec<Solution> {
        let top = top_solutions(&self.levels[i], k);
        self.levels[i] = Vec::new();
        top
    }

    pub fn best(&self) -> &Solution {
        &self.best
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub levels_expanded: u64,
    pub solutions_expanded: u64,
    pub insertion_calls: u64,
    pub removal_calls: u64,
}

/// Runs the search on `f` and returns the best solution found; `f` is left
/// unchanged.
pub fn search(f: &mut Cover, noe: u64, cfg: &EngineConfig) -> Result<(Solution, SearchStats)> {
    let reference = Reference::from_cover(f);
    let mut ledger = SolutionLedger::new(noe);
    let mut stats = SearchStats::default();
    for i in 0..=noe {
        let top = ledger.take_top(i as usize, TOP_K);
        if top.is_empty() {
            continue;
        }
        stats.levels_expanded += 1;
        for s in &top {
            stats.solutions_expanded += 1;
            modify_sop(f, s)?;
            let outcome = expand(f, i, noe, s, cfg, &reference, &mut ledger, &mut stats);
            restore_sop(f, s)?;
            outcome?;
        }
        log::debug!(
            "level {i}: best reduction {} with {} EICs",
            ledger.best().reduction,
            ledger.best().eics.len()
        );
    }
    Ok((ledger.best().clone(), stats))
}

#[allow(clippy::too_many_arguments)]
fn expand(
    f: &mut Cover,
    i: u64,
    noe: u64,
    s: &Solution,
    cfg: &EngineConfig,
    reference: &Reference,
    ledger: &mut SolutionLedger,
    stats: &mut SearchStats,
) -> Result<()> {
    if i < noe {
        stats.insertion_calls += 1;
        let (s1, s2) = cube_insertion(f, 2, s, &cfg.insertion)?;
        for cand in [s1, s2] {
            if !cand.is_empty() && cand.eics.len() as u64 <= noe {
                ledger.offer(&cand);
                ledger.add(cand);
            }
        }
    }
    stats.removal_calls += 1;
    let s3 = cube_removal(f, noe - i, s, reference)?;
    ledger.offer(&s3);
    Ok(())
}

#[derive(Clone, Debug)]
pub struct Approximation {
    pub cover: Cover,
    /// Edits applied before the final minimization.
    pub solution: Solution,
    pub noe: u64,
    pub original_literals: u64,
    /// Literals of the minimized original.
    pub baseline_literals: u64,
    pub minimizer: MinimizerPath,
    /// The minimized original beat the minimized approximation, so it was
    /// returned instead.
    pub fell_back: bool,
    pub stats: SearchStats,
    pub seconds: f64,
}

/// Approximates `f` with at most `floor(er * 2^n)` erroneous input
/// combinations.
pub fn approximate(f: &Cover, er: f64, cfg: &EngineConfig) -> Result<Approximation> {
    approximate_noe(f, noe_from_er(er, f.n())?, cfg)
}

pub fn approximate_noe(f: &Cover, noe: u64, cfg: &EngineConfig) -> Result<Approximation> {
    let start = Instant::now();
    let mut work = f.clone();
    let (best, stats) = search(&mut work, noe, cfg)?;
    if work != *f {
        return Err(Error::LedgerCorruption(
            "cover not restored after search".into(),
        ));
    }
    modify_sop(&mut work, &best)?;
    let dc = if cfg.dc_eic && !best.eics.is_empty() {
        let all = if f.m() == 128 {
            u128::MAX
        } else {
            (1u128 << f.m()) - 1
        };
        let points = best.eics.iter().map(|v| Cube::point(f.n(), v, all));
        Some(Cover::build(points, f.n(), f.m())?)
    } else {
        None
    };
    let (approx, path) = cfg.minimizer.minimize(&work, dc.as_ref());
    let (baseline, base_path) = cfg.minimizer.minimize(f, None);
    let baseline_literals = baseline.total_literals();
    let fell_back = baseline_literals < approx.total_literals();
    let (cover, solution, minimizer) = if fell_back {
        (baseline, Solution::empty(), base_path)
    } else {
        (approx, best, path)
    };
    Ok(Approximation {
        cover,
        solution,
        noe,
        original_literals: f.total_literals(),
        baseline_literals,
        minimizer,
        fell_back,
        stats,
        seconds: start.elapsed().as_secs_f64(),
    })
}
