//! SOP cover with incrementally maintained coverage maps.
//!
//! Two maps are kept consistent with the cube list at all times:
//!
//! * the *covering map* sends every ON-set minterm to the cubes covering it;
//! * the *unique map* sends every cube to the minterms that no other cube
//!   covers.
//!
//! The covering map is a dense table indexed by `input * m + output`, so a
//! cover is limited to `2^n * m <= 2^25` minterm slots. Cubes are interned
//! into an arena; ids stay stable across remove/insert round trips.

use std::collections::{BTreeMap, BTreeSet};

use rustc_hash::{FxHashMap, FxHashSet};
use smallvec::SmallVec;

use crate::cube::{Cube, LiteralRule, Minterm};
use crate::error::{Error, Result};

pub(crate) type CubeId = u32;

/// Largest `2^n * m` a cover accepts.
pub const MAX_MINTERM_SLOTS: usize = 1 << 25;

#[derive(Clone, Debug)]
pub struct Cover {
    n: usize,
    m: usize,
    rule: LiteralRule,
    live: BTreeSet<Cube>,
    arena: Vec<Cube>,
    ids: FxHashMap<Cube, CubeId>,
    covering: Vec<SmallVec<[CubeId; 2]>>,
    unique: Vec<FxHashSet<u32>>,
    on_count: usize,
    literals: u64,
}

impl Cover {
    pub fn new(n: usize, m: usize) -> Result<Cover> {
        let slots = 1usize
            .checked_shl(n as u32)
            .and_then(|s| s.checked_mul(m))
            .filter(|&s| n < usize::BITS as usize && s <= MAX_MINTERM_SLOTS)
            .ok_or(Error::CoverTooLarge {
                inputs: n,
                outputs: m,
            })?;
        Ok(Cover {
            n,
            m,
            rule: LiteralRule::default(),
            live: BTreeSet::new(),
            arena: Vec::new(),
            ids: FxHashMap::default(),
            covering: vec![SmallVec::new(); slots],
            unique: Vec::new(),
            on_count: 0,
            literals: 0,
        })
    }

    /// Builds a cover, dropping repeated cubes with a warning.
    pub fn build(cubes: impl IntoIterator<Item = Cube>, n: usize, m: usize) -> Result<Cover> {
        let (cover, dropped) = Cover::build_dedup(cubes, n, m)?;
        if dropped > 0 {
            log::warn!("dropped {dropped} duplicate cube(s)");
        }
        Ok(cover)
    }

    /// Builds a cover and reports how many duplicate cubes were dropped.
    pub fn build_dedup(
        cubes: impl IntoIterator<Item = Cube>,
        n: usize,
        m: usize,
    ) -> Result<(Cover, usize)> {
        let mut cover = Cover::new(n, m)?;
        let mut dropped = 0;
        for c in cubes {
            if cover.contains(&c) {
                dropped += 1;
                continue;
            }
            cover.insert(c)?;
        }
        Ok((cover, dropped))
    }

    pub fn with_rule(mut self, rule: LiteralRule) -> Cover {
        self.set_rule(rule);
        self
    }

    pub fn set_rule(&mut self, rule: LiteralRule) {
        self.rule = rule;
        self.literals = self.live.iter().map(|c| c.literals(rule) as u64).sum();
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn rule(&self) -> LiteralRule {
        self.rule
    }

    pub fn len(&self) -> usize {
        self.live.len()
    }

    pub fn is_empty(&self) -> bool {
        self.live.is_empty()
    }

    pub fn contains(&self, c: &Cube) -> bool {
        self.live.contains(c)
    }

    /// Cubes in pattern order.
    pub fn cubes(&self) -> impl Iterator<Item = &Cube> + '_ {
        self.live.iter()
    }

    pub fn to_vec(&self) -> Vec<Cube> {
        self.live.iter().copied().collect()
    }

    /// Literal count of `c` under this cover's counting rule.
    #[inline]
    pub fn literals_of(&self, c: &Cube) -> u32 {
        c.literals(self.rule)
    }

    pub fn total_literals(&self) -> u64 {
        self.literals
    }

    /// Number of ON-set minterms.
    pub fn on_set_size(&self) -> usize {
        self.on_count
    }

    #[inline]
    pub(crate) fn slot(&self, t: Minterm) -> usize {
        t.input as usize * self.m + t.output
    }

    #[inline]
    pub(crate) fn minterm_of_slot(&self, slot: u32) -> Minterm {
        Minterm {
            input: (slot as usize / self.m) as u64,
            output: slot as usize % self.m,
        }
    }

    #[inline]
    pub fn is_covered(&self, t: Minterm) -> bool {
        !self.covering[self.slot(t)].is_empty()
    }

    #[inline]
    pub fn cover_count(&self, t: Minterm) -> usize {
        self.covering[self.slot(t)].len()
    }

    pub fn coverers(&self, t: Minterm) -> impl Iterator<Item = Cube> + '_ {
        self.covering[self.slot(t)]
            .iter()
            .map(|&id| self.arena[id as usize])
    }

    #[inline]
    pub(crate) fn coverer_ids(&self, t: Minterm) -> &[CubeId] {
        &self.covering[self.slot(t)]
    }

    #[inline]
    pub(crate) fn id_of(&self, c: &Cube) -> Option<CubeId> {
        self.ids.get(c).copied().filter(|_| self.live.contains(c))
    }

    /// Ids of live cubes sharing a minterm with `c`, ascending.
    pub(crate) fn intersecting_ids(&self, c: &Cube) -> Vec<CubeId> {
        let mut ids: Vec<CubeId> = if c.minterm_count(self.n) <= self.live.len() as u64 {
            c.minterms(self.n)
                .flat_map(|t| self.coverer_ids(t).iter().copied())
                .collect()
        } else {
            self.live
                .iter()
                .filter(|d| d.intersects(c))
                .map(|d| self.ids[d])
                .collect()
        };
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    #[inline]
    pub(crate) fn cube_of(&self, id: CubeId) -> Cube {
        self.arena[id as usize]
    }

    /// Output vector of the cover at one input assignment.
    pub fn outputs_at(&self, input: u64) -> u128 {
        let base = input as usize * self.m;
        let mut out = 0u128;
        for j in 0..self.m {
            if !self.covering[base + j].is_empty() {
                out |= 1 << j;
            }
        }
        out
    }

    /// Minterms covered only by `c`, in increasing order.
    pub fn unique_minterms(&self, c: &Cube) -> Result<Vec<Minterm>> {
        let id = self.require(c)?;
        let mut v: Vec<Minterm> = self.unique[id as usize]
            .iter()
            .map(|&s| self.minterm_of_slot(s))
            .collect();
        v.sort_unstable();
        Ok(v)
    }

    pub(crate) fn unique_slots(&self, id: CubeId) -> &FxHashSet<u32> {
        &self.unique[id as usize]
    }

    pub fn unique_count(&self, c: &Cube) -> Result<usize> {
        Ok(self.unique[self.require(c)? as usize].len())
    }

    /// Input assignments of the minterms only `c` covers.
    pub fn unique_inputs(&self, c: &Cube) -> Result<BTreeSet<u64>> {
        let id = self.require(c)?;
        Ok(self.unique[id as usize]
            .iter()
            .map(|&s| self.minterm_of_slot(s).input)
            .collect())
    }

    fn require(&self, c: &Cube) -> Result<CubeId> {
        self.id_of(c)
            .ok_or_else(|| Error::AbsentCube(c.pattern(self.n, self.m)))
    }

    fn intern(&mut self, c: Cube) -> CubeId {
        if let Some(&id) = self.ids.get(&c) {
            return id;
        }
        let id = self.arena.len() as CubeId;
        self.arena.push(c);
        self.unique.push(FxHashSet::default());
        self.ids.insert(c, id);
        id
    }

    pub fn check_cube(&self, c: &Cube) -> Result<()> {
        if !c.fits(self.n, self.m) {
            return Err(Error::CubeOutOfRange(c.pattern(self.n, self.m)));
        }
        if c.outputs() == 0 {
            return Err(Error::EmptyCube(c.pattern(self.n, self.m)));
        }
        Ok(())
    }

    pub fn insert(&mut self, c: Cube) -> Result<()> {
        self.check_cube(&c)?;
        if self.live.contains(&c) {
            return Err(Error::DuplicateCube(c.pattern(self.n, self.m)));
        }
        let id = self.intern(c);
        let n = self.n;
        for t in c.minterms(n) {
            let slot = self.slot(t);
            let list = &mut self.covering[slot];
            match list.len() {
                0 => {
                    self.on_count += 1;
                    self.unique[id as usize].insert(slot as u32);
                }
                1 => {
                    let other = list[0];
                    self.unique[other as usize].remove(&(slot as u32));
                }
                _ => {}
            }
            let list = &mut self.covering[slot];
            let at = list.partition_point(|&x| x < id);
            list.insert(at, id);
        }
        self.live.insert(c);
        self.literals += c.literals(self.rule) as u64;
        Ok(())
    }

    pub fn remove(&mut self, c: &Cube) -> Result<()> {
        let id = self.require(c)?;
        let n = self.n;
        for t in c.minterms(n) {
            let slot = self.slot(t);
            let list = &mut self.covering[slot];
            let at = list.partition_point(|&x| x < id);
            debug_assert_eq!(list.get(at), Some(&id));
            list.remove(at);
            match list.len() {
                0 => self.on_count -= 1,
                1 => {
                    let other = list[0];
                    self.unique[other as usize].insert(slot as u32);
                }
                _ => {}
            }
        }
        self.unique[id as usize].clear();
        self.live.remove(c);
        self.literals -= c.literals(self.rule) as u64;
        Ok(())
    }

    /// Snapshot of the covering map, keyed by minterm.
    pub fn covering_map(&self) -> BTreeMap<Minterm, BTreeSet<Cube>> {
        let mut map = BTreeMap::new();
        for (slot, list) in self.covering.iter().enumerate() {
            if !list.is_empty() {
                map.insert(
                    self.minterm_of_slot(slot as u32),
                    list.iter().map(|&id| self.arena[id as usize]).collect(),
                );
            }
        }
        map
    }

    /// Snapshot of the unique map, keyed by cube.
    pub fn unique_map(&self) -> BTreeMap<Cube, BTreeSet<Minterm>> {
        self.live
            .iter()
            .map(|c| {
                let id = self.ids[c];
                let set = self.unique[id as usize]
                    .iter()
                    .map(|&s| self.minterm_of_slot(s))
                    .collect();
                (*c, set)
            })
            .collect()
    }
}

/// Two covers are equal when they hold the same cubes and identical maps.
impl PartialEq for Cover {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.m == other.m
            && self.rule == other.rule
            && self.live == other.live
            && self.on_count == other.on_count
            && self.literals == other.literals
            && self.covering_map() == other.covering_map()
            && self.unique_map() == other.unique_map()
    }
}
