//! Erroneous input combinations (EICs), threshold conversion and the
//! exhaustive/sampled error-rate oracles.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cover::Cover;
use crate::cube::{input_mask, Cube};
use crate::error::{Error, Result};

/// Largest input count the exhaustive oracle accepts; every cover that fits
/// the covering table (`2^n * m <= 2^25`) is within it.
pub const EXHAUSTIVE_MAX_INPUTS: usize = 25;

/// A set of input assignments on which an approximation is wrong. Outputs are
/// not part of the key: several wrong outputs at one input count once.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EicSet(BTreeSet<u64>);

impl EicSet {
    pub fn new() -> EicSet {
        EicSet::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, input: u64) -> bool {
        self.0.contains(&input)
    }

    pub fn insert(&mut self, input: u64) -> bool {
        self.0.insert(input)
    }

    pub fn remove(&mut self, input: u64) -> bool {
        self.0.remove(&input)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &EicSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &EicSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union(&self, other: &EicSet) -> EicSet {
        EicSet(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &EicSet) -> EicSet {
        EicSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn extend(&mut self, other: &EicSet) {
        self.0.extend(other.iter());
    }

    pub fn as_set(&self) -> &BTreeSet<u64> {
        &self.0
    }
}

impl FromIterator<u64> for EicSet {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        EicSet(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[u64; N]> for EicSet {
    fn from(v: [u64; N]) -> Self {
        v.into_iter().collect()
    }
}

/// `floor(er * 2^n)`.
pub fn noe_from_er(er: f64, n: usize) -> Result<u64> {
    if !(0.0..=1.0).contains(&er) || er.is_nan() {
        return Err(Error::ErrorRateOutOfRange(er));
    }
    let space = (n as f64).exp2();
    // Absorb decimal representation error (0.3 * 10 must give 3), nothing more.
    let scaled = er * space;
    let noe = (scaled + scaled * 1e-12).floor();
    Ok(noe.min(space) as u64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub eic_count: u64,
    pub er: f64,
    /// Inputs at which each output differs.
    pub per_output_flips: Vec<u64>,
}

/// Exact error count between two covers by enumerating all `2^n` inputs.
pub fn exhaustive_error_rate(original: &Cover, approx: &Cover) -> Result<ErrorReport> {
    same_dims(original.n(), original.m(), approx.n(), approx.m())?;
    exhaustive_error_rate_cubes(
        &original.to_vec(),
        &approx.to_vec(),
        original.n(),
        original.m(),
    )
}

fn same_dims(n: usize, m: usize, n2: usize, m2: usize) -> Result<()> {
    if n != n2 || m != m2 {
        return Err(Error::DimensionMismatch {
            expected_inputs: n,
            expected_outputs: m,
            inputs: n2,
            outputs: m2,
        });
    }
    Ok(())
}

const CHUNK_BITS: usize = 14;

/// Fills `table[low]` with the output vector at input `(hi << k) | low`.
fn eval_chunk(cubes: &[Cube], hi: u64, k: usize, table: &mut [u128]) {
    table.iter_mut().for_each(|t| *t = 0);
    let low = input_mask(k);
    for c in cubes {
        if (hi << k) & c.care() & !low != c.value() & !low {
            continue;
        }
        let base = c.value() & low;
        let free = !c.care() & low;
        let mut sub = 0u64;
        loop {
            table[(base | sub) as usize] |= c.outputs();
            sub = sub.wrapping_sub(free) & free;
            if sub == 0 {
                break;
            }
        }
    }
}

pub fn exhaustive_error_rate_cubes(
    original: &[Cube],
    approx: &[Cube],
    n: usize,
    m: usize,
) -> Result<ErrorReport> {
    if n > EXHAUSTIVE_MAX_INPUTS {
        return Err(Error::ExhaustiveLimit(n));
    }
    let k = n.min(CHUNK_BITS);
    let chunks = 1u64 << (n - k);
    let (eics, flips) = (0..chunks)
        .into_par_iter()
        .map(|hi| {
            let mut a = vec![0u128; 1 << k];
            let mut b = vec![0u128; 1 << k];
            eval_chunk(original, hi, k, &mut a);
            eval_chunk(approx, hi, k, &mut b);
            let mut eics = 0u64;
            let mut flips = vec![0u64; m];
            for (x, y) in a.iter().zip(&b) {
                let mut diff = x ^ y;
                if diff != 0 {
                    eics += 1;
                    while diff != 0 {
                        flips[diff.trailing_zeros() as usize] += 1;
                        diff &= diff - 1;
                    }
                }
            }
            (eics, flips)
        })
        .reduce(
            || (0, vec![0; m]),
            |(e1, mut f1), (e2, f2)| {
                f1.iter_mut().zip(f2).for_each(|(a, b)| *a += b);
                (e1 + e2, f1)
            },
        );
    Ok(ErrorReport {
        eic_count: eics,
        er: eics as f64 / (n as f64).exp2(),
        per_output_flips: flips,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampledErrorRate {
    pub er: f64,
    /// Wilson 95% interval.
    pub low: f64,
    pub high: f64,
    pub samples: u64,
    pub errors: u64,
    /// True when `samples` reached `2^n` and every input was enumerated.
    pub enumerated: bool,
}

fn eval_point(cubes: &[Cube], input: u64) -> u128 {
    cubes
        .iter()
        .filter(|c| c.matches_input(input))
        .fold(0, |acc, c| acc | c.outputs())
}

/// Monte-Carlo error rate over uniformly drawn inputs, deterministic in `seed`.
pub fn sampled_error_rate(
    original: &[Cube],
    approx: &[Cube],
    n: usize,
    samples: u64,
    seed: u64,
) -> SampledErrorRate {
    let samples = samples.max(1);
    let enumerated = n < 64 && samples >= 1u64 << n;
    let (drawn, errors) = if enumerated {
        let total = 1u64 << n;
        let errs = (0..total)
            .into_par_iter()
            .filter(|&v| eval_point(original, v) != eval_point(approx, v))
            .count() as u64;
        (total, errs)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mask = input_mask(n);
        let inputs: Vec<u64> = (0..samples).map(|_| rng.gen::<u64>() & mask).collect();
        let errs = inputs
            .par_iter()
            .filter(|&&v| eval_point(original, v) != eval_point(approx, v))
            .count() as u64;
        (samples, errs)
    };
    let p = errors as f64 / drawn as f64;
    let (low, high) = if enumerated {
        (p, p)
    } else {
        wilson_interval(errors, drawn)
    };
    SampledErrorRate {
        er: p,
        low,
        high,
        samples: drawn,
        errors,
        enumerated,
    }
}

fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    const Z: f64 = 1.959_963_984_540_054;
    let nf = trials as f64;
    let p = successes as f64 / nf;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = Z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Inputs where inserting `c` into `cover` turns some output from 0 to 1,
/// excluding inputs already in `existing`.
pub fn cube_insertion_eics(c: &Cube, cover: &Cover, existing: &EicSet) -> EicSet {
    insertion_eics_bounded(c, cover, existing, usize::MAX).unwrap_or_default()
}

/// As [`cube_insertion_eics`], giving up with `None` once more than `limit`
/// EICs are found.
pub(crate) fn insertion_eics_bounded(
    c: &Cube,
    cover: &Cover,
    existing: &EicSet,
    limit: usize,
) -> Option<EicSet> {
    let mut out = EicSet::new();
    for input in c.inputs(cover.n()) {
        if existing.contains(input) {
            continue;
        }
        let wrong = c
            .output_indices()
            .any(|output| !cover.is_covered(crate::cube::Minterm { input, output }));
        if wrong {
            out.insert(input);
            if out.len() > limit {
                return None;
            }
        }
    }
    Some(out)
}
