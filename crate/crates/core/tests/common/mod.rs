//! Brute-force oracles shared by the integration tests. They work on plain
//! cube lists and truth tables and never touch the library's coverage maps.

#![allow(dead_code)]

use als_core::Cube;
use rand::Rng;

/// Output vector of a cube list at one input assignment.
pub fn eval(cubes: &[Cube], input: u64) -> u128 {
    cubes
        .iter()
        .filter(|c| input & c.care() == c.value())
        .fold(0, |acc, c| acc | c.outputs())
}

pub fn truth_table(cubes: &[Cube], n: usize) -> Vec<u128> {
    (0..1u64 << n).map(|v| eval(cubes, v)).collect()
}

/// Inputs where the two cube lists disagree on some output.
pub fn eic_inputs(a: &[Cube], b: &[Cube], n: usize) -> Vec<u64> {
    (0..1u64 << n)
        .filter(|&v| eval(a, v) != eval(b, v))
        .collect()
}

pub fn literals(cubes: &[Cube]) -> u64 {
    cubes.iter().map(|c| c.literal_count() as u64).sum()
}

pub fn random_cube<R: Rng>(rng: &mut R, n: usize, m: usize) -> Cube {
    let mut care = 0u64;
    let mut value = 0u64;
    for i in 0..n {
        match rng.gen_range(0..3) {
            0 => care |= 1 << i,
            1 => {
                care |= 1 << i;
                value |= 1 << i;
            }
            _ => {}
        }
    }
    let outputs = loop {
        let o: u128 = rng.gen_range(1..(1u128 << m));
        if o != 0 {
            break o;
        }
    };
    Cube::from_masks(care, value, outputs)
}

/// Distinct random cubes, biased towards many literals so covers are not
/// trivially tautological.
pub fn random_cubes<R: Rng>(rng: &mut R, n: usize, m: usize, k: usize) -> Vec<Cube> {
    let mut out: Vec<Cube> = Vec::new();
    let mut tries = 0;
    while out.len() < k && tries < 50 * k {
        tries += 1;
        let mut c = random_cube(rng, n, m);
        if rng.gen_bool(0.5) {
            // tighten to a near-minterm
            let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            let value = c.value() | (rng.gen::<u64>() & full & !c.care());
            c = Cube::from_masks(full, value, c.outputs());
        }
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Minterm-per-row cover of a single-output truth table.
pub fn minterm_cover(tt: u64, n: usize) -> Vec<Cube> {
    let full = (1u64 << n) - 1;
    (0..1u64 << n)
        .filter(|v| tt >> v & 1 == 1)
        .map(|v| Cube::from_masks(full, v, 1))
        .collect()
}

/// Exact minimum literal count (inputs plus one output literal per cube) of a
/// single-output function of `n <= 5` inputs given as a truth table bit set.
/// Prime implicants are enumerated over all 3^n cubes, then the cheapest
/// cover is found by dynamic programming over subsets of the ON-set.
pub fn exact_min_literals(tt: u64, n: usize) -> u64 {
    assert!(n <= 5);
    let on: Vec<u64> = (0..1u64 << n).filter(|v| tt >> v & 1 == 1).collect();
    if on.is_empty() {
        return 0;
    }
    let full = (1u64 << n) - 1;
    let mut implicants: Vec<(u64, u64)> = Vec::new();
    for care in 0..=full {
        let mut value = care;
        loop {
            // value ranges over subsets of care
            let inside = (0..1u64 << n).filter(|v| v & care == value);
            if inside.clone().all(|v| tt >> v & 1 == 1) {
                implicants.push((care, value));
            }
            if value == 0 {
                break;
            }
            value = (value - 1) & care;
        }
    }
    let primes: Vec<(u64, u64)> = implicants
        .iter()
        .copied()
        .filter(|&(c, v)| {
            !implicants
                .iter()
                .any(|&(c2, v2)| (c2, v2) != (c, v) && c2 & c == c2 && v & c2 == v2)
        })
        .collect();
    let idx = |v: u64| on.iter().position(|&x| x == v).unwrap();
    let items: Vec<(u64, u64)> = primes
        .iter()
        .map(|&(c, v)| {
            let mask = (0..1u64 << n)
                .filter(|x| x & c == v)
                .fold(0u64, |m, x| m | 1 << idx(x));
            (mask, c.count_ones() as u64 + 1)
        })
        .collect();
    let goal = (1u64 << on.len()) - 1;
    let mut dp = vec![u64::MAX; 1 << on.len()];
    dp[0] = 0;
    for mask in 0..=goal {
        if dp[mask as usize] == u64::MAX || mask == goal {
            continue;
        }
        // cover the lowest uncovered minterm next
        let low = (!mask & goal).trailing_zeros();
        for &(cov, cost) in &items {
            if cov >> low & 1 == 1 {
                let next = (mask | cov) as usize;
                dp[next] = dp[next].min(dp[mask as usize] + cost);
            }
        }
    }
    dp[goal as usize]
}

/// Best exact literal count over all functions within `e` flipped inputs.
pub fn best_with_flips(tt: u64, n: usize, e: usize) -> u64 {
    let size = 1u64 << n;
    let mut best = exact_min_literals(tt, n);
    for a in 0..size {
        if e >= 1 {
            best = best.min(exact_min_literals(tt ^ 1 << a, n));
        }
        if e >= 2 {
            for b in a + 1..size {
                best = best.min(exact_min_literals(tt ^ 1 << a ^ 1 << b, n));
            }
        }
    }
    best
}
