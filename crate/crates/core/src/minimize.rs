//! Error-free two-level cleanup: an external Espresso adapter and a built-in
//! expand + irredundant fallback.

use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

use crate::cover::Cover;
use crate::cube::Minterm;
use crate::error::{Error, Result};
use crate::error_model::{exhaustive_error_rate_cubes, EXHAUSTIVE_MAX_INPUTS};
use crate::pla::{parse_pla, write_pla, PlaDocument, PlaType};

/// Environment variable naming an Espresso executable.
pub const ESPRESSO_ENV: &str = "ALS_ESPRESSO";

fn in_dc(dc: Option<&Cover>, t: Minterm) -> bool {
    dc.is_some_and(|d| d.is_covered(t))
}

/// Drops cubes whose every unique minterm is a don't-care (or that have none),
/// higher-literal cubes first.
pub fn make_irredundant_dc(f: &mut Cover, dc: Option<&Cover>) {
    loop {
        let mut victim = None;
        let mut victim_lits = 0;
        for c in f.cubes() {
            let redundant = f
                .unique_minterms(c)
                .expect("live cube")
                .into_iter()
                .all(|t| in_dc(dc, t));
            let lits = f.literals_of(c);
            if redundant && (victim.is_none() || lits > victim_lits) {
                victim = Some(*c);
                victim_lits = lits;
            }
        }
        match victim {
            Some(c) => f.remove(&c).expect("live cube"),
            None => break,
        }
    }
}

pub fn make_irredundant(f: &mut Cover) {
    make_irredundant_dc(f, None);
}

/// Greedily drops input literals whose removal only adds ON-set or
/// don't-care minterms, cube by cube in pattern order, then removes
/// redundant cubes.
pub fn expand_pass(f: &mut Cover, dc: Option<&Cover>) {
    let n = f.n();
    for c in f.to_vec() {
        if !f.contains(&c) {
            continue;
        }
        let mut cur = c;
        let mut care = c.care();
        while care != 0 {
            let bit = care & care.wrapping_neg();
            care &= !bit;
            let other = cur.flipped(bit);
            if other.minterms(n).all(|t| f.is_covered(t) || in_dc(dc, t)) {
                cur = crate::cube::Cube::from_masks(cur.care() & !bit, cur.value(), cur.outputs());
            }
        }
        if cur != c {
            f.remove(&c).expect("live cube");
            if !f.contains(&cur) {
                f.insert(cur).expect("expanded cube fits the cover");
            }
        }
    }
    make_irredundant_dc(f, dc);
}

/// Built-in minimization.
pub fn minimize(f: &Cover, dc: Option<&Cover>) -> Cover {
    let mut out = f.clone();
    expand_pass(&mut out, dc);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinimizerPath {
    Internal,
    External,
}

impl MinimizerPath {
    pub fn as_str(self) -> &'static str {
        match self {
            MinimizerPath::Internal => "internal",
            MinimizerPath::External => "espresso",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Minimizer {
    pub external: Option<PathBuf>,
}

impl Minimizer {
    pub fn internal() -> Minimizer {
        Minimizer { external: None }
    }

    pub fn with_external(path: impl Into<PathBuf>) -> Minimizer {
        Minimizer {
            external: Some(path.into()),
        }
    }

    /// Uses the executable named by `ALS_ESPRESSO` when set.
    pub fn from_env() -> Minimizer {
        Minimizer {
            external: std::env::var_os(ESPRESSO_ENV).map(PathBuf::from),
        }
    }

    /// Minimizes `f`; falls back to the built-in pass when the external tool
    /// fails or returns a cover that is not equivalent outside `dc`.
    pub fn minimize(&self, f: &Cover, dc: Option<&Cover>) -> (Cover, MinimizerPath) {
        if let Some(path) = &self.external {
            match run_external(path, f, dc) {
                Ok(c) if c.total_literals() <= f.total_literals() => {
                    return (c, MinimizerPath::External)
                }
                Ok(_) => {
                    log::warn!("external minimizer increased the literal count; using built-in")
                }
                Err(e) => log::warn!("{e}; using built-in minimizer"),
            }
        }
        (minimize(f, dc), MinimizerPath::Internal)
    }
}

fn run_external(path: &PathBuf, f: &Cover, dc: Option<&Cover>) -> Result<Cover> {
    let (n, m) = (f.n(), f.m());
    let mut doc = PlaDocument::new(n, m, f.to_vec());
    if dc.is_some() {
        doc.pla_type = Some(PlaType::Fd);
    }
    let mut text = write_pla(&doc);
    if let Some(dc) = dc {
        // don't-care rows go after the ON rows, with '-' marking free outputs
        text.truncate(text.len() - ".e\n".len());
        for c in dc.cubes() {
            text.extend((0..n).map(|i| c.literal(i).as_char()));
            text.push(' ');
            text.extend((0..m).map(|j| if c.asserts(j) { '-' } else { '0' }));
            text.push('\n');
        }
        text.push_str(".e\n");
        text = text.replacen(
            &format!(".p {}\n", f.len()),
            &format!(".p {}\n", f.len() + dc.len()),
            1,
        );
    }
    let mut file = tempfile::Builder::new().suffix(".pla").tempfile()?;
    file.write_all(text.as_bytes())?;
    file.flush()?;
    let out = Command::new(path)
        .arg(file.path())
        .output()
        .map_err(|e| Error::External(format!("cannot run {}: {e}", path.display())))?;
    if !out.status.success() {
        return Err(Error::External(format!(
            "{} exited with {}",
            path.display(),
            out.status
        )));
    }
    let stdout = String::from_utf8_lossy(&out.stdout);
    let parsed = parse_pla(&stdout).map_err(|e| Error::External(format!("bad output: {e}")))?;
    let doc = parsed.document;
    if doc.num_inputs != n || doc.num_outputs != m {
        return Err(Error::External("output dimensions differ".into()));
    }
    let result = Cover::build(doc.cubes, n, m)?.with_rule(f.rule());
    if n <= EXHAUSTIVE_MAX_INPUTS {
        let equivalent = match dc {
            None => {
                exhaustive_error_rate_cubes(&f.to_vec(), &result.to_vec(), n, m)?.eic_count == 0
            }
            Some(dc) => (0..1u64 << n).all(|v| {
                let want = f.outputs_at(v);
                let got = result.outputs_at(v);
                let free = dc.outputs_at(v);
                (want ^ got) & !free == 0
            }),
        };
        if !equivalent {
            return Err(Error::External(
                "result is not equivalent to its input".into(),
            ));
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::Cube;
    use crate::error_model::exhaustive_error_rate;

    fn c(p: &str) -> Cube {
        Cube::parse(p).unwrap().0
    }

    fn cover(ps: &[&str], n: usize, m: usize) -> Cover {
        Cover::build(ps.iter().map(|p| c(p)), n, m).unwrap()
    }

    #[test]
    fn irredundant_drops_shadowed_cube() {
        let mut f = cover(&["-1-|1", "11-|1"], 3, 1);
        make_irredundant(&mut f);
        assert_eq!(f.to_vec(), vec![c("-1-|1")]);
        let mut g = cover(&["-10|1", "1-1|1"], 3, 1);
        let before = g.clone();
        make_irredundant(&mut g);
        assert_eq!(g, before);
        let mut h = cover(&["1-1|1"], 3, 1);
        make_irredundant(&mut h);
        assert_eq!(h.len(), 1);
    }

    #[test]
    fn expand_merges_adjacent_minterms() {
        let mut f = cover(&["010|1", "110|1"], 3, 1);
        expand_pass(&mut f, None);
        assert_eq!(f.to_vec(), vec![c("-10|1")]);
    }

    #[test]
    fn expand_uses_dont_cares() {
        let mut f = cover(&["-10|1", "1-1|1"], 3, 1);
        let dc = cover(&["011|1"], 3, 1);
        expand_pass(&mut f, Some(&dc));
        assert!(f.contains(&c("-1-|1")));
        for v in 0..8u64 {
            if v == 0b110 {
                continue;
            }
            let orig = cover(&["-10|1", "1-1|1"], 3, 1);
            assert_eq!(f.outputs_at(v), orig.outputs_at(v), "input {v:03b}");
        }
    }

    #[test]
    fn nothing_to_expand() {
        let mut f = cover(&["-10|1", "1-1|1"], 3, 1);
        let before = f.clone();
        expand_pass(&mut f, None);
        assert_eq!(f, before);
    }

    #[test]
    fn minimize_examples() {
        let f1 = cover(&["-1-|1", "11-|1"], 3, 1);
        assert_eq!(minimize(&f1, None).to_vec(), vec![c("-1-|1")]);
        let f0 = cover(&["-10|1", "1-1|1"], 3, 1);
        assert_eq!(minimize(&f0, None), f0);
        let empty = cover(&[], 3, 1);
        assert!(minimize(&empty, None).is_empty());
    }

    #[test]
    fn minimize_preserves_function_on_multi_output() {
        let f = cover(
            &["00-1|110", "0011|100", "1-00|011", "1100|001", "-1-0|010"],
            4,
            3,
        );
        let g = minimize(&f, None);
        assert_eq!(exhaustive_error_rate(&f, &g).unwrap().eic_count, 0);
        assert!(g.total_literals() <= f.total_literals());
    }

    #[test]
    fn missing_external_tool_falls_back() {
        let f = cover(&["-1-|1", "11-|1"], 3, 1);
        let m = Minimizer::with_external("/nonexistent/espresso");
        let (g, path) = m.minimize(&f, None);
        assert_eq!(path, MinimizerPath::Internal);
        assert_eq!(g.to_vec(), vec![c("-1-|1")]);
    }
}
