//! Multi-output cubes over ternary input literals.
//!
//! Inputs are stored as a pair of bit masks: `care` marks positions that carry
//! a literal, `value` holds the polarity of those literals. Bit `i` is input
//! position `i`, i.e. the `i`-th character of the PLA pattern. Outputs are a
//! plain bit set, bit `j` meaning output `j` is asserted.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Error;

/// Largest supported input count.
pub const MAX_INPUTS: usize = 64;
/// Largest supported output count.
pub const MAX_OUTPUTS: usize = 128;

/// State of one input position of a cube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Literal {
    Zero,
    One,
    DontCare,
}

impl Literal {
    pub fn as_char(self) -> char {
        match self {
            Literal::Zero => '0',
            Literal::One => '1',
            Literal::DontCare => '-',
        }
    }
}

/// How literals are counted when comparing covers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum LiteralRule {
    /// Input literals plus one literal per asserted output.
    #[default]
    InputsAndOutputs,
    /// Input literals only.
    InputsOnly,
}

/// One product term of a multi-output SOP.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cube {
    care: u64,
    value: u64,
    outputs: u128,
}

/// A fully specified input assignment paired with a single output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Minterm {
    pub input: u64,
    pub output: usize,
}

pub(crate) fn input_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn output_mask(m: usize) -> u128 {
    if m >= 128 {
        u128::MAX
    } else {
        (1u128 << m) - 1
    }
}

impl Cube {
    /// Builds a cube from raw masks. Bits of `value` outside `care` are cleared.
    pub fn from_masks(care: u64, value: u64, outputs: u128) -> Cube {
        Cube {
            care,
            value: value & care,
            outputs,
        }
    }

    /// A minterm cube: every input fixed to `input`, asserting the given outputs.
    pub fn point(n: usize, input: u64, outputs: u128) -> Cube {
        Cube::from_masks(input_mask(n), input, outputs)
    }

    pub fn from_literals(inputs: &[Literal], outputs: &[bool]) -> Result<Cube, Error> {
        if inputs.len() > MAX_INPUTS {
            return Err(Error::TooManyInputs(inputs.len()));
        }
        if outputs.len() > MAX_OUTPUTS {
            return Err(Error::TooManyOutputs(outputs.len()));
        }
        let mut care = 0u64;
        let mut value = 0u64;
        for (i, lit) in inputs.iter().enumerate() {
            match lit {
                Literal::Zero => care |= 1 << i,
                Literal::One => {
                    care |= 1 << i;
                    value |= 1 << i;
                }
                Literal::DontCare => {}
            }
        }
        let mut outs = 0u128;
        for (j, &on) in outputs.iter().enumerate() {
            if on {
                outs |= 1 << j;
            }
        }
        Ok(Cube::from_masks(care, value, outs))
    }

    /// Parses `"-10|1"` or `"-10 1"` style patterns. Returns the cube together
    /// with its input and output widths.
    pub fn parse(pattern: &str) -> Result<(Cube, usize, usize), Error> {
        let bad = || Error::BadPattern(pattern.to_string());
        let mut parts = pattern
            .split(|c: char| c == '|' || c.is_whitespace())
            .filter(|p| !p.is_empty());
        let ins = parts.next().ok_or_else(bad)?;
        let outs = parts.next().ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        let inputs = ins
            .chars()
            .map(|c| match c {
                '0' => Ok(Literal::Zero),
                '1' => Ok(Literal::One),
                '-' => Ok(Literal::DontCare),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let outputs = outs
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let cube = Cube::from_literals(&inputs, &outputs)?;
        Ok((cube, inputs.len(), outputs.len()))
    }

    #[inline]
    pub fn care(&self) -> u64 {
        self.care
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn outputs(&self) -> u128 {
        self.outputs
    }

    pub fn literal(&self, position: usize) -> Literal {
        let bit = 1u64 << position;
        if self.care & bit == 0 {
            Literal::DontCare
        } else if self.value & bit != 0 {
            Literal::One
        } else {
            Literal::Zero
        }
    }

    #[inline]
    pub fn asserts(&self, output: usize) -> bool {
        self.outputs >> output & 1 == 1
    }

    #[inline]
    pub fn input_literals(&self) -> u32 {
        self.care.count_ones()
    }

    #[inline]
    pub fn output_literals(&self) -> u32 {
        self.outputs.count_ones()
    }

    /// Literal count under the default rule (inputs plus asserted outputs).
    pub fn literal_count(&self) -> u32 {
        self.literals(LiteralRule::InputsAndOutputs)
    }

    pub fn literals(&self, rule: LiteralRule) -> u32 {
        match rule {
            LiteralRule::InputsAndOutputs => self.input_literals() + self.output_literals(),
            LiteralRule::InputsOnly => self.input_literals(),
        }
    }

    /// Don't-care positions among the first `n` inputs.
    #[inline]
    pub fn free_mask(&self, n: usize) -> u64 {
        !self.care & input_mask(n)
    }

    #[inline]
    pub fn matches_input(&self, input: u64) -> bool {
        input & self.care == self.value
    }

    #[inline]
    pub fn covers(&self, t: Minterm) -> bool {
        self.asserts(t.output) && self.matches_input(t.input)
    }

    /// True when every minterm of `other` is a minterm of `self`.
    pub fn contains(&self, other: &Cube) -> bool {
        self.care & other.care == self.care
            && other.value & self.care == self.value
            && other.outputs & self.outputs == other.outputs
    }

    /// True when some minterm lies in both cubes.
    pub fn intersects(&self, other: &Cube) -> bool {
        (self.care & other.care) & (self.value ^ other.value) == 0
            && self.outputs & other.outputs != 0
    }

    /// The cube of shared minterms, if any.
    pub fn intersection(&self, other: &Cube) -> Option<Cube> {
        self.intersects(other).then_some(Cube {
            care: self.care | other.care,
            value: self.value | other.value,
            outputs: self.outputs & other.outputs,
        })
    }

    /// Number of minterms: `2^(free inputs) * asserted outputs`.
    pub fn minterm_count(&self, n: usize) -> u64 {
        (1u64 << self.free_mask(n).count_ones()) * self.output_literals() as u64
    }

    /// Iterates the input assignments matched by this cube.
    pub fn inputs(&self, n: usize) -> InputIter {
        InputIter::new(self.value, self.free_mask(n))
    }

    /// Iterates the asserted output indices in increasing order.
    pub fn output_indices(&self) -> OutputIter {
        OutputIter(self.outputs)
    }

    /// All covered minterms, grouped by input assignment.
    pub fn minterms(&self, n: usize) -> impl Iterator<Item = Minterm> + '_ {
        self.inputs(n).flat_map(move |input| {
            self.output_indices()
                .map(move |output| Minterm { input, output })
        })
    }

    /// One cube per input literal, with that literal dropped.
    pub fn expansions(&self) -> Vec<Cube> {
        let mut out = Vec::with_capacity(self.input_literals() as usize);
        let mut care = self.care;
        while care != 0 {
            let bit = care & care.wrapping_neg();
            out.push(Cube::from_masks(self.care & !bit, self.value, self.outputs));
            care &= !bit;
        }
        out
    }

    /// Same cube with the literal at `bit` inverted.
    pub(crate) fn flipped(&self, bit: u64) -> Cube {
        Cube::from_masks(self.care, self.value ^ bit, self.outputs)
    }

    pub fn with_outputs(&self, outputs: u128) -> Cube {
        Cube::from_masks(self.care, self.value, outputs)
    }

    /// Checks that no literal or output lies outside an `n`-input, `m`-output space.
    pub fn fits(&self, n: usize, m: usize) -> bool {
        self.care & !input_mask(n) == 0 && self.outputs & !output_mask(m) == 0
    }

    /// Renders the PLA pattern, e.g. `-10 1`.
    pub fn display(&self, n: usize, m: usize) -> CubeDisplay<'_> {
        CubeDisplay {
            cube: self,
            n,
            m,
            sep: ' ',
        }
    }

    /// Renders `-10|1`.
    pub fn pattern(&self, n: usize, m: usize) -> String {
        CubeDisplay {
            cube: self,
            n,
            m,
            sep: '|',
        }
        .to_string()
    }
}

/// Positional order on patterns, matching byte order of the PLA text with
/// `-` < `0` < `1` on inputs and `0` < `1` on outputs.
impl Ord for Cube {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = (self.care ^ other.care) | (self.value ^ other.value);
        if diff != 0 {
            let bit = diff & diff.wrapping_neg();
            let rank = |c: &Cube| {
                if c.care & bit == 0 {
                    0
                } else if c.value & bit == 0 {
                    1
                } else {
                    2
                }
            };
            return rank(self).cmp(&rank(other));
        }
        let diff = self.outputs ^ other.outputs;
        if diff == 0 {
            return Ordering::Equal;
        }
        let bit = diff & diff.wrapping_neg();
        if self.outputs & bit == 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for Cube {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct CubeDisplay<'a> {
    cube: &'a Cube,
    n: usize,
    m: usize,
    sep: char,
}

impl fmt::Display for CubeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use fmt::Write;
        for i in 0..self.n {
            f.write_char(self.cube.literal(i).as_char())?;
        }
        f.write_char(self.sep)?;
        for j in 0..self.m {
            f.write_char(if self.cube.asserts(j) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Enumerates `base | s` for every subset `s` of `free`, in increasing order.
pub struct InputIter {
    base: u64,
    free: u64,
    next: Option<u64>,
}

impl InputIter {
    fn new(base: u64, free: u64) -> InputIter {
        InputIter {
            base,
            free,
            next: Some(0),
        }
    }
}

impl Iterator for InputIter {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        let sub = self.next?;
        let following = sub.wrapping_sub(self.free) & self.free;
        self.next = if following == 0 {
            None
        } else {
            Some(following)
        };
        Some(self.base | sub)
    }
}

pub struct OutputIter(u128);

impl Iterator for OutputIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let j = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(j)
    }
}
