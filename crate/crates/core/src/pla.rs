//! Berkeley PLA reader and writer.
//!
//! Only the ON-set interpretation is used: a `1` (or `4`) in the output field
//! asserts the output, anything else does not. Output don't-cares (`-`, `~`,
//! `2`) are coerced to "not asserted" with a warning unless strict mode is
//! requested, in which case they are an error.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::cube::{Cube, Literal, MAX_INPUTS, MAX_OUTPUTS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaType {
    F,
    Fd,
    Fr,
    Fdr,
}

impl PlaType {
    fn parse(s: &str) -> Option<PlaType> {
        match s {
            "f" => Some(PlaType::F),
            "fd" => Some(PlaType::Fd),
            "fr" => Some(PlaType::Fr),
            "fdr" => Some(PlaType::Fdr),
            _ => None,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            PlaType::F => "f",
            PlaType::Fd => "fd",
            PlaType::Fr => "fr",
            PlaType::Fdr => "fdr",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaDocument {
    pub num_inputs: usize,
    pub num_outputs: usize,
    pub input_labels: Option<Vec<String>>,
    pub output_labels: Option<Vec<String>>,
    pub pla_type: Option<PlaType>,
    pub cubes: Vec<Cube>,
    pub declared_product_count: Option<usize>,
}

impl PlaDocument {
    pub fn new(num_inputs: usize, num_outputs: usize, cubes: Vec<Cube>) -> PlaDocument {
        PlaDocument {
            num_inputs,
            num_outputs,
            input_labels: None,
            output_labels: None,
            pla_type: None,
            cubes,
            declared_product_count: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Reject output don't-cares and `.p` mismatches instead of warning.
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Warning {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parsed {
    pub document: PlaDocument,
    pub warnings: Vec<Warning>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing `.i` directive")]
    MissingInputs,
    #[error("missing `.o` directive")]
    MissingOutputs,
    #[error("bad value for `{0}`")]
    BadCount(&'static str),
    #[error("`{0}` given twice with different values")]
    Redefined(&'static str),
    #[error("{0} inputs exceed the supported maximum of 64")]
    TooManyInputs(usize),
    #[error("{0} outputs exceed the supported maximum of 128")]
    TooManyOutputs(usize),
    #[error("cube line has {found} characters, expected {expected}")]
    PatternLength { expected: usize, found: usize },
    #[error("illegal character `{0}` in cube line")]
    IllegalCharacter(char),
    #[error("output don't-care `{0}` rejected in strict mode")]
    OutputDontCare(char),
    #[error("label count {found} does not match {expected}")]
    LabelCount { expected: usize, found: usize },
    #[error("unknown `.type` value `{0}`")]
    BadType(String),
    #[error("`.p` declares {declared} products, found {found}")]
    ProductCount { declared: usize, found: usize },
    #[error("unsupported directive `{0}`")]
    Unsupported(String),
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

fn parse_count(line: usize, arg: Option<&str>, name: &'static str) -> Result<usize, ParseError> {
    arg.and_then(|s| s.parse::<usize>().ok())
        .ok_or_else(|| err(line, ParseErrorKind::BadCount(name)))
}

/// Parses a PLA document with default (lenient) options.
pub fn parse_pla(text: &str) -> Result<Parsed, ParseError> {
    parse_pla_with(text, ParseOptions::default())
}

pub fn parse_pla_with(text: &str, opts: ParseOptions) -> Result<Parsed, ParseError> {
    let mut n: Option<usize> = None;
    let mut m: Option<usize> = None;
    let mut doc = PlaDocument::new(0, 0, Vec::new());
    let mut warnings = Vec::new();
    let mut cube_lines = 0usize;
    let mut last_line = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = match raw.find('#') {
            Some(at) => &raw[..at],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(directive) = line.strip_prefix('.') {
            let mut words = directive.split_whitespace();
            let name = words.next().unwrap_or("");
            match name {
                "i" => {
                    let v = parse_count(lineno, words.next(), ".i")?;
                    if v > MAX_INPUTS {
                        return Err(err(lineno, ParseErrorKind::TooManyInputs(v)));
                    }
                    if n.is_some_and(|old| old != v) {
                        return Err(err(lineno, ParseErrorKind::Redefined(".i")));
                    }
                    n = Some(v);
                }
                "o" => {
                    let v = parse_count(lineno, words.next(), ".o")?;
                    if v > MAX_OUTPUTS {
                        return Err(err(lineno, ParseErrorKind::TooManyOutputs(v)));
                    }
                    if m.is_some_and(|old| old != v) {
                        return Err(err(lineno, ParseErrorKind::Redefined(".o")));
                    }
                    m = Some(v);
                }
                "p" => {
                    doc.declared_product_count = Some(parse_count(lineno, words.next(), ".p")?);
                }
                "ilb" => doc.input_labels = Some(words.map(str::to_string).collect()),
                "ob" => doc.output_labels = Some(words.map(str::to_string).collect()),
                "type" => {
                    let v = words.next().unwrap_or("");
                    doc.pla_type = Some(
                        PlaType::parse(v)
                            .ok_or_else(|| err(lineno, ParseErrorKind::BadType(v.to_string())))?,
                    );
                }
                "e" | "end" => break,
                "mv" | "symbolic" | "symbolic-output" | "kiss" | "label" => {
                    return Err(err(lineno, ParseErrorKind::Unsupported(format!(".{name}"))));
                }
                _ => warnings.push(Warning {
                    line: lineno,
                    message: format!("ignored directive `.{name}`"),
                }),
            }
            continue;
        }

        let ni = n.ok_or_else(|| err(lineno, ParseErrorKind::MissingInputs))?;
        let mo = m.ok_or_else(|| err(lineno, ParseErrorKind::MissingOutputs))?;
        cube_lines += 1;
        let chars: Vec<char> = line
            .chars()
            .filter(|ch| !ch.is_whitespace() && *ch != '|')
            .collect();
        if chars.len() != ni + mo {
            return Err(err(
                lineno,
                ParseErrorKind::PatternLength {
                    expected: ni + mo,
                    found: chars.len(),
                },
            ));
        }
        let mut inputs = Vec::with_capacity(ni);
        for &ch in &chars[..ni] {
            inputs.push(match ch {
                '0' => Literal::Zero,
                '1' => Literal::One,
                '-' | '2' => Literal::DontCare,
                other => return Err(err(lineno, ParseErrorKind::IllegalCharacter(other))),
            });
        }
        let mut outputs = Vec::with_capacity(mo);
        let mut coerced = None;
        for &ch in &chars[ni..] {
            outputs.push(match ch {
                '1' | '4' => true,
                '0' | '3' => false,
                '-' | '~' | '2' => {
                    if opts.strict {
                        return Err(err(lineno, ParseErrorKind::OutputDontCare(ch)));
                    }
                    coerced.get_or_insert(ch);
                    false
                }
                other => return Err(err(lineno, ParseErrorKind::IllegalCharacter(other))),
            });
        }
        if let Some(ch) = coerced {
            warnings.push(Warning {
                line: lineno,
                message: format!("output don't-care `{ch}` treated as 0"),
            });
        }
        if !outputs.iter().any(|&o| o) {
            warnings.push(Warning {
                line: lineno,
                message: "cube asserts no output; dropped".to_string(),
            });
            continue;
        }
        let cube = Cube::from_literals(&inputs, &outputs)
            .expect("dimensions were checked against the directive limits");
        doc.cubes.push(cube);
    }

    doc.num_inputs = n.ok_or_else(|| err(last_line, ParseErrorKind::MissingInputs))?;
    doc.num_outputs = m.ok_or_else(|| err(last_line, ParseErrorKind::MissingOutputs))?;
    for (labels, expected) in [
        (&doc.input_labels, doc.num_inputs),
        (&doc.output_labels, doc.num_outputs),
    ] {
        if let Some(l) = labels {
            if l.len() != expected {
                return Err(err(
                    last_line,
                    ParseErrorKind::LabelCount {
                        expected,
                        found: l.len(),
                    },
                ));
            }
        }
    }
    if let Some(declared) = doc.declared_product_count {
        if declared != cube_lines {
            let kind = ParseErrorKind::ProductCount {
                declared,
                found: cube_lines,
            };
            if opts.strict {
                return Err(err(last_line, kind));
            }
            warnings.push(Warning {
                line: last_line,
                message: kind.to_string(),
            });
        }
    }
    Ok(Parsed {
        document: doc,
        warnings,
    })
}

/// Serializes a document. `.p` always reflects the actual cube count.
pub fn write_pla(doc: &PlaDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, ".i {}", doc.num_inputs);
    let _ = writeln!(out, ".o {}", doc.num_outputs);
    if let Some(labels) = &doc.input_labels {
        let _ = writeln!(out, ".ilb {}", labels.join(" "));
    }
    if let Some(labels) = &doc.output_labels {
        let _ = writeln!(out, ".ob {}", labels.join(" "));
    }
    if let Some(t) = doc.pla_type {
        let _ = writeln!(out, ".type {}", t.as_str());
    }
    let _ = writeln!(out, ".p {}", doc.cubes.len());
    for c in &doc.cubes {
        let _ = writeln!(out, "{}", c.display(doc.num_inputs, doc.num_outputs));
    }
    out.push_str(".e\n");
    out
}
