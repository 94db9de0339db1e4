use std::fs;
use std::path::Path;

use als_core::pla::{parse_pla_with, write_pla, ParseOptions, PlaDocument};
use als_core::{Cover, LiteralRule};
use anyhow::{Context, Result};

/// A parsed PLA file and the name it is reported under.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub name: String,
    pub doc: PlaDocument,
    pub warnings: Vec<String>,
}

impl Loaded {
    pub fn from_text(name: &str, text: &str, strict: bool) -> Result<Loaded> {
        let parsed = parse_pla_with(text, ParseOptions { strict })
            .with_context(|| format!("cannot parse {name}"))?;
        let warnings: Vec<String> = parsed.warnings.iter().map(|w| w.to_string()).collect();
        for w in &warnings {
            log::warn!("{name}: {w}");
        }
        Ok(Loaded {
            name: name.to_string(),
            doc: parsed.document,
            warnings,
        })
    }

    pub fn cover(&self, rule: LiteralRule) -> Result<Cover> {
        let (cover, dropped) = Cover::build_dedup(
            self.doc.cubes.iter().copied(),
            self.doc.num_inputs,
            self.doc.num_outputs,
        )
        .with_context(|| format!("cannot build the cover of {}", self.name))?;
        if dropped > 0 {
            log::warn!("{}: dropped {dropped} duplicate cube(s)", self.name);
        }
        Ok(cover.with_rule(rule))
    }
}

pub fn read_pla(path: &Path, strict: bool) -> Result<Loaded> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Loaded::from_text(&name, &text, strict)
}

/// PLA text for `cover`, keeping the labels of the original document.
pub fn render_cover(template: &PlaDocument, cover: &Cover) -> String {
    let mut doc = PlaDocument::new(cover.n(), cover.m(), cover.to_vec());
    doc.input_labels = template.input_labels.clone();
    doc.output_labels = template.output_labels.clone();
    write_pla(&doc)
}

pub fn write_cover(path: &Path, template: &PlaDocument, cover: &Cover) -> Result<()> {
    fs::write(path, render_cover(template, cover))
        .with_context(|| format!("cannot write {}", path.display()))
}
