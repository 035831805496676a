//! JSON documents read and written by the subcommands.

use std::fs;
use std::io::Read;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use gic_core::catalog::{Instance, Source};
use gic_core::{
    CodeJson, DiscretePolymatroid, GicProblem, IndexCode, Matroid, MatroidJson, PolymatroidJson, ProblemJson,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// A matroid or polymatroid, tagged by kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceJson {
    Matroid(MatroidJson),
    Polymatroid(PolymatroidJson),
}

/// Output of `examples`: a problem, possibly with a code and the object it was built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bundle {
    pub name: String,
    pub problem: ProblemJson,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub code: Option<CodeJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub source: Option<SourceJson>,
}

impl From<&Instance> for Bundle {
    fn from(inst: &Instance) -> Self {
        Bundle {
            name: inst.name.to_string(),
            problem: ProblemJson::from(&inst.problem),
            code: inst.code.as_ref().map(CodeJson::from),
            source: inst.source.as_ref().map(|s| match s {
                Source::Matroid(m) => SourceJson::Matroid(MatroidJson::from(m)),
                Source::Polymatroid(d) => SourceJson::Polymatroid(PolymatroidJson::from(d)),
            }),
        }
    }
}

pub enum Structure {
    Matroid(Matroid),
    Polymatroid(DiscretePolymatroid),
}

/// Reads a file, or standard input for `-`.
pub fn read_document(path: &Path) -> Result<Value> {
    let text = if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).context("reading standard input")?;
        text
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing {}", describe(path)))
}

fn describe(path: &Path) -> String {
    if path.as_os_str() == "-" {
        "standard input".into()
    } else {
        path.display().to_string()
    }
}

/// A bare problem, or a bundle carrying one under `"problem"`.
pub fn problem_from(doc: &Value) -> Result<GicProblem> {
    let json = doc.get("problem").unwrap_or(doc);
    let json: ProblemJson = serde_json::from_value(json.clone()).context("not a problem document")?;
    Ok(GicProblem::try_from(&json)?)
}

/// The `"code"` member of a bundle.
pub fn embedded_code(doc: &Value, p: &GicProblem) -> Result<Option<IndexCode>> {
    match doc.get("code") {
        None => Ok(None),
        Some(code) => {
            let json: CodeJson = serde_json::from_value(code.clone()).context("not a code document")?;
            Ok(Some(json.to_code(p)?))
        }
    }
}

pub fn code_from(doc: &Value, p: &GicProblem) -> Result<IndexCode> {
    let json: CodeJson = serde_json::from_value(doc.clone()).context("not a code document")?;
    Ok(json.to_code(p)?)
}

/// A matroid or polymatroid: tagged, bare, or the `"source"` of a bundle.
/// Bare polymatroids are recognized by their `"r"` member.
pub fn structure_from(doc: &Value) -> Result<Structure> {
    let doc = doc.get("source").unwrap_or(doc);
    let source = if doc.get("matroid").is_some() || doc.get("polymatroid").is_some() {
        serde_json::from_value::<SourceJson>(doc.clone()).context("not a matroid or polymatroid document")?
    } else if doc.get("r").is_some() {
        SourceJson::Polymatroid(serde_json::from_value(doc.clone()).context("not a polymatroid document")?)
    } else {
        SourceJson::Matroid(serde_json::from_value(doc.clone()).context("not a matroid document")?)
    };
    Ok(match source {
        SourceJson::Matroid(m) => Structure::Matroid(Matroid::try_from(&m)?),
        SourceJson::Polymatroid(d) => Structure::Polymatroid(DiscretePolymatroid::try_from(&d)?),
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn require_positive(name: &str, value: u64) -> Result<u64> {
    if value == 0 {
        bail!("--{name} must be positive");
    }
    Ok(value)
}

pub fn modulus(q: u32) -> Result<gic_core::Modulus> {
    gic_core::Modulus::new(q).map_err(|e| anyhow!(e))
}
