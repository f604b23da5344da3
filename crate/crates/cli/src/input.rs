//! Polytope input: JSON files and builtin names.

use std::fs;
use std::path::Path;

use polyvol::builtin::builtin;
use polyvol::Polytope;
use serde::Deserialize;

use crate::CliError;

/// `{"dim": 3, "facets": [{"name": "N", "a": ["0", "-1", "-1"], "b": "1"}]}`
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolytopeFile {
    dim: usize,
    facets: Vec<FacetEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FacetEntry {
    name: String,
    a: Vec<ScalarText>,
    b: ScalarText,
}

/// Rationals as `"p/q"` strings, or bare JSON integers.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ScalarText {
    Text(String),
    Int(i64),
}

impl ScalarText {
    fn into_string(self) -> String {
        match self {
            ScalarText::Text(s) => s,
            ScalarText::Int(v) => v.to_string(),
        }
    }
}

pub fn parse_json(src: &str) -> Result<Polytope, CliError> {
    let file: PolytopeFile = serde_json::from_str(src)?;
    let raw: Vec<(String, Vec<String>, String)> = file
        .facets
        .into_iter()
        .map(|f| (f.name, f.a.into_iter().map(ScalarText::into_string).collect(), f.b.into_string()))
        .collect();
    Ok(Polytope::parse(file.dim, &raw)?)
}

pub fn load_file(path: &Path) -> Result<Polytope, CliError> {
    let src = fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_json(&src)
}

pub fn load_builtin(name: &str) -> Result<Polytope, CliError> {
    Ok(builtin(name)?)
}
