//! Tangle and diagram JSON.
//!
//! A tangle file is `{"name", "crossings": [[a, b, c, d], ...], "boundary":
//! {"b0", "b1", "t0", "t1"}}`. A closed diagram is the same without
//! `boundary`, optionally with `"free_loops": k` for split crossingless
//! circles; an empty crossing list is the crossingless unknot.

use std::path::Path;

use kappa_core::diagram::{Boundary, Crossing, PlanarDiagram, SuturedTangle};
use kappa_core::Error;
use serde::{Deserialize, Serialize};

use crate::{CliError, CliResult};

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct BoundaryFile {
    pub b0: u32,
    pub b1: u32,
    pub t0: u32,
    pub t1: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    #[serde(default)]
    pub name: String,
    pub crossings: Vec<Crossing>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundaryFile>,
    /// Crossingless unknotted components on top of `crossings`.
    #[serde(default)]
    pub free_loops: usize,
}

#[derive(Clone, Debug)]
pub enum Input {
    Tangle(SuturedTangle),
    Diagram { name: String, diagram: PlanarDiagram },
}

impl Input {
    pub fn name(&self) -> &str {
        match self {
            Input::Tangle(t) => &t.name,
            Input::Diagram { name, .. } => name,
        }
    }
}

fn fallback_name(path: &str) -> String {
    let file = Path::new(path).file_name().and_then(|s| s.to_str()).unwrap_or(path);
    file.trim_end_matches(".json").trim_end_matches(".tangle").to_string()
}

/// Parses file contents; `path` is used for messages and as the default name.
pub fn parse(text: &str, path: &str) -> CliResult<Input> {
    let f: DiagramFile =
        serde_json::from_str(text).map_err(|e| CliError::Parse { path: path.to_string(), message: e.to_string() })?;
    let name = if f.name.is_empty() { fallback_name(path) } else { f.name.clone() };
    if let Some(bad) = f.crossings.iter().flatten().find(|&&a| a == 0) {
        return Err(Error::Malformed { reason: "arc identifiers must be positive".into(), arcs: vec![*bad] }.into());
    }
    match f.boundary {
        Some(b) => {
            let boundary = Boundary { b0: b.b0, b1: b.b1, t0: b.t0, t1: b.t1 };
            let t = SuturedTangle::new(f.crossings, boundary, name);
            let report = t.validate()?;
            if !report.planar {
                return Err(Error::Malformed { reason: "tangle is not planar".into(), arcs: Vec::new() }.into());
            }
            Ok(Input::Tangle(t))
        }
        None if f.crossings.is_empty() => {
            let mut diagram = PlanarDiagram::unknot();
            diagram.free_loops = f.free_loops.max(1);
            Ok(Input::Diagram { name, diagram })
        }
        None => {
            let mut diagram = PlanarDiagram::from_crossings(f.crossings)?;
            diagram.free_loops = f.free_loops;
            Ok(Input::Diagram { name, diagram })
        }
    }
}

pub fn read(path: &str) -> CliResult<Input> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_string(), source })?;
    parse(&text, path)
}

pub fn read_tangle(path: &str) -> CliResult<SuturedTangle> {
    match read(path)? {
        Input::Tangle(t) => Ok(t),
        Input::Diagram { .. } => Err(CliError::Parse { path: path.to_string(), message: "expected a tangle with a boundary".into() }),
    }
}

/// One crossing per line, matching the shipped data files.
pub fn to_json(name: &str, crossings: &[Crossing], boundary: Option<Boundary>, free_loops: usize) -> String {
    let rows: Vec<String> = crossings.iter().map(|c| format!("    [{}, {}, {}, {}]", c[0], c[1], c[2], c[3])).collect();
    let mut s = format!("{{\n  \"name\": {},\n  \"crossings\": [\n", serde_json::to_string(name).unwrap());
    s.push_str(&rows.join(",\n"));
    s.push_str(if rows.is_empty() { "  ]" } else { "\n  ]" });
    if let Some(b) = boundary {
        s.push_str(&format!(",\n  \"boundary\": {{\"b0\": {}, \"b1\": {}, \"t0\": {}, \"t1\": {}}}", b.b0, b.b1, b.t0, b.t1));
    }
    if free_loops > 0 {
        s.push_str(&format!(",\n  \"free_loops\": {free_loops}"));
    }
    s.push_str("\n}\n");
    s
}

pub fn tangle_to_json(t: &SuturedTangle) -> String {
    to_json(&t.name, &t.crossings, Some(t.boundary), 0)
}

pub fn diagram_to_json(name: &str, d: &PlanarDiagram) -> String {
    to_json(name, &d.crossings, None, d.free_loops)
}
