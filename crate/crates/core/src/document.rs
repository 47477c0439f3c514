//! JSON decomposition documents.
//!
//! ```json
//! {
//!   "skeleton0": ["s", "t"],
//!   "steps": [
//!     {"cells": ["u"], "boundary": [], "endpoints": ["s", "t"], "boundary_map": {}}
//!   ]
//! }
//! ```
//!
//! Atom ids in `boundary_map` are `step<k>.<cell>` or the id of a base
//! generator declared in the optional `generators` list.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::builder::{build, BuildError, DecompositionScript, Generator, ScriptStep};
use crate::flow::{AtomId, Flow, StateId};

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Build(#[from] BuildError),
}

fn schema<T>(path: impl Into<String>, message: impl Into<String>) -> Result<T, DocumentError> {
    Err(DocumentError::Schema { path: path.into(), message: message.into() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDoc {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDoc {
    pub cells: Vec<String>,
    #[serde(default)]
    pub boundary: Vec<String>,
    pub endpoints: [String; 2],
    #[serde(default)]
    pub boundary_map: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub skeleton0: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<GeneratorDoc>,
    #[serde(default)]
    pub steps: Vec<StepDoc>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Document, DocumentError> {
        serde_json::from_str(text).map_err(|e| DocumentError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// Schema checks beyond JSON shape, then conversion.
    pub fn to_script(&self) -> Result<DecompositionScript, DocumentError> {
        if self.skeleton0.is_empty() {
            return schema("skeleton0", "must list at least one state");
        }
        let mut states = BTreeSet::new();
        for (i, s) in self.skeleton0.iter().enumerate() {
            if s.is_empty() {
                return schema(format!("skeleton0[{i}]"), "empty state id");
            }
            if !states.insert(s.as_str()) {
                return schema(format!("skeleton0[{i}]"), format!("duplicate state {s:?}"));
            }
        }
        let known = |path: String, s: &str| -> Result<(), DocumentError> {
            if states.contains(s) {
                Ok(())
            } else {
                schema(path, format!("unknown state {s:?}"))
            }
        };
        for (i, g) in self.generators.iter().enumerate() {
            known(format!("generators[{i}].src"), &g.src)?;
            known(format!("generators[{i}].tgt"), &g.tgt)?;
        }
        for (k, step) in self.steps.iter().enumerate() {
            for (j, e) in step.endpoints.iter().enumerate() {
                known(format!("steps[{k}].endpoints[{j}]"), e)?;
            }
            let mut cells = BTreeSet::new();
            for (j, c) in step.cells.iter().enumerate() {
                if !cells.insert(c.as_str()) {
                    return schema(format!("steps[{k}].cells[{j}]"), format!("duplicate cell {c:?}"));
                }
            }
            let mut boundary = BTreeSet::new();
            for (j, b) in step.boundary.iter().enumerate() {
                if !cells.contains(b.as_str()) {
                    return schema(format!("steps[{k}].boundary[{j}]"), format!("{b:?} is not a cell"));
                }
                if !boundary.insert(b.as_str()) {
                    return schema(format!("steps[{k}].boundary[{j}]"), format!("duplicate boundary cell {b:?}"));
                }
            }
            for b in &boundary {
                match step.boundary_map.get(*b) {
                    None => return schema(format!("steps[{k}].boundary_map.{b}"), "missing image"),
                    Some(image) if image.is_empty() => {
                        return schema(format!("steps[{k}].boundary_map.{b}"), "empty image")
                    }
                    Some(_) => {}
                }
            }
            if let Some(extra) = step.boundary_map.keys().find(|c| !boundary.contains(c.as_str())) {
                return schema(format!("steps[{k}].boundary_map.{extra}"), "not a boundary cell");
            }
        }
        Ok(DecompositionScript {
            skeleton0: self.skeleton0.iter().map(|s| StateId(s.clone())).collect(),
            generators: self
                .generators
                .iter()
                .map(|g| Generator { id: g.id.clone(), src: g.src.clone(), tgt: g.tgt.clone() })
                .collect(),
            steps: self
                .steps
                .iter()
                .map(|s| ScriptStep {
                    cells: s.cells.clone(),
                    boundary: s.boundary.clone(),
                    endpoints: (StateId(s.endpoints[0].clone()), StateId(s.endpoints[1].clone())),
                    boundary_map: s
                        .boundary_map
                        .iter()
                        .map(|(c, image)| (c.clone(), image.iter().map(|a| AtomId(a.clone())).collect()))
                        .collect(),
                })
                .collect(),
        })
    }

    /// Dumps a flow as one single-cell step per live atom.
    pub fn from_flow(flow: &Flow) -> Document {
        Document {
            skeleton0: flow.states().iter().map(|s| s.0.clone()).collect(),
            generators: Vec::new(),
            steps: flow
                .live_atoms()
                .map(|a| StepDoc {
                    cells: vec![a.id.0.clone()],
                    boundary: Vec::new(),
                    endpoints: [a.src.0.clone(), a.tgt.0.clone()],
                    boundary_map: BTreeMap::new(),
                })
                .collect(),
        }
    }

    /// Pretty JSON with sorted keys.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("documents serialize");
        serde_json::to_string_pretty(&value).expect("values serialize")
    }
}

/// Parses, checks and builds a document.
pub fn load(text: &str) -> Result<(DecompositionScript, Flow), DocumentError> {
    let script = Document::parse(text)?.to_script()?;
    let flow = build(&script)?;
    Ok((script, flow))
}
