//! Underlying homotopy type of a decomposition built from discrete cells.
//!
//! Forgetting direction, every live 1-cell is an open segment glued at its
//! two endpoints, so the underlying space is a graph. Its homotopy type is
//! determined by the number of components and the first Betti number.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::builder::{build, BuildError, DecompositionScript};
use crate::flow::StateId;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnderlyingEdge {
    pub label: String,
    pub ends: (StateId, StateId),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnderlyingGraph {
    pub vertices: Vec<StateId>,
    pub edges: Vec<UnderlyingEdge>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HomotopySignature {
    pub components: usize,
    pub betti1: usize,
}

/// One edge per base generator and per non-boundary cell of every step.
pub fn underlying_graph(script: &DecompositionScript) -> Result<UnderlyingGraph, BuildError> {
    build(script)?;
    let mut vertices = script.skeleton0.clone();
    vertices.sort();
    let mut edges: Vec<UnderlyingEdge> = script
        .generators
        .iter()
        .map(|g| UnderlyingEdge {
            label: g.id.clone(),
            ends: (StateId(g.src.clone()), StateId(g.tgt.clone())),
        })
        .collect();
    for (k, step) in script.steps.iter().enumerate() {
        for cell in step.cells.iter().filter(|c| !step.boundary.contains(c)) {
            edges.push(UnderlyingEdge { label: format!("step{k}.{cell}"), ends: step.endpoints.clone() });
        }
    }
    edges.sort_by(|a, b| (&a.ends, &a.label).cmp(&(&b.ends, &b.label)));
    Ok(UnderlyingGraph { vertices, edges })
}

pub fn homotopy_signature(g: &UnderlyingGraph) -> HomotopySignature {
    let index: BTreeMap<&StateId, usize> = g.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..g.vertices.len()).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = g.vertices.len();
    for e in &g.edges {
        let (a, b) = (root(&mut parent, index[&e.ends.0]), root(&mut parent, index[&e.ends.1]));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    // E - V + C is never negative for a graph
    let betti1 = g.edges.len() + components - g.vertices.len();
    HomotopySignature { components, betti1 }
}

/// Graphviz rendering: undirected, one edge per cell.
pub fn to_dot(g: &UnderlyingGraph) -> String {
    let quote = |s: &str| format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""));
    let mut out = String::from("graph underlying {\n");
    for v in &g.vertices {
        out.push_str(&format!("  {};\n", quote(v.as_str())));
    }
    for e in &g.edges {
        out.push_str(&format!(
            "  {} -- {} [label={}];\n",
            quote(e.ends.0.as_str()),
            quote(e.ends.1.as_str()),
            quote(&e.label)
        ));
    }
    out.push_str("}\n");
    out
}
