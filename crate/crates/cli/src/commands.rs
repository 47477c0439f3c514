use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path as FsPath;

use serde_json::{json, Value};

use flowcat::dihomotopy::{
    invariant_summary, is_isomorphic, search_t_homotopy, FlowMorphism, SearchBudget, SearchError,
};
use flowcat::document::{load, Document};
use flowcat::underlying::{homotopy_signature, to_dot, underlying_graph};
use flowcat::{DecompositionScript, Flow, StateId};

pub enum Failure {
    Input(String),
    Budget(String),
}

pub struct Outcome {
    pub output: String,
    pub verdict: bool,
}

fn read(input: &FsPath) -> Result<(DecompositionScript, Flow), Failure> {
    let text = fs::read_to_string(input)
        .map_err(|e| Failure::Input(format!("{}: {e}", input.display())))?;
    load(&text).map_err(|e| Failure::Input(format!("{}: {e}", input.display())))
}

/// Serializing through `Value` sorts object keys.
fn render(value: Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("json values serialize");
    s.push('\n');
    s
}

fn paths_json(flow: &Flow) -> Value {
    flow.paths()
        .map(|p| json!({"src": p.src, "tgt": p.tgt, "path": p.to_string()}))
        .collect()
}

pub fn build(input: &FsPath) -> Result<Outcome, Failure> {
    let (_, flow) = read(input)?;
    let value = json!({
        "states": flow.states(),
        "path_count": flow.path_count(),
        "matrix": {"order": flow.states(), "rows": flow.path_count_matrix()},
        "paths": paths_json(&flow),
    });
    Ok(Outcome { output: render(value), verdict: true })
}

fn state_set(flow: &Flow, given: Option<Vec<String>>, default: BTreeSet<StateId>) -> Result<BTreeSet<StateId>, Failure> {
    let Some(labels) = given else { return Ok(default) };
    labels
        .into_iter()
        .map(|l| {
            let s = StateId(l);
            if flow.has_state(&s) {
                Ok(s)
            } else {
                Err(Failure::Input(format!("unknown state {s}")))
            }
        })
        .collect()
}

pub fn analyze(input: &FsPath, init: Option<Vec<String>>, fin: Option<Vec<String>>) -> Result<Outcome, Failure> {
    let (script, flow) = read(input)?;
    let init = state_set(&flow, init, flow.initial_states())?;
    let fin = state_set(&flow, fin, flow.final_states())?;
    let report = flow
        .reachability_report(&init, &fin)
        .map_err(|e| Failure::Input(e.to_string()))?;
    let graph = underlying_graph(&script).map_err(|e| Failure::Input(e.to_string()))?;
    let value = json!({
        "invariants": invariant_summary(&flow),
        "designated_initial": init,
        "designated_final": fin,
        "reachability": report,
        "homotopy_signature": homotopy_signature(&graph),
    });
    Ok(Outcome { output: render(value), verdict: true })
}

/// State map and the images of the generating atoms.
fn witness(x: &Flow, f: &FlowMorphism) -> Value {
    let atoms: BTreeMap<String, String> = x
        .paths()
        .filter(|p| p.is_atomic())
        .map(|p| (p.to_string(), f.path(p).to_string()))
        .collect();
    json!({"states": f.state_map, "atoms": atoms})
}

pub fn compare_iso(x_in: &FsPath, y_in: &FsPath) -> Result<Outcome, Failure> {
    let (_, x) = read(x_in)?;
    let (_, y) = read(y_in)?;
    let found = is_isomorphic(&x, &y);
    let value = json!({
        "mode": "iso",
        "verdict": found.is_some(),
        "witness": found.as_ref().map(|f| witness(&x, f)),
    });
    Ok(Outcome { output: render(value), verdict: found.is_some() })
}

pub fn compare_t_homotopy(x_in: &FsPath, y_in: &FsPath) -> Result<Outcome, Failure> {
    let (_, x) = read(x_in)?;
    let (_, y) = read(y_in)?;
    let outcome = search_t_homotopy(&x, &y, SearchBudget::default()).map_err(|e| match e {
        SearchError::SearchBudgetExceeded(m) => Failure::Budget(format!("search budget exceeded: {m}")),
    })?;
    let verdict = outcome.found.is_some();
    let (witness_value, report) = match outcome.found.as_ref().or(outcome.closest.as_ref()) {
        Some((f, report)) => (Some(witness(&x, f)), Some(report)),
        None => (None, None),
    };
    let value = json!({
        "mode": "t-homotopy",
        "verdict": verdict,
        "candidates": outcome.candidates,
        "witness": if verdict { witness_value.clone() } else { None },
        "closest": if verdict { None } else { witness_value },
        "report": report,
    });
    Ok(Outcome { output: render(value), verdict })
}

pub fn export_dot(input: &FsPath) -> Result<Outcome, Failure> {
    let (script, _) = read(input)?;
    let graph = underlying_graph(&script).map_err(|e| Failure::Input(e.to_string()))?;
    Ok(Outcome { output: to_dot(&graph), verdict: true })
}

pub fn export_json(input: &FsPath) -> Result<Outcome, Failure> {
    let (_, flow) = read(input)?;
    let mut output = Document::from_flow(&flow).to_json();
    output.push('\n');
    Ok(Outcome { output, verdict: true })
}
