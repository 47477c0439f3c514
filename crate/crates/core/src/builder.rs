//! Flows from finite globular decompositions.
//!
//! A [`DecompositionScript`] starts from the achronal flow on a set of states
//! (optionally with base generators) and attaches globes one step at a time.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flow::{Atom, AtomId, Flow, FlowError, Presentation, StateId};
use crate::pushout::{attach_globe, AttachSpec, PushoutError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("step {step}: {source}")]
    Attach { step: usize, source: PushoutError },
    #[error("step {step} refers to {atom}, which is introduced by a later step")]
    StepIndexOutOfOrder { step: usize, atom: AtomId },
    #[error("step {step}: {source}")]
    BoundaryImage { step: usize, source: FlowError },
    #[error(transparent)]
    Flow(#[from] FlowError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptStep {
    pub cells: Vec<String>,
    pub boundary: Vec<String>,
    pub endpoints: (StateId, StateId),
    /// Boundary cell -> atom ids of its image in the flow built so far.
    pub boundary_map: BTreeMap<String, Vec<AtomId>>,
}

impl ScriptStep {
    pub fn new(src: &str, tgt: &str, cells: &[&str]) -> Self {
        ScriptStep {
            cells: cells.iter().map(|c| c.to_string()).collect(),
            boundary: Vec::new(),
            endpoints: (StateId::from(src), StateId::from(tgt)),
            boundary_map: BTreeMap::new(),
        }
    }

    pub fn with_boundary(mut self, cell: &str, image: &[&str]) -> Self {
        if !self.cells.iter().any(|c| c == cell) {
            self.cells.push(cell.to_string());
        }
        self.boundary.push(cell.to_string());
        self.boundary_map
            .insert(cell.to_string(), image.iter().map(|a| AtomId::from(*a)).collect());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionScript {
    pub skeleton0: Vec<StateId>,
    pub generators: Vec<Generator>,
    pub steps: Vec<ScriptStep>,
}

impl DecompositionScript {
    pub fn new<'a>(skeleton0: impl IntoIterator<Item = &'a str>) -> Self {
        DecompositionScript {
            skeleton0: skeleton0.into_iter().map(StateId::from).collect(),
            ..Default::default()
        }
    }

    pub fn generator(mut self, id: &str, src: &str, tgt: &str) -> Self {
        self.generators.push(Generator { id: id.into(), src: src.into(), tgt: tgt.into() });
        self
    }

    pub fn step(mut self, step: ScriptStep) -> Self {
        self.steps.push(step);
        self
    }
}

/// Step index named by an atom id of the form `step<k>.<cell>`.
pub fn step_of(atom: &AtomId) -> Option<(usize, &str)> {
    let rest = atom.as_str().strip_prefix("step")?;
    let (k, cell) = rest.split_once('.')?;
    Some((k.parse().ok()?, cell))
}

pub fn glob<S: AsRef<str>>(cells: &[S]) -> Flow {
    let mut p = Presentation::new().states(["0", "1"]);
    let unique: BTreeSet<&str> = cells.iter().map(|c| c.as_ref()).collect();
    for c in unique {
        p = p.atom(c, "0", "1");
    }
    Flow::validate(p).expect("a globe is always a valid flow")
}

/// `Glob(Z₁) * … * Glob(Z_n)` on states `0..n`.
pub fn concat<S: AsRef<str>>(globes: &[Vec<S>]) -> Result<Flow, FlowError> {
    let mut p = Presentation::new();
    for j in 0..=globes.len() {
        p.states.push(StateId(j.to_string()));
    }
    for (j, z) in globes.iter().enumerate() {
        let unique: BTreeSet<&str> = z.iter().map(|c| c.as_ref()).collect();
        for c in unique {
            p.atoms.push(Atom::base(c, j.to_string(), (j + 1).to_string()));
        }
    }
    Flow::validate(p)
}

/// The attachment described by step `k`, resolved against the flow built so far.
pub fn resolve_step(flow: &Flow, k: usize, step: &ScriptStep) -> Result<AttachSpec, BuildError> {
    let mut spec = AttachSpec::new(step.endpoints.0.as_str(), step.endpoints.1.as_str()).in_step(k);
    spec.cells = step.cells.iter().cloned().collect();
    spec.boundary = step.boundary.iter().cloned().collect();
    for (cell, image) in &step.boundary_map {
        if let Some(atom) = image.iter().find(|a| step_of(a).is_some_and(|(j, _)| j >= k)) {
            return Err(BuildError::StepIndexOutOfOrder { step: k, atom: atom.clone() });
        }
        let path = flow
            .path_from_atoms(image)
            .map_err(|source| BuildError::BoundaryImage { step: k, source })?;
        spec.boundary_map.insert(cell.clone(), path);
    }
    Ok(spec)
}

/// Left fold of globe attachments over the achronal flow on `skeleton0`.
pub fn build(script: &DecompositionScript) -> Result<Flow, BuildError> {
    let presentation = Presentation {
        states: script.skeleton0.clone(),
        atoms: script
            .generators
            .iter()
            .map(|g| Atom::base(g.id.as_str(), g.src.as_str(), g.tgt.as_str()))
            .collect(),
        identifications: Vec::new(),
    };
    let mut flow = Flow::validate(presentation)?;
    for (k, step) in script.steps.iter().enumerate() {
        let spec = resolve_step(&flow, k, step)?;
        flow = attach_globe(&flow, &spec).map_err(|source| BuildError::Attach { step: k, source })?;
    }
    Ok(flow)
}

/// Splits live cell `cell` of step `step` (running `α → β`) at a fresh state
/// `fresh`, so that it becomes `step<k>.cell * step<k+1>.cell`. Later steps
/// are renumbered by two.
pub fn subdivide_cell(
    script: &DecompositionScript,
    step: usize,
    cell: &str,
    fresh: &str,
) -> DecompositionScript {
    let original = &script.steps[step];
    assert!(
        original.cells.iter().any(|c| c == cell) && !original.boundary.iter().any(|c| c == cell),
        "only live cells can be subdivided"
    );
    let (a, b) = (original.endpoints.0.as_str(), original.endpoints.1.as_str());
    let renumber = |atom: &AtomId| -> Vec<AtomId> {
        match step_of(atom) {
            Some((j, c)) if j == step && c == cell => vec![
                AtomId(format!("step{step}.{cell}")),
                AtomId(format!("step{}.{cell}", step + 1)),
            ],
            Some((j, c)) if j >= step => vec![AtomId(format!("step{}.{c}", j + 2))],
            _ => vec![atom.clone()],
        }
    };
    let mut out = DecompositionScript {
        skeleton0: script.skeleton0.clone(),
        generators: script.generators.clone(),
        steps: Vec::new(),
    };
    out.skeleton0.push(StateId::from(fresh));
    for (j, s) in script.steps.iter().enumerate() {
        if j == step {
            out.steps.push(ScriptStep::new(a, fresh, &[cell]));
            out.steps.push(ScriptStep::new(fresh, b, &[cell]));
        }
        let mut s = s.clone();
        if j == step {
            s.cells.retain(|c| c != cell);
        }
        for image in s.boundary_map.values_mut() {
            *image = image.iter().flat_map(&renumber).collect();
        }
        out.steps.push(s);
    }
    out
}

/// Splits base generator `id` at a fresh state into `first * second`.
pub fn subdivide_generator(
    script: &DecompositionScript,
    id: &str,
    fresh: &str,
    (first, second): (&str, &str),
) -> DecompositionScript {
    let position = script
        .generators
        .iter()
        .position(|g| g.id == id)
        .expect("only declared generators can be subdivided");
    let g = script.generators[position].clone();
    let mut out = script.clone();
    out.skeleton0.push(StateId::from(fresh));
    out.generators.splice(
        position..=position,
        [
            Generator { id: first.to_string(), src: g.src, tgt: fresh.to_string() },
            Generator { id: second.to_string(), src: fresh.to_string(), tgt: g.tgt },
        ],
    );
    for step in &mut out.steps {
        for image in step.boundary_map.values_mut() {
            *image = image
                .iter()
                .flat_map(|a| {
                    if a.as_str() == id {
                        vec![AtomId::from(first), AtomId::from(second)]
                    } else {
                        vec![a.clone()]
                    }
                })
                .collect();
        }
    }
    out
}
