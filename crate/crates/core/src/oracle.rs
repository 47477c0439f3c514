//! Brute-force recomputation of attachment pushouts.
//!
//! Every composable word over the atoms of `A`, the new cells and the
//! boundary aliases is enumerated, aliases are rewritten to what they stand
//! for, and the resulting words are grouped by endpoints. None of this goes
//! through the colimit machinery in [`crate::pushout`].

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::builder::{build, subdivide_cell, subdivide_generator, DecompositionScript, Generator, ScriptStep};
use crate::flow::{AtomId, Flow, Path, StateId};
use crate::pushout::AttachSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("the attached flow has a cycle through {0}")]
    CyclicResult(StateId),
}

pub type PathSets = BTreeMap<(StateId, StateId), BTreeSet<Path>>;

struct Letter {
    id: AtomId,
    src: StateId,
    tgt: StateId,
}

/// Path sets of the pushout of `spec` into `a`, nonempty pairs only.
pub fn brute_force_pushout(a: &Flow, spec: &AttachSpec) -> Result<PathSets, OracleError> {
    let mut letters: Vec<Letter> = a
        .atoms()
        .map(|x| Letter { id: x.id.clone(), src: x.src.clone(), tgt: x.tgt.clone() })
        .collect();
    let mut rules: BTreeMap<AtomId, Vec<AtomId>> = a.identifications().clone();
    for c in &spec.cells {
        let id = spec.cell_atom_id(c);
        if let Some(image) = spec.boundary_map.get(c) {
            rules.insert(id.clone(), image.atoms.clone());
        }
        letters.push(Letter { id, src: spec.endpoint0.clone(), tgt: spec.endpoint1.clone() });
    }

    let mut out: PathSets = BTreeMap::new();
    for start in a.states() {
        // (word, current state, states visited)
        let mut stack: Vec<(Vec<&AtomId>, &StateId, Vec<&StateId>)> = vec![(Vec::new(), start, vec![start])];
        while let Some((word, at, visited)) = stack.pop() {
            for l in letters.iter().filter(|l| &l.src == at) {
                if visited.contains(&&l.tgt) {
                    return Err(OracleError::CyclicResult(l.tgt.clone()));
                }
                let mut longer = word.clone();
                longer.push(&l.id);
                let mut seen = visited.clone();
                seen.push(&l.tgt);
                let atoms = rewrite(&longer, &rules);
                out.entry((start.clone(), l.tgt.clone())).or_default().insert(Path {
                    src: start.clone(),
                    tgt: l.tgt.clone(),
                    atoms,
                });
                stack.push((longer, &l.tgt, seen));
            }
        }
    }
    Ok(out)
}

/// Rewrites alias letters until none is left.
fn rewrite(word: &[&AtomId], rules: &BTreeMap<AtomId, Vec<AtomId>>) -> Vec<AtomId> {
    let mut current: Vec<AtomId> = word.iter().map(|a| (*a).clone()).collect();
    while let Some(pos) = current.iter().position(|a| rules.contains_key(a)) {
        let replacement = rules[&current[pos]].clone();
        current.splice(pos..=pos, replacement);
    }
    current
}

/// Nonempty entries of a flow's path table, for comparison with the oracle.
pub fn nonempty_path_sets(f: &Flow) -> PathSets {
    f.path_table()
        .iter()
        .filter(|(_, set)| !set.is_empty())
        .map(|(k, set)| (k.clone(), set.clone()))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SizeBounds {
    pub max_states: usize,
    pub max_atoms: usize,
    pub max_attachments: usize,
}

impl Default for SizeBounds {
    fn default() -> Self {
        SizeBounds { max_states: 6, max_atoms: 8, max_attachments: 3 }
    }
}

/// A base flow, the script that built it, and one more attachment.
#[derive(Clone, Debug, Serialize)]
pub struct RandomInstance {
    pub seed: u64,
    pub script: DecompositionScript,
    #[serde(skip)]
    pub flow: Flow,
    pub spec: AttachSpec,
}

impl RandomInstance {
    pub fn boundary_hits_composite(&self) -> bool {
        self.spec.boundary_map.values().any(|p| p.len() > 1)
    }
}

fn random_image(rng: &mut ChaCha8Rng, paths: &BTreeSet<Path>, prefer_composite: bool) -> Path {
    let all: Vec<&Path> = paths.iter().collect();
    let composite: Vec<&Path> = all.iter().copied().filter(|p| p.len() > 1).collect();
    let pool = if prefer_composite && !composite.is_empty() { &composite } else { &all };
    (*pool.choose(rng).expect("nonempty")).clone()
}

/// Deterministic valid acyclic instance. States `s0..` are kept in index
/// order by every atom, which rules out cycles.
pub fn random_instance(seed: u64, bounds: SizeBounds) -> RandomInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = if bounds.max_states <= 2 { bounds.max_states } else { rng.gen_range(2..=bounds.max_states) };
    let labels: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let mut script = DecompositionScript::new(labels.iter().map(String::as_str));
    let forward_pair = |rng: &mut ChaCha8Rng| {
        let i = rng.gen_range(0..n - 1);
        let j = rng.gen_range(i + 1..n);
        (i, j)
    };
    if n < 2 {
        let flow = build(&script).expect("achronal flow");
        let spec = AttachSpec::new(labels[0].as_str(), labels[0].as_str()).in_step(0);
        return RandomInstance { seed, script, flow, spec };
    }

    // every cell, boundary cells included, is charged to the atom budget;
    // one atom is kept back for the final attachment
    let mut budget = bounds.max_atoms;
    let reserve = usize::from(budget >= 2);
    let generators = if budget == 0 { 0 } else { rng.gen_range(1..=(budget - reserve).max(1)) };
    for g in 0..generators {
        let (i, j) = forward_pair(&mut rng);
        script.generators.push(Generator { id: format!("g{g}"), src: labels[i].clone(), tgt: labels[j].clone() });
    }
    budget -= generators;
    let mut flow = build(&script).expect("generators are forward");

    let prior = rng.gen_range(0..=bounds.max_attachments.saturating_sub(1));
    for _ in 0..prior {
        let (i, j) = forward_pair(&mut rng);
        let fresh = rng.gen_range(0..=budget.saturating_sub(reserve).min(2));
        budget -= fresh;
        let mut step = ScriptStep {
            cells: (0..fresh).map(|c| format!("c{c}")).collect(),
            boundary: Vec::new(),
            endpoints: (StateId(labels[i].clone()), StateId(labels[j].clone())),
            boundary_map: BTreeMap::new(),
        };
        let existing = flow.paths_between_unchecked(&step.endpoints.0, &step.endpoints.1).clone();
        if !existing.is_empty() && budget > reserve && rng.gen_bool(0.5) {
            let prefer_composite = rng.gen_bool(0.5);
            let image = random_image(&mut rng, &existing, prefer_composite);
            budget -= 1;
            step.cells.push("b0".into());
            step.boundary.push("b0".into());
            step.boundary_map.insert("b0".into(), image.atoms);
        }
        script.steps.push(step);
        flow = build(&script).expect("forward steps keep the flow acyclic");
    }

    // final attachment, aimed at a composite boundary image most of the time
    let composite_pairs: Vec<(StateId, StateId)> = flow
        .path_table()
        .iter()
        .filter(|(_, set)| set.iter().any(|p| p.len() > 1))
        .map(|(k, _)| k.clone())
        .collect();
    let aim = !composite_pairs.is_empty() && budget > 0 && rng.gen_bool(0.75);
    let (e0, e1) = if aim {
        composite_pairs.choose(&mut rng).expect("nonempty").clone()
    } else {
        let (i, j) = forward_pair(&mut rng);
        (StateId(labels[i].clone()), StateId(labels[j].clone()))
    };
    let mut spec = AttachSpec::new(e0.as_str(), e1.as_str()).in_step(script.steps.len());
    let existing = flow.paths_between_unchecked(&e0, &e1).clone();
    let glued = if existing.is_empty() {
        0
    } else {
        rng.gen_range(usize::from(aim)..=budget.min(2))
    };
    for b in 0..glued {
        let image = random_image(&mut rng, &existing, true);
        spec = spec.boundary_cell(&format!("y{b}"), image);
    }
    budget -= glued;
    let fresh = rng.gen_range(0..=budget.min(2));
    for c in 0..fresh {
        spec = spec.cell(&format!("z{c}"));
    }
    RandomInstance { seed, script, flow, spec }
}

/// Splits one randomly chosen live atom of `script` (a base generator or a
/// non-boundary step cell) at a fresh state. `None` when there is no atom.
pub fn random_subdivision(script: &DecompositionScript, seed: u64) -> Option<DecompositionScript> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<(Option<usize>, String)> =
        script.generators.iter().map(|g| (None, g.id.clone())).collect();
    for (k, step) in script.steps.iter().enumerate() {
        for c in step.cells.iter().filter(|c| !step.boundary.contains(c)) {
            candidates.push((Some(k), c.clone()));
        }
    }
    let (step, cell) = candidates.choose(&mut rng)?.clone();
    let taken: BTreeSet<&str> = script.skeleton0.iter().map(StateId::as_str).collect();
    let fresh = (0..).map(|i| format!("m{i}")).find(|m| !taken.contains(m.as_str())).expect("unbounded");
    Some(match step {
        Some(k) => subdivide_cell(script, k, &cell, &fresh),
        None => {
            let ids: BTreeSet<&str> = script.generators.iter().map(|g| g.id.as_str()).collect();
            let name = |suffix: &str| {
                (0..)
                    .map(|i| format!("{cell}{suffix}{i}"))
                    .find(|n| !ids.contains(n.as_str()))
                    .expect("unbounded")
            };
            subdivide_generator(script, &cell, &fresh, (&name("a"), &name("b")))
        }
    })
}
