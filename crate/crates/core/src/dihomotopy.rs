//! Flow isomorphism and T-homotopy equivalence.
//!
//! With discrete path spaces a weak S-homotopy equivalence is an isomorphism
//! of flows. Every flow here is free on its live atoms, so an isomorphism is
//! a state bijection together with a bijection of indecomposable paths.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::flow::{concat, AtomId, Direction, Flow, Path, Restriction, StateId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Equation {
    /// The maps are not defined on every state and path.
    Totality,
    /// An image is not a state or path of the codomain.
    Codomain,
    SourceLaw,
    TargetLaw,
    CompositionLaw,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Equation::Totality => "totality",
            Equation::Codomain => "codomain",
            Equation::SourceLaw => "f(s(x)) = s(f(x))",
            Equation::TargetLaw => "f(t(x)) = t(f(x))",
            Equation::CompositionLaw => "f(x*y) = f(x)*f(y)",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("not a morphism of flows: {equation} fails at {witness}")]
    NotAMorphism { equation: Equation, witness: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search budget exceeded: {0}")]
    SearchBudgetExceeded(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlowMorphism {
    pub state_map: BTreeMap<StateId, StateId>,
    pub path_map: BTreeMap<Path, Path>,
}

impl FlowMorphism {
    pub fn state(&self, s: &StateId) -> &StateId {
        &self.state_map[s]
    }

    pub fn path(&self, p: &Path) -> &Path {
        &self.path_map[p]
    }

    pub fn identity(x: &Flow) -> FlowMorphism {
        FlowMorphism {
            state_map: x.states().iter().map(|s| (s.clone(), s.clone())).collect(),
            path_map: x.paths().map(|p| (p.clone(), p.clone())).collect(),
        }
    }

    /// Two-sided inverse when both maps are bijections.
    pub fn inverse(&self) -> Option<FlowMorphism> {
        let state_map: BTreeMap<_, _> = self.state_map.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        let path_map: BTreeMap<_, _> = self.path_map.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        (state_map.len() == self.state_map.len() && path_map.len() == self.path_map.len())
            .then_some(FlowMorphism { state_map, path_map })
    }

    pub fn then(&self, g: &FlowMorphism) -> FlowMorphism {
        FlowMorphism {
            state_map: self.state_map.iter().map(|(a, b)| (a.clone(), g.state_map[b].clone())).collect(),
            path_map: self.path_map.iter().map(|(a, b)| (a.clone(), g.path_map[b].clone())).collect(),
        }
    }
}

fn fail<T>(equation: Equation, witness: impl Into<String>) -> Result<T, MorphismError> {
    Err(MorphismError::NotAMorphism { equation, witness: witness.into() })
}

/// Validates candidate maps as a morphism of flows `x → y`.
pub fn is_morphism(
    state_map: BTreeMap<StateId, StateId>,
    path_map: BTreeMap<Path, Path>,
    x: &Flow,
    y: &Flow,
) -> Result<FlowMorphism, MorphismError> {
    if let Some(s) = x.states().iter().find(|s| !state_map.contains_key(*s)) {
        return fail(Equation::Totality, format!("state {s}"));
    }
    if let Some(p) = x.paths().find(|p| !path_map.contains_key(*p)) {
        return fail(Equation::Totality, format!("path {p}"));
    }
    if let Some((s, t)) = state_map.iter().find(|(_, t)| !y.has_state(t)) {
        return fail(Equation::Codomain, format!("state {s} -> {t}"));
    }
    for (p, q) in &path_map {
        if !x.contains_path(p) {
            return fail(Equation::Totality, format!("{p} is not a path of the domain"));
        }
        if !y.contains_path(q) {
            return fail(Equation::Codomain, format!("path {p} -> {q}"));
        }
        if state_map[&p.src] != q.src {
            return fail(Equation::SourceLaw, format!("path {p} -> {q}"));
        }
        if state_map[&p.tgt] != q.tgt {
            return fail(Equation::TargetLaw, format!("path {p} -> {q}"));
        }
    }
    for p in x.paths() {
        for q in x.paths_from(&p.tgt) {
            let pq = concat(p, q);
            if path_map[&pq] != concat(&path_map[p], &path_map[q]) {
                return fail(Equation::CompositionLaw, format!("({p}, {q})"));
            }
        }
    }
    Ok(FlowMorphism { state_map, path_map })
}

/// Builds the morphism `x → y` induced by a state map and a map from the
/// atoms of `x` to paths of `y`.
fn induced(
    x: &Flow,
    state_map: BTreeMap<StateId, StateId>,
    atom_map: &BTreeMap<AtomId, Path>,
) -> FlowMorphism {
    let path_map = x
        .paths()
        .map(|p| {
            let mut it = p.atoms.iter().map(|a| &atom_map[a]);
            let first = it.next().expect("nonempty").clone();
            (p.clone(), it.fold(first, |acc, q| concat(&acc, q)))
        })
        .collect();
    FlowMorphism { state_map, path_map }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Signature {
    out_paths: usize,
    in_paths: usize,
    out_atoms: usize,
    in_atoms: usize,
    initial: bool,
    terminal: bool,
}

fn signature(f: &Flow, s: &StateId) -> Signature {
    Signature {
        out_paths: f.paths_from(s).count(),
        in_paths: f.paths_into(s).count(),
        out_atoms: f.live_atoms().filter(|a| &a.src == s).count(),
        in_atoms: f.live_atoms().filter(|a| &a.tgt == s).count(),
        initial: f.paths_into(s).next().is_none(),
        terminal: f.paths_from(s).next().is_none(),
    }
}

/// Live atoms grouped by endpoint pair, each group sorted.
fn atom_table(f: &Flow) -> BTreeMap<(StateId, StateId), Vec<AtomId>> {
    let mut out: BTreeMap<(StateId, StateId), Vec<AtomId>> = BTreeMap::new();
    for a in f.live_atoms() {
        out.entry((a.src.clone(), a.tgt.clone())).or_default().push(a.id.clone());
    }
    out
}

fn atom_count(table: &BTreeMap<(StateId, StateId), Vec<AtomId>>, a: &StateId, b: &StateId) -> usize {
    table.get(&(a.clone(), b.clone())).map_or(0, Vec::len)
}

/// Pairs atoms of `x` with atoms of `target` along `state_map`, in sorted
/// order within every endpoint pair. `None` when some pair counts differ.
fn match_atoms(
    x_atoms: &BTreeMap<(StateId, StateId), Vec<AtomId>>,
    target_atoms: &BTreeMap<(StateId, StateId), Vec<AtomId>>,
    state_map: &BTreeMap<StateId, StateId>,
) -> Option<BTreeMap<AtomId, (StateId, StateId, AtomId)>> {
    let mut used = 0;
    let mut out = BTreeMap::new();
    for ((a, b), ids) in x_atoms {
        let key = (state_map[a].clone(), state_map[b].clone());
        let image = target_atoms.get(&key)?;
        if image.len() != ids.len() {
            return None;
        }
        used += image.len();
        for (i, j) in ids.iter().zip(image) {
            out.insert(i.clone(), (key.0.clone(), key.1.clone(), j.clone()));
        }
    }
    let total: usize = target_atoms.values().map(Vec::len).sum();
    (used == total).then_some(out)
}

/// An isomorphism `x → y`, if one exists. Searches state bijections in sorted
/// order, pruned by per-state signatures and pairwise atom and path counts.
pub fn is_isomorphic(x: &Flow, y: &Flow) -> Option<FlowMorphism> {
    if x.states().len() != y.states().len()
        || x.path_count() != y.path_count()
        || x.live_atoms().count() != y.live_atoms().count()
    {
        return None;
    }
    let xs: Vec<&StateId> = x.states().iter().collect();
    let ys: Vec<&StateId> = y.states().iter().collect();
    let xsig: Vec<Signature> = xs.iter().map(|s| signature(x, s)).collect();
    let ysig: Vec<Signature> = ys.iter().map(|s| signature(y, s)).collect();
    let xa = atom_table(x);
    let ya = atom_table(y);

    let mut assignment: Vec<usize> = Vec::with_capacity(xs.len());
    let mut used = vec![false; ys.len()];
    let consistent = |assignment: &[usize], cand: usize| -> bool {
        let i = assignment.len();
        let pairs = assignment.iter().copied().enumerate().chain(std::iter::once((i, cand)));
        pairs.into_iter().all(|(k, yk)| {
            atom_count(&xa, xs[i], xs[k]) == atom_count(&ya, ys[cand], ys[yk])
                && atom_count(&xa, xs[k], xs[i]) == atom_count(&ya, ys[yk], ys[cand])
                && x.paths_between_unchecked(xs[i], xs[k]).len()
                    == y.paths_between_unchecked(ys[cand], ys[yk]).len()
                && x.paths_between_unchecked(xs[k], xs[i]).len()
                    == y.paths_between_unchecked(ys[yk], ys[cand]).len()
        })
    };

    // explicit stack of next candidate per depth
    let mut next = vec![0usize];
    loop {
        let depth = assignment.len();
        if depth == xs.len() {
            let state_map: BTreeMap<StateId, StateId> = assignment
                .iter()
                .enumerate()
                .map(|(i, &j)| (xs[i].clone(), ys[j].clone()))
                .collect();
            let matched = match_atoms(&xa, &ya, &state_map)?;
            let atom_map = matched
                .into_iter()
                .map(|(a, (src, tgt, b))| (a, Path { src, tgt, atoms: vec![b] }))
                .collect();
            return Some(induced(x, state_map, &atom_map));
        }
        let start = next[depth];
        let found = (start..ys.len()).find(|&j| !used[j] && xsig[depth] == ysig[j] && consistent(&assignment, j));
        match found {
            Some(j) => {
                next[depth] = j + 1;
                used[j] = true;
                assignment.push(j);
                next.push(0);
            }
            None => {
                next.pop();
                let j = assignment.pop()?;
                used[j] = false;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition1 {
    pub passed: bool,
    /// The state map of the isomorphism onto the restriction, or a counterexample.
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchFailure {
    pub state: StateId,
    pub minus_classes: usize,
    pub plus_classes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition2 {
    pub passed: bool,
    pub failures: Vec<BranchFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReachFailure {
    pub state: StateId,
    pub reached_from_image: bool,
    pub reaches_image: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition3 {
    pub passed: bool,
    pub failures: Vec<ReachFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct THomotopyReport {
    pub condition1: Condition1,
    pub condition2: Condition2,
    pub condition3: Condition3,
    pub verdict: bool,
}

fn check_condition1(f: &FlowMorphism, x: &Flow, y: &Flow, image: &BTreeSet<StateId>) -> Condition1 {
    let no = |detail: String| Condition1 { passed: false, detail };
    if image.len() != x.states().len() {
        let mut seen: BTreeMap<&StateId, &StateId> = BTreeMap::new();
        for (a, b) in &f.state_map {
            if let Some(prev) = seen.insert(b, a) {
                return no(format!("states {prev} and {a} both map to {b}"));
            }
        }
    }
    let restricted: BTreeSet<&Path> = image
        .iter()
        .flat_map(|a| image.iter().map(move |b| (a, b)))
        .flat_map(|(a, b)| y.paths_between_unchecked(a, b).iter())
        .collect();
    let mut preimage: BTreeMap<&Path, &Path> = BTreeMap::new();
    for p in x.paths() {
        let q = &f.path_map[p];
        if let Some(prev) = preimage.insert(q, p) {
            return no(format!("paths {prev} and {p} both map to {q}"));
        }
    }
    if let Some(missing) = restricted.iter().find(|q| !preimage.contains_key(*q)) {
        return no(format!(
            "path {missing} from {} to {} has no preimage",
            missing.src, missing.tgt
        ));
    }
    let mapping: Vec<String> = f.state_map.iter().map(|(a, b)| format!("{a}->{b}")).collect();
    Condition1 { passed: true, detail: mapping.join(", ") }
}

fn check_condition2(y: &Flow, outside: &[&StateId]) -> Condition2 {
    let failures: Vec<BranchFailure> = outside
        .iter()
        .map(|s| BranchFailure {
            state: (*s).clone(),
            minus_classes: y.branch_classes_at(s, Direction::Minus).len(),
            plus_classes: y.branch_classes_at(s, Direction::Plus).len(),
        })
        .filter(|b| b.minus_classes != 1 || b.plus_classes != 1)
        .collect();
    Condition2 { passed: failures.is_empty(), failures }
}

fn check_condition3(y: &Flow, image: &BTreeSet<StateId>, outside: &[&StateId]) -> Condition3 {
    let failures: Vec<ReachFailure> = outside
        .iter()
        .map(|s| ReachFailure {
            state: (*s).clone(),
            reached_from_image: y.paths_into(s).any(|u| image.contains(&u.src)),
            reaches_image: y.paths_from(s).any(|v| image.contains(&v.tgt)),
        })
        .filter(|r| !r.reached_from_image || !r.reaches_image)
        .collect();
    Condition3 { passed: failures.is_empty(), failures }
}

/// Evaluates the three conditions of a T-homotopy equivalence for `f : x → y`.
pub fn check_t_homotopy(f: &FlowMorphism, x: &Flow, y: &Flow) -> THomotopyReport {
    let image: BTreeSet<StateId> = f.state_map.values().cloned().collect();
    let outside: Vec<&StateId> = y.states().iter().filter(|s| !image.contains(*s)).collect();
    let condition1 = check_condition1(f, x, y, &image);
    let condition2 = check_condition2(y, &outside);
    let condition3 = check_condition3(y, &image, &outside);
    let verdict = condition1.passed && condition2.passed && condition3.passed;
    THomotopyReport { condition1, condition2, condition3, verdict }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_target_states: usize,
    pub max_candidates: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_target_states: 12, max_candidates: 1_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SearchOutcome {
    pub found: Option<(FlowMorphism, THomotopyReport)>,
    /// First candidate passing condition 1 when none is accepted.
    pub closest: Option<(FlowMorphism, THomotopyReport)>,
    pub candidates: usize,
}

/// Morphism `x → y` with the given injective state map whose atoms land on
/// the atoms of the restriction of `y` to the image, if the counts allow it.
fn restriction_morphism(
    x: &Flow,
    xa: &BTreeMap<(StateId, StateId), Vec<AtomId>>,
    restriction: &Restriction,
    state_map: BTreeMap<StateId, StateId>,
) -> Option<FlowMorphism> {
    let ra = atom_table(&restriction.flow);
    let matched = match_atoms(xa, &ra, &state_map)?;
    let atom_map = matched
        .into_iter()
        .map(|(a, (_, _, b))| (a, restriction.lift[&b].clone()))
        .collect();
    Some(induced(x, state_map, &atom_map))
}

/// Enumerates injections `X⁰ ↪ Y⁰` in sorted order and returns the first
/// morphism accepted by [`check_t_homotopy`].
pub fn search_t_homotopy(x: &Flow, y: &Flow, budget: SearchBudget) -> Result<SearchOutcome, SearchError> {
    if y.states().len() > budget.max_target_states {
        return Err(SearchError::SearchBudgetExceeded(format!(
            "target has {} states, limit is {}",
            y.states().len(),
            budget.max_target_states
        )));
    }
    let xs: Vec<&StateId> = x.states().iter().collect();
    let ys: Vec<&StateId> = y.states().iter().collect();
    let mut outcome = SearchOutcome::default();
    if xs.len() > ys.len() {
        return Ok(outcome);
    }
    let xa = atom_table(x);
    let count = |f: &Flow, a: &StateId, b: &StateId| f.paths_between_unchecked(a, b).len();

    let mut assignment: Vec<usize> = Vec::new();
    let mut used = vec![false; ys.len()];
    let mut next = vec![0usize];
    loop {
        let depth = assignment.len();
        if depth == xs.len() {
            outcome.candidates += 1;
            if outcome.candidates > budget.max_candidates {
                return Err(SearchError::SearchBudgetExceeded(format!(
                    "more than {} candidate injections",
                    budget.max_candidates
                )));
            }
            let state_map: BTreeMap<StateId, StateId> = assignment
                .iter()
                .enumerate()
                .map(|(i, &j)| (xs[i].clone(), ys[j].clone()))
                .collect();
            let image: BTreeSet<StateId> = state_map.values().cloned().collect();
            let restriction = y.restrict(&image).expect("image states belong to the target");
            if let Some(f) = restriction_morphism(x, &xa, &restriction, state_map) {
                let report = check_t_homotopy(&f, x, y);
                if report.verdict {
                    outcome.found = Some((f, report));
                    return Ok(outcome);
                }
                if outcome.closest.is_none() && report.condition1.passed {
                    outcome.closest = Some((f, report));
                }
            }
            next.pop();
            match assignment.pop() {
                Some(j) => used[j] = false,
                None => return Ok(outcome),
            }
            continue;
        }
        let start = next[depth];
        let found = (start..ys.len()).find(|&j| {
            !used[j]
                && assignment.iter().enumerate().all(|(k, &yk)| {
                    count(x, xs[k], xs[depth]) == count(y, ys[yk], ys[j])
                        && count(x, xs[depth], xs[k]) == count(y, ys[j], ys[yk])
                })
        });
        match found {
            Some(j) => {
                next[depth] = j + 1;
                used[j] = true;
                assignment.push(j);
                next.push(0);
            }
            None => {
                next.pop();
                match assignment.pop() {
                    Some(j) => used[j] = false,
                    None => return Ok(outcome),
                }
            }
        }
    }
}

pub fn find_t_homotopy(x: &Flow, y: &Flow) -> Result<Option<(FlowMorphism, THomotopyReport)>, SearchError> {
    Ok(search_t_homotopy(x, y, SearchBudget::default())?.found)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StateInvariants {
    pub state: StateId,
    pub in_paths: usize,
    pub out_paths: usize,
    pub minus_classes: usize,
    pub plus_classes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantSummary {
    pub states: Vec<StateInvariants>,
    pub initial: BTreeSet<StateId>,
    #[serde(rename = "final")]
    pub final_states: BTreeSet<StateId>,
    pub path_count: usize,
    /// Row and column order of `matrix`.
    pub order: Vec<StateId>,
    pub matrix: Vec<Vec<usize>>,
}

pub fn invariant_summary(x: &Flow) -> InvariantSummary {
    let states = x
        .states()
        .iter()
        .map(|s| StateInvariants {
            state: s.clone(),
            in_paths: x.paths_into(s).count(),
            out_paths: x.paths_from(s).count(),
            minus_classes: x.branch_classes_at(s, Direction::Minus).len(),
            plus_classes: x.branch_classes_at(s, Direction::Plus).len(),
        })
        .collect();
    InvariantSummary {
        states,
        initial: x.initial_states(),
        final_states: x.final_states(),
        path_count: x.path_count(),
        order: x.states().iter().cloned().collect(),
        matrix: x.path_count_matrix(),
    }
}
