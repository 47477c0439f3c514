//! Finite acyclic flows.
//!
//! A [`Flow`] is presented by a set of states, a set of atoms (generating
//! execution paths with a source and a target) and an identification table
//! that turns some atoms into aliases for composite paths. Every flow built
//! by this crate is the free category on its live (non-aliased) atoms, so a
//! path in normal form is simply a composable sequence of live atoms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateId(pub String);

impl StateId {
    pub fn new(label: impl Into<String>) -> Self {
        StateId(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for StateId {
    fn from(s: &str) -> Self {
        StateId(s.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AtomId(pub String);

impl AtomId {
    pub fn new(label: impl Into<String>) -> Self {
        AtomId(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for AtomId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl From<&str> for AtomId {
    fn from(s: &str) -> Self {
        AtomId(s.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AtomOrigin {
    BaseGenerator,
    /// Element of the cell attached at the given step.
    CellElement(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Atom {
    pub id: AtomId,
    pub src: StateId,
    pub tgt: StateId,
    pub origin: AtomOrigin,
}

impl Atom {
    pub fn base(id: impl Into<String>, src: impl Into<String>, tgt: impl Into<String>) -> Self {
        Atom {
            id: AtomId(id.into()),
            src: StateId(src.into()),
            tgt: StateId(tgt.into()),
            origin: AtomOrigin::BaseGenerator,
        }
    }
}

/// A non-constant execution path in normal form.
///
/// Ordering is by endpoints first, then by atom sequence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Path {
    pub src: StateId,
    pub tgt: StateId,
    pub atoms: Vec<AtomId>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_atomic(&self) -> bool {
        self.atoms.len() == 1
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, a) in self.atoms.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            f.write_str(a.as_str())?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// Classes of paths leaving a state, closed under `γ₁ ~ γ₁*γ₂`.
    Minus,
    /// Classes of paths entering a state, closed under `γ₂ ~ γ₁*γ₂`.
    Plus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchClassSet {
    pub state: StateId,
    pub direction: Direction,
    /// Sorted by smallest member.
    pub classes: Vec<BTreeSet<Path>>,
}

impl BranchClassSet {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReachabilityReport {
    pub unreachable: BTreeSet<StateId>,
    pub deadlocks: BTreeSet<StateId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("the atom graph has a cycle through {}", display_states(.0))]
    CyclicGraph(Vec<StateId>),
    #[error("atom {atom} refers to unknown state {state}")]
    DanglingEndpoint { atom: AtomId, state: StateId },
    #[error("ill-typed identification of {atom}: {reason}")]
    IllTypedIdentification { atom: AtomId, reason: String },
    #[error("duplicate state {0}")]
    DuplicateState(StateId),
    #[error("duplicate atom {0}")]
    DuplicateAtom(AtomId),
    #[error("invalid identifier {0:?}: identifiers must be nonempty and must not contain '*'")]
    InvalidIdentifier(String),
    #[error("unknown state {0}")]
    UnknownState(StateId),
    #[error("unknown atom {0}")]
    UnknownAtom(AtomId),
    #[error("{0} is not a path of this flow")]
    UnknownPath(String),
    #[error("cannot compose: {0}")]
    NotComposable(String),
}

fn display_states(states: &[StateId]) -> String {
    states.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(" -> ")
}

/// Raw input for [`Flow::validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub states: Vec<StateId>,
    pub atoms: Vec<Atom>,
    /// Alias atom -> atom sequence it stands for.
    pub identifications: Vec<(AtomId, Vec<AtomId>)>,
}

impl Presentation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn state(mut self, s: &str) -> Self {
        self.states.push(StateId::from(s));
        self
    }

    pub fn states<'a>(mut self, labels: impl IntoIterator<Item = &'a str>) -> Self {
        self.states.extend(labels.into_iter().map(StateId::from));
        self
    }

    pub fn atom(mut self, id: &str, src: &str, tgt: &str) -> Self {
        self.atoms.push(Atom::base(id, src, tgt));
        self
    }

    pub fn identify(mut self, alias: &str, target: &[&str]) -> Self {
        self.identifications
            .push((AtomId::from(alias), target.iter().map(|a| AtomId::from(*a)).collect()));
        self
    }
}

type PathTable = BTreeMap<(StateId, StateId), BTreeSet<Path>>;

/// A validated finite acyclic flow with its materialized path set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flow {
    states: BTreeSet<StateId>,
    atoms: BTreeMap<AtomId, Atom>,
    /// Alias -> fully expanded live atom sequence.
    identifications: BTreeMap<AtomId, Vec<AtomId>>,
    paths: PathTable,
}

pub(crate) fn check_identifier(s: &str) -> Result<(), FlowError> {
    if s.is_empty() || s.contains('*') {
        Err(FlowError::InvalidIdentifier(s.to_string()))
    } else {
        Ok(())
    }
}

impl Flow {
    pub fn validate(presentation: Presentation) -> Result<Flow, FlowError> {
        let mut states = BTreeSet::new();
        for s in presentation.states {
            check_identifier(s.as_str())?;
            if !states.insert(s.clone()) {
                return Err(FlowError::DuplicateState(s));
            }
        }
        let mut atoms = BTreeMap::new();
        for a in presentation.atoms {
            check_identifier(a.id.as_str())?;
            for end in [&a.src, &a.tgt] {
                if !states.contains(end) {
                    return Err(FlowError::DanglingEndpoint { atom: a.id.clone(), state: end.clone() });
                }
            }
            if atoms.contains_key(&a.id) {
                return Err(FlowError::DuplicateAtom(a.id));
            }
            atoms.insert(a.id.clone(), a);
        }
        if let Some(cycle) = find_cycle(&states, atoms.values()) {
            return Err(FlowError::CyclicGraph(cycle));
        }

        let mut raw: BTreeMap<AtomId, Vec<AtomId>> = BTreeMap::new();
        for (alias, target) in presentation.identifications {
            let ill = |reason: &str| FlowError::IllTypedIdentification {
                atom: alias.clone(),
                reason: reason.to_string(),
            };
            if !atoms.contains_key(&alias) {
                return Err(ill("the identified atom does not exist"));
            }
            if target.is_empty() {
                return Err(ill("the replacement sequence is empty"));
            }
            if raw.contains_key(&alias) {
                return Err(ill("the atom is identified twice"));
            }
            raw.insert(alias, target);
        }
        let mut identifications = BTreeMap::new();
        for alias in raw.keys() {
            let mut visiting = BTreeSet::new();
            let expanded = expand_alias(alias, &raw, &atoms, &mut visiting)?;
            let atom = &atoms[alias];
            let (src, tgt) = endpoints_of(&expanded, &atoms).map_err(|reason| {
                FlowError::IllTypedIdentification { atom: alias.clone(), reason }
            })?;
            if src != atom.src || tgt != atom.tgt {
                return Err(FlowError::IllTypedIdentification {
                    atom: alias.clone(),
                    reason: format!(
                        "replacement runs {src} -> {tgt} but the atom runs {} -> {}",
                        atom.src, atom.tgt
                    ),
                });
            }
            identifications.insert(alias.clone(), expanded);
        }

        let paths = enumerate_free_paths(&states, &atoms, &identifications);
        Ok(Flow { states, atoms, identifications, paths })
    }

    /// Assembles a flow whose path table has been computed elsewhere.
    /// Callers guarantee that `paths` is closed under concatenation.
    pub(crate) fn from_parts(
        states: BTreeSet<StateId>,
        atoms: BTreeMap<AtomId, Atom>,
        identifications: BTreeMap<AtomId, Vec<AtomId>>,
        mut paths: PathTable,
    ) -> Flow {
        for a in &states {
            for b in &states {
                paths.entry((a.clone(), b.clone())).or_default();
            }
        }
        Flow { states, atoms, identifications, paths }
    }

    /// Free flow on the given live atoms, no aliases.
    pub(crate) fn free(states: BTreeSet<StateId>, atoms: BTreeMap<AtomId, Atom>) -> Flow {
        let identifications = BTreeMap::new();
        let paths = enumerate_free_paths(&states, &atoms, &identifications);
        Flow { states, atoms, identifications, paths }
    }

    pub fn states(&self) -> &BTreeSet<StateId> {
        &self.states
    }

    pub fn has_state(&self, s: &StateId) -> bool {
        self.states.contains(s)
    }

    /// All atoms, aliases included.
    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.values()
    }

    pub fn atom(&self, id: &AtomId) -> Option<&Atom> {
        self.atoms.get(id)
    }

    pub fn live_atoms(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.values().filter(move |a| !self.identifications.contains_key(&a.id))
    }

    pub fn identifications(&self) -> &BTreeMap<AtomId, Vec<AtomId>> {
        &self.identifications
    }

    fn check_state(&self, s: &StateId) -> Result<(), FlowError> {
        if self.states.contains(s) {
            Ok(())
        } else {
            Err(FlowError::UnknownState(s.clone()))
        }
    }

    pub fn paths_between(&self, from: &StateId, to: &StateId) -> Result<&BTreeSet<Path>, FlowError> {
        self.check_state(from)?;
        self.check_state(to)?;
        Ok(&self.paths[&(from.clone(), to.clone())])
    }

    pub(crate) fn paths_between_unchecked(&self, from: &StateId, to: &StateId) -> &BTreeSet<Path> {
        &self.paths[&(from.clone(), to.clone())]
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.paths.values().flatten()
    }

    pub fn path_count(&self) -> usize {
        self.paths.values().map(|s| s.len()).sum()
    }

    pub fn path_table(&self) -> &BTreeMap<(StateId, StateId), BTreeSet<Path>> {
        &self.paths
    }

    pub fn contains_path(&self, p: &Path) -> bool {
        self.paths
            .get(&(p.src.clone(), p.tgt.clone()))
            .is_some_and(|set| set.contains(p))
    }

    /// Paths leaving `s`.
    pub fn paths_from<'a>(&'a self, s: &'a StateId) -> impl Iterator<Item = &'a Path> + 'a {
        self.paths
            .range((s.clone(), StateId(String::new()))..)
            .take_while(move |((a, _), _)| a == s)
            .flat_map(|(_, set)| set.iter())
    }

    /// Paths entering `s`.
    pub fn paths_into<'a>(&'a self, s: &'a StateId) -> impl Iterator<Item = &'a Path> + 'a {
        self.paths
            .iter()
            .filter(move |((_, b), _)| b == s)
            .flat_map(|(_, set)| set.iter())
    }

    /// Normal form of an atom sequence: aliases are expanded, composability
    /// is checked against this flow's endpoints.
    pub fn path_from_atoms<A: AsRef<str>>(&self, atoms: &[A]) -> Result<Path, FlowError> {
        if atoms.is_empty() {
            return Err(FlowError::NotComposable("empty atom sequence".into()));
        }
        let mut out = Vec::new();
        for a in atoms {
            let id = AtomId(a.as_ref().to_string());
            if !self.atoms.contains_key(&id) {
                return Err(FlowError::UnknownAtom(id));
            }
            match self.identifications.get(&id) {
                Some(expansion) => out.extend(expansion.iter().cloned()),
                None => out.push(id),
            }
        }
        let (src, tgt) = endpoints_of(&out, &self.atoms).map_err(FlowError::NotComposable)?;
        Ok(Path { src, tgt, atoms: out })
    }

    pub fn compose(&self, p: &Path, q: &Path) -> Result<Path, FlowError> {
        for x in [p, q] {
            if !self.contains_path(x) {
                return Err(FlowError::UnknownPath(x.to_string()));
            }
        }
        if p.tgt != q.src {
            return Err(FlowError::NotComposable(format!(
                "{p} ends at {} but {q} starts at {}",
                p.tgt, q.src
            )));
        }
        let mut atoms = p.atoms.clone();
        atoms.extend(q.atoms.iter().cloned());
        Ok(Path { src: p.src.clone(), tgt: q.tgt.clone(), atoms })
    }

    /// The restriction over `subset`: same paths between states of `subset`,
    /// regenerated by the through-paths that cannot be cut at a kept state.
    pub fn restrict(&self, subset: &BTreeSet<StateId>) -> Result<Restriction, FlowError> {
        for s in subset {
            self.check_state(s)?;
        }
        let mut atoms = BTreeMap::new();
        let mut lift = BTreeMap::new();
        for start in subset {
            // depth-first over live atoms, stopping at the first kept state
            let mut stack: Vec<Vec<&Atom>> = self
                .live_atoms()
                .filter(|a| &a.src == start)
                .map(|a| vec![a])
                .collect();
            while let Some(seq) = stack.pop() {
                let last = seq.last().expect("nonempty");
                if subset.contains(&last.tgt) {
                    let path = Path {
                        src: start.clone(),
                        tgt: last.tgt.clone(),
                        atoms: seq.iter().map(|a| a.id.clone()).collect(),
                    };
                    let id = AtomId(path.to_string());
                    atoms.insert(
                        id.clone(),
                        Atom {
                            id: id.clone(),
                            src: path.src.clone(),
                            tgt: path.tgt.clone(),
                            origin: AtomOrigin::BaseGenerator,
                        },
                    );
                    lift.insert(id, path);
                    continue;
                }
                for next in self.live_atoms().filter(|a| a.src == last.tgt) {
                    let mut longer = seq.clone();
                    longer.push(next);
                    stack.push(longer);
                }
            }
        }
        Ok(Restriction { flow: Flow::free(subset.clone(), atoms), lift })
    }

    /// Classes of `R⁻` (paths by source) or `R⁺` (paths by target) at every state.
    pub fn branch_classes(&self, direction: Direction) -> BTreeMap<StateId, BranchClassSet> {
        self.states
            .iter()
            .map(|s| (s.clone(), self.branch_classes_at(s, direction)))
            .collect()
    }

    pub fn branch_classes_at(&self, state: &StateId, direction: Direction) -> BranchClassSet {
        let members: Vec<&Path> = match direction {
            Direction::Minus => self.paths_from(state).collect(),
            Direction::Plus => self.paths_into(state).collect(),
        };
        let index: BTreeMap<&Path, usize> = members.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let mut uf = UnionFind::new(members.len());
        for (i, p) in members.iter().enumerate() {
            match direction {
                // p ~ p*q for every q leaving t(p)
                Direction::Minus => {
                    for q in self.paths_from(&p.tgt) {
                        let pq = concat(p, q);
                        uf.union(i, index[&pq]);
                    }
                }
                // p ~ q*p for every q entering s(p)
                Direction::Plus => {
                    for q in self.paths_into(&p.src) {
                        let qp = concat(q, p);
                        uf.union(i, index[&qp]);
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, BTreeSet<Path>> = BTreeMap::new();
        for (i, p) in members.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().insert((*p).clone());
        }
        let mut classes: Vec<BTreeSet<Path>> = groups.into_values().collect();
        classes.sort_by(|a, b| a.iter().next().cmp(&b.iter().next()));
        BranchClassSet { state: state.clone(), direction, classes }
    }

    pub fn initial_states(&self) -> BTreeSet<StateId> {
        self.states
            .iter()
            .filter(|s| self.paths_into(s).next().is_none())
            .cloned()
            .collect()
    }

    pub fn final_states(&self) -> BTreeSet<StateId> {
        self.states
            .iter()
            .filter(|s| self.paths_from(s).next().is_none())
            .cloned()
            .collect()
    }

    pub fn reachability_report(
        &self,
        designated_initial: &BTreeSet<StateId>,
        designated_final: &BTreeSet<StateId>,
    ) -> Result<ReachabilityReport, FlowError> {
        for s in designated_initial.iter().chain(designated_final) {
            self.check_state(s)?;
        }
        let reached: BTreeSet<&StateId> = designated_initial
            .iter()
            .flat_map(|s| self.paths_from(s).map(|p| &p.tgt))
            .collect();
        let unreachable = self
            .states
            .iter()
            .filter(|s| !designated_initial.contains(*s) && !reached.contains(s))
            .cloned()
            .collect();
        let deadlocks = self
            .states
            .iter()
            .filter(|s| !designated_final.contains(*s) && self.paths_from(s).next().is_none())
            .cloned()
            .collect();
        Ok(ReachabilityReport { unreachable, deadlocks })
    }

    /// `|P_{α,β}|` in sorted state order, rows indexed by source.
    pub fn path_count_matrix(&self) -> Vec<Vec<usize>> {
        self.states
            .iter()
            .map(|a| self.states.iter().map(|b| self.paths_between_unchecked(a, b).len()).collect())
            .collect()
    }

    pub(crate) fn raw_atoms(&self) -> &BTreeMap<AtomId, Atom> {
        &self.atoms
    }
}

/// `X↾_Y` together with the map sending each of its atoms to the path of the
/// ambient flow it stands for.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub flow: Flow,
    pub lift: BTreeMap<AtomId, Path>,
}

impl Restriction {
    pub fn lift_path(&self, p: &Path) -> Path {
        let atoms = p
            .atoms
            .iter()
            .flat_map(|a| self.lift[a].atoms.iter().cloned())
            .collect();
        Path { src: p.src.clone(), tgt: p.tgt.clone(), atoms }
    }
}

pub(crate) fn concat(p: &Path, q: &Path) -> Path {
    debug_assert_eq!(p.tgt, q.src);
    let mut atoms = p.atoms.clone();
    atoms.extend(q.atoms.iter().cloned());
    Path { src: p.src.clone(), tgt: q.tgt.clone(), atoms }
}

fn expand_alias(
    alias: &AtomId,
    raw: &BTreeMap<AtomId, Vec<AtomId>>,
    atoms: &BTreeMap<AtomId, Atom>,
    visiting: &mut BTreeSet<AtomId>,
) -> Result<Vec<AtomId>, FlowError> {
    if !visiting.insert(alias.clone()) {
        return Err(FlowError::IllTypedIdentification {
            atom: alias.clone(),
            reason: "identifications refer to each other circularly".into(),
        });
    }
    let mut out = Vec::new();
    for a in &raw[alias] {
        if !atoms.contains_key(a) {
            return Err(FlowError::IllTypedIdentification {
                atom: alias.clone(),
                reason: format!("unknown atom {a} in the replacement"),
            });
        }
        if raw.contains_key(a) {
            out.extend(expand_alias(a, raw, atoms, visiting)?);
        } else {
            out.push(a.clone());
        }
    }
    visiting.remove(alias);
    Ok(out)
}

fn endpoints_of(seq: &[AtomId], atoms: &BTreeMap<AtomId, Atom>) -> Result<(StateId, StateId), String> {
    let first = &atoms[&seq[0]];
    let mut at = &first.tgt;
    for w in seq.windows(2) {
        let next = &atoms[&w[1]];
        if &next.src != at {
            return Err(format!("{} ends at {} but {} starts at {}", w[0], at, w[1], next.src));
        }
        at = &next.tgt;
    }
    Ok((first.src.clone(), at.clone()))
}

fn find_cycle<'a>(
    states: &BTreeSet<StateId>,
    atoms: impl Iterator<Item = &'a Atom>,
) -> Option<Vec<StateId>> {
    let mut succ: BTreeMap<&StateId, Vec<&StateId>> = BTreeMap::new();
    for a in atoms {
        succ.entry(&a.src).or_default().push(&a.tgt);
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let mut mark: BTreeMap<&StateId, Mark> = states.iter().map(|s| (s, Mark::New)).collect();
    for root in states {
        if mark[root] != Mark::New {
            continue;
        }
        // iterative DFS keeping the open chain for cycle reporting
        let mut chain: Vec<(&StateId, usize)> = vec![(root, 0)];
        mark.insert(root, Mark::Open);
        while let Some((node, next)) = chain.last().copied() {
            let children = succ.get(node).map(|v| v.as_slice()).unwrap_or(&[]);
            if next < children.len() {
                chain.last_mut().expect("nonempty").1 += 1;
                let child = children[next];
                match mark[child] {
                    Mark::New => {
                        mark.insert(child, Mark::Open);
                        chain.push((child, 0));
                    }
                    Mark::Open => {
                        let start = chain.iter().position(|(s, _)| *s == child).expect("open on chain");
                        let mut cycle: Vec<StateId> = chain[start..].iter().map(|(s, _)| (*s).clone()).collect();
                        cycle.push(child.clone());
                        return Some(cycle);
                    }
                    Mark::Done => {}
                }
            } else {
                mark.insert(node, Mark::Done);
                chain.pop();
            }
        }
    }
    None
}

fn enumerate_free_paths(
    states: &BTreeSet<StateId>,
    atoms: &BTreeMap<AtomId, Atom>,
    identifications: &BTreeMap<AtomId, Vec<AtomId>>,
) -> PathTable {
    let mut out: PathTable = BTreeMap::new();
    for a in states {
        for b in states {
            out.insert((a.clone(), b.clone()), BTreeSet::new());
        }
    }
    let mut by_src: BTreeMap<&StateId, Vec<&Atom>> = BTreeMap::new();
    for a in atoms.values().filter(|a| !identifications.contains_key(&a.id)) {
        by_src.entry(&a.src).or_default().push(a);
    }
    for start in states {
        let mut stack: Vec<Path> = by_src
            .get(start)
            .into_iter()
            .flatten()
            .map(|a| Path { src: start.clone(), tgt: a.tgt.clone(), atoms: vec![a.id.clone()] })
            .collect();
        while let Some(p) = stack.pop() {
            for a in by_src.get(&p.tgt).into_iter().flatten() {
                let mut atoms = p.atoms.clone();
                atoms.push(a.id.clone());
                stack.push(Path { src: start.clone(), tgt: a.tgt.clone(), atoms });
            }
            out.get_mut(&(p.src.clone(), p.tgt.clone())).expect("all pairs present").insert(p);
        }
    }
    out
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
