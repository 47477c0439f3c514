//! Pushout of `Glob(∂Z) → Glob(Z)` along `φ : Glob(∂Z) → A`.
//!
//! The path space of the pushout between two states is the colimit of the
//! products `[α₀…α_p] = Z_{α₀,α₁} × … × Z_{α_{p-1},α_p}` over admissible
//! state sequences, where `Z_{φ(0),φ(1)}` is the set quotient `T` and every
//! other factor is a path space of `A`. The simplification maps out of the
//! products `[α₀…α_p]_i` glue a tuple whose globe factor is an old path of
//! `A` to the shorter tuple obtained by composing it into its neighbours.
//! We compute that colimit by choosing the fully simplified representative
//! of every tuple.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flow::{check_identifier, concat, Atom, AtomId, AtomOrigin, Flow, FlowError, Path, StateId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PushoutError {
    #[error("ill-typed attachment: {0}")]
    IllTypedAttachment(String),
    #[error("attaching the cell creates a cycle: a path already runs {from} -> {to}")]
    CyclicResult { from: StateId, to: StateId },
    #[error("position {0} of the sequence does not carry the attachment pair with an old path")]
    IndexNotGlobePair(usize),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

/// One globe attachment: the cell `Z`, its boundary `∂Z`, and `φ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttachSpec {
    pub cells: BTreeSet<String>,
    pub boundary: BTreeSet<String>,
    pub endpoint0: StateId,
    pub endpoint1: StateId,
    pub boundary_map: BTreeMap<String, Path>,
    /// When set, cell `c` becomes atom `step<k>.c`.
    pub step: Option<usize>,
}

impl AttachSpec {
    pub fn new(endpoint0: impl Into<String>, endpoint1: impl Into<String>) -> Self {
        AttachSpec {
            cells: BTreeSet::new(),
            boundary: BTreeSet::new(),
            endpoint0: StateId(endpoint0.into()),
            endpoint1: StateId(endpoint1.into()),
            boundary_map: BTreeMap::new(),
            step: None,
        }
    }

    pub fn cell(mut self, label: &str) -> Self {
        self.cells.insert(label.to_string());
        self
    }

    pub fn boundary_cell(mut self, label: &str, image: Path) -> Self {
        self.cells.insert(label.to_string());
        self.boundary.insert(label.to_string());
        self.boundary_map.insert(label.to_string(), image);
        self
    }

    pub fn in_step(mut self, step: usize) -> Self {
        self.step = Some(step);
        self
    }

    pub fn cell_atom_id(&self, cell: &str) -> AtomId {
        match self.step {
            Some(k) => AtomId(format!("step{k}.{cell}")),
            None => AtomId(cell.to_string()),
        }
    }

    pub fn globe_pair(&self) -> (&StateId, &StateId) {
        (&self.endpoint0, &self.endpoint1)
    }

    /// `Z ∖ ∂Z`.
    pub fn new_cells(&self) -> impl Iterator<Item = &String> {
        self.cells.iter().filter(move |c| !self.boundary.contains(*c))
    }

    fn cell_atom(&self, cell: &str) -> Atom {
        Atom {
            id: self.cell_atom_id(cell),
            src: self.endpoint0.clone(),
            tgt: self.endpoint1.clone(),
            origin: AtomOrigin::CellElement(self.step.unwrap_or(0)),
        }
    }

    /// Checks the spec against `a`, including the acyclicity guard.
    pub fn validate_against(&self, a: &Flow) -> Result<(), PushoutError> {
        let ill = |m: String| Err(PushoutError::IllTypedAttachment(m));
        for end in [&self.endpoint0, &self.endpoint1] {
            if !a.has_state(end) {
                return ill(format!("endpoint {end} is not a state"));
            }
        }
        for c in &self.cells {
            if check_identifier(c).is_err() {
                return ill(format!("invalid cell label {c:?}"));
            }
            let id = self.cell_atom_id(c);
            if a.atom(&id).is_some() {
                return ill(format!("cell {c} collides with existing atom {id}"));
            }
        }
        if let Some(b) = self.boundary.iter().find(|b| !self.cells.contains(*b)) {
            return ill(format!("boundary cell {b} is not a cell"));
        }
        for b in &self.boundary {
            let Some(image) = self.boundary_map.get(b) else {
                return ill(format!("boundary cell {b} has no image"));
            };
            if image.src != self.endpoint0 || image.tgt != self.endpoint1 {
                return ill(format!(
                    "image {image} of {b} runs {} -> {}, expected {} -> {}",
                    image.src, image.tgt, self.endpoint0, self.endpoint1
                ));
            }
            if !a.contains_path(image) {
                return ill(format!("image {image} of {b} is not a path of the flow"));
            }
        }
        if let Some(k) = self.boundary_map.keys().find(|k| !self.boundary.contains(*k)) {
            return ill(format!("{k} has an image but is not a boundary cell"));
        }
        let has_new = self.new_cells().next().is_some();
        if self.endpoint0 == self.endpoint1 && has_new {
            return ill(format!("cell endpoints coincide at {}", self.endpoint0));
        }
        if has_new && !a.paths_between_unchecked(&self.endpoint1, &self.endpoint0).is_empty() {
            return Err(PushoutError::CyclicResult {
                from: self.endpoint1.clone(),
                to: self.endpoint0.clone(),
            });
        }
        Ok(())
    }
}

/// An element of `T`: an old path of `A` from `φ(0)` to `φ(1)`, or a cell
/// outside the boundary.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TElement {
    Old(Path),
    Cell(String),
}

impl fmt::Display for TElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TElement::Old(p) => write!(f, "{p}"),
            TElement::Cell(c) => write!(f, "[{c}]"),
        }
    }
}

/// `T = Z ⊔_{∂Z} P_{φ(0),φ(1)}A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TQuotient {
    pub elements: BTreeSet<TElement>,
    /// Class of every cell label.
    pub class_of: BTreeMap<String, TElement>,
}

impl TQuotient {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The map `P_{φ(0),φ(1)}A → T`.
    pub fn include(&self, p: &Path) -> TElement {
        TElement::Old(p.clone())
    }
}

pub fn build_t(a: &Flow, spec: &AttachSpec) -> Result<TQuotient, PushoutError> {
    spec.validate_against(a)?;
    let (e0, e1) = spec.globe_pair();
    let mut elements: BTreeSet<TElement> =
        a.paths_between_unchecked(e0, e1).iter().cloned().map(TElement::Old).collect();
    let mut class_of = BTreeMap::new();
    for c in &spec.cells {
        let class = match spec.boundary_map.get(c) {
            Some(image) => TElement::Old(image.clone()),
            None => TElement::Cell(c.clone()),
        };
        elements.insert(class.clone());
        class_of.insert(c.clone(), class);
    }
    Ok(TQuotient { elements, class_of })
}

/// A state sequence `α₀…α_p` in which every pair of consecutive factors
/// contains the attachment pair.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AdmissibleSequence {
    pub states: Vec<StateId>,
}

impl AdmissibleSequence {
    pub fn new<'a>(labels: impl IntoIterator<Item = &'a str>) -> Self {
        AdmissibleSequence { states: labels.into_iter().map(StateId::from).collect() }
    }

    /// Number of factors `p`.
    pub fn factors(&self) -> usize {
        self.states.len() - 1
    }

    pub fn pair(&self, i: usize) -> (&StateId, &StateId) {
        (&self.states[i], &self.states[i + 1])
    }

    pub fn is_globe_position(&self, i: usize, spec: &AttachSpec) -> bool {
        self.pair(i) == spec.globe_pair()
    }

    pub fn traverses_globe(&self, spec: &AttachSpec) -> bool {
        (0..self.factors()).any(|i| self.is_globe_position(i, spec))
    }
}

impl fmt::Display for AdmissibleSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<&str> = self.states.iter().map(|s| s.as_str()).collect();
        write!(f, "({})", labels.join(","))
    }
}

fn factor_len(a: &Flow, spec: &AttachSpec, t: &TQuotient, from: &StateId, to: &StateId) -> usize {
    if (from, to) == spec.globe_pair() {
        t.len()
    } else {
        a.paths_between_unchecked(from, to).len()
    }
}

/// Every sequence of the admissible set whose factors are all nonempty.
pub fn admissible_sequences(a: &Flow, spec: &AttachSpec) -> Result<Vec<AdmissibleSequence>, PushoutError> {
    let t = build_t(a, spec)?;
    let states: Vec<&StateId> = a.states().iter().collect();
    let is_globe = |x: &StateId, y: &StateId| (x, y) == spec.globe_pair();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<&StateId>> = states.iter().map(|s| vec![*s]).collect();
    // with the acyclicity guard the states along a sequence strictly ascend,
    // so the number of factors never exceeds the number of states
    let max_len = states.len();
    while let Some(seq) = stack.pop() {
        let last = *seq.last().expect("nonempty");
        for next in &states {
            if factor_len(a, spec, &t, last, next) == 0 {
                continue;
            }
            if seq.len() >= 2 {
                let prev = seq[seq.len() - 2];
                if !is_globe(prev, last) && !is_globe(last, next) {
                    continue;
                }
            }
            let mut longer = seq.clone();
            longer.push(*next);
            out.push(AdmissibleSequence { states: longer.iter().map(|s| (*s).clone()).collect() });
            if longer.len() <= max_len {
                stack.push(longer);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// One coordinate of a tuple in a product `[α₀…α_p]` or `[α₀…α_p]_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Entry {
    /// Path of `A`.
    Old(Path),
    /// Element of `T` in a globe position.
    T(TElement),
}

impl Entry {
    fn as_old(&self) -> Option<&Path> {
        match self {
            Entry::Old(p) => Some(p),
            Entry::T(_) => None,
        }
    }
}

/// The pair of maps out of `[α₀…α_p]_i`.
#[derive(Clone, Debug)]
pub struct Simplification {
    seq: AdmissibleSequence,
    index: usize,
}

/// A tuple of a product together with the sequence indexing that product.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tuple {
    pub seq: AdmissibleSequence,
    pub entries: Vec<Entry>,
}

pub fn simplification_maps(
    spec: &AttachSpec,
    seq: &AdmissibleSequence,
    index: usize,
) -> Result<Simplification, PushoutError> {
    if index >= seq.factors() || !seq.is_globe_position(index, spec) {
        return Err(PushoutError::IndexNotGlobePair(index));
    }
    Ok(Simplification { seq: seq.clone(), index })
}

impl Simplification {
    fn check(&self, entries: &[Entry]) -> Result<(), PushoutError> {
        if entries.len() != self.seq.factors() {
            return Err(PushoutError::IllTypedAttachment(format!(
                "tuple has {} entries, sequence {} has {} factors",
                entries.len(),
                self.seq,
                self.seq.factors()
            )));
        }
        match &entries[self.index] {
            Entry::Old(_) => Ok(()),
            Entry::T(_) => Err(PushoutError::IndexNotGlobePair(self.index)),
        }
    }

    /// Composes the old path at the globe position with its old neighbours.
    /// `None` when there is no neighbour to compose with.
    pub fn compose(&self, entries: &[Entry]) -> Result<Option<Tuple>, PushoutError> {
        self.check(entries)?;
        let i = self.index;
        let left = i.checked_sub(1).and_then(|j| entries[j].as_old()).is_some();
        let right = entries.get(i + 1).and_then(Entry::as_old).is_some();
        if !left && !right {
            return Ok(None);
        }
        let lo = if left { i - 1 } else { i };
        let hi = if right { i + 1 } else { i };
        let mut merged = entries[lo].as_old().expect("old").clone();
        for e in &entries[lo + 1..=hi] {
            merged = concat(&merged, e.as_old().expect("old"));
        }
        let mut new_entries: Vec<Entry> = entries[..lo].to_vec();
        new_entries.push(Entry::Old(merged));
        new_entries.extend_from_slice(&entries[hi + 1..]);
        let mut states: Vec<StateId> = self.seq.states[..=lo].to_vec();
        states.extend_from_slice(&self.seq.states[hi + 1..]);
        Ok(Some(Tuple { seq: AdmissibleSequence { states }, entries: new_entries }))
    }

    /// Pushes the old path at the globe position into `T`.
    pub fn include(&self, entries: &[Entry]) -> Result<Tuple, PushoutError> {
        self.check(entries)?;
        let mut out = entries.to_vec();
        if let Entry::Old(p) = &entries[self.index] {
            out[self.index] = Entry::T(TElement::Old(p.clone()));
        }
        Ok(Tuple { seq: self.seq.clone(), entries: out })
    }
}

/// Fully simplified representative of a tuple of `[α₀…α_p]`.
pub fn canonical_tuple(spec: &AttachSpec, tuple: Tuple) -> Result<Tuple, PushoutError> {
    let mut current = tuple;
    loop {
        // a globe factor holding an old path lies in the image of an include map
        let hit = current.entries.iter().position(|e| matches!(e, Entry::T(TElement::Old(_))));
        let Some(i) = hit else { return Ok(current) };
        let mut lowered = current.entries.clone();
        if let Entry::T(TElement::Old(p)) = &current.entries[i] {
            lowered[i] = Entry::Old(p.clone());
        }
        let maps = simplification_maps(spec, &current.seq, i)?;
        match maps.compose(&lowered)? {
            Some(shorter) => current = shorter,
            // `[φ(0)φ(1)]_0`: the old path is itself the representative
            None => {
                current.entries = lowered;
                return Ok(current);
            }
        }
    }
}

fn flatten(spec: &AttachSpec, tuple: &Tuple) -> Path {
    let mut atoms = Vec::new();
    for e in &tuple.entries {
        match e {
            Entry::Old(p) | Entry::T(TElement::Old(p)) => atoms.extend(p.atoms.iter().cloned()),
            Entry::T(TElement::Cell(c)) => atoms.push(spec.cell_atom_id(c)),
        }
    }
    Path {
        src: tuple.seq.states[0].clone(),
        tgt: tuple.seq.states.last().expect("nonempty").clone(),
        atoms,
    }
}

fn product_tuples(a: &Flow, spec: &AttachSpec, t: &TQuotient, seq: &AdmissibleSequence) -> Vec<Vec<Entry>> {
    let mut acc: Vec<Vec<Entry>> = vec![Vec::new()];
    for i in 0..seq.factors() {
        let (x, y) = seq.pair(i);
        let factor: Vec<Entry> = if seq.is_globe_position(i, spec) {
            t.elements.iter().cloned().map(Entry::T).collect()
        } else {
            a.paths_between_unchecked(x, y).iter().cloned().map(Entry::Old).collect()
        };
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                factor.iter().map(move |e| {
                    let mut next = prefix.clone();
                    next.push(e.clone());
                    next
                })
            })
            .collect();
    }
    acc
}

/// The colimit path space `P_{α,β}` of the pushout, for every pair of states,
/// as canonical tuples.
pub fn colimit_tuples(
    a: &Flow,
    spec: &AttachSpec,
) -> Result<BTreeMap<(StateId, StateId), BTreeSet<Tuple>>, PushoutError> {
    let t = build_t(a, spec)?;
    let mut out: BTreeMap<(StateId, StateId), BTreeSet<Tuple>> = BTreeMap::new();
    for seq in admissible_sequences(a, spec)? {
        let key = (seq.states[0].clone(), seq.states.last().expect("nonempty").clone());
        for entries in product_tuples(a, spec, &t, &seq) {
            let canon = canonical_tuple(spec, Tuple { seq: seq.clone(), entries })?;
            out.entry(key.clone()).or_default().insert(canon);
        }
    }
    Ok(out)
}

/// The pushout flow.
pub fn attach_globe(a: &Flow, spec: &AttachSpec) -> Result<Flow, PushoutError> {
    let colimit = colimit_tuples(a, spec)?;
    let mut atoms = a.raw_atoms().clone();
    let mut identifications = a.identifications().clone();
    for c in &spec.cells {
        let atom = spec.cell_atom(c);
        if let Some(image) = spec.boundary_map.get(c) {
            identifications.insert(atom.id.clone(), image.atoms.clone());
        }
        atoms.insert(atom.id.clone(), atom);
    }
    let paths = colimit
        .into_iter()
        .map(|(k, tuples)| (k, tuples.iter().map(|t| flatten(spec, t)).collect()))
        .collect();
    Ok(Flow::from_parts(a.states().clone(), atoms, identifications, paths))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::Presentation;

    fn s(x: &str) -> StateId {
        StateId::from(x)
    }

    fn glob_e() -> Flow {
        Flow::validate(Presentation::new().states(["0", "1"]).atom("e", "0", "1")).unwrap()
    }

    fn chain() -> Flow {
        Flow::validate(
            Presentation::new()
                .states(["α", "0", "1", "β"])
                .atom("g", "α", "0")
                .atom("e", "0", "1")
                .atom("k", "1", "β"),
        )
        .unwrap()
    }

    fn names(set: &BTreeSet<Path>) -> Vec<String> {
        set.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn t_with_full_boundary_adds_nothing() {
        let a = glob_e();
        let e = a.path_from_atoms(&["e"]).unwrap();
        let t = build_t(&a, &AttachSpec::new("0", "1").boundary_cell("z", e.clone())).unwrap();
        assert_eq!(t.elements, [TElement::Old(e.clone())].into());
        assert_eq!(t.class_of["z"], TElement::Old(e));
    }

    #[test]
    fn t_disjoint_union() {
        let a = glob_e();
        let t = build_t(&a, &AttachSpec::new("0", "1").cell("z")).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.elements.contains(&TElement::Cell("z".into())));
    }

    #[test]
    fn t_quotient_of_three() {
        let a = glob_e();
        let e = a.path_from_atoms(&["e"]).unwrap();
        let spec = AttachSpec::new("0", "1").cell("z+").boundary_cell("z-", e.clone());
        let t = build_t(&a, &spec).unwrap();
        assert_eq!(t.elements, [TElement::Old(e), TElement::Cell("z+".into())].into());
        assert_eq!(t.len(), a.paths_between_unchecked(&s("0"), &s("1")).len() + 1);
    }

    #[test]
    fn sequences_for_single_globe() {
        let seqs = admissible_sequences(&glob_e(), &AttachSpec::new("0", "1").cell("z")).unwrap();
        assert_eq!(seqs, [AdmissibleSequence::new(["0", "1"])]);
    }

    #[test]
    fn sequences_for_chain() {
        let a = chain();
        let spec = AttachSpec::new("0", "1").cell("z");
        let seqs = admissible_sequences(&a, &spec).unwrap();
        let through: BTreeSet<_> = seqs.iter().filter(|q| q.traverses_globe(&spec)).cloned().collect();
        let expected: BTreeSet<_> = [
            AdmissibleSequence::new(["0", "1"]),
            AdmissibleSequence::new(["α", "0", "1"]),
            AdmissibleSequence::new(["0", "1", "β"]),
            AdmissibleSequence::new(["α", "0", "1", "β"]),
        ]
        .into();
        assert_eq!(through, expected);
        // the remaining members are the single-factor sequences over old paths
        let rest: BTreeSet<_> = seqs.iter().filter(|q| !q.traverses_globe(&spec)).cloned().collect();
        let singles: BTreeSet<_> = [["α", "0"], ["α", "1"], ["α", "β"], ["0", "β"], ["1", "β"]]
            .into_iter()
            .map(AdmissibleSequence::new)
            .collect();
        assert_eq!(rest, singles);
    }

    #[test]
    fn sequences_empty_when_every_factor_is() {
        let a = Flow::validate(Presentation::new().states(["0", "1"])).unwrap();
        assert!(admissible_sequences(&a, &AttachSpec::new("0", "1")).unwrap().is_empty());
    }

    #[test]
    fn attach_new_cell_in_chain() {
        let a = chain();
        let x = attach_globe(&a, &AttachSpec::new("0", "1").cell("z")).unwrap();
        assert_eq!(names(x.paths_between(&s("α"), &s("β")).unwrap()), ["g*e*k", "g*z*k"]);
    }

    #[test]
    fn attach_along_identity_changes_nothing() {
        let a = glob_e();
        let e = a.path_from_atoms(&["e"]).unwrap();
        let x = attach_globe(&a, &AttachSpec::new("0", "1").boundary_cell("z", e)).unwrap();
        assert_eq!(x.path_table(), a.path_table());
        assert_eq!(x.path_from_atoms(&["z"]).unwrap().to_string(), "e");
    }

    #[test]
    fn attach_half_boundary() {
        let a = glob_e();
        let e = a.path_from_atoms(&["e"]).unwrap();
        let spec = AttachSpec::new("0", "1").cell("zp").boundary_cell("zm", e);
        let x = attach_globe(&a, &spec).unwrap();
        assert_eq!(names(x.paths_between(&s("0"), &s("1")).unwrap()), ["e", "zp"]);
    }

    #[test]
    fn cycle_is_refused() {
        let a = chain();
        assert!(matches!(
            attach_globe(&a, &AttachSpec::new("β", "α").cell("z")),
            Err(PushoutError::CyclicResult { .. })
        ));
        assert!(matches!(
            attach_globe(&a, &AttachSpec::new("0", "0").cell("z")),
            Err(PushoutError::IllTypedAttachment(_))
        ));
    }

    #[test]
    fn ill_typed_boundary() {
        let a = chain();
        let g = a.path_from_atoms(&["g"]).unwrap();
        assert!(matches!(
            attach_globe(&a, &AttachSpec::new("0", "1").boundary_cell("z", g)),
            Err(PushoutError::IllTypedAttachment(_))
        ));
        assert!(matches!(
            attach_globe(&a, &AttachSpec::new("0", "q").cell("z")),
            Err(PushoutError::IllTypedAttachment(_))
        ));
        assert!(matches!(
            attach_globe(&a, &AttachSpec::new("0", "1").cell("e")),
            Err(PushoutError::IllTypedAttachment(_))
        ));
    }

    #[test]
    fn simplification_of_chain_tuple() {
        let a = chain();
        let spec = AttachSpec::new("0", "1").cell("z");
        let p = |x: &str| a.path_from_atoms(&[x]).unwrap();
        let seq = AdmissibleSequence::new(["α", "0", "1", "β"]);
        let maps = simplification_maps(&spec, &seq, 1).unwrap();
        let tuple = vec![Entry::Old(p("g")), Entry::Old(p("e")), Entry::Old(p("k"))];
        let shorter = maps.compose(&tuple).unwrap().unwrap();
        assert_eq!(shorter.seq, AdmissibleSequence::new(["α", "β"]));
        assert_eq!(shorter.entries, [Entry::Old(a.path_from_atoms(&["g", "e", "k"]).unwrap())]);
        let included = maps.include(&tuple).unwrap();
        assert_eq!(included.seq, seq);
        assert_eq!(included.entries[1], Entry::T(TElement::Old(p("e"))));
        assert_eq!(included.entries[0], Entry::Old(p("g")));
    }

    #[test]
    fn simplification_index_errors() {
        let a = chain();
        let spec = AttachSpec::new("0", "1").cell("z");
        let seq = AdmissibleSequence::new(["α", "0", "1", "β"]);
        assert_eq!(simplification_maps(&spec, &seq, 0).unwrap_err(), PushoutError::IndexNotGlobePair(0));
        let maps = simplification_maps(&spec, &seq, 1).unwrap();
        let p = |x: &str| a.path_from_atoms(&[x]).unwrap();
        let tuple = vec![Entry::Old(p("g")), Entry::T(TElement::Cell("z".into())), Entry::Old(p("k"))];
        assert_eq!(maps.compose(&tuple).unwrap_err(), PushoutError::IndexNotGlobePair(1));
    }

    #[test]
    fn degenerate_simplification_only_includes() {
        let a = glob_e();
        let spec = AttachSpec::new("0", "1").cell("z");
        let seq = AdmissibleSequence::new(["0", "1"]);
        let maps = simplification_maps(&spec, &seq, 0).unwrap();
        let e = Entry::Old(a.path_from_atoms(&["e"]).unwrap());
        assert_eq!(maps.compose(std::slice::from_ref(&e)).unwrap(), None);
        let t = maps.include(&[e]).unwrap();
        assert!(matches!(t.entries[0], Entry::T(TElement::Old(_))));
    }

    #[test]
    fn boundary_leg_agrees() {
        let a = chain();
        let e = a.path_from_atoms(&["e"]).unwrap();
        let spec = AttachSpec::new("0", "1").cell("n").boundary_cell("b", e.clone()).in_step(4);
        let x = attach_globe(&a, &spec).unwrap();
        assert_eq!(x.path_from_atoms(&["step4.b"]).unwrap(), e);
        assert!(x.atom(&AtomId::from("step4.n")).is_some());
        assert_eq!(x.paths_between(&s("0"), &s("1")).unwrap().len(), 2);
    }
}
