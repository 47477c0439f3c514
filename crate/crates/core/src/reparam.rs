//! Timed execution paths.
//!
//! A [`TimedPath`] is a formal expression over atoms built with the weighted
//! concatenation `γ₁ *_a γ₂` (first path on `[0,a]`, second on `[a,1]`) and
//! with reparametrization. Its meaning is a piecewise-linear schedule sending
//! global time to an atom and a local time in that atom. All arithmetic is
//! exact.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::flow::{Atom, AtomId, Flow, Path, StateId};

pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReparamError {
    #[error("parameter {0} is outside the open unit interval")]
    BadParameter(Rational),
    #[error("time {0} is outside [0,1]")]
    BadTime(Rational),
    #[error("bad reparametrization: {0}")]
    BadReparametrization(String),
    #[error("cannot concatenate: {0}")]
    NotComposable(String),
    #[error("not a path of the host flow: {0}")]
    NotAPathOfHost(String),
    #[error("reassociation failed for a={a}, b={b}")]
    ReassociationMismatch { a: Box<Rational>, b: Box<Rational> },
}

/// On `[start, end]` the schedule runs through `atom`, its local time moving
/// affinely from `local_start` to `local_end`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub start: Rational,
    pub end: Rational,
    pub atom: AtomId,
    pub local_start: Rational,
    pub local_end: Rational,
}

impl Piece {
    fn slope(&self) -> Rational {
        (&self.local_end - &self.local_start) / (&self.end - &self.start)
    }

    fn local_at(&self, t: &Rational) -> Rational {
        &self.local_start + (t - &self.start) * self.slope()
    }
}

/// Canonical piecewise-linear schedule: adjacent pieces that continue each
/// other on the same atom with the same slope are merged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    pieces: Vec<Piece>,
}

impl Schedule {
    fn new(raw: Vec<Piece>) -> Self {
        let mut pieces: Vec<Piece> = Vec::with_capacity(raw.len());
        for p in raw {
            if let Some(last) = pieces.last_mut() {
                if last.atom == p.atom
                    && last.end == p.start
                    && last.local_end == p.local_start
                    && last.slope() == p.slope()
                {
                    last.end = p.end;
                    last.local_end = p.local_end;
                    continue;
                }
            }
            pieces.push(p);
        }
        Schedule { pieces }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Interior breakpoints.
    pub fn breakpoints(&self) -> Vec<Rational> {
        self.pieces.iter().skip(1).map(|p| p.start.clone()).collect()
    }

    fn affine_into(&self, offset: &Rational, scale: &Rational) -> impl Iterator<Item = Piece> + '_ {
        let (offset, scale) = (offset.clone(), scale.clone());
        self.pieces.iter().map(move |p| Piece {
            start: &offset + &p.start * &scale,
            end: &offset + &p.end * &scale,
            atom: p.atom.clone(),
            local_start: p.local_start.clone(),
            local_end: p.local_end.clone(),
        })
    }

    fn evaluate(&self, t: &Rational) -> Result<(AtomId, Rational), ReparamError> {
        if t < &Rational::zero() || t > &Rational::one() {
            return Err(ReparamError::BadTime(t.clone()));
        }
        let piece = self
            .pieces
            .iter()
            .find(|p| &p.start <= t && t <= &p.end)
            .expect("pieces cover [0,1]");
        Ok((piece.atom.clone(), piece.local_at(t)))
    }
}

/// Piecewise-linear, strictly increasing, endpoint-fixing map `[0,1] → [0,1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reparametrization {
    points: Vec<(Rational, Rational)>,
}

impl Reparametrization {
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self, ReparamError> {
        let bad = |m: &str| Err(ReparamError::BadReparametrization(m.to_string()));
        let (zero, one) = (Rational::zero(), Rational::one());
        match (points.first(), points.last()) {
            (Some(first), Some(last)) if points.len() >= 2 => {
                if first != &(zero.clone(), zero) || last != &(one.clone(), one) {
                    return bad("endpoints must be fixed");
                }
            }
            _ => return bad("need at least the two endpoints"),
        }
        for w in points.windows(2) {
            if w[0].0 >= w[1].0 {
                return bad("breakpoints must strictly increase");
            }
            if w[0].1 > w[1].1 {
                return bad("the map must be nondecreasing");
            }
            if w[0].1 == w[1].1 {
                return bad("constant pieces would stall an atom");
            }
        }
        Ok(Reparametrization { points })
    }

    pub fn identity() -> Self {
        Reparametrization { points: vec![(Rational::zero(), Rational::zero()), (Rational::one(), Rational::one())] }
    }

    pub fn points(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn apply(&self, t: &Rational) -> Rational {
        Self::interpolate(self.points.iter().map(|(a, b)| (a, b)), t)
    }

    pub fn inverse(&self, u: &Rational) -> Rational {
        Self::interpolate(self.points.iter().map(|(a, b)| (b, a)), u)
    }

    fn interpolate<'a>(mut pts: impl Iterator<Item = (&'a Rational, &'a Rational)>, x: &Rational) -> Rational {
        let mut prev = pts.next().expect("nonempty");
        for next in pts {
            if x <= next.0 {
                return prev.1 + (x - prev.0) * (next.1 - prev.1) / (next.0 - prev.0);
            }
            prev = next;
        }
        prev.1.clone()
    }
}

#[derive(Clone, Debug)]
pub enum TimedTree {
    Leaf(Atom),
    Concat { left: Box<TimedPath>, at: Rational, right: Box<TimedPath> },
    Reparam { inner: Box<TimedPath>, by: Reparametrization },
}

/// Equality is equality of schedules and endpoints; tree shape is ignored.
#[derive(Clone, Debug)]
pub struct TimedPath {
    tree: TimedTree,
    schedule: Schedule,
    src: StateId,
    tgt: StateId,
}

impl PartialEq for TimedPath {
    fn eq(&self, other: &Self) -> bool {
        self.src == other.src && self.tgt == other.tgt && self.schedule == other.schedule
    }
}

impl Eq for TimedPath {}

impl fmt::Display for TimedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.tree {
            TimedTree::Leaf(a) => write!(f, "{}", a.id),
            TimedTree::Concat { left, at, right } => write!(f, "({left} *_{at} {right})"),
            TimedTree::Reparam { inner, .. } => write!(f, "{inner}∘φ"),
        }
    }
}

impl TimedPath {
    pub fn leaf(atom: &Atom) -> Self {
        let piece = Piece {
            start: Rational::zero(),
            end: Rational::one(),
            atom: atom.id.clone(),
            local_start: Rational::zero(),
            local_end: Rational::one(),
        };
        TimedPath {
            tree: TimedTree::Leaf(atom.clone()),
            schedule: Schedule { pieces: vec![piece] },
            src: atom.src.clone(),
            tgt: atom.tgt.clone(),
        }
    }

    pub fn tree(&self) -> &TimedTree {
        &self.tree
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn src(&self) -> &StateId {
        &self.src
    }

    pub fn tgt(&self) -> &StateId {
        &self.tgt
    }

    /// Atom and local time at global time `t`. At a breakpoint the earlier
    /// atom is reported, at its local end.
    pub fn evaluate(&self, t: &Rational) -> Result<(AtomId, Rational), ReparamError> {
        self.schedule.evaluate(t)
    }

    /// Leaves from left to right.
    pub fn leaves(&self) -> Vec<&Atom> {
        match &self.tree {
            TimedTree::Leaf(a) => vec![a],
            TimedTree::Concat { left, right, .. } => {
                let mut out = left.leaves();
                out.extend(right.leaves());
                out
            }
            TimedTree::Reparam { inner, .. } => inner.leaves(),
        }
    }
}

pub fn concat_at(first: &TimedPath, a: &Rational, second: &TimedPath) -> Result<TimedPath, ReparamError> {
    if a <= &Rational::zero() || a >= &Rational::one() {
        return Err(ReparamError::BadParameter(a.clone()));
    }
    if first.tgt != second.src {
        return Err(ReparamError::NotComposable(format!(
            "{first} ends at {} but {second} starts at {}",
            first.tgt, second.src
        )));
    }
    let mut pieces: Vec<Piece> = first.schedule.affine_into(&Rational::zero(), a).collect();
    pieces.extend(second.schedule.affine_into(a, &(Rational::one() - a)));
    Ok(TimedPath {
        tree: TimedTree::Concat { left: Box::new(first.clone()), at: a.clone(), right: Box::new(second.clone()) },
        schedule: Schedule::new(pieces),
        src: first.src.clone(),
        tgt: second.tgt.clone(),
    })
}

/// `γ ∘ φ`.
pub fn reparametrize(path: &TimedPath, by: &Reparametrization) -> TimedPath {
    let mut cuts: BTreeSet<Rational> = by.points().iter().map(|(t, _)| t.clone()).collect();
    for p in path.schedule.pieces() {
        cuts.insert(by.inverse(&p.start));
        cuts.insert(by.inverse(&p.end));
    }
    let cuts: Vec<Rational> = cuts.into_iter().collect();
    let two = rational(2, 1);
    let pieces = cuts
        .windows(2)
        .map(|w| {
            let (lo, hi) = (&w[0], &w[1]);
            let u_mid = by.apply(&((lo + hi) / &two));
            let host = path
                .schedule
                .pieces()
                .iter()
                .find(|p| p.start < u_mid && u_mid < p.end)
                .expect("an interior time lies inside one piece");
            Piece {
                start: lo.clone(),
                end: hi.clone(),
                atom: host.atom.clone(),
                local_start: host.local_at(&by.apply(lo)),
                local_end: host.local_at(&by.apply(hi)),
            }
        })
        .collect();
    TimedPath {
        tree: TimedTree::Reparam { inner: Box::new(path.clone()), by: by.clone() },
        schedule: Schedule::new(pieces),
        src: path.src.clone(),
        tgt: path.tgt.clone(),
    }
}

/// Witness of `(γ₁ *_a γ₂) *_b γ₃ = γ₁ *_c (γ₂ *_d γ₃)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reassociation {
    pub c: Rational,
    pub d: Rational,
    pub schedule: Schedule,
}

pub fn check_reassociation(
    g1: &TimedPath,
    g2: &TimedPath,
    g3: &TimedPath,
    a: &Rational,
    b: &Rational,
) -> Result<Reassociation, ReparamError> {
    for p in [a, b] {
        if p <= &Rational::zero() || p >= &Rational::one() {
            return Err(ReparamError::BadParameter(p.clone()));
        }
    }
    let one = Rational::one();
    let c = a * b;
    let d = (b - &c) / (&one - &c);
    debug_assert_eq!((&one - &c) * (&one - &d), &one - b);
    let left = concat_at(&concat_at(g1, a, g2)?, b, g3)?;
    let right = concat_at(g1, &c, &concat_at(g2, &d, g3)?)?;
    if left != right {
        return Err(ReparamError::ReassociationMismatch { a: Box::new(a.clone()), b: Box::new(b.clone()) });
    }
    Ok(Reassociation { c, d, schedule: left.schedule })
}

/// Forgets the parametrization: the flattened leaf sequence as a path of `host`.
pub fn normalize(path: &TimedPath, host: &Flow) -> Result<Path, ReparamError> {
    let leaves = path.leaves();
    for leaf in &leaves {
        match host.atom(&leaf.id) {
            Some(h) if h.src == leaf.src && h.tgt == leaf.tgt => {}
            _ => return Err(ReparamError::NotAPathOfHost(format!("atom {} does not match the host", leaf.id))),
        }
    }
    let ids: Vec<&str> = leaves.iter().map(|a| a.id.as_str()).collect();
    host.path_from_atoms(&ids)
        .map_err(|e| ReparamError::NotAPathOfHost(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::Presentation;

    fn q(n: i64, d: i64) -> Rational {
        rational(n, d)
    }

    fn host() -> Flow {
        Flow::validate(
            Presentation::new()
                .states(["0", "1", "2", "3"])
                .atom("u", "0", "1")
                .atom("v", "1", "2")
                .atom("w", "2", "3"),
        )
        .unwrap()
    }

    fn leaf(f: &Flow, id: &str) -> TimedPath {
        TimedPath::leaf(f.atom(&AtomId::from(id)).unwrap())
    }

    #[test]
    fn half_split() {
        let f = host();
        let uv = concat_at(&leaf(&f, "u"), &q(1, 2), &leaf(&f, "v")).unwrap();
        assert_eq!(uv.schedule().breakpoints(), [q(1, 2)]);
        assert_eq!(uv.evaluate(&q(1, 4)).unwrap(), (AtomId::from("u"), q(1, 2)));
        assert_eq!(uv.evaluate(&q(3, 4)).unwrap(), (AtomId::from("v"), q(1, 2)));
    }

    #[test]
    fn evaluate_inside_first_third() {
        let f = host();
        let uv = concat_at(&leaf(&f, "u"), &q(1, 3), &leaf(&f, "v")).unwrap();
        assert_eq!(uv.evaluate(&q(1, 6)).unwrap(), (AtomId::from("u"), q(1, 2)));
        assert!(matches!(uv.evaluate(&q(3, 2)), Err(ReparamError::BadTime(_))));
    }

    #[test]
    fn bad_parameters() {
        let f = host();
        for a in [q(0, 1), q(1, 1), q(-1, 2)] {
            assert!(matches!(
                concat_at(&leaf(&f, "u"), &a, &leaf(&f, "v")),
                Err(ReparamError::BadParameter(_))
            ));
        }
        assert!(matches!(
            concat_at(&leaf(&f, "v"), &q(1, 2), &leaf(&f, "u")),
            Err(ReparamError::NotComposable(_))
        ));
    }

    #[test]
    fn reassociation_examples() {
        let f = host();
        let (u, v, w) = (leaf(&f, "u"), leaf(&f, "v"), leaf(&f, "w"));
        let r = check_reassociation(&u, &v, &w, &q(1, 2), &q(1, 2)).unwrap();
        assert_eq!((r.c.clone(), r.d.clone()), (q(1, 4), q(1, 3)));
        assert_eq!(r.schedule.breakpoints(), [q(1, 4), q(1, 2)]);
        let r = check_reassociation(&u, &v, &w, &q(1, 3), &q(3, 4)).unwrap();
        assert_eq!((r.c, r.d), (q(1, 4), q(2, 3)));
    }

    #[test]
    fn wrong_parameters_do_not_reassociate() {
        let f = host();
        let (u, v, w) = (leaf(&f, "u"), leaf(&f, "v"), leaf(&f, "w"));
        let left = concat_at(&concat_at(&u, &q(1, 2), &v).unwrap(), &q(1, 2), &w).unwrap();
        let right = concat_at(&u, &q(1, 2), &concat_at(&v, &q(1, 2), &w).unwrap()).unwrap();
        assert_ne!(left, right);
    }

    #[test]
    fn identity_reparametrization() {
        let f = host();
        let uv = concat_at(&leaf(&f, "u"), &q(1, 2), &leaf(&f, "v")).unwrap();
        assert_eq!(reparametrize(&uv, &Reparametrization::identity()), uv);
    }

    #[test]
    fn doubling_speed_moves_breakpoint() {
        let f = host();
        let uv = concat_at(&leaf(&f, "u"), &q(1, 2), &leaf(&f, "v")).unwrap();
        let phi = Reparametrization::new(vec![(q(0, 1), q(0, 1)), (q(1, 4), q(1, 2)), (q(1, 1), q(1, 1))]).unwrap();
        let moved = reparametrize(&uv, &phi);
        assert_eq!(moved.schedule().breakpoints(), [q(1, 4)]);
        assert_eq!(moved.evaluate(&q(1, 8)).unwrap(), (AtomId::from("u"), q(1, 2)));
    }

    #[test]
    fn stalling_reparametrization_is_rejected() {
        let r = Reparametrization::new(vec![
            (q(0, 1), q(0, 1)),
            (q(1, 3), q(1, 2)),
            (q(2, 3), q(1, 2)),
            (q(1, 1), q(1, 1)),
        ]);
        assert!(matches!(r, Err(ReparamError::BadReparametrization(_))));
        assert!(Reparametrization::new(vec![(q(0, 1), q(1, 2)), (q(1, 1), q(1, 1))]).is_err());
    }

    #[test]
    fn normalize_flattens() {
        let f = host();
        let uv = concat_at(&leaf(&f, "u"), &q(1, 3), &leaf(&f, "v")).unwrap();
        let uvw = concat_at(&uv, &q(1, 2), &leaf(&f, "w")).unwrap();
        assert_eq!(normalize(&uvw, &f).unwrap().to_string(), "u*v*w");
        let other = Flow::validate(Presentation::new().states(["0", "1"]).atom("u", "0", "1")).unwrap();
        assert!(matches!(normalize(&uvw, &other), Err(ReparamError::NotAPathOfHost(_))));
    }
}
