use std::collections::BTreeSet;

use flowcat::reparam::{
    check_reassociation, concat_at, normalize, rational, reparametrize, Rational, Reparametrization, TimedPath,
};
use flowcat::{Atom, Flow, Presentation};
use proptest::prelude::*;

fn chain(len: usize) -> Flow {
    let mut p = Presentation::new();
    for i in 0..=len {
        p = p.state(&format!("c{i}"));
    }
    for i in 0..len {
        p = p.atom(&format!("a{i}"), &format!("c{i}"), &format!("c{}", i + 1));
    }
    Flow::validate(p).unwrap()
}

fn atom(host: &Flow, i: usize) -> Atom {
    host.atom(&format!("a{i}").as_str().into()).unwrap().clone()
}

fn arb_unit() -> impl Strategy<Value = Rational> {
    (2i64..=24).prop_flat_map(|d| (1..d).prop_map(move |n| rational(n, d)))
}

/// Strictly increasing piecewise-linear bijection of [0,1].
fn arb_reparam() -> impl Strategy<Value = Reparametrization> {
    (prop::collection::btree_set(1i64..64, 0..4), prop::collection::btree_set(1i64..64, 0..4)).prop_map(|(ts, us)| {
        let k = ts.len().min(us.len());
        let mut points = vec![(rational(0, 1), rational(0, 1))];
        points.extend(ts.iter().zip(us.iter()).take(k).map(|(t, u)| (rational(*t, 64), rational(*u, 64))));
        points.push((rational(1, 1), rational(1, 1)));
        Reparametrization::new(points).unwrap()
    })
}

/// Random bracketing of atoms `lo..hi` of the host chain, consuming choices.
fn tree(host: &Flow, lo: usize, hi: usize, choices: &mut impl Iterator<Item = (usize, Rational, Option<Reparametrization>)>) -> TimedPath {
    if hi - lo == 1 {
        return TimedPath::leaf(&atom(host, lo));
    }
    let (split, at, by) = choices.next().unwrap_or((0, rational(1, 2), None));
    let mid = lo + 1 + split % (hi - lo - 1);
    let joined = concat_at(&tree(host, lo, mid, choices), &at, &tree(host, mid, hi, choices)).unwrap();
    match by {
        Some(phi) => reparametrize(&joined, &phi),
        None => joined,
    }
}

fn arb_choices() -> impl Strategy<Value = Vec<(usize, Rational, Option<Reparametrization>)>> {
    prop::collection::vec((any::<usize>(), arb_unit(), prop::option::of(arb_reparam())), 0..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reassociation_holds_exactly(a in arb_unit(), b in arb_unit()) {
        let host = chain(3);
        let (x, y, z) = (TimedPath::leaf(&atom(&host, 0)), TimedPath::leaf(&atom(&host, 1)), TimedPath::leaf(&atom(&host, 2)));
        let r = check_reassociation(&x, &y, &z, &a, &b).unwrap();
        let one = rational(1, 1);
        prop_assert_eq!(&r.c, &(&a * &b));
        prop_assert_eq!((&one - &r.c) * (&one - &r.d), &one - &b);
        let breakpoints: BTreeSet<Rational> = r.schedule.breakpoints().into_iter().collect();
        prop_assert!(breakpoints.contains(&r.c));
        prop_assert!(breakpoints.contains(&b));
    }

    #[test]
    fn normalize_forgets_parametrization(len in 1usize..6, choices in arb_choices(), phi in arb_reparam()) {
        let host = chain(len);
        let t = tree(&host, 0, len, &mut choices.into_iter());
        let plain = normalize(&t, &host).unwrap();
        prop_assert_eq!(&normalize(&reparametrize(&t, &phi), &host).unwrap(), &plain);
        let expected: Vec<String> = (0..len).map(|i| format!("a{i}")).collect();
        let got: Vec<&str> = plain.atoms.iter().map(|a| a.as_str()).collect();
        prop_assert_eq!(got, expected.iter().map(String::as_str).collect::<Vec<_>>());
    }

    #[test]
    fn normalize_turns_concatenation_into_composition(
        len in 2usize..7,
        cut in any::<prop::sample::Index>(),
        left in arb_choices(),
        right in arb_choices(),
        at in arb_unit(),
    ) {
        let host = chain(len);
        let mid = 1 + cut.index(len - 1);
        let g1 = tree(&host, 0, mid, &mut left.into_iter());
        let g2 = tree(&host, mid, len, &mut right.into_iter());
        let joined = normalize(&concat_at(&g1, &at, &g2).unwrap(), &host).unwrap();
        let composed = host.compose(&normalize(&g1, &host).unwrap(), &normalize(&g2, &host).unwrap()).unwrap();
        prop_assert_eq!(joined, composed);
    }

    #[test]
    fn reparametrizations_are_invertible(phi in arb_reparam(), t in arb_unit()) {
        prop_assert_eq!(phi.inverse(&phi.apply(&t)), t.clone());
        prop_assert!(phi.apply(&t) > rational(0, 1) && phi.apply(&t) < rational(1, 1));
    }
}
