#![allow(dead_code)]

use std::collections::BTreeSet;

use flowcat::{Flow, Path, Presentation};
use proptest::prelude::*;

/// Edge lists of acyclic graphs on `q0..q{n-1}`; every edge runs upwards.
pub fn arb_dag(max_states: usize, max_atoms: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2..=max_states).prop_flat_map(move |n| {
        let edge = (0..n - 1).prop_flat_map(move |i| (Just(i), i + 1..n));
        (Just(n), prop::collection::vec(edge, 1..=max_atoms))
    })
}

pub fn state(i: usize) -> String {
    format!("q{i}")
}

pub fn free_flow(n: usize, edges: &[(usize, usize)]) -> Flow {
    let mut p = Presentation::new();
    for i in 0..n {
        p = p.state(&state(i));
    }
    for (k, (i, j)) in edges.iter().enumerate() {
        p = p.atom(&format!("e{k}"), &state(*i), &state(*j));
    }
    Flow::validate(p).expect("upward edges are acyclic")
}

pub fn arb_free_flow() -> impl Strategy<Value = Flow> {
    arb_dag(6, 8).prop_map(|(n, edges)| free_flow(n, &edges))
}

/// Partition of `paths` generated by `a ~ a*b` (`Minus`) or `b ~ a*b`
/// (`Plus`), merged naively until nothing changes.
pub fn naive_classes(flow: &Flow, paths: &BTreeSet<Path>, minus: bool) -> BTreeSet<BTreeSet<Path>> {
    let mut classes: Vec<BTreeSet<Path>> = paths.iter().map(|p| BTreeSet::from([p.clone()])).collect();
    loop {
        let mut merged = None;
        'scan: for (i, ci) in classes.iter().enumerate() {
            for (j, cj) in classes.iter().enumerate().skip(i + 1) {
                for p in ci {
                    for q in cj {
                        if extends(flow, p, q, minus) || extends(flow, q, p, minus) {
                            merged = Some((i, j));
                            break 'scan;
                        }
                    }
                }
            }
        }
        match merged {
            Some((i, j)) => {
                let cj = classes.remove(j);
                classes[i].extend(cj);
            }
            None => return classes.into_iter().collect(),
        }
    }
}

/// Whether `long = short * r` (minus) or `long = r * short` (plus) for some path r.
fn extends(flow: &Flow, short: &Path, long: &Path, minus: bool) -> bool {
    let candidates: Vec<&Path> = if minus {
        flow.paths_from(&short.tgt).collect()
    } else {
        flow.paths_into(&short.src).collect()
    };
    candidates.into_iter().any(|r| {
        let composed = if minus { flow.compose(short, r) } else { flow.compose(r, short) };
        matches!(composed, Ok(ref c) if c == long)
    })
}
