mod common;

use std::collections::BTreeSet;

use flowcat::dihomotopy::is_isomorphic;
use flowcat::oracle::{brute_force_pushout, nonempty_path_sets, random_instance, SizeBounds};
use flowcat::{attach_globe, build, concat, AtomId, AttachSpec, DecompositionScript, Path, ScriptStep, StateId};
use proptest::prelude::*;

use common::{arb_dag, state};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn colimit_agrees_with_brute_force(seed in any::<u64>()) {
        let inst = random_instance(seed, SizeBounds::default());
        match (attach_globe(&inst.flow, &inst.spec), brute_force_pushout(&inst.flow, &inst.spec)) {
            (Ok(result), Ok(oracle)) => prop_assert_eq!(nonempty_path_sets(&result), oracle),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "disagreement: {:?} vs {:?}", a.map(|_| ()), b.map(|_| ())),
        }
    }

    #[test]
    fn boundary_cells_land_on_their_images(seed in any::<u64>()) {
        let inst = random_instance(seed, SizeBounds::default());
        let Ok(result) = attach_globe(&inst.flow, &inst.spec) else { return Ok(()) };
        let (e0, e1) = inst.spec.globe_pair();
        for c in &inst.spec.cells {
            let id = inst.spec.cell_atom_id(c);
            let cell_path = result.path_from_atoms(&[id]).unwrap();
            prop_assert_eq!(&cell_path.src, e0);
            prop_assert_eq!(&cell_path.tgt, e1);
            if let Some(image) = inst.spec.boundary_map.get(c) {
                prop_assert_eq!(&result.path_from_atoms(&image.atoms).unwrap(), &cell_path);
                prop_assert!(result.contains_path(image));
            }
        }
        // old paths survive unchanged
        for p in inst.flow.paths() {
            prop_assert!(result.contains_path(p));
        }
    }

    #[test]
    fn attaching_only_boundary_changes_nothing(seed in any::<u64>(), pick in any::<prop::sample::Index>(), mask in 1u8..) {
        let inst = random_instance(seed, SizeBounds::default());
        let a = inst.flow;
        let pairs: Vec<(&(StateId, StateId), &BTreeSet<Path>)> =
            a.path_table().iter().filter(|(_, s)| !s.is_empty()).collect();
        prop_assume!(!pairs.is_empty());
        let ((e0, e1), paths) = pairs[pick.index(pairs.len())];
        let mut spec = AttachSpec::new(e0.as_str(), e1.as_str());
        let chosen: Vec<&Path> = paths.iter().enumerate().filter(|(i, _)| mask & (1 << (i % 8)) != 0).map(|(_, p)| p).collect();
        prop_assume!(!chosen.is_empty());
        for (i, p) in chosen.into_iter().enumerate() {
            spec = spec.boundary_cell(&format!("z{i}"), p.clone());
        }
        let result = attach_globe(&a, &spec).unwrap();
        prop_assert_eq!(nonempty_path_sets(&result), nonempty_path_sets(&a));
        prop_assert!(is_isomorphic(&a, &result).is_some());
    }

    #[test]
    fn independent_steps_commute(
        (n, edges) in arb_dag(6, 5),
        first in (0usize..5, 1usize..6),
        second in (0usize..5, 1usize..6),
        with_boundary in any::<bool>(),
    ) {
        let pair = |(i, d): (usize, usize)| {
            let i = i % (n - 1);
            (i, (i + d).min(n - 1).max(i + 1))
        };
        let (p, q) = (pair(first), pair(second));
        prop_assume!(p != q);
        let mut base = DecompositionScript::new((0..n).map(state).collect::<Vec<_>>().iter().map(String::as_str));
        for (k, (i, j)) in edges.iter().enumerate() {
            base = base.generator(&format!("g{k}"), &state(*i), &state(*j));
        }
        let a = ScriptStep::new(&state(p.0), &state(p.1), &["a"]);
        let mut b = ScriptStep::new(&state(q.0), &state(q.1), &["b", "c"]);
        if with_boundary {
            let flow = build(&base).unwrap();
            if let Some(path) = flow.paths_between(&StateId(state(q.0)), &StateId(state(q.1))).unwrap().iter().next() {
                let image: Vec<&str> = path.atoms.iter().map(AtomId::as_str).collect();
                b = b.with_boundary("c", &image);
            }
        }
        let ab = build(&base.clone().step(a.clone()).step(b.clone())).unwrap();
        let ba = build(&base.step(b).step(a)).unwrap();
        prop_assert_eq!(ab.path_count(), ba.path_count());
        prop_assert!(is_isomorphic(&ab, &ba).is_some());
    }

    #[test]
    fn scripted_concatenation_is_concat(sizes in prop::collection::vec(1usize..=3, 1..=4)) {
        let globes: Vec<Vec<String>> = sizes
            .iter()
            .enumerate()
            .map(|(j, &k)| (0..k).map(|i| format!("z{j}_{i}")).collect())
            .collect();
        let direct = concat(&globes).unwrap();
        let mut script = DecompositionScript::new((0..=globes.len()).map(|j| j.to_string()).collect::<Vec<_>>().iter().map(String::as_str));
        for (j, z) in globes.iter().enumerate() {
            let cells: Vec<&str> = z.iter().map(String::as_str).collect();
            script = script.step(ScriptStep::new(&j.to_string(), &(j + 1).to_string(), &cells));
        }
        let scripted = build(&script).unwrap();
        let strip = |p: &Path| Path {
            src: p.src.clone(),
            tgt: p.tgt.clone(),
            atoms: p.atoms.iter().map(|a| AtomId(a.as_str().split_once('.').map_or(a.as_str(), |(_, c)| c).to_string())).collect(),
        };
        let relabeled: BTreeSet<Path> = scripted.paths().map(strip).collect();
        let expected: BTreeSet<Path> = direct.paths().cloned().collect();
        prop_assert_eq!(relabeled, expected);
        prop_assert!(is_isomorphic(&direct, &scripted).is_some());

        let ends = direct
            .paths_between(&StateId("0".into()), &StateId(globes.len().to_string()))
            .unwrap()
            .len();
        prop_assert_eq!(ends, sizes.iter().product::<usize>());
    }
}
