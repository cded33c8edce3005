mod common;

use ccel::formulas::Formula;
use ccel::semantics::{count_types_over_cut, definable_set, evaluate, expand_all, Assignment};
use ccel::structures::{parse_structure, render_structure, FiniteCcelStructure};
use proptest::prelude::*;

fn close_over(s: &FiniteCcelStructure, f: &Formula) -> Vec<Assignment> {
    let free: Vec<String> = f.free_vars().into_iter().collect();
    let mut out = vec![Assignment::new()];
    for v in &free {
        out = out
            .into_iter()
            .flat_map(|a| {
                (0..s.size()).map(move |e| {
                    let mut b = a.clone();
                    b.insert(v.clone(), e);
                    b
                })
            })
            .collect();
    }
    out
}

#[test]
fn successor_atoms_match_their_definition() {
    let (checked, bad) = common::successor_discrepancies(&common::single_equivalence_structures(6), 3);
    assert!(checked > 0);
    assert_eq!(bad, 0);
}

#[test]
fn missing_successor_class_makes_atoms_false() {
    let s = parse_structure("size 3\nequiv E0 convex = [[0,1],[2]]").unwrap();
    for cmp in common::CMPS {
        let f = Formula::ext("x", cmp, "E0", 1, "y");
        for x in 0..3 {
            let env = common::assignment(&[("x", x), ("y", 2)]);
            assert!(!evaluate(&s, &f, &env).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn expansion_preserves_truth(s in common::structure(3), f in common::formula()) {
        let g = expand_all(&f);
        prop_assert!(g.free_vars().is_subset(&f.free_vars()));
        for env in close_over(&s, &f) {
            prop_assert_eq!(evaluate(&s, &f, &env).unwrap(), evaluate(&s, &g, &env).unwrap(), "{}", f);
        }
    }

    #[test]
    fn definable_sets_collect_satisfying_elements(s in common::structure(5), f in common::formula()) {
        let f = f.rename_free("z", "x").rename_free("u", "y");
        let params: Vec<&str> = if f.free_vars().contains("y") { vec!["y"] } else { vec![] };
        for b in 0..s.size() {
            let values: Vec<usize> = params.iter().map(|_| b).collect();
            let set = definable_set(&s, &f, "x", &params, &values).unwrap();
            for a in 0..s.size() {
                let mut env = common::assignment(&[("x", a)]);
                if !params.is_empty() {
                    env.insert("y".into(), b);
                }
                prop_assert_eq!(set.contains(&a), evaluate(&s, &f, &env).unwrap());
            }
        }
    }

    #[test]
    fn cut_counts_are_monotone_bounded(s in common::structure(5), f in common::formula()) {
        let f = f.rename_free("z", "x").rename_free("u", "y");
        for cut in 0..=s.size() {
            let r = count_types_over_cut(&s, &f, &["x"], &["y"], cut).unwrap();
            prop_assert!(r.count <= s.size() - cut.min(s.size()) || s.size() == cut && r.count == 0);
            prop_assert_eq!(r.representatives.len(), r.count);
        }
    }

    #[test]
    fn dsl_round_trip(s in common::structure(6)) {
        let text = render_structure(&s);
        let back = parse_structure(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(render_structure(&back), text);
    }

    #[test]
    fn reversal_is_an_involution(s in common::structure(6)) {
        prop_assert_eq!(s.reversed().reversed(), s);
    }
}
