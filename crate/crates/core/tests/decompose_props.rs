use std::collections::HashSet;

use ccel::decompose::{
    almost_convex_split, convex_normal_form, function_decompose, initial_successor_form,
    monotone_decompose, one_param_decompose, DecomposeError, Relation,
};
use ccel::formulas::{parse_formula, Signature};
use ccel::structures::{FiniteCcelStructure, Partition};
use proptest::prelude::*;

/// Random convex partition of `0..n` from cut flags.
fn convex_from_cuts(n: usize, cuts: &[bool]) -> Vec<Vec<usize>> {
    let mut blocks = vec![vec![0]];
    for x in 1..n {
        if cuts[x - 1] {
            blocks.push(vec![x]);
        } else {
            blocks.last_mut().unwrap().push(x);
        }
    }
    blocks
}

fn structure_strategy(max: usize) -> impl Strategy<Value = FiniteCcelStructure> {
    (1..=max).prop_flat_map(|n| {
        (
            Just(n),
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(|(n, p, c1, c2)| {
                let pred: Vec<usize> = (0..n).filter(|&i| p[i]).collect();
                FiniteCcelStructure::new(
                    n,
                    vec![("P0".into(), pred)],
                    vec![
                        ("E0".into(), true, convex_from_cuts(n, &c1)),
                        ("E1".into(), true, convex_from_cuts(n, &c2)),
                    ],
                )
                .unwrap()
            })
    })
}

fn with_relation(max: usize) -> impl Strategy<Value = (FiniteCcelStructure, Relation)> {
    structure_strategy(max).prop_flat_map(|s| {
        let n = s.size();
        (Just(s), proptest::collection::vec(any::<bool>(), n * n))
            .prop_map(move |(s, cells)| (s, Relation::from_fn(n, |x, y| cells[x * n + y])))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn one_param_reproduces_every_fiber((s, rel) in with_relation(10)) {
        for a in 0..s.size() {
            let rep = one_param_decompose(&s, &rel, a);
            prop_assert!(rep.is_ok(), "a={} err={:?}", a, rep.err());
            let rep = rep.unwrap();
            prop_assert_eq!(rep.expression.eval(s.size()), rel.column(a));
        }
    }

    #[test]
    fn functions_reassemble(
        (s, f) in structure_strategy(10).prop_flat_map(|s| {
            let n = s.size();
            (Just(s), proptest::collection::vec(0..n, n))
        })
    ) {
        let d = function_decompose(&s, &f).unwrap();
        for a in 0..s.size() {
            prop_assert_eq!(d.apply(a), Some(f[a]));
        }
    }
}

fn monotone_strategy(max: usize) -> impl Strategy<Value = (FiniteCcelStructure, Relation)> {
    structure_strategy(max).prop_flat_map(|s| {
        let n = s.size();
        (Just(s), proptest::collection::vec(0..=n, n)).prop_map(move |(s, mut t)| {
            t.sort_unstable();
            (s, Relation::from_fn(n, |x, y| x < t[y]))
        })
    })
}

fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    // restricted growth strings
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    fn rec(i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=max + 1 {
            cur[i] = v;
            rec(i + 1, max.max(v), cur, out);
        }
    }
    if n == 0 {
        return out;
    }
    rec(1, 0, &mut cur, &mut out);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn monotone_cases_reassemble((s, rel) in monotone_strategy(12)) {
        let cl = monotone_decompose(&s, &rel).unwrap();
        prop_assert_eq!(cl.relation(s.size()), rel.clone());
        let kinds: HashSet<(Vec<bool>, bool)> =
            (0..s.size()).map(|y| (rel.column(y), rel.get(y, y))).collect();
        prop_assert!(cl.cases.len() <= kinds.len());
        for y in 0..s.size() {
            let f = initial_successor_form(&s, &rel, y).unwrap();
            prop_assert_eq!(f.set(y), rel.column(y));
        }
    }

    #[test]
    fn convex_forms_define_their_sets(
        (s, lo, len, a) in structure_strategy(12).prop_flat_map(|s| {
            let n = s.size();
            (Just(s), 0..n, 0..=n, 0..n)
        })
    ) {
        let n = s.size();
        let c: Vec<usize> = (lo..(lo + len).min(n)).collect();
        let form = convex_normal_form(&s, &c, &[a], n).unwrap();
        let expected: Vec<bool> = (0..n).map(|x| c.contains(&x)).collect();
        prop_assert_eq!(form.set(&s).unwrap(), expected);
    }

    #[test]
    fn one_param_large((s, rel) in with_relation(12)) {
        let a = s.size() / 2;
        let rep = one_param_decompose(&s, &rel, a).unwrap();
        prop_assert_eq!(rep.expression.eval(s.size()), rel.column(a));
    }
}

#[test]
fn exhaustive_small_structures() {
    let formulas = [
        "E0(x,y)",
        "x < y & !E1(x,y)",
        "exists z. (E0(z,y) & x <= z)",
        "P0(x) & E1(x,y)",
        "x <= S[E0,1](y)",
        "S[E1,-1](y) < x | P0(x)",
        "(P0(x) | x = y) & E0(x,y)",
        "forall z. (E0(z,x) -> z < y)",
    ];
    for n in 1..=6usize {
        let convex: Vec<Vec<Vec<usize>>> = (0..1u32 << (n - 1))
            .map(|mask| {
                let cuts: Vec<bool> = (0..n - 1).map(|i| mask >> i & 1 == 1).collect();
                convex_from_cuts(n, &cuts)
            })
            .collect();
        for e0 in &convex {
            for e1 in &convex {
                let pred: Vec<usize> = (0..n).filter(|i| i % 2 == 0).collect();
                let s = FiniteCcelStructure::new(
                    n,
                    vec![("P0".into(), pred)],
                    vec![("E0".into(), true, e0.clone()), ("E1".into(), true, e1.clone())],
                )
                .unwrap();
                let sig = Signature::of(&s);
                for text in formulas {
                    let f = parse_formula(text, &sig).unwrap();
                    let rel = Relation::from_formula(&s, &f, "x", "y").unwrap();
                    for a in 0..n {
                        let rep = one_param_decompose(&s, &rel, a).unwrap();
                        assert_eq!(rep.expression.eval(n), rel.column(a), "{text} at {a}");
                    }
                    match monotone_decompose(&s, &rel) {
                        Ok(cl) => assert_eq!(cl.relation(n), rel),
                        Err(DecomposeError::NotInitialSegment { .. })
                        | Err(DecomposeError::NotMonotone { .. }) => {}
                        Err(e) => panic!("{text}: {e}"),
                    }
                }
                let f: Vec<usize> = (0..n).map(|x| e0[e0.iter().position(|b| b.contains(&x)).unwrap()][0]).collect();
                function_decompose(&s, &f).unwrap();
            }
        }
    }
}

#[test]
fn split_colors_are_minimal() {
    for n in 1..=6usize {
        let s = FiniteCcelStructure::new(n, vec![], vec![]).unwrap();
        for labels in all_partitions(n) {
            let r = Partition::from_labels(&labels);
            let out = almost_convex_split(&s, &r, None).unwrap();
            assert_eq!(out.reconstruct(), r);
            let k = out.colors.len();
            if k < 2 {
                continue;
            }
            // no coloring with k-1 colors reconstructs R over the same closure
            let fewer = k - 1;
            let total = fewer.pow(n as u32);
            for code in 0..total {
                let mut c = code;
                let color: Vec<usize> = (0..n)
                    .map(|_| {
                        let v = c % fewer;
                        c /= fewer;
                        v
                    })
                    .collect();
                let ok = (0..n).all(|x| {
                    (0..n).all(|y| {
                        r.related(x, y) == (out.closure.related(x, y) && color[x] == color[y])
                    })
                });
                assert!(!ok, "R={r} colored with {fewer} colors");
            }
        }
    }
}
