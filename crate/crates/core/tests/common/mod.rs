#![allow(dead_code)]

use ccel::formulas::{ExtCmp, Formula, Signature};
use ccel::semantics::{expand_ext_atom, Assignment, Evaluator};
use ccel::structures::FiniteCcelStructure;
use proptest::prelude::*;

pub const VARS: [&str; 4] = ["x", "y", "z", "u"];
pub const CMPS: [ExtCmp; 4] = [ExtCmp::BelowStrict, ExtCmp::BelowOrIn, ExtCmp::AboveStrict, ExtCmp::InOrAbove];

/// Every partition of `0..n` into intervals.
pub fn convex_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    (0..1u32 << (n - 1))
        .map(|cuts| {
            let mut blocks = vec![vec![0]];
            for e in 1..n {
                if cuts >> (e - 1) & 1 == 1 {
                    blocks.push(Vec::new());
                }
                blocks.last_mut().unwrap().push(e);
            }
            blocks
        })
        .collect()
}

/// All structures of size `1..=max` with `P0` the even elements and two
/// convex equivalences `E0`, `E1`.
pub fn small_structures(max: usize) -> Vec<FiniteCcelStructure> {
    let mut out = Vec::new();
    for n in 1..=max {
        let parts = convex_partitions(n);
        for e0 in &parts {
            for e1 in &parts {
                let even: Vec<usize> = (0..n).step_by(2).collect();
                out.push(
                    FiniteCcelStructure::new(
                        n,
                        vec![("P0".into(), even)],
                        vec![("E0".into(), true, e0.clone()), ("E1".into(), true, e1.clone())],
                    )
                    .unwrap(),
                );
            }
        }
    }
    out
}

pub fn assignment(pairs: &[(&str, usize)]) -> Assignment {
    pairs.iter().map(|(v, e)| (v.to_string(), *e)).collect()
}

/// All structures of size `1..=max` with a single convex equivalence `E0`.
pub fn single_equivalence_structures(max: usize) -> Vec<FiniteCcelStructure> {
    (1..=max)
        .flat_map(|n| {
            convex_partitions(n).into_iter().map(move |p| {
                FiniteCcelStructure::new(n, Vec::new(), vec![("E0".into(), true, p)]).unwrap()
            })
        })
        .collect()
}

/// Counts (structure, atom, assignment) triples where a primitive extended
/// atom disagrees with its first-order expansion.
pub fn successor_discrepancies(structures: &[FiniteCcelStructure], max_shift: i64) -> (usize, usize) {
    let (mut checked, mut bad) = (0, 0);
    for s in structures {
        let equivs: Vec<String> = s
            .equivalences()
            .iter()
            .filter(|e| e.convex)
            .map(|e| e.name.clone())
            .chain(["Id".to_string(), "Full".to_string()])
            .collect();
        for equiv in &equivs {
            for shift in -max_shift..=max_shift {
                for cmp in CMPS {
                    let atom = Formula::ext("x", cmp, equiv, shift, "y");
                    let Formula::Ext(a) = &atom else { unreachable!() };
                    let expanded = expand_ext_atom(a);
                    let prim = Evaluator::new(s, &atom, &["x", "y"]).unwrap();
                    let exp = Evaluator::new(s, &expanded, &["x", "y"]).unwrap();
                    for x in 0..s.size() {
                        for y in 0..s.size() {
                            checked += 1;
                            if prim.eval(&[x, y]) != exp.eval(&[x, y]) {
                                bad += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    (checked, bad)
}

pub fn signature() -> Signature {
    Signature::new(["P0", "P1"], vec![("E0".to_string(), true), ("E1".to_string(), false)])
}

fn atom() -> impl Strategy<Value = Formula> {
    let v = || prop::sample::select(VARS.to_vec());
    prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        (v(), v()).prop_map(|(a, b)| Formula::lt(a, b)),
        (v(), v()).prop_map(|(a, b)| Formula::eq(a, b)),
        (prop::sample::select(vec!["P0", "P1"]), v()).prop_map(|(p, a)| Formula::pred(p, a)),
        (prop::sample::select(vec!["E0", "E1", "Id", "Full"]), v(), v())
            .prop_map(|(e, a, b)| Formula::equiv(e, a, b)),
        (v(), prop::sample::select(CMPS.to_vec()), prop::sample::select(vec!["E0", "Id", "Full"]), -3i64..=3, v())
            .prop_map(|(a, c, e, n, b)| Formula::ext(a, c, e, n, b)),
    ]
}

/// Formula ASTs over [`signature`].
pub fn formula() -> impl Strategy<Value = Formula> {
    atom().prop_recursive(4, 32, 2, |inner| {
        let v = prop::sample::select(VARS.to_vec());
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.implies(b)),
            (v.clone(), inner.clone()).prop_map(|(x, a)| Formula::exists(x, a)),
            (v, inner).prop_map(|(x, a)| Formula::forall(x, a)),
        ]
    })
}

/// A structure of size `1..=max` over [`signature`].
pub fn structure(max: usize) -> impl Strategy<Value = FiniteCcelStructure> {
    (1..=max).prop_flat_map(|n| {
        let labels = || prop::collection::vec(0..n, n);
        (
            prop::collection::vec(any::<bool>(), n),
            prop::collection::vec(any::<bool>(), n),
            prop::collection::vec(any::<bool>(), n.saturating_sub(1)),
            labels(),
        )
            .prop_map(move |(p0, p1, cuts, free)| {
                let members = |v: &[bool]| (0..n).filter(|&i| v[i]).collect::<Vec<_>>();
                let mut convex = vec![vec![0]];
                for e in 1..n {
                    if cuts[e - 1] {
                        convex.push(Vec::new());
                    }
                    convex.last_mut().unwrap().push(e);
                }
                let mut free_blocks: Vec<Vec<usize>> = Vec::new();
                let mut seen: Vec<usize> = Vec::new();
                for (e, l) in free.iter().enumerate() {
                    match seen.iter().position(|x| x == l) {
                        Some(i) => free_blocks[i].push(e),
                        None => {
                            seen.push(*l);
                            free_blocks.push(vec![e]);
                        }
                    }
                }
                FiniteCcelStructure::new(
                    n,
                    vec![("P0".into(), members(&p0)), ("P1".into(), members(&p1))],
                    vec![("E0".into(), true, convex), ("E1".into(), false, free_blocks)],
                )
                .unwrap()
            })
    })
}
