use ccel::formulas::Formula;
use ccel::theories::{
    atomic_type_sat, battery, decide_on_type, decide_sentence, eliminate_quantifiers,
    enumerate_types, required_bound, AtomicConstraint, Literal, TheoryFamily, WitnessEvaluator,
    DEFAULT_DISTANCE_BUDGET,
};
use proptest::prelude::*;

fn families() -> Vec<TheoryFamily> {
    vec![
        TheoryFamily::ColoredDense(2),
        TheoryFamily::DenseClasses(2),
        TheoryFamily::DenseClasses(3),
        TheoryFamily::LexDense,
        TheoryFamily::LexOverZeta,
    ]
}

fn free_names(f: &Formula) -> Vec<String> {
    f.free_vars().into_iter().collect()
}

#[test]
fn elimination_agrees_with_witness_evaluator() {
    for fam in families() {
        for f in battery(fam, 60, 11) {
            let q = eliminate_quantifiers(fam, &f, DEFAULT_DISTANCE_BUDGET).unwrap();
            assert!(q.is_quantifier_free());
            let bound = required_bound(fam, &f).max(q.max_shift() as u32);
            let free = free_names(&f);
            let names: Vec<&str> = free.iter().map(String::as_str).collect();
            let oracle = WitnessEvaluator::new(fam, &f);
            for t in enumerate_types(fam, &names, bound) {
                let by_qe = t.eval(fam, &q).unwrap();
                let by_witness = oracle.holds_on_type(&f, &t).unwrap();
                assert_eq!(by_qe, by_witness, "{fam}: {f} on {t}");
            }
        }
    }
}

#[test]
fn atomic_types_decide_every_formula() {
    for fam in families() {
        for f in battery(fam, 60, 5).into_iter().step_by(3) {
            let free = free_names(&f);
            let names: Vec<&str> = free.iter().map(String::as_str).collect();
            for t in enumerate_types(fam, &names, required_bound(fam, &f)) {
                let tau = t.to_formula(fam);
                let close = |g: Formula| {
                    free.iter().rev().fold(g, |acc, v| Formula::exists(v, acc))
                };
                let pos = decide_sentence(fam, &close(tau.clone().and(f.clone())), u32::MAX).unwrap();
                let neg = decide_sentence(fam, &close(tau.and(f.clone().not())), u32::MAX).unwrap();
                assert!(pos != neg, "{fam}: {f} on {t}");
                assert_eq!(pos, decide_on_type(fam, &f, &t).unwrap());
            }
        }
    }
}

fn literal_strategy(fam: TheoryFamily) -> impl Strategy<Value = Literal> {
    let vars = ["x", "y", "z"];
    let atom = (0..6usize, 0..3usize, 0..3usize, -2i64..=2, 0..4usize).prop_map(
        move |(kind, i, j, shift, c)| {
            let (u, v) = (vars[i], vars[j]);
            let cmps = [
                ccel::formulas::ExtCmp::BelowStrict,
                ccel::formulas::ExtCmp::BelowOrIn,
                ccel::formulas::ExtCmp::AboveStrict,
                ccel::formulas::ExtCmp::InOrAbove,
            ];
            match (kind, fam) {
                (0, _) | (3, TheoryFamily::ColoredDense(_)) => Formula::lt(u, v),
                (1, _) => Formula::eq(u, v),
                (2, TheoryFamily::ColoredDense(_)) => Formula::pred(&format!("P{}", c % 2), u),
                (_, TheoryFamily::ColoredDense(_)) => Formula::ext(u, cmps[c], "Id", 0, v),
                (2, _) | (3, TheoryFamily::DenseClasses(_)) => Formula::equiv("E0", u, v),
                (_, TheoryFamily::DenseClasses(_)) => Formula::ext(u, cmps[c], "Full", 0, v),
                (_, TheoryFamily::LexDense) => Formula::ext(u, cmps[c], "E0", 0, v),
                _ => Formula::ext(u, cmps[c], "E0", shift, v),
            }
        },
    );
    (atom, any::<bool>()).prop_map(|(atom, positive)| Literal { positive, atom })
}

fn constraint_case() -> impl Strategy<Value = (TheoryFamily, Vec<Literal>)> {
    prop_oneof![
        Just(TheoryFamily::ColoredDense(2)),
        Just(TheoryFamily::DenseClasses(2)),
        Just(TheoryFamily::DenseClasses(3)),
        Just(TheoryFamily::LexDense),
        Just(TheoryFamily::LexOverZeta),
    ]
    .prop_flat_map(|fam| (Just(fam), proptest::collection::vec(literal_strategy(fam), 1..7)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    /// The literal solver agrees with search over enumerated types.
    #[test]
    fn sat_matches_type_search((fam, lits) in constraint_case()) {
        let c = AtomicConstraint::new(lits);
        let f = c.to_formula();
        let by_solver = atomic_type_sat(fam, &c).unwrap();
        let by_types = enumerate_types(fam, &["x", "y", "z"], 3)
            .iter()
            .any(|t| t.eval(fam, &f).unwrap());
        prop_assert_eq!(by_solver, by_types, "{}", f);
    }
}
