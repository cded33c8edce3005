use std::collections::{BTreeMap, BTreeSet};

use super::{Bounds, ConditionError, ConditionTag, ConditionVerdict, Status, Witness};
use crate::formulas::{default_unary_basis, enumerate_uconvex_atoms, fresh_var, Formula, Var};
use crate::theories::{enumerate_types, AtomicType, Decider, TheoryFamily, WitnessEvaluator};

/// Greedy cover: for each positive vector, a short conjunction of atom
/// literals that is false on every negative vector.
fn cover(atoms: &[Formula], yes: &[&Vec<bool>], no: &[&Vec<bool>]) -> Formula {
    let mut terms: Vec<Formula> = Vec::new();
    let mut chosen_sets: BTreeSet<Vec<(usize, bool)>> = BTreeSet::new();
    for v in yes {
        let mut left: Vec<&Vec<bool>> = no.to_vec();
        let mut chosen: Vec<(usize, bool)> = Vec::new();
        while !left.is_empty() {
            let (best, _) = (0..atoms.len())
                .map(|i| (i, left.iter().filter(|w| w[i] != v[i]).count()))
                .max_by_key(|&(i, n)| (n, std::cmp::Reverse(i)))
                .expect("atoms are nonempty");
            chosen.push((best, v[best]));
            left.retain(|w| w[best] == v[best]);
        }
        chosen.sort();
        if chosen_sets.insert(chosen.clone()) {
            terms.push(Formula::conj(chosen.iter().map(|&(i, pos)| {
                if pos {
                    atoms[i].clone()
                } else {
                    atoms[i].clone().not()
                }
            })));
        }
    }
    Formula::disj(terms)
}

/// Whether `phi(x, y)` is equivalent to a Boolean combination of u-convex
/// atoms with shifts up to `max_shift` (default: the formula's own bound).
///
/// Refutations carry two 2-types that agree on every atom but not on `phi`;
/// successes carry a normal form verified on every 2-type.
pub fn check_uconvex_expressibility(
    fam: TheoryFamily,
    phi: &Formula,
    max_shift: Option<u32>,
    budget: u32,
) -> Result<ConditionVerdict, ConditionError> {
    let free = phi.free_vars();
    if !free.iter().all(|v| v == "x" || v == "y") {
        return Err(ConditionError::Arity(format!("{phi} has free variables outside x, y")));
    }
    let mut decider = Decider::new(fam, phi, budget)?;
    let shift = max_shift.unwrap_or_else(|| decider.bound().max(phi.max_shift() as u32));
    let sig = fam.signature();
    let atoms: Vec<Formula> = enumerate_uconvex_atoms(&sig, shift, &default_unary_basis(&sig))
        .iter()
        .map(|a| a.to_formula())
        .filter(|f| *f != Formula::True)
        .collect();
    let bound = decider.bound().max(shift);
    let bounds = Bounds {
        distance: fam.has_distances().then_some(bound),
        max_shift: Some(shift),
        ..Bounds::default()
    };
    let types = enumerate_types(fam, &["x", "y"], bound);
    let mut table: BTreeMap<Vec<bool>, (bool, AtomicType)> = BTreeMap::new();
    for t in &types {
        let vector = atoms.iter().map(|a| t.eval(fam, a)).collect::<Result<Vec<_>, _>>()?;
        let value = decider.decide(t)?;
        match table.get(&vector) {
            Some((other, prev)) if *other != value => {
                let mut w = Witness::pair(fam, prev, t);
                w.formula = Some(phi.to_string());
                verify_separation(fam, phi, &atoms, &w)?;
                let mut v = ConditionVerdict::new(ConditionTag::Uconvex, Status::Refuted, bounds);
                v.witness = Some(w);
                return Ok(v);
            }
            Some(_) => {}
            None => {
                table.insert(vector, (value, t.clone()));
            }
        }
    }
    let yes: Vec<&Vec<bool>> = table.iter().filter(|(_, (b, _))| *b).map(|(k, _)| k).collect();
    let no: Vec<&Vec<bool>> = table.iter().filter(|(_, (b, _))| !*b).map(|(k, _)| k).collect();
    let normal = if no.is_empty() {
        Formula::True
    } else if yes.is_empty() {
        Formula::False
    } else {
        cover(&atoms, &yes, &no)
    };
    for t in &types {
        if t.eval(fam, &normal)? != decider.decide(t)? {
            return Err(ConditionError::Unverified(format!("normal form {normal} fails on {t}")));
        }
    }
    let mut v = ConditionVerdict::new(ConditionTag::Uconvex, Status::HoldsExactly, bounds);
    v.normal_form = Some(normal);
    Ok(v)
}

/// Re-checks a separation witness on concrete points.
fn verify_separation(
    fam: TheoryFamily,
    phi: &Formula,
    atoms: &[Formula],
    w: &Witness,
) -> Result<(), ConditionError> {
    let ev = WitnessEvaluator::new(fam, phi);
    if ev.holds_on_type(phi, &w.left)? == ev.holds_on_type(phi, &w.right)? {
        return Err(ConditionError::Unverified(format!("{phi} does not separate {w}")));
    }
    for a in atoms {
        let ev = WitnessEvaluator::new(fam, a);
        if ev.holds_on_type(a, &w.left)? != ev.holds_on_type(a, &w.right)? {
            return Err(ConditionError::Unverified(format!("atom {a} separates {w}")));
        }
    }
    Ok(())
}

/// The first-order statement that `sup phi(U, a)` is non-decreasing in `a`
/// along each 1-type: for `a <= a'` of the same 1-type, every strict upper
/// bound of `phi(U, a')` is one of `phi(U, a)`.
pub fn monotonicity_sentence(fam: TheoryFamily, phi: &Formula) -> Formula {
    let mut taken: BTreeSet<Var> = phi.all_vars();
    let mut fresh = |base: &str| {
        let v = fresh_var(&taken, base);
        taken.insert(v.clone());
        v
    };
    let (a, a2, u, x) = (fresh("a"), fresh("b"), fresh("u"), fresh("t"));
    let at = |p: &str| phi.rename_free("y", p).rename_free("x", &x);
    let bounded = |p: &str| Formula::forall(&x, at(p).implies(Formula::lt(&x, &u)));
    let sup_le = Formula::forall(&u, bounded(&a2).implies(bounded(&a)));
    let same_type = Formula::conj(
        fam.one_types("_")
            .into_iter()
            .filter(|f| *f != Formula::True)
            .map(|f| f.rename_free("_", &a).iff(f.rename_free("_", &a2))),
    );
    let premise = same_type.and(Formula::le(&a, &a2));
    Formula::forall(&a, Formula::forall(&a2, premise.implies(sup_le)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse_formula;
    use crate::theories::{binary_battery, decide_sentence, DEFAULT_DISTANCE_BUDGET};

    fn check(fam: TheoryFamily, text: &str) -> ConditionVerdict {
        let f = parse_formula(text, &fam.signature()).unwrap();
        check_uconvex_expressibility(fam, &f, None, DEFAULT_DISTANCE_BUDGET).unwrap()
    }

    #[test]
    fn class_membership_needs_convexity() {
        let v = check(TheoryFamily::DenseClasses(2), "E0(x,y)");
        assert_eq!(v.status, Status::Refuted);
        assert!(v.witness.is_some());
        let v = check(TheoryFamily::LexDense, "E0(x,y) & x < y");
        assert_eq!(v.status, Status::HoldsExactly);
    }

    #[test]
    fn normal_forms_are_equivalent() {
        for fam in [TheoryFamily::ColoredDense(2), TheoryFamily::LexDense, TheoryFamily::LexOverZeta] {
            for f in binary_battery(fam, 20, 3) {
                let v = check_uconvex_expressibility(fam, &f, None, DEFAULT_DISTANCE_BUDGET).unwrap();
                assert_eq!(v.status, Status::HoldsExactly, "{fam}: {f}");
                assert!(v.normal_form.unwrap().is_quantifier_free());
            }
        }
    }

    #[test]
    fn monotone_sup() {
        for fam in [TheoryFamily::ColoredDense(2), TheoryFamily::LexDense] {
            for f in binary_battery(fam, 12, 9) {
                let s = monotonicity_sentence(fam, &f);
                assert!(s.free_vars().is_empty());
                assert!(decide_sentence(fam, &s, DEFAULT_DISTANCE_BUDGET).unwrap(), "{fam}: {f}");
            }
        }
    }

    #[test]
    fn reversed_comparison_fails() {
        let fam = TheoryFamily::ColoredDense(2);
        let text = "forall a. forall b. (a <= b -> forall u. ((forall t. (t < a -> t < u)) -> forall t. (t < b -> t < u)))";
        let f = parse_formula(text, &fam.signature()).unwrap();
        assert!(!decide_sentence(fam, &f, DEFAULT_DISTANCE_BUDGET).unwrap());
        let g = monotonicity_sentence(fam, &parse_formula("x < y", &fam.signature()).unwrap());
        assert!(decide_sentence(fam, &g, DEFAULT_DISTANCE_BUDGET).unwrap());
    }
}
