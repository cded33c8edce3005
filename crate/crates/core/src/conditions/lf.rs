use std::collections::BTreeSet;

use super::{Bounds, ConditionError, ConditionTag, ConditionVerdict, Status};
use crate::formulas::{fresh_var, Formula, Var};
use crate::semantics::count_types_over_cut;
use crate::structures::FiniteCcelStructure;
use crate::theories::{enumerate_types, AtomicType, Decider, TheoryFamily};

/// `Eqv(a, p, q)`: no parameters below `a` separate `p` from `q` in `phi`.
fn equivalence_below(phi: &Formula, x: &str, params: &[&str]) -> (Formula, [Var; 3]) {
    let mut taken: BTreeSet<Var> = phi.all_vars();
    let mut fresh = |base: &str| {
        let v = fresh_var(&taken, base);
        taken.insert(v.clone());
        v
    };
    let (a, p, q) = (fresh("a"), fresh("p"), fresh("q"));
    let cs: Vec<Var> = params.iter().map(|_| fresh("c")).collect();
    let inst = |b: &str| {
        let mut f = phi.clone();
        for (y, c) in params.iter().zip(&cs) {
            f = f.rename_free(y, c);
        }
        f.rename_free(x, b)
    };
    let below = Formula::conj(cs.iter().map(|c| Formula::lt(c, &a)));
    let body = below.implies(inst(&p).iff(inst(&q)));
    let eqv = cs.iter().rev().fold(body, |acc, c| Formula::forall(c, acc));
    (eqv, [a, p, q])
}

struct CliqueSearch<'a> {
    fam: TheoryFamily,
    decider: Decider,
    names: &'a [Var; 3],
    limit: usize,
    best: usize,
    capped: bool,
}

impl CliqueSearch<'_> {
    fn inequivalent(&mut self, t: &AtomicType, u: &str, v: &str) -> Result<bool, ConditionError> {
        let mut r = t.restrict(self.fam, &[&t.vars[0], u, v])?;
        r.vars = self.names.to_vec();
        Ok(!self.decider.decide(&r)?)
    }

    /// Extends `t` (anchor `a`, then pairwise inequivalent points in
    /// increasing order) by a new point above all others.
    fn grow(&mut self, t: &AtomicType, depth: usize) -> Result<(), ConditionError> {
        self.best = self.best.max(depth);
        if depth >= self.limit {
            self.capped = true;
            return Ok(());
        }
        let v = format!("b{depth}");
        for ext in t.extensions(self.fam, &v) {
            let i = ext.arity() - 1;
            let top = ext.rank[i];
            let on_top = ext.rank[..i].iter().all(|&r| r < top);
            let above_anchor = depth > 0 || ext.rank[i] >= ext.rank[0];
            if !(above_anchor && (depth == 0 || on_top)) {
                continue;
            }
            let mut ok = true;
            for j in 1..i {
                if !self.inequivalent(&ext, &ext.vars[j].clone(), &v)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                self.grow(&ext, depth + 1)?;
                if self.capped {
                    return Ok(());
                }
            }
        }
        Ok(())
    }
}

/// Linear finiteness of `phi(x; params)` over cuts `(-inf, a)`: the number of
/// `phi`-types over the cut realized at or above `a`.
///
/// The count is exact unless it reaches `limit`.
pub fn check_lf_family(
    fam: TheoryFamily,
    phi: &Formula,
    x: &str,
    params: &[&str],
    limit: usize,
    budget: u32,
) -> Result<ConditionVerdict, ConditionError> {
    fam.check_formula(phi)?;
    let (eqv, names) = equivalence_below(phi, x, params);
    let decider = Decider::new(fam, &eqv, budget)?;
    let bound = decider.bound();
    let mut search = CliqueSearch { fam, decider, names: &names, limit, best: 0, capped: false };
    for anchor in enumerate_types(fam, &[names[0].as_str()], bound) {
        search.grow(&anchor, 0)?;
        if search.capped {
            break;
        }
    }
    let bounds = Bounds {
        distance: fam.has_distances().then_some(bound),
        clique_limit: Some(limit),
        ..Bounds::default()
    };
    let status = if search.capped { Status::ConsistentUpToBounds } else { Status::HoldsExactly };
    let mut v = ConditionVerdict::new(ConditionTag::Lf, status, bounds);
    v.n_phi = Some(search.best);
    Ok(v)
}

/// Linear finiteness on a finite structure: the largest number of
/// `phi`-types over an initial segment.
pub fn check_lf_structure(
    s: &FiniteCcelStructure,
    phi: &Formula,
    xs: &[&str],
    ys: &[&str],
) -> Result<ConditionVerdict, ConditionError> {
    let mut best = 0;
    for cut in 0..=s.size() {
        best = best.max(count_types_over_cut(s, phi, xs, ys, cut)?.count);
    }
    let mut v = ConditionVerdict::new(ConditionTag::Lf, Status::HoldsExactly, Bounds::default());
    v.n_phi = Some(best);
    Ok(v)
}
