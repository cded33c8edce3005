use serde::Serialize;

use super::{DecomposeError, NamedPartition, Relation, SuccessorForm};
use crate::formulas::ExtCmp;
use crate::structures::{FiniteCcelStructure, Partition};

fn check_monotone(rel: &Relation) -> Result<(), DecomposeError> {
    let n = rel.size();
    for y in 0..n {
        let col = rel.column(y);
        if col.windows(2).any(|w| !w[0] && w[1]) {
            return Err(DecomposeError::NotInitialSegment { column: y });
        }
        if y > 0 {
            let prev = rel.column(y - 1);
            if prev.iter().zip(&col).any(|(&p, &c)| p && !c) {
                return Err(DecomposeError::NotMonotone {
                    lower: y - 1,
                    upper: y,
                });
            }
        }
    }
    Ok(())
}

fn form_for(
    s: &FiniteCcelStructure,
    e: &Partition,
    column: &[bool],
    a: usize,
) -> Result<SuccessorForm, DecomposeError> {
    let form = match (column.iter().rposition(|&b| b), column[a]) {
        (None, _) => SuccessorForm {
            equivalence: NamedPartition::identify(s, Partition::full(s.size())),
            shift: 0,
            cmp: ExtCmp::BelowStrict,
        },
        (Some(max), true) => SuccessorForm {
            equivalence: NamedPartition::identify(s, e.clone()),
            shift: e.block_index(max) as i64 - e.block_index(a) as i64,
            cmp: ExtCmp::BelowOrIn,
        },
        (Some(max), false) => SuccessorForm {
            equivalence: NamedPartition::identify(s, e.clone()),
            shift: e.block_index(max + 1) as i64 - e.block_index(a) as i64,
            cmp: ExtCmp::BelowStrict,
        },
    };
    if form.set(a) != column {
        return Err(DecomposeError::Verification(format!(
            "{} does not define the column of {a}",
            form.render(&a.to_string())
        )));
    }
    Ok(form)
}

/// Successor form of the column `D(a)` of a monotone relation, with `E` the
/// equality-of-rows equivalence.
pub fn initial_successor_form(
    s: &FiniteCcelStructure,
    rel: &Relation,
    a: usize,
) -> Result<SuccessorForm, DecomposeError> {
    if rel.size() != s.size() {
        return Err(DecomposeError::SizeMismatch {
            expected: s.size(),
            found: rel.size(),
        });
    }
    check_monotone(rel)?;
    form_for(s, &rel.row_partition(), &rel.column(a), a)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Case {
    pub guard: Vec<usize>,
    pub form: SuccessorForm,
}

/// Disjoint guards, each paired with one successor form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseList {
    pub cases: Vec<Case>,
}

impl CaseList {
    /// The relation `⋁ (y ∈ guard_i ∧ form_i(x, y))`.
    pub fn relation(&self, size: usize) -> Relation {
        let mut cols = vec![vec![false; size]; size];
        for c in &self.cases {
            for &y in &c.guard {
                cols[y] = c.form.set(y);
            }
        }
        Relation::from_fn(size, |x, y| cols[y][x])
    }
}

/// Groups parameters by their successor form.
pub fn monotone_decompose(
    s: &FiniteCcelStructure,
    rel: &Relation,
) -> Result<CaseList, DecomposeError> {
    if rel.size() != s.size() {
        return Err(DecomposeError::SizeMismatch {
            expected: s.size(),
            found: rel.size(),
        });
    }
    check_monotone(rel)?;
    let e = rel.row_partition();
    let mut cases: Vec<Case> = Vec::new();
    for y in 0..s.size() {
        let form = form_for(s, &e, &rel.column(y), y)?;
        match cases.iter_mut().find(|c| c.form == form) {
            Some(c) => c.guard.push(y),
            None => cases.push(Case {
                guard: vec![y],
                form,
            }),
        }
    }
    let out = CaseList { cases };
    if out.relation(s.size()) != *rel {
        return Err(DecomposeError::Verification(
            "case list does not reassemble the relation".into(),
        ));
    }
    Ok(out)
}

/// `ψ(x, y) := ∃v (θ(v) ∧ v <= y ∧ φ(x, v))`.
pub fn monotonize(rel: &Relation, theta: &[bool]) -> Relation {
    let n = rel.size();
    Relation::from_fn(n, |x, y| (0..=y).any(|v| theta[v] && rel.get(x, v)))
}

/// Parameters whose columns are not initial segments.
pub fn non_initial_columns(rel: &Relation) -> Vec<usize> {
    (0..rel.size())
        .filter(|&y| rel.column(y).windows(2).any(|w| !w[0] && w[1]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plain(n: usize) -> FiniteCcelStructure {
        FiniteCcelStructure::new(n, vec![], vec![]).unwrap()
    }

    #[test]
    fn identity_and_strict_cases() {
        let s = plain(5);
        let le = Relation::from_fn(5, |x, y| x <= y);
        let f = initial_successor_form(&s, &le, 2).unwrap();
        assert_eq!(f.equivalence.name.as_deref(), Some("Id"));
        assert_eq!((f.shift, f.cmp), (0, ExtCmp::BelowOrIn));
        let lt = Relation::from_fn(5, |x, y| x < y);
        let f = initial_successor_form(&s, &lt, 3).unwrap();
        assert_eq!((f.shift, f.cmp), (0, ExtCmp::BelowStrict));
        assert_eq!(f.equivalence.name.as_deref(), Some("Id"));
    }

    #[test]
    fn rejects_non_monotone() {
        let s = plain(3);
        let r = Relation::from_fn(3, |x, y| x == y);
        assert!(matches!(
            initial_successor_form(&s, &r, 0),
            Err(DecomposeError::NotInitialSegment { .. })
        ));
        let r = Relation::from_fn(3, |x, y| y == 0 && x == 0);
        assert!(matches!(
            monotone_decompose(&s, &r),
            Err(DecomposeError::NotMonotone { lower: 0, upper: 1 })
        ));
    }

    #[test]
    fn empty_relation_is_one_case() {
        let s = plain(4);
        let r = Relation::from_fn(4, |_, _| false);
        let cl = monotone_decompose(&s, &r).unwrap();
        assert_eq!(cl.cases.len(), 1);
        assert_eq!(cl.cases[0].form.equivalence.name.as_deref(), Some("Full"));
    }

    #[test]
    fn monotonize_guards() {
        // columns are initial segments but not nested
        let r = Relation::from_fn(4, |x, y| if y == 2 { x == 0 } else { x <= y });
        assert_eq!(non_initial_columns(&r), Vec::<usize>::new());
        let theta = [true, true, false, true];
        let m = monotonize(&r, &theta);
        assert!(check_monotone(&m).is_ok());
        for y in [0, 1, 3] {
            assert_eq!(m.column(y), r.column(y));
        }
    }
}
