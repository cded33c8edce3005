//! Tarski evaluation on finite structures, φ-types over parameter sets, and
//! counting of φ-types realized above a cut.

mod eval;

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::formulas::{fresh_var, ExtAtom, ExtCmp, Formula};
use crate::structures::{FiniteCcelStructure, StructureError, EQUALITY, FULL};

pub use eval::Evaluator;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("free variable `{0}` has no value")]
    UnboundVariable(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("expected {expected} value(s), got {found}")]
    Arity { expected: usize, found: usize },
    #[error("element {element} out of range for domain of size {size}")]
    ElementOutOfRange { element: usize, size: usize },
}

pub type Assignment = BTreeMap<String, usize>;

fn check_elements(s: &FiniteCcelStructure, elems: &[usize]) -> Result<(), SemanticsError> {
    match elems.iter().find(|&&e| e >= s.size()) {
        Some(&element) => Err(SemanticsError::ElementOutOfRange {
            element,
            size: s.size(),
        }),
        None => Ok(()),
    }
}

/// Truth value of `f` under `assignment`, which must cover its free variables.
pub fn evaluate(
    s: &FiniteCcelStructure,
    f: &Formula,
    assignment: &Assignment,
) -> Result<bool, SemanticsError> {
    let names: Vec<&str> = assignment.keys().map(String::as_str).collect();
    let values: Vec<usize> = assignment.values().copied().collect();
    check_elements(s, &values)?;
    Ok(Evaluator::new(s, f, &names)?.eval(&values))
}

/// `{a : s ⊨ f(a, params)}` with `x` the object variable.
pub fn definable_set(
    s: &FiniteCcelStructure,
    f: &Formula,
    x: &str,
    params: &[&str],
    values: &[usize],
) -> Result<Vec<usize>, SemanticsError> {
    if params.len() != values.len() {
        return Err(SemanticsError::Arity {
            expected: params.len(),
            found: values.len(),
        });
    }
    check_elements(s, values)?;
    let mut vars = vec![x];
    vars.extend_from_slice(params);
    let ev = Evaluator::new(s, f, &vars)?;
    let mut buf = vec![0; vars.len()];
    buf[1..].copy_from_slice(values);
    Ok((0..s.size())
        .filter(|&a| {
            buf[0] = a;
            ev.eval(&buf)
        })
        .collect())
}

/// The truth pattern of `f(b, c)` as `c` ranges over `C^m` in lexicographic
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PhiType {
    pub formula: String,
    pub params: Vec<usize>,
    pub pattern: Vec<bool>,
}

/// All `m`-tuples over `c`, lexicographically.
pub fn tuples(c: &[usize], m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|t| {
                c.iter().map(move |&e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    out
}

fn pattern(ev: &Evaluator<'_>, b: &[usize], param_tuples: &[Vec<usize>]) -> Vec<bool> {
    let mut buf = b.to_vec();
    param_tuples
        .iter()
        .map(|t| {
            buf.truncate(b.len());
            buf.extend_from_slice(t);
            ev.eval(&buf)
        })
        .collect()
}

/// `tp_φ(b/C)` for `φ(x̄; ȳ)`.
pub fn phi_type(
    s: &FiniteCcelStructure,
    f: &Formula,
    xs: &[&str],
    ys: &[&str],
    b: &[usize],
    c: &[usize],
) -> Result<PhiType, SemanticsError> {
    if xs.len() != b.len() {
        return Err(SemanticsError::Arity {
            expected: xs.len(),
            found: b.len(),
        });
    }
    check_elements(s, b)?;
    check_elements(s, c)?;
    let mut params = c.to_vec();
    params.sort_unstable();
    params.dedup();
    let vars: Vec<&str> = xs.iter().chain(ys).copied().collect();
    let ev = Evaluator::new(s, f, &vars)?;
    let pattern = pattern(&ev, b, &tuples(&params, ys.len()));
    Ok(PhiType {
        formula: f.to_string(),
        params,
        pattern,
    })
}

/// Distinct φ-types over the cut `{0..cut_size-1}` realized by tuples from
/// its complement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutReport {
    pub cut_size: usize,
    pub count: usize,
    pub representatives: Vec<Vec<usize>>,
    #[serde(skip)]
    pub patterns: Vec<Vec<bool>>,
}

pub fn count_types_over_cut(
    s: &FiniteCcelStructure,
    f: &Formula,
    xs: &[&str],
    ys: &[&str],
    cut_size: usize,
) -> Result<CutReport, SemanticsError> {
    let cut_size = cut_size.min(s.size());
    let vars: Vec<&str> = xs.iter().chain(ys).copied().collect();
    let ev = Evaluator::new(s, f, &vars)?;
    let cut: Vec<usize> = (0..cut_size).collect();
    let above: Vec<usize> = (cut_size..s.size()).collect();
    let param_tuples = tuples(&cut, ys.len());
    let mut by_hash: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut representatives = Vec::new();
    let mut patterns = Vec::new();
    for b in tuples(&above, xs.len()) {
        let p = pattern(&ev, &b, &param_tuples);
        if !by_hash.contains_key(&p) {
            by_hash.insert(p.clone(), representatives.len());
            representatives.push(b);
            patterns.push(p);
        }
    }
    Ok(CutReport {
        cut_size,
        count: representatives.len(),
        representatives,
        patterns,
    })
}

/// First-order definition of `S^n_E(y, z)`: `z` lies in the `n`-th class
/// after the class of `y`.
pub fn successor_relation(equiv: &str, n: i64, y: &str, z: &str) -> Formula {
    let rel = |a: &str, b: &str| match equiv {
        EQUALITY => Formula::eq(a, b),
        FULL => Formula::True,
        _ => Formula::equiv(equiv, a, b),
    };
    if n < 0 {
        return successor_relation(equiv, -n, z, y);
    }
    if n == 0 {
        return rel(y, z);
    }
    let taken = [y, z].iter().map(|v| v.to_string()).collect();
    let w = fresh_var(&taken, "w");
    let step = |a: &str, b: &str| {
        rel(a, b).not().and(Formula::lt(a, b)).and(Formula::forall(
            &w,
            Formula::lt(a, &w)
                .and(Formula::lt(&w, b))
                .implies(rel(&w, a).or(rel(&w, b))),
        ))
    };
    if n == 1 {
        return step(y, z);
    }
    let v = fresh_var(&taken, "v");
    Formula::exists(
        &v,
        successor_relation(equiv, n - 1, y, &v).and(step(&v, z)),
    )
}

/// The first-order expansion of an extended atom.
pub fn expand_ext_atom(atom: &ExtAtom) -> Formula {
    let (x, y) = (atom.elem.as_str(), atom.anchor.as_str());
    let taken = [x, y].iter().map(|v| v.to_string()).collect();
    let z = fresh_var(&taken, "z");
    let s = |b: &str| successor_relation(&atom.equiv, atom.shift, y, b);
    let strict = |below: bool| {
        let cmp = if below {
            Formula::lt(x, &z)
        } else {
            Formula::lt(&z, x)
        };
        Formula::exists(&z, s(&z)).and(Formula::forall(&z, s(&z).implies(cmp)))
    };
    match atom.cmp {
        ExtCmp::BelowStrict => strict(true),
        ExtCmp::BelowOrIn => strict(true).or(s(x)),
        ExtCmp::AboveStrict => strict(false),
        ExtCmp::InOrAbove => strict(false).or(s(x)),
    }
}

/// Replaces every extended atom by its first-order expansion.
pub fn expand_all(f: &Formula) -> Formula {
    match f {
        Formula::Ext(a) => expand_ext_atom(a),
        Formula::Not(a) => expand_all(a).not(),
        Formula::And(a, b) => expand_all(a).and(expand_all(b)),
        Formula::Or(a, b) => expand_all(a).or(expand_all(b)),
        Formula::Implies(a, b) => expand_all(a).implies(expand_all(b)),
        Formula::Exists(v, a) => Formula::exists(v, expand_all(a)),
        Formula::Forall(v, a) => Formula::forall(v, expand_all(a)),
        other => other.clone(),
    }
}
