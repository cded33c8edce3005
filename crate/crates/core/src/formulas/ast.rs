use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

pub type Var = String;

/// How an element compares with a successor class `S^n_E(y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ExtCmp {
    /// `x < S^n_E(y)`
    BelowStrict,
    /// `x <= S^n_E(y)`
    BelowOrIn,
    /// `S^n_E(y) < x`
    AboveStrict,
    /// `S^n_E(y) <= x`
    InOrAbove,
}

/// Comparison of `elem` against the `shift`-th successor class of `anchor`.
///
/// All four comparisons are false when that class does not exist.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ExtAtom {
    pub elem: Var,
    pub cmp: ExtCmp,
    pub equiv: String,
    pub shift: i64,
    pub anchor: Var,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Formula {
    True,
    False,
    Lt(Var, Var),
    Eq(Var, Var),
    Pred(String, Var),
    Equiv(String, Var, Var),
    Ext(ExtAtom),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

pub fn var(name: &str) -> Var {
    name.to_string()
}

impl Formula {
    pub fn lt(x: &str, y: &str) -> Self {
        Formula::Lt(x.into(), y.into())
    }

    pub fn eq(x: &str, y: &str) -> Self {
        Formula::Eq(x.into(), y.into())
    }

    /// `x <= y`, spelled as a disjunction.
    pub fn le(x: &str, y: &str) -> Self {
        Formula::lt(x, y).or(Formula::eq(x, y))
    }

    pub fn pred(name: &str, x: &str) -> Self {
        Formula::Pred(name.into(), x.into())
    }

    pub fn equiv(name: &str, x: &str, y: &str) -> Self {
        Formula::Equiv(name.into(), x.into(), y.into())
    }

    pub fn ext(elem: &str, cmp: ExtCmp, equiv: &str, shift: i64, anchor: &str) -> Self {
        Formula::Ext(ExtAtom {
            elem: elem.into(),
            cmp,
            equiv: equiv.into(),
            shift,
            anchor: anchor.into(),
        })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn iff(self, other: Formula) -> Self {
        self.clone()
            .implies(other.clone())
            .and(other.implies(self))
    }

    pub fn exists(v: &str, body: Formula) -> Self {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn forall(v: &str, body: Formula) -> Self {
        Formula::Forall(v.into(), Box::new(body))
    }

    /// Conjunction of a list; `true` when empty.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::True,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Disjunction of a list; `false` when empty.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::False,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(
            self,
            Formula::True
                | Formula::False
                | Formula::Lt(..)
                | Formula::Eq(..)
                | Formula::Pred(..)
                | Formula::Equiv(..)
                | Formula::Ext(..)
        )
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let mut add = |v: &Var, bound: &Vec<Var>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Lt(a, b) | Formula::Eq(a, b) | Formula::Equiv(_, a, b) => {
                add(a, bound);
                add(b, bound);
            }
            Formula::Pred(_, a) => add(a, bound),
            Formula::Ext(e) => {
                add(&e.elem, bound);
                add(&e.anchor, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Lt(a, b) | Formula::Eq(a, b) | Formula::Equiv(_, a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Formula::Pred(_, a) => {
                out.insert(a.clone());
            }
            Formula::Ext(e) => {
                out.insert(e.elem.clone());
                out.insert(e.anchor.clone());
            }
            Formula::Exists(v, _) | Formula::Forall(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => a.visit(f),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.visit(f);
                r.visit(f);
            }
            _ => {}
        }
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Not(a) => a.quantifier_depth(),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.quantifier_depth().max(r.quantifier_depth())
            }
            Formula::Exists(_, a) | Formula::Forall(_, a) => 1 + a.quantifier_depth(),
            _ => 0,
        }
    }

    /// Largest `|shift|` among successor atoms, 0 if there are none.
    pub fn max_shift(&self) -> u64 {
        let mut m = 0;
        self.visit(&mut |f| {
            if let Formula::Ext(e) = f {
                m = m.max(e.shift.unsigned_abs());
            }
        });
        m
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.quantifier_depth() == 0
    }

    /// Capture-avoiding substitution of the free variable `from` by `to`.
    pub fn rename_free(&self, from: &str, to: &str) -> Formula {
        let r = |v: &Var| if v == from { to.to_string() } else { v.clone() };
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Lt(a, b) => Formula::Lt(r(a), r(b)),
            Formula::Eq(a, b) => Formula::Eq(r(a), r(b)),
            Formula::Pred(p, a) => Formula::Pred(p.clone(), r(a)),
            Formula::Equiv(e, a, b) => Formula::Equiv(e.clone(), r(a), r(b)),
            Formula::Ext(e) => Formula::Ext(ExtAtom {
                elem: r(&e.elem),
                anchor: r(&e.anchor),
                ..e.clone()
            }),
            Formula::Not(a) => a.rename_free(from, to).not(),
            Formula::And(l, rr) => l.rename_free(from, to).and(rr.rename_free(from, to)),
            Formula::Or(l, rr) => l.rename_free(from, to).or(rr.rename_free(from, to)),
            Formula::Implies(l, rr) => l.rename_free(from, to).implies(rr.rename_free(from, to)),
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                let is_exists = matches!(self, Formula::Exists(..));
                let rebuild = |v: &str, b: Formula| {
                    if is_exists {
                        Formula::exists(v, b)
                    } else {
                        Formula::forall(v, b)
                    }
                };
                if v == from {
                    return self.clone();
                }
                if v == to && body.free_vars().contains(from) {
                    let mut taken = body.all_vars();
                    taken.insert(from.to_string());
                    taken.insert(to.to_string());
                    let fresh = fresh_var(&taken, v);
                    let renamed = body.rename_free(v, &fresh);
                    return rebuild(&fresh, renamed.rename_free(from, to));
                }
                rebuild(v, body.rename_free(from, to))
            }
        }
    }
}

/// A variable name based on `base` not occurring in `taken`.
pub fn fresh_var(taken: &BTreeSet<Var>, base: &str) -> Var {
    let stem: String = base.trim_end_matches(|c: char| c.is_ascii_digit()).to_string();
    let stem = if stem.is_empty() { "v".to_string() } else { stem };
    (0..)
        .map(|i| format!("{stem}{i}"))
        .find(|c| !taken.contains(c))
        .expect("infinite supply")
}

impl fmt::Display for ExtAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = format!("S[{},{}]({})", self.equiv, self.shift, self.anchor);
        match self.cmp {
            ExtCmp::BelowStrict => write!(f, "{} < {}", self.elem, s),
            ExtCmp::BelowOrIn => write!(f, "{} <= {}", self.elem, s),
            ExtCmp::AboveStrict => write!(f, "{} < {}", s, self.elem),
            ExtCmp::InOrAbove => write!(f, "{} <= {}", s, self.elem),
        }
    }
}

fn is_binary(f: &Formula) -> bool {
    matches!(f, Formula::And(..) | Formula::Or(..) | Formula::Implies(..))
}

fn is_quantifier(f: &Formula) -> bool {
    matches!(f, Formula::Exists(..) | Formula::Forall(..))
}

fn operand(f: &Formula) -> String {
    if is_quantifier(f) {
        format!("({f})")
    } else {
        f.to_string()
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Lt(a, b) => write!(f, "{a} < {b}"),
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Pred(p, a) => write!(f, "{p}({a})"),
            Formula::Equiv(e, a, b) => write!(f, "{e}({a},{b})"),
            Formula::Ext(e) => write!(f, "{e}"),
            Formula::Not(a) if is_binary(a) => write!(f, "!{a}"),
            Formula::Not(a) => write!(f, "!({a})"),
            Formula::And(l, r) => write!(f, "({} & {})", operand(l), operand(r)),
            Formula::Or(l, r) => write!(f, "({} | {})", operand(l), operand(r)),
            Formula::Implies(l, r) => write!(f, "({} -> {})", operand(l), operand(r)),
            Formula::Exists(v, a) => write!(f, "exists {v}. {a}"),
            Formula::Forall(v, a) => write!(f, "forall {v}. {a}"),
        }
    }
}
