use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use super::{ext_cmp_holds, TheoryError, TheoryFamily, CLASS_EQUIV};
use crate::formulas::{ExtCmp, Formula, Var};
use crate::structures::{EQUALITY, FULL};

/// Relation between the classes of two consecutive ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Link {
    Same,
    /// The later class is exactly this many classes after the earlier one.
    Distance(u32),
    /// Different classes, more than the type's bound apart.
    Apart,
}

impl Link {
    fn value(self) -> Option<u64> {
        match self {
            Link::Same => Some(0),
            Link::Distance(d) => Some(d as u64),
            Link::Apart => None,
        }
    }

    fn options(fam: TheoryFamily, bound: u32) -> Vec<Link> {
        let mut out = vec![Link::Same];
        if fam.has_distances() {
            out.extend((1..=bound).map(Link::Distance));
        }
        out.push(Link::Apart);
        out
    }

    fn compose(self, other: Link, bound: u32) -> Link {
        match (self.value(), other.value()) {
            (Some(0), Some(0)) => Link::Same,
            (Some(a), Some(b)) if a + b <= bound as u64 => Link::Distance((a + b) as u32),
            _ => Link::Apart,
        }
    }

    fn clip(self, bound: u32) -> Link {
        match self {
            Link::Distance(d) if d > bound => Link::Apart,
            l => l,
        }
    }
}

/// Signed class distance between two ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ClassDiff {
    Finite(i64),
    FarAbove,
    FarBelow,
}

/// A complete atomic description of a tuple: a weak order of the variables,
/// a color and class per rank, and for the lexicographic families the links
/// between consecutive ranks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AtomicType {
    pub vars: Vec<Var>,
    /// Rank of each variable in the weak order.
    pub rank: Vec<usize>,
    /// Color of each rank.
    pub color: Vec<usize>,
    /// Class label of each rank, numbered in order of first appearance.
    pub class: Vec<usize>,
    /// Links between ranks `i` and `i + 1` (lexicographic families only).
    pub links: Vec<Link>,
    /// Distances above this are recorded as [`Link::Apart`].
    pub bound: u32,
}

impl AtomicType {
    pub fn empty(fam: TheoryFamily, bound: u32) -> Self {
        Self {
            vars: Vec::new(),
            rank: Vec::new(),
            color: Vec::new(),
            class: Vec::new(),
            links: Vec::new(),
            bound: if fam.has_distances() { bound } else { 0 },
        }
    }

    pub fn ranks(&self) -> usize {
        self.color.len()
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn position(&self, v: &str) -> Option<usize> {
        self.vars.iter().position(|w| w == v)
    }

    fn rank_of(&self, v: &str) -> Result<usize, TheoryError> {
        self.position(v)
            .map(|i| self.rank[i])
            .ok_or_else(|| TheoryError::UnboundVariable(v.to_string()))
    }

    /// Variables listed in strictly increasing order.
    pub fn is_increasing(&self) -> bool {
        self.rank.iter().enumerate().all(|(i, &r)| r == i)
    }

    fn relabel(&mut self, fam: TheoryFamily) {
        if fam.is_lex() {
            let mut c = 0;
            self.class = vec![0; self.ranks()];
            for (i, l) in self.links.iter().enumerate() {
                if *l != Link::Same {
                    c += 1;
                }
                self.class[i + 1] = c;
            }
        } else {
            let mut map: Vec<(usize, usize)> = Vec::new();
            for c in self.class.iter_mut() {
                let next = map.len();
                let new = match map.iter().find(|(old, _)| old == c) {
                    Some(&(_, n)) => n,
                    None => {
                        map.push((*c, next));
                        next
                    }
                };
                *c = new;
            }
        }
    }

    /// Every type over `vars + [v]` whose restriction to `vars` is `self`.
    pub fn extensions(&self, fam: TheoryFamily, v: &str) -> Vec<AtomicType> {
        let r = self.ranks();
        let mut out = Vec::new();
        for i in 0..r {
            let mut t = self.clone();
            t.vars.push(v.to_string());
            t.rank.push(i);
            out.push(t);
        }
        let options = Link::options(fam, self.bound);
        let used = self.class.iter().max().map_or(0, |m| m + 1);
        for j in 0..=r {
            let link_choices: Vec<Vec<Link>> = if !fam.is_lex() || r == 0 {
                vec![self.links.clone()]
            } else if j == 0 || j == r {
                options
                    .iter()
                    .map(|&l| {
                        let mut ls = self.links.clone();
                        ls.insert(if j == 0 { 0 } else { r - 1 }, l);
                        ls
                    })
                    .collect()
            } else {
                let old = self.links[j - 1];
                let mut v = Vec::new();
                for &a in &options {
                    for &b in &options {
                        if a.compose(b, self.bound) == old {
                            let mut ls = self.links.clone();
                            ls[j - 1] = a;
                            ls.insert(j, b);
                            v.push(ls);
                        }
                    }
                }
                v
            };
            let class_choices: Vec<usize> = match fam {
                TheoryFamily::DenseClasses(n) => (0..=used.min(n - 1)).collect(),
                _ => vec![0],
            };
            for color in 0..fam.colors() {
                for links in &link_choices {
                    for &label in &class_choices {
                        let mut t = self.clone();
                        for rk in t.rank.iter_mut() {
                            if *rk >= j {
                                *rk += 1;
                            }
                        }
                        t.vars.push(v.to_string());
                        t.rank.push(j);
                        t.color.insert(j, color);
                        t.class.insert(j, label);
                        t.links = links.clone();
                        t.relabel(fam);
                        out.push(t);
                    }
                }
            }
        }
        out
    }

    /// The type of the sub-tuple `vars`, in that order.
    pub fn restrict(&self, fam: TheoryFamily, vars: &[&str]) -> Result<AtomicType, TheoryError> {
        let idx: Vec<usize> = vars
            .iter()
            .map(|v| self.position(v).ok_or_else(|| TheoryError::UnboundVariable(v.to_string())))
            .collect::<Result<_, _>>()?;
        let mut kept: Vec<usize> = idx.iter().map(|&i| self.rank[i]).collect();
        kept.sort_unstable();
        kept.dedup();
        let new_rank = |old: usize| kept.binary_search(&old).unwrap();
        let mut links = Vec::new();
        if fam.is_lex() {
            for w in kept.windows(2) {
                let l = self.links[w[0]..w[1]]
                    .iter()
                    .fold(Link::Same, |acc, &l| acc.compose(l, self.bound));
                links.push(l);
            }
        }
        let mut t = AtomicType {
            vars: vars.iter().map(|v| v.to_string()).collect(),
            rank: idx.iter().map(|&i| new_rank(self.rank[i])).collect(),
            color: kept.iter().map(|&k| self.color[k]).collect(),
            class: kept.iter().map(|&k| self.class[k]).collect(),
            links,
            bound: self.bound,
        };
        t.relabel(fam);
        Ok(t)
    }

    /// The same type with distances above `bound` forgotten.
    pub fn clip(&self, bound: u32) -> AtomicType {
        let mut t = self.clone();
        if bound < t.bound {
            t.bound = bound;
            for l in t.links.iter_mut() {
                *l = l.clip(bound);
            }
        }
        t
    }

    fn class_diff(&self, from: usize, to: usize) -> ClassDiff {
        let (lo, hi) = (from.min(to), from.max(to));
        let mut sum: i64 = 0;
        for l in &self.links[lo..hi] {
            match l.value() {
                Some(d) => sum += d as i64,
                None => {
                    return if to > from { ClassDiff::FarAbove } else { ClassDiff::FarBelow };
                }
            }
        }
        ClassDiff::Finite(if to >= from { sum } else { -sum })
    }

    /// Truth of an atomic formula.
    pub fn holds_atom(&self, fam: TheoryFamily, f: &Formula) -> Result<bool, TheoryError> {
        let illegal = || TheoryError::IllegalAtom(f.to_string(), fam.to_string());
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Lt(x, y) => self.rank_of(x)? < self.rank_of(y)?,
            Formula::Eq(x, y) => self.rank_of(x)? == self.rank_of(y)?,
            Formula::Pred(p, x) => {
                let k = fam.color_index(p).ok_or_else(illegal)?;
                self.color[self.rank_of(x)?] == k
            }
            Formula::Equiv(e, x, y) => {
                let (rx, ry) = (self.rank_of(x)?, self.rank_of(y)?);
                if e == EQUALITY {
                    rx == ry
                } else if e == FULL {
                    true
                } else if e == CLASS_EQUIV && fam.has_classes() {
                    self.class[rx] == self.class[ry]
                } else {
                    return Err(illegal());
                }
            }
            Formula::Ext(a) => {
                let (re, ra) = (self.rank_of(&a.elem)?, self.rank_of(&a.anchor)?);
                if a.equiv == EQUALITY {
                    a.shift == 0 && ext_cmp_holds(a.cmp, re.cmp(&ra))
                } else if a.equiv == FULL {
                    a.shift == 0 && matches!(a.cmp, ExtCmp::BelowOrIn | ExtCmp::InOrAbove)
                } else if a.equiv == CLASS_EQUIV && fam.is_lex() {
                    if !fam.has_distances() {
                        a.shift == 0 && ext_cmp_holds(a.cmp, self.class[re].cmp(&self.class[ra]))
                    } else {
                        let need = a.shift.unsigned_abs() as u32;
                        if need > self.bound {
                            return Err(TheoryError::DistanceBudgetExceeded {
                                required: need,
                                budget: self.bound,
                            });
                        }
                        let ord = match self.class_diff(ra, re) {
                            ClassDiff::Finite(d) => d.cmp(&a.shift),
                            ClassDiff::FarAbove => Ordering::Greater,
                            ClassDiff::FarBelow => Ordering::Less,
                        };
                        ext_cmp_holds(a.cmp, ord)
                    }
                } else {
                    return Err(illegal());
                }
            }
            _ => return Err(TheoryError::NotALiteral(f.to_string())),
        })
    }

    /// Truth of a quantifier-free formula.
    pub fn eval(&self, fam: TheoryFamily, f: &Formula) -> Result<bool, TheoryError> {
        Ok(match f {
            Formula::Not(a) => !self.eval(fam, a)?,
            Formula::And(a, b) => self.eval(fam, a)? && self.eval(fam, b)?,
            Formula::Or(a, b) => self.eval(fam, a)? || self.eval(fam, b)?,
            Formula::Implies(a, b) => !self.eval(fam, a)? || self.eval(fam, b)?,
            _ => self.holds_atom(fam, f)?,
        })
    }

    fn representatives(&self) -> Vec<&str> {
        let mut reps = vec![""; self.ranks()];
        for (v, &r) in self.vars.iter().zip(&self.rank).rev() {
            reps[r] = v;
        }
        reps
    }

    /// The type as a conjunction of literals.
    pub fn to_formula(&self, fam: TheoryFamily) -> Formula {
        let reps = self.representatives();
        let mut lits = Vec::new();
        for (v, &r) in self.vars.iter().zip(&self.rank) {
            if v != reps[r] {
                lits.push(Formula::eq(reps[r], v));
            }
        }
        for w in reps.windows(2) {
            lits.push(Formula::lt(w[0], w[1]));
        }
        if let TheoryFamily::ColoredDense(_) = fam {
            for (r, rep) in reps.iter().enumerate() {
                lits.push(Formula::pred(&TheoryFamily::color_name(self.color[r]), rep));
            }
        }
        if let TheoryFamily::DenseClasses(_) = fam {
            for i in 1..reps.len() {
                match (0..i).find(|&j| self.class[j] == self.class[i]) {
                    Some(j) => lits.push(Formula::equiv(CLASS_EQUIV, reps[j], reps[i])),
                    None => {
                        for j in 0..i {
                            if (0..j).all(|k| self.class[k] != self.class[j]) {
                                lits.push(Formula::equiv(CLASS_EQUIV, reps[j], reps[i]).not());
                            }
                        }
                    }
                }
            }
        }
        if fam.is_lex() {
            for (i, l) in self.links.iter().enumerate() {
                let (a, b) = (reps[i], reps[i + 1]);
                lits.push(match (l, fam.has_distances()) {
                    (Link::Same, _) => Formula::equiv(CLASS_EQUIV, a, b),
                    (Link::Apart, false) => Formula::equiv(CLASS_EQUIV, a, b).not(),
                    (Link::Apart, true) => {
                        Formula::ext(b, ExtCmp::AboveStrict, CLASS_EQUIV, self.bound as i64, a)
                    }
                    (Link::Distance(d), _) => {
                        Formula::ext(b, ExtCmp::InOrAbove, CLASS_EQUIV, *d as i64, a)
                            .and(Formula::ext(b, ExtCmp::BelowOrIn, CLASS_EQUIV, *d as i64, a))
                    }
                });
            }
        }
        Formula::conj(lits)
    }
}

impl fmt::Display for AtomicType {
    /// `x=y < z` with `~` for a shared class, `<d` for a class distance,
    /// `<<` for distant classes, `[k]` for class labels and `{Pk}` for colors.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.links.is_empty() && self.class.iter().any(|&c| c > 0);
        let colors = self.color.iter().any(|&c| c > 0);
        for r in 0..self.ranks() {
            if r > 0 {
                match self.links.get(r - 1) {
                    Some(Link::Same) => write!(f, " <~ ")?,
                    Some(Link::Distance(d)) => write!(f, " <{d} ")?,
                    Some(Link::Apart) => write!(f, " << ")?,
                    None => write!(f, " < ")?,
                }
            }
            let group: Vec<&str> = self
                .vars
                .iter()
                .zip(&self.rank)
                .filter(|(_, &k)| k == r)
                .map(|(v, _)| v.as_str())
                .collect();
            write!(f, "{}", group.join("="))?;
            if labels {
                write!(f, "[{}]", self.class[r])?;
            }
            if colors {
                write!(f, "{{P{}}}", self.color[r])?;
            }
        }
        Ok(())
    }
}

/// All atomic types over `vars` (LexOverZeta distances truncated at `bound`).
pub fn enumerate_types(fam: TheoryFamily, vars: &[&str], bound: u32) -> Vec<AtomicType> {
    let mut layer = vec![AtomicType::empty(fam, bound)];
    for v in vars {
        layer = layer.iter().flat_map(|t| t.extensions(fam, v)).collect();
    }
    layer
}
