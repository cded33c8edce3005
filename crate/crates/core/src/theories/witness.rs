use std::collections::BTreeSet;
use std::fmt;

use num_rational::Rational64;

use super::types::{AtomicType, Link};
use super::{ext_cmp_holds, TheoryError, TheoryFamily, CLASS_EQUIV};
use crate::formulas::{ExtCmp, Formula, Var};
use crate::structures::{EQUALITY, FULL};

/// A point of a canonical model.
///
/// `major` is the position (colored and class families) or the class index
/// (lexicographic families), `minor` the position inside the class, `label`
/// the color or class of the point in the non-lexicographic families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point {
    pub major: Rational64,
    pub minor: Rational64,
    pub label: usize,
}

impl Point {
    fn new(major: Rational64, minor: Rational64, label: usize) -> Self {
        Self { major, minor, label }
    }

    fn key(&self) -> (Rational64, Rational64) {
        (self.major, self.minor)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})#{}", self.major, self.minor, self.label)
    }
}

fn int(k: i64) -> Rational64 {
    Rational64::from_integer(k)
}

/// Positions below, between and above the given sorted values.
fn gap_positions(sorted: &[Rational64]) -> Vec<Rational64> {
    match (sorted.first(), sorted.last()) {
        (Some(&lo), Some(&hi)) => {
            let mut out = vec![lo - int(1)];
            out.extend(sorted.windows(2).map(|w| (w[0] + w[1]) / int(2)));
            out.push(hi + int(1));
            out
        }
        _ => vec![int(0)],
    }
}

fn sorted_unique(it: impl Iterator<Item = Rational64>) -> Vec<Rational64> {
    let set: BTreeSet<Rational64> = it.collect();
    set.into_iter().collect()
}

/// Evaluates formulas directly on points of the canonical model, trying at
/// each quantifier one candidate from every orbit over the points bound so
/// far.
pub struct WitnessEvaluator {
    fam: TheoryFamily,
    max_shift: i64,
}

impl WitnessEvaluator {
    pub fn new(fam: TheoryFamily, f: &Formula) -> Self {
        Self { fam, max_shift: f.max_shift() as i64 }
    }

    /// Points realizing the atomic type `t`.
    pub fn realize(&self, t: &AtomicType) -> Vec<(Var, Point)> {
        let r = t.ranks();
        let mut pts: Vec<Point> = Vec::with_capacity(r);
        let mut major = 0i64;
        for k in 0..r {
            let p = match self.fam {
                TheoryFamily::ColoredDense(_) => Point::new(int(k as i64), int(0), t.color[k]),
                TheoryFamily::DenseClasses(_) => Point::new(int(k as i64), int(0), t.class[k]),
                TheoryFamily::LexDense => Point::new(int(t.class[k] as i64), int(k as i64), 0),
                TheoryFamily::LexOverZeta => {
                    if k > 0 {
                        major += match t.links[k - 1] {
                            Link::Same => 0,
                            Link::Distance(d) => d as i64,
                            Link::Apart => t.bound as i64 + 1 + k as i64,
                        };
                    }
                    Point::new(int(major), int(k as i64), 0)
                }
            };
            pts.push(p);
        }
        t.vars.iter().zip(&t.rank).map(|(v, &k)| (v.clone(), pts[k].clone())).collect()
    }

    fn lookup<'e>(env: &'e [(Var, Point)], v: &str) -> Result<&'e Point, TheoryError> {
        env.iter()
            .rev()
            .find(|(w, _)| w == v)
            .map(|(_, p)| p)
            .ok_or_else(|| TheoryError::UnboundVariable(v.to_string()))
    }

    fn labels(&self) -> usize {
        match self.fam {
            TheoryFamily::ColoredDense(c) => c,
            TheoryFamily::DenseClasses(n) => n,
            _ => 1,
        }
    }

    fn candidates(&self, env: &[(Var, Point)], body_depth: usize) -> Vec<Point> {
        let mut anchors: Vec<Point> = Vec::new();
        for (_, p) in env {
            if !anchors.contains(p) {
                anchors.push(p.clone());
            }
        }
        let mut out = anchors.clone();
        match self.fam {
            TheoryFamily::ColoredDense(_) | TheoryFamily::DenseClasses(_) => {
                let majors = sorted_unique(anchors.iter().map(|p| p.major));
                for m in gap_positions(&majors) {
                    for l in 0..self.labels() {
                        out.push(Point::new(m, int(0), l));
                    }
                }
            }
            TheoryFamily::LexDense | TheoryFamily::LexOverZeta => {
                let majors = sorted_unique(anchors.iter().map(|p| p.major));
                let candidates: Vec<Rational64> = if self.fam == TheoryFamily::LexDense {
                    let mut v = majors.clone();
                    v.extend(gap_positions(&majors));
                    v
                } else if majors.is_empty() {
                    vec![int(0)]
                } else {
                    let reach = (self.max_shift + 1) << body_depth.min(40);
                    let set: BTreeSet<i64> = majors
                        .iter()
                        .flat_map(|m| {
                            let m = m.to_integer();
                            (m - reach)..=(m + reach)
                        })
                        .collect();
                    set.into_iter().map(int).collect()
                };
                for m in candidates {
                    let minors = sorted_unique(anchors.iter().filter(|p| p.major == m).map(|p| p.minor));
                    for q in gap_positions(&minors) {
                        out.push(Point::new(m, q, 0));
                    }
                }
            }
        }
        out
    }

    fn atom(&self, f: &Formula, env: &[(Var, Point)]) -> Result<bool, TheoryError> {
        let illegal = || TheoryError::IllegalAtom(f.to_string(), self.fam.to_string());
        let get = |v: &str| Self::lookup(env, v);
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Lt(x, y) => get(x)?.key() < get(y)?.key(),
            Formula::Eq(x, y) => get(x)?.key() == get(y)?.key(),
            Formula::Pred(p, x) => {
                let k = self.fam.color_index(p).ok_or_else(illegal)?;
                get(x)?.label == k
            }
            Formula::Equiv(e, x, y) => {
                let (a, b) = (get(x)?, get(y)?);
                if e == EQUALITY {
                    a.key() == b.key()
                } else if e == FULL {
                    true
                } else if e == CLASS_EQUIV && self.fam.is_lex() {
                    a.major == b.major
                } else if e == CLASS_EQUIV && self.fam.has_classes() {
                    a.label == b.label
                } else {
                    return Err(illegal());
                }
            }
            Formula::Ext(at) => {
                let (e, a) = (get(&at.elem)?, get(&at.anchor)?);
                if at.equiv == EQUALITY {
                    at.shift == 0 && ext_cmp_holds(at.cmp, e.key().cmp(&a.key()))
                } else if at.equiv == FULL {
                    at.shift == 0 && matches!(at.cmp, ExtCmp::BelowOrIn | ExtCmp::InOrAbove)
                } else if at.equiv == CLASS_EQUIV && self.fam.is_lex() {
                    if self.fam == TheoryFamily::LexDense && at.shift != 0 {
                        false
                    } else {
                        let target = a.major + int(at.shift);
                        ext_cmp_holds(at.cmp, e.major.cmp(&target))
                    }
                } else {
                    return Err(illegal());
                }
            }
            _ => unreachable!("not an atom"),
        })
    }

    /// Truth of `f` with its free variables bound in `env`.
    pub fn holds(&self, f: &Formula, env: &mut Vec<(Var, Point)>) -> Result<bool, TheoryError> {
        match f {
            Formula::Not(a) => Ok(!self.holds(a, env)?),
            Formula::And(a, b) => Ok(self.holds(a, env)? && self.holds(b, env)?),
            Formula::Or(a, b) => Ok(self.holds(a, env)? || self.holds(b, env)?),
            Formula::Implies(a, b) => Ok(!self.holds(a, env)? || self.holds(b, env)?),
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                let universal = matches!(f, Formula::Forall(..));
                for p in self.candidates(env, body.quantifier_depth()) {
                    env.push((v.clone(), p));
                    let r = self.holds(body, env);
                    env.pop();
                    if r? != universal {
                        return Ok(!universal);
                    }
                }
                Ok(universal)
            }
            atom => self.atom(atom, env),
        }
    }

    /// Truth of `f` on a realization of `t`.
    pub fn holds_on_type(&self, f: &Formula, t: &AtomicType) -> Result<bool, TheoryError> {
        let mut env = self.realize(t);
        self.holds(f, &mut env)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse_formula;
    use crate::theories::enumerate_types;

    #[test]
    fn realization_matches_type() {
        for fam in [
            TheoryFamily::ColoredDense(2),
            TheoryFamily::DenseClasses(3),
            TheoryFamily::LexDense,
            TheoryFamily::LexOverZeta,
        ] {
            let ts = enumerate_types(fam, &["x", "y", "z"], 2);
            let ev = WitnessEvaluator::new(fam, &Formula::True);
            for t in &ts {
                let f = t.to_formula(fam);
                assert!(ev.holds_on_type(&f, t).unwrap(), "{fam}: {t}");
            }
        }
    }

    #[test]
    fn sentences() {
        let z = TheoryFamily::LexOverZeta;
        let f = parse_formula("forall x. exists y. (S[E0,1](x) <= y & y <= S[E0,1](x))", &z.signature()).unwrap();
        let ev = WitnessEvaluator::new(z, &f);
        assert!(ev.holds(&f, &mut Vec::new()).unwrap());
        let t2 = TheoryFamily::DenseClasses(2);
        let g = parse_formula("exists x. exists y. exists z. (!E0(x,y) & !E0(y,z) & !E0(x,z))", &t2.signature()).unwrap();
        assert!(!WitnessEvaluator::new(t2, &g).holds(&g, &mut Vec::new()).unwrap());
    }
}
