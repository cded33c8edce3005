use std::collections::HashMap;

use super::types::{enumerate_types, AtomicType};
use super::{TheoryError, TheoryFamily, CLASS_EQUIV};
use crate::formulas::{Formula, Var};

enum Node {
    Atom(Formula),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Exists(Var, usize),
    Forall(Var, usize),
}

struct Compiled {
    node: Node,
    free: Vec<Var>,
    need: u32,
}

/// Distance bound at which the truth of `f` is determined by atomic types.
///
/// Atoms need their own shift; eliminating a quantifier over a matrix that
/// needs `b` requires `2b + 1`, since the new point may split one gap.
pub fn required_bound(fam: TheoryFamily, f: &Formula) -> u32 {
    if !fam.has_distances() {
        return 0;
    }
    match f {
        Formula::Ext(a) if a.equiv == CLASS_EQUIV => a.shift.unsigned_abs() as u32,
        Formula::Not(a) => required_bound(fam, a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            required_bound(fam, a).max(required_bound(fam, b))
        }
        Formula::Exists(_, a) | Formula::Forall(_, a) => 2 * required_bound(fam, a) + 1,
        _ => 0,
    }
}

/// Decides formulas on atomic types, memoizing every quantified subformula
/// on the type of its free variables.
pub struct Decider {
    fam: TheoryFamily,
    nodes: Vec<Compiled>,
    root: usize,
    memo: HashMap<(usize, AtomicType), bool>,
}

impl Decider {
    pub fn new(fam: TheoryFamily, f: &Formula, budget: u32) -> Result<Self, TheoryError> {
        fam.check_formula(f)?;
        let need = required_bound(fam, f);
        if need > budget {
            return Err(TheoryError::DistanceBudgetExceeded { required: need, budget });
        }
        let mut d = Decider { fam, nodes: Vec::new(), root: 0, memo: HashMap::new() };
        d.root = d.compile(f);
        Ok(d)
    }

    fn compile(&mut self, f: &Formula) -> usize {
        let node = match f {
            Formula::Not(a) => Node::Not(self.compile(a)),
            Formula::And(a, b) => Node::And(self.compile(a), self.compile(b)),
            Formula::Or(a, b) => Node::Or(self.compile(a), self.compile(b)),
            Formula::Implies(a, b) => Node::Implies(self.compile(a), self.compile(b)),
            Formula::Exists(v, a) => Node::Exists(v.clone(), self.compile(a)),
            Formula::Forall(v, a) => Node::Forall(v.clone(), self.compile(a)),
            atom => Node::Atom(atom.clone()),
        };
        self.nodes.push(Compiled {
            node,
            free: f.free_vars().into_iter().collect(),
            need: required_bound(self.fam, f),
        });
        self.nodes.len() - 1
    }

    pub fn free_vars(&self) -> &[Var] {
        &self.nodes[self.root].free
    }

    pub fn bound(&self) -> u32 {
        self.nodes[self.root].need
    }

    /// Truth on a type over (at least) the formula's free variables, with
    /// distance bound at least [`Decider::bound`].
    pub fn decide(&mut self, t: &AtomicType) -> Result<bool, TheoryError> {
        if self.fam.has_distances() && t.bound < self.bound() {
            return Err(TheoryError::DistanceBudgetExceeded {
                required: self.bound(),
                budget: t.bound,
            });
        }
        self.eval(self.root, t)
    }

    fn eval(&mut self, id: usize, t: &AtomicType) -> Result<bool, TheoryError> {
        let fam = self.fam;
        match &self.nodes[id].node {
            Node::Atom(f) => t.holds_atom(fam, f),
            Node::Not(a) => Ok(!self.eval(*a, t)?),
            Node::And(a, b) => {
                let (a, b) = (*a, *b);
                Ok(self.eval(a, t)? && self.eval(b, t)?)
            }
            Node::Or(a, b) => {
                let (a, b) = (*a, *b);
                Ok(self.eval(a, t)? || self.eval(b, t)?)
            }
            Node::Implies(a, b) => {
                let (a, b) = (*a, *b);
                Ok(!self.eval(a, t)? || self.eval(b, t)?)
            }
            Node::Exists(..) | Node::Forall(..) => {
                let free: Vec<&str> = self.nodes[id].free.iter().map(String::as_str).collect();
                let key = t.restrict(fam, &free)?.clip(self.nodes[id].need);
                if let Some(&b) = self.memo.get(&(id, key.clone())) {
                    return Ok(b);
                }
                let (v, body, universal) = match &self.nodes[id].node {
                    Node::Exists(v, b) => (v.clone(), *b, false),
                    Node::Forall(v, b) => (v.clone(), *b, true),
                    _ => unreachable!(),
                };
                let mut result = universal;
                for ext in key.extensions(fam, &v) {
                    if self.eval(body, &ext)? != universal {
                        result = !universal;
                        break;
                    }
                }
                self.memo.insert((id, key), result);
                Ok(result)
            }
        }
    }
}

/// Truth of `f` on the type `t`.
pub fn decide_on_type(fam: TheoryFamily, f: &Formula, t: &AtomicType) -> Result<bool, TheoryError> {
    Decider::new(fam, f, u32::MAX)?.decide(t)
}

/// An equivalent quantifier-free formula in the free variables of `f`: the
/// disjunction of the atomic types on which `f` holds (or the negated
/// disjunction of those on which it fails, whichever is shorter).
pub fn eliminate_quantifiers(
    fam: TheoryFamily,
    f: &Formula,
    budget: u32,
) -> Result<Formula, TheoryError> {
    let mut d = Decider::new(fam, f, budget)?;
    if f.is_quantifier_free() {
        return Ok(f.clone());
    }
    let free: Vec<Var> = d.free_vars().to_vec();
    let names: Vec<&str> = free.iter().map(String::as_str).collect();
    let (mut yes, mut no) = (Vec::new(), Vec::new());
    for t in enumerate_types(fam, &names, d.bound()) {
        if d.decide(&t)? {
            yes.push(t);
        } else {
            no.push(t);
        }
    }
    Ok(if no.is_empty() {
        Formula::True
    } else if yes.is_empty() {
        Formula::False
    } else if yes.len() <= no.len() {
        Formula::disj(yes.iter().map(|t| t.to_formula(fam)))
    } else {
        Formula::disj(no.iter().map(|t| t.to_formula(fam))).not()
    })
}

/// Truth of a sentence in the family's theory.
pub fn decide_sentence(fam: TheoryFamily, f: &Formula, budget: u32) -> Result<bool, TheoryError> {
    let free = f.free_vars();
    if !free.is_empty() {
        let names: Vec<&str> = free.iter().map(String::as_str).collect();
        return Err(TheoryError::NotASentence(names.join(", ")));
    }
    let mut d = Decider::new(fam, f, budget)?;
    let bound = d.bound();
    d.decide(&AtomicType::empty(fam, bound))
}
