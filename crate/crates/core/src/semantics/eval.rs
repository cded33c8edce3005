use crate::formulas::{ExtCmp, Formula};
use crate::structures::{FiniteCcelStructure, Partition, EQUALITY, FULL};

use super::SemanticsError;

enum Rel<'s> {
    Id,
    Full,
    Part(&'s Partition),
}

impl Rel<'_> {
    fn related(&self, a: usize, b: usize) -> bool {
        match self {
            Rel::Id => a == b,
            Rel::Full => true,
            Rel::Part(p) => p.related(a, b),
        }
    }
}

enum Node<'s> {
    Const(bool),
    Lt(usize, usize),
    Eq(usize, usize),
    Pred(&'s [bool], usize),
    Equiv(Rel<'s>, usize, usize),
    Ext {
        elem: usize,
        anchor: usize,
        part: &'s Partition,
        shift: i64,
        cmp: ExtCmp,
    },
    Not(Box<Node<'s>>),
    And(Box<Node<'s>>, Box<Node<'s>>),
    Or(Box<Node<'s>>, Box<Node<'s>>),
    Implies(Box<Node<'s>>, Box<Node<'s>>),
    Exists(usize, Box<Node<'s>>),
    Forall(usize, Box<Node<'s>>),
}

/// A formula resolved against one structure, with variables mapped to slots.
///
/// The free variables listed at construction occupy slots `0..k` in order.
pub struct Evaluator<'s> {
    root: Node<'s>,
    size: usize,
    slots: usize,
    free: usize,
}

struct Compiler<'s> {
    s: &'s FiniteCcelStructure,
    scope: Vec<(String, usize)>,
    next: usize,
}

impl<'s> Compiler<'s> {
    fn slot(&self, v: &str) -> Result<usize, SemanticsError> {
        self.scope
            .iter()
            .rev()
            .find(|(n, _)| n == v)
            .map(|(_, s)| *s)
            .ok_or_else(|| SemanticsError::UnboundVariable(v.to_string()))
    }

    fn bind<T>(
        &mut self,
        v: &str,
        body: impl FnOnce(&mut Self) -> Result<T, SemanticsError>,
    ) -> Result<(usize, T), SemanticsError> {
        let slot = self.next;
        self.next += 1;
        self.scope.push((v.to_string(), slot));
        let out = body(self);
        self.scope.pop();
        Ok((slot, out?))
    }

    fn compile(&mut self, f: &Formula) -> Result<Node<'s>, SemanticsError> {
        let s = self.s;
        Ok(match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Lt(a, b) => Node::Lt(self.slot(a)?, self.slot(b)?),
            Formula::Eq(a, b) => Node::Eq(self.slot(a)?, self.slot(b)?),
            Formula::Pred(p, a) => Node::Pred(s.predicate(p)?, self.slot(a)?),
            Formula::Equiv(e, a, b) => {
                let rel = match e.as_str() {
                    EQUALITY => Rel::Id,
                    FULL => Rel::Full,
                    _ => Rel::Part(s.equivalence(e)?.0),
                };
                Node::Equiv(rel, self.slot(a)?, self.slot(b)?)
            }
            Formula::Ext(x) => Node::Ext {
                elem: self.slot(&x.elem)?,
                anchor: self.slot(&x.anchor)?,
                part: s.convex_equivalence(&x.equiv)?,
                shift: x.shift,
                cmp: x.cmp,
            },
            Formula::Not(a) => Node::Not(Box::new(self.compile(a)?)),
            Formula::And(a, b) => Node::And(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Or(a, b) => Node::Or(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Implies(a, b) => {
                Node::Implies(Box::new(self.compile(a)?), Box::new(self.compile(b)?))
            }
            Formula::Exists(v, a) => {
                let (slot, body) = self.bind(v, |c| c.compile(a))?;
                Node::Exists(slot, Box::new(body))
            }
            Formula::Forall(v, a) => {
                let (slot, body) = self.bind(v, |c| c.compile(a))?;
                Node::Forall(slot, Box::new(body))
            }
        })
    }
}

fn eval(n: &Node<'_>, env: &mut [usize], size: usize) -> bool {
    match n {
        Node::Const(b) => *b,
        Node::Lt(a, b) => env[*a] < env[*b],
        Node::Eq(a, b) => env[*a] == env[*b],
        Node::Pred(m, a) => m[env[*a]],
        Node::Equiv(r, a, b) => r.related(env[*a], env[*b]),
        Node::Ext {
            elem,
            anchor,
            part,
            shift,
            cmp,
        } => match part.successor_block(env[*anchor], *shift) {
            None => false,
            Some(block) => {
                let (lo, hi) = (block[0], block[block.len() - 1]);
                let x = env[*elem];
                match cmp {
                    ExtCmp::BelowStrict => x < lo,
                    ExtCmp::BelowOrIn => x <= hi,
                    ExtCmp::AboveStrict => x > hi,
                    ExtCmp::InOrAbove => x >= lo,
                }
            }
        },
        Node::Not(a) => !eval(a, env, size),
        Node::And(a, b) => eval(a, env, size) && eval(b, env, size),
        Node::Or(a, b) => eval(a, env, size) || eval(b, env, size),
        Node::Implies(a, b) => !eval(a, env, size) || eval(b, env, size),
        Node::Exists(slot, body) => (0..size).any(|e| {
            env[*slot] = e;
            eval(body, env, size)
        }),
        Node::Forall(slot, body) => (0..size).all(|e| {
            env[*slot] = e;
            eval(body, env, size)
        }),
    }
}

impl<'s> Evaluator<'s> {
    /// Compiles `f` with `free` as its ordered free-variable slots. Every free
    /// variable of `f` must be listed.
    pub fn new(
        s: &'s FiniteCcelStructure,
        f: &Formula,
        free: &[&str],
    ) -> Result<Self, SemanticsError> {
        let mut c = Compiler {
            s,
            scope: free
                .iter()
                .enumerate()
                .map(|(i, v)| (v.to_string(), i))
                .collect(),
            next: free.len(),
        };
        let root = c.compile(f)?;
        Ok(Self {
            root,
            size: s.size(),
            slots: c.next,
            free: free.len(),
        })
    }

    /// Truth value with the free slots set to `values`.
    pub fn eval(&self, values: &[usize]) -> bool {
        assert_eq!(values.len(), self.free, "one value per free slot");
        let mut env = vec![0; self.slots.max(1)];
        env[..values.len()].copy_from_slice(values);
        eval(&self.root, &mut env, self.size)
    }

    pub fn arity(&self) -> usize {
        self.free
    }
}
