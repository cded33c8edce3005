use std::fmt;

use serde::Serialize;

use crate::structures::{Partition, EQUALITY};

/// A Boolean combination of the interval `(a, ∞)`, unary sets and classes of
/// (almost) convex partitions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum BcExpression {
    Empty,
    /// The interval `(a, ∞)`.
    Above(usize),
    Unary {
        name: String,
        members: Vec<bool>,
    },
    /// The class of `rep` in `partition`.
    Class {
        name: String,
        partition: Partition,
        rep: usize,
    },
    Complement(Box<BcExpression>),
    Union(Vec<BcExpression>),
    Inter(Vec<BcExpression>),
    Diff(Box<BcExpression>, Box<BcExpression>),
}

impl BcExpression {
    pub fn class(name: &str, partition: &Partition, rep: usize) -> Self {
        BcExpression::Class {
            name: name.to_string(),
            partition: partition.clone(),
            rep,
        }
    }

    pub fn complement(self) -> Self {
        BcExpression::Complement(Box::new(self))
    }

    pub fn minus(self, other: Self) -> Self {
        BcExpression::Diff(Box::new(self), Box::new(other))
    }

    /// `(-∞, a]`
    pub fn up_to(a: usize) -> Self {
        BcExpression::Above(a).complement()
    }

    /// `(-∞, a)`
    pub fn below(a: usize, size: usize) -> Self {
        BcExpression::up_to(a).minus(BcExpression::class(EQUALITY, &Partition::equality(size), a))
    }

    pub fn eval(&self, size: usize) -> Vec<bool> {
        match self {
            BcExpression::Empty => vec![false; size],
            BcExpression::Above(a) => (0..size).map(|x| x > *a).collect(),
            BcExpression::Unary { members, .. } => members.clone(),
            BcExpression::Class { partition, rep, .. } => {
                (0..size).map(|x| partition.related(x, *rep)).collect()
            }
            BcExpression::Complement(e) => e.eval(size).into_iter().map(|b| !b).collect(),
            BcExpression::Union(es) => es.iter().fold(vec![false; size], |acc, e| {
                acc.iter().zip(e.eval(size)).map(|(a, b)| *a || b).collect()
            }),
            BcExpression::Inter(es) => es.iter().fold(vec![true; size], |acc, e| {
                acc.iter().zip(e.eval(size)).map(|(a, b)| *a && b).collect()
            }),
            BcExpression::Diff(a, b) => a
                .eval(size)
                .into_iter()
                .zip(b.eval(size))
                .map(|(x, y)| x && !y)
                .collect(),
        }
    }

    /// Image under the order reversal `e ↦ size-1-e`.
    pub fn reflect(&self, size: usize) -> Self {
        let r = |e: usize| size - 1 - e;
        match self {
            BcExpression::Empty => BcExpression::Empty,
            BcExpression::Above(a) => BcExpression::below(r(*a), size),
            BcExpression::Unary { name, members } => BcExpression::Unary {
                name: name.clone(),
                members: members.iter().rev().copied().collect(),
            },
            BcExpression::Class {
                name,
                partition,
                rep,
            } => BcExpression::Class {
                name: name.clone(),
                partition: partition.reversed(),
                rep: r(*rep),
            },
            BcExpression::Complement(e) => e.reflect(size).complement(),
            BcExpression::Union(es) => BcExpression::Union(es.iter().map(|e| e.reflect(size)).collect()),
            BcExpression::Inter(es) => BcExpression::Inter(es.iter().map(|e| e.reflect(size)).collect()),
            BcExpression::Diff(a, b) => a.reflect(size).minus(b.reflect(size)),
        }
    }

    /// Flattens nested unions and intersections and removes trivial parts.
    pub fn simplify(self) -> Self {
        match self {
            BcExpression::Complement(e) => match e.simplify() {
                BcExpression::Complement(inner) => *inner,
                other => other.complement(),
            },
            BcExpression::Diff(a, b) => match (a.simplify(), b.simplify()) {
                (BcExpression::Empty, _) => BcExpression::Empty,
                (a, BcExpression::Empty) => a,
                (a, b) => a.minus(b),
            },
            BcExpression::Union(es) => {
                let mut out: Vec<BcExpression> = Vec::new();
                for e in es.into_iter().map(Self::simplify) {
                    let parts = match e {
                        BcExpression::Union(inner) => inner,
                        BcExpression::Empty => Vec::new(),
                        other => vec![other],
                    };
                    for p in parts {
                        if !out.contains(&p) {
                            out.push(p);
                        }
                    }
                }
                match out.len() {
                    0 => BcExpression::Empty,
                    1 => out.pop().unwrap(),
                    _ => BcExpression::Union(out),
                }
            }
            BcExpression::Inter(es) => {
                let mut out: Vec<BcExpression> = Vec::new();
                for e in es.into_iter().map(Self::simplify) {
                    match e {
                        BcExpression::Empty => return BcExpression::Empty,
                        BcExpression::Inter(inner) => {
                            for p in inner {
                                if !out.contains(&p) {
                                    out.push(p);
                                }
                            }
                        }
                        other => {
                            if !out.contains(&other) {
                                out.push(other);
                            }
                        }
                    }
                }
                match out.len() {
                    0 => BcExpression::Empty.complement(),
                    1 => out.pop().unwrap(),
                    _ => BcExpression::Inter(out),
                }
            }
            leaf => leaf,
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            BcExpression::Complement(e) => e.leaf_count(),
            BcExpression::Union(es) | BcExpression::Inter(es) => es.iter().map(Self::leaf_count).sum(),
            BcExpression::Diff(a, b) => a.leaf_count() + b.leaf_count(),
            _ => 1,
        }
    }
}

fn join(f: &mut fmt::Formatter<'_>, es: &[BcExpression], op: &str) -> fmt::Result {
    write!(f, "(")?;
    for (i, e) in es.iter().enumerate() {
        if i > 0 {
            write!(f, " {op} ")?;
        }
        write!(f, "{e}")?;
    }
    write!(f, ")")
}

impl fmt::Display for BcExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BcExpression::Empty => write!(f, "{{}}"),
            BcExpression::Above(a) => write!(f, "({a},inf)"),
            BcExpression::Unary { name, .. } => write!(f, "{name}"),
            BcExpression::Class { name, rep, .. } => write!(f, "[{rep}]_{name}"),
            BcExpression::Complement(e) => write!(f, "~{e}"),
            BcExpression::Union(es) => join(f, es, "|"),
            BcExpression::Inter(es) => join(f, es, "&"),
            BcExpression::Diff(a, b) => write!(f, "({a} \\ {b})"),
        }
    }
}
