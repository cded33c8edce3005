//! Constructive normal forms on finite structures: successor forms of
//! monotone relations, piecewise successor descriptions of functions, band
//! definitions of convex sets, Boolean-combination descriptions of
//! one-parameter definable sets, and splittings of equivalence relations.
//!
//! Every construction re-checks its output against the input and fails with
//! [`DecomposeError::Verification`] otherwise.

mod bc;
mod convex;
mod function;
mod monotone;
mod one_param;
mod split;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::formulas::{ExtCmp, Formula};
use crate::semantics::{Evaluator, SemanticsError};
use crate::structures::{FiniteCcelStructure, Partition, StructureError};

pub use bc::BcExpression;
pub use convex::{convex_normal_form, ConvexBound, ConvexNormalForm};
pub use function::{function_decompose, FunctionCase, FunctionDecomposition};
pub use monotone::{
    initial_successor_form, monotone_decompose, monotonize, non_initial_columns, Case, CaseList,
};
pub use one_param::{one_param_decompose, OneParamPiece, OneParamReport, PieceKind};
pub use split::{almost_convex_split, AlmostConvexSplit};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("column of {column} is not an initial segment")]
    NotInitialSegment { column: usize },
    #[error("relation is not monotone: column of {lower} is not contained in column of {upper}")]
    NotMonotone { lower: usize, upper: usize },
    #[error("set is not convex")]
    NotConvex,
    #[error("no band representation with shifts up to {bound}")]
    NoRepresentation { bound: usize },
    #[error("parameter set is empty")]
    NoParameters,
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// A binary relation on `0..size`; `get(x, y)` is the truth of `φ(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    size: usize,
    cells: Vec<bool>,
}

impl Relation {
    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut cells = Vec::with_capacity(size * size);
        for x in 0..size {
            for y in 0..size {
                cells.push(f(x, y));
            }
        }
        Self { size, cells }
    }

    /// The relation `{(x, y) : s ⊨ φ(x, y)}`.
    pub fn from_formula(
        s: &FiniteCcelStructure,
        f: &Formula,
        x: &str,
        y: &str,
    ) -> Result<Self, DecomposeError> {
        let ev = Evaluator::new(s, f, &[x, y])?;
        Ok(Self::from_fn(s.size(), |a, b| ev.eval(&[a, b])))
    }

    /// Rows given as `rows[x][y]`.
    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self, DecomposeError> {
        let size = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != size) {
            return Err(DecomposeError::SizeMismatch {
                expected: size,
                found: r.len(),
            });
        }
        Ok(Self::from_fn(size, |x, y| rows[x][y]))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.cells[x * self.size + y]
    }

    /// `φ(·, y)` as a membership vector.
    pub fn column(&self, y: usize) -> Vec<bool> {
        (0..self.size).map(|x| self.get(x, y)).collect()
    }

    /// `φ(x, ·)` as a membership vector.
    pub fn row(&self, x: usize) -> Vec<bool> {
        self.cells[x * self.size..(x + 1) * self.size].to_vec()
    }

    /// Image under the order reversal.
    pub fn reversed(&self) -> Self {
        let n = self.size;
        Self::from_fn(n, |x, y| self.get(n - 1 - x, n - 1 - y))
    }

    /// Partition of `0..size` by equality of rows.
    pub fn row_partition(&self) -> Partition {
        let mut labels = Vec::with_capacity(self.size);
        let mut seen: Vec<Vec<bool>> = Vec::new();
        for x in 0..self.size {
            let r = self.row(x);
            let idx = match seen.iter().position(|s| *s == r) {
                Some(i) => i,
                None => {
                    seen.push(r);
                    seen.len() - 1
                }
            };
            labels.push(idx);
        }
        Partition::from_labels(&labels)
    }
}

/// A convex equivalence together with the name it has in the structure, if
/// any.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct NamedPartition {
    pub name: Option<String>,
    pub partition: Partition,
}

impl NamedPartition {
    /// Looks up `p` among the structure's convex equivalences.
    pub fn identify(s: &FiniteCcelStructure, p: Partition) -> Self {
        let name = s
            .convex_equivalences()
            .into_iter()
            .find(|(_, q)| **q == p)
            .map(|(n, _)| n.to_string());
        Self { name, partition: p }
    }
}

impl fmt::Display for NamedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "{}", self.partition),
        }
    }
}

/// One of `x < S^N_E(a)`, `x <= S^N_E(a)`, `S^N_E(a) < x`, `S^N_E(a) <= x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SuccessorForm {
    pub equivalence: NamedPartition,
    pub shift: i64,
    pub cmp: ExtCmp,
}

impl SuccessorForm {
    /// The set defined with parameter `a`.
    pub fn set(&self, a: usize) -> Vec<bool> {
        successor_set(&self.equivalence.partition, a, self.shift, self.cmp)
    }

    /// The form as text with the parameter written as `a`.
    pub fn render(&self, param: &str) -> String {
        let s = format!("S[{},{}]({param})", self.equivalence, self.shift);
        match self.cmp {
            ExtCmp::BelowStrict => format!("x < {s}"),
            ExtCmp::BelowOrIn => format!("x <= {s}"),
            ExtCmp::AboveStrict => format!("{s} < x"),
            ExtCmp::InOrAbove => format!("{s} <= x"),
        }
    }
}

impl fmt::Display for SuccessorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("y"))
    }
}

/// Solutions of an extended atom with parameter `a`, directly on a partition.
pub fn successor_set(p: &Partition, a: usize, shift: i64, cmp: ExtCmp) -> Vec<bool> {
    let n = p.size();
    match p.successor_block(a, shift) {
        None => vec![false; n],
        Some(b) => {
            let (lo, hi) = (b[0], b[b.len() - 1]);
            (0..n)
                .map(|x| match cmp {
                    ExtCmp::BelowStrict => x < lo,
                    ExtCmp::BelowOrIn => x <= hi,
                    ExtCmp::AboveStrict => x > hi,
                    ExtCmp::InOrAbove => x >= lo,
                })
                .collect()
        }
    }
}

pub(crate) fn members(v: &[bool]) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i)
        .collect()
}

pub(crate) fn indicator(size: usize, elems: &[usize]) -> Vec<bool> {
    let mut out = vec![false; size];
    for &e in elems {
        out[e] = true;
    }
    out
}
