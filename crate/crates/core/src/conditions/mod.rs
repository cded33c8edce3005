//! Checkers for Rubin binarity (RB), linear binarity (LB), linear finiteness
//! (LF) and expressibility by u-convex formulas, with re-checkable witnesses.

mod chain;
mod lf;
mod order;
mod uconvex;

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::formulas::{Formula, FormulaError};
use crate::semantics::SemanticsError;
use crate::theories::{AtomicType, TheoryError, TheoryFamily};

pub use chain::{implication_chain_report, ChainBounds, ChainReport, ChainRow};
pub use lf::{check_lf_family, check_lf_structure};
pub use order::{check_lb, check_rb, fingerprint, Fingerprint};
pub use uconvex::{check_uconvex_expressibility, monotonicity_sentence};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConditionError {
    #[error("{0}")]
    Arity(String),
    #[error("implication chain violated: {0}")]
    ChainViolation(String),
    #[error("witness failed to re-verify: {0}")]
    Unverified(String),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ConditionTag {
    Rb,
    Lb,
    Lf,
    Uconvex,
}

impl fmt::Display for ConditionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConditionTag::Rb => "RB",
            ConditionTag::Lb => "LB",
            ConditionTag::Lf => "LF",
            ConditionTag::Uconvex => "UCONVEX",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    HoldsExactly,
    Refuted,
    ConsistentUpToBounds,
}

impl Status {
    pub fn refuted(self) -> bool {
        self == Status::Refuted
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::HoldsExactly => "holds-exactly",
            Status::Refuted => "refuted",
            Status::ConsistentUpToBounds => "consistent-up-to-bounds",
        })
    }
}

/// Search bounds a verdict depends on.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Bounds {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seq_len: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_shift: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formulas: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clique_limit: Option<usize>,
}

/// Two atomic types that a condition says must coincide but do not, or that
/// agree on every available atom while a formula separates them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub left: AtomicType,
    pub right: AtomicType,
    pub left_literals: String,
    pub right_literals: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
}

impl Witness {
    pub(crate) fn pair(fam: TheoryFamily, left: &AtomicType, right: &AtomicType) -> Self {
        Self {
            left: left.clone(),
            right: right.clone(),
            left_literals: left.to_formula(fam).to_string(),
            right_literals: right.to_formula(fam).to_string(),
            formula: None,
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}  vs  {}", self.left_literals, self.right_literals)?;
        if let Some(phi) = &self.formula {
            write!(f, "  separated by {phi}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionVerdict {
    pub condition: ConditionTag,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub bounds: Bounds,
    /// Number of φ-types over a cut (LF).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_phi: Option<usize>,
    /// Equivalent Boolean combination of u-convex atoms (UCONVEX).
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "formula_text")]
    pub normal_form: Option<Formula>,
}

fn formula_text<S: Serializer>(f: &Option<Formula>, s: S) -> Result<S::Ok, S::Error> {
    match f {
        Some(f) => s.serialize_some(&f.to_string()),
        None => s.serialize_none(),
    }
}

impl ConditionVerdict {
    pub(crate) fn new(condition: ConditionTag, status: Status, bounds: Bounds) -> Self {
        Self { condition, status, witness: None, bounds, n_phi: None, normal_form: None }
    }
}
