//! Decision procedures for four complete theories of infinite ccel-orders.
//!
//! All four admit quantifier elimination down to atomic types, so every
//! question is answered symbolically: formulas are decided on atomic types
//! (chains of ranks with class links), and an independent evaluator over
//! canonical witness points cross-checks the results.

mod battery;
mod qe;
mod sat;
mod types;
mod witness;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::formulas::{ExtCmp, Formula, FormulaError, Signature};

pub use battery::{battery, binary_battery};
pub use qe::{decide_on_type, decide_sentence, eliminate_quantifiers, required_bound, Decider};
pub use sat::{atomic_type_sat, AtomicConstraint, Literal};
pub use types::{enumerate_types, AtomicType, Link};
pub use witness::{Point, WitnessEvaluator};

/// Name of the equivalence relation in the families that have one.
pub const CLASS_EQUIV: &str = "E0";

/// Default cap on class distances for `LexOverZeta`.
pub const DEFAULT_DISTANCE_BUDGET: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TheoryError {
    #[error("unknown theory `{0}` (expected colored-dense:C, t:N, lex-dense or lex-zeta)")]
    UnknownFamily(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("atom `{0}` is not in the signature of {1}")]
    IllegalAtom(String, String),
    #[error("not a literal: {0}")]
    NotALiteral(String),
    #[error("class distance {required} exceeds the budget {budget}")]
    DistanceBudgetExceeded { required: u32, budget: u32 },
    #[error("formula has free variables: {0}")]
    NotASentence(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "family", content = "parameter")]
pub enum TheoryFamily {
    /// Dense order without endpoints split into `c` dense colors.
    ColoredDense(usize),
    /// Dense order without endpoints with `n` dense classes.
    DenseClasses(usize),
    /// `ℚ × ℚ` ordered lexicographically, `E` = same first coordinate.
    LexDense,
    /// `ℤ × ℚ` ordered lexicographically, `E` = same first coordinate.
    LexOverZeta,
}

impl TheoryFamily {
    pub fn colored_dense(c: usize) -> Result<Self, TheoryError> {
        if c == 0 {
            return Err(TheoryError::InvalidParameter("colored-dense needs c >= 1".into()));
        }
        Ok(TheoryFamily::ColoredDense(c))
    }

    pub fn dense_classes(n: usize) -> Result<Self, TheoryError> {
        if n < 2 {
            return Err(TheoryError::InvalidParameter("t:n needs n >= 2".into()));
        }
        Ok(TheoryFamily::DenseClasses(n))
    }

    pub fn colors(&self) -> usize {
        match *self {
            TheoryFamily::ColoredDense(c) => c,
            _ => 1,
        }
    }

    pub fn has_classes(&self) -> bool {
        !matches!(self, TheoryFamily::ColoredDense(_))
    }

    /// Classes are convex and recorded as links between consecutive ranks.
    pub fn is_lex(&self) -> bool {
        matches!(self, TheoryFamily::LexDense | TheoryFamily::LexOverZeta)
    }

    /// Class distances are meaningful only over a discrete quotient.
    pub fn has_distances(&self) -> bool {
        matches!(self, TheoryFamily::LexOverZeta)
    }

    pub fn color_name(k: usize) -> String {
        format!("P{k}")
    }

    pub fn signature(&self) -> Signature {
        let preds: Vec<String> = match *self {
            TheoryFamily::ColoredDense(c) => (0..c).map(Self::color_name).collect(),
            _ => Vec::new(),
        };
        let equivs: Vec<(String, bool)> = match self {
            TheoryFamily::ColoredDense(_) => Vec::new(),
            TheoryFamily::DenseClasses(_) => vec![(CLASS_EQUIV.into(), false)],
            _ => vec![(CLASS_EQUIV.into(), true)],
        };
        Signature::new(preds, equivs)
    }

    /// The unary formulas naming the atomic 1-types, over `x`.
    pub fn one_types(&self, x: &str) -> Vec<Formula> {
        match *self {
            TheoryFamily::ColoredDense(c) => (0..c).map(|k| Formula::pred(&Self::color_name(k), x)).collect(),
            _ => vec![Formula::True],
        }
    }

    pub(crate) fn color_index(&self, name: &str) -> Option<usize> {
        let k: usize = name.strip_prefix('P')?.parse().ok()?;
        (k < self.colors() && matches!(self, TheoryFamily::ColoredDense(_))).then_some(k)
    }

    /// Rejects atoms outside the family's signature.
    pub fn check_formula(&self, f: &Formula) -> Result<(), TheoryError> {
        let mut err = None;
        f.visit(&mut |g| {
            if err.is_some() {
                return;
            }
            let bad = match g {
                Formula::Pred(p, _) => self.color_index(p).is_none(),
                Formula::Equiv(e, _, _) => !self.equiv_known(e),
                Formula::Ext(a) => {
                    !self.equiv_known(&a.equiv)
                        || (a.equiv == CLASS_EQUIV && !self.is_lex())
                }
                _ => false,
            };
            if bad {
                err = Some(TheoryError::IllegalAtom(g.to_string(), self.to_string()));
            }
        });
        err.map_or(Ok(()), Err)
    }

    fn equiv_known(&self, e: &str) -> bool {
        e == crate::structures::EQUALITY
            || e == crate::structures::FULL
            || (e == CLASS_EQUIV && self.has_classes())
    }
}

impl fmt::Display for TheoryFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoryFamily::ColoredDense(c) => write!(f, "colored-dense:{c}"),
            TheoryFamily::DenseClasses(n) => write!(f, "t:{n}"),
            TheoryFamily::LexDense => write!(f, "lex-dense"),
            TheoryFamily::LexOverZeta => write!(f, "lex-zeta"),
        }
    }
}

impl FromStr for TheoryFamily {
    type Err = TheoryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || TheoryError::UnknownFamily(s.to_string());
        match s.split_once(':') {
            None if s == "lex-dense" => Ok(TheoryFamily::LexDense),
            None if s == "lex-zeta" => Ok(TheoryFamily::LexOverZeta),
            None => Err(unknown()),
            Some((name, p)) => {
                let k: usize = p.parse().map_err(|_| unknown())?;
                match name {
                    "colored-dense" => Self::colored_dense(k),
                    "t" => Self::dense_classes(k),
                    _ => Err(unknown()),
                }
            }
        }
    }
}

/// Outcome of comparing an element's class index with a target index.
pub(crate) fn ext_cmp_holds(cmp: ExtCmp, diff_vs_shift: std::cmp::Ordering) -> bool {
    use std::cmp::Ordering::*;
    match cmp {
        ExtCmp::BelowStrict => diff_vs_shift == Less,
        ExtCmp::BelowOrIn => diff_vs_shift != Greater,
        ExtCmp::AboveStrict => diff_vs_shift == Greater,
        ExtCmp::InOrAbove => diff_vs_shift != Less,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for s in ["colored-dense:2", "t:3", "lex-dense", "lex-zeta"] {
            assert_eq!(s.parse::<TheoryFamily>().unwrap().to_string(), s);
        }
        assert!("t:1".parse::<TheoryFamily>().is_err());
        assert!("colored-dense:0".parse::<TheoryFamily>().is_err());
        assert!("lex".parse::<TheoryFamily>().is_err());
    }

    #[test]
    fn legality() {
        let t2 = TheoryFamily::DenseClasses(2);
        assert!(t2.check_formula(&Formula::equiv("E0", "x", "y")).is_ok());
        let s = Formula::ext("x", ExtCmp::BelowStrict, "E0", 1, "y");
        assert!(t2.check_formula(&s).is_err());
        assert!(TheoryFamily::LexOverZeta.check_formula(&s).is_ok());
        let c = TheoryFamily::ColoredDense(2);
        assert!(c.check_formula(&Formula::pred("P1", "x")).is_ok());
        assert!(c.check_formula(&Formula::pred("P2", "x")).is_err());
        assert!(c.check_formula(&Formula::equiv("E0", "x", "y")).is_err());
    }
}
