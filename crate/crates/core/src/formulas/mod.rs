//! First-order formulas over `<`, `=`, unary predicates and equivalences,
//! extended with successor-class comparisons `x <= S[E,n](y)`.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! formula := or ("->" formula)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | ("exists" | "forall") var "." formula | primary
//! primary := "(" formula ")" | "true" | "false" | P(v) | E(v,w)
//!          | v "<" w | v "=" w | v ("<"|"<=") S[E,n](w)
//!          | S[E,n](w) ("<"|"<=") v (("<"|"<=") S[E,n](u))?
//! ```
//!
//! Variables match `[a-z][a-z0-9]*`; symbols start with an uppercase letter.

mod ast;
mod parser;
mod signature;
mod uconvex;

use thiserror::Error;

pub use ast::{fresh_var, var, ExtAtom, ExtCmp, Formula, Var};
pub use parser::parse_formula;
pub use signature::Signature;
pub use uconvex::{default_unary_basis, enumerate_uconvex_atoms, Band, BandShape, UConvexAtom};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown symbol `{name}` at offset {offset}")]
    UnknownSymbol { offset: usize, name: String },
    #[error("successor term over non-convex equivalence `{name}` at offset {offset}")]
    NotConvex { offset: usize, name: String },
    #[error("`{name}` takes {expected} argument(s), found {found} at offset {offset}")]
    Arity {
        offset: usize,
        name: String,
        expected: usize,
        found: usize,
    },
}

/// Canonical text of a formula; parses back to the same tree.
pub fn render_formula(f: &Formula) -> String {
    f.to_string()
}
