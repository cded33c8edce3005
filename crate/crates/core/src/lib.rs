//! Executable structure theory for linearly ordered structures with unary
//! predicates and convex equivalence relations.

pub mod formulas;
pub mod structures;
pub mod semantics;
pub mod decompose;
pub mod theories;
pub mod conditions;
pub mod cli;
