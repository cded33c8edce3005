//! Finite linearly ordered structures with unary predicates and equivalence
//! relations, and the successor-class calculus on them.
//!
//! The domain of a structure with `size` elements is always `0..size` with the
//! numeric order. Two convex equivalences are always available without being
//! declared: [`EQUALITY`] (singleton classes) and [`FULL`] (one class).

mod dsl;
mod partition;

use serde::Serialize;
use thiserror::Error;

pub use dsl::{parse_structure, render_structure};
pub use partition::Partition;

/// Name of the implicit equality equivalence.
pub const EQUALITY: &str = "Id";
/// Name of the implicit full equivalence.
pub const FULL: &str = "Full";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("structure must have at least one element")]
    EmptyDomain,
    #[error("element {element} out of range for domain of size {size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("empty block in partition")]
    EmptyBlock,
    #[error("overlapping partition blocks at element {element}")]
    OverlappingBlocks { element: usize },
    #[error("incomplete partition: element {element} is not covered")]
    IncompletePartition { element: usize },
    #[error("non-contiguous convex block in `{name}`: {block:?}")]
    NonContiguousConvexBlock { name: String, block: Vec<usize> },
    #[error("duplicate symbol name `{0}`")]
    DuplicateName(String),
    #[error("`{0}` is a reserved name")]
    ReservedName(String),
    #[error("unknown equivalence `{0}`")]
    UnknownEquivalence(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("equivalence `{0}` is not convex")]
    NotConvex(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// A named unary predicate, stored as a membership vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Predicate {
    pub name: String,
    pub members: Vec<bool>,
}

/// A named equivalence relation together with its declared convexity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Equivalence {
    pub name: String,
    pub convex: bool,
    pub partition: Partition,
}

/// A class of a named equivalence, identified by its least element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ClassRef {
    pub equivalence: String,
    pub min: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteCcelStructure {
    size: usize,
    preds: Vec<Predicate>,
    equivs: Vec<Equivalence>,
    #[serde(skip)]
    equality: Partition,
    #[serde(skip)]
    full: Partition,
}

fn is_reserved(name: &str) -> bool {
    matches!(name, EQUALITY | FULL | "S")
}

impl FiniteCcelStructure {
    /// Validates raw fields. Predicates are given as element lists, and
    /// equivalences as `(name, convex, blocks)`.
    pub fn new(
        size: usize,
        preds: Vec<(String, Vec<usize>)>,
        equivs: Vec<(String, bool, Vec<Vec<usize>>)>,
    ) -> Result<Self, StructureError> {
        if size == 0 {
            return Err(StructureError::EmptyDomain);
        }
        let mut names: Vec<&str> = Vec::new();
        let all_names = preds.iter().map(|p| &p.0).chain(equivs.iter().map(|e| &e.0));
        for name in all_names {
            if is_reserved(name) {
                return Err(StructureError::ReservedName(name.clone()));
            }
            if names.contains(&name.as_str()) {
                return Err(StructureError::DuplicateName(name.clone()));
            }
            names.push(name);
        }
        let mut out_preds = Vec::with_capacity(preds.len());
        for (name, elems) in preds {
            let mut members = vec![false; size];
            for e in elems {
                if e >= size {
                    return Err(StructureError::ElementOutOfRange { element: e, size });
                }
                members[e] = true;
            }
            out_preds.push(Predicate { name, members });
        }
        let mut out_equivs = Vec::with_capacity(equivs.len());
        for (name, convex, blocks) in equivs {
            let partition = Partition::new(size, blocks)?;
            if convex {
                if let Some(b) = partition
                    .blocks()
                    .iter()
                    .find(|b| b[b.len() - 1] - b[0] + 1 != b.len())
                {
                    return Err(StructureError::NonContiguousConvexBlock {
                        name,
                        block: b.clone(),
                    });
                }
            }
            out_equivs.push(Equivalence {
                name,
                convex,
                partition,
            });
        }
        Ok(Self {
            size,
            preds: out_preds,
            equivs: out_equivs,
            equality: Partition::equality(size),
            full: Partition::full(size),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn predicates(&self) -> &[Predicate] {
        &self.preds
    }

    /// Declared equivalences (without the implicit `Id` and `Full`).
    pub fn equivalences(&self) -> &[Equivalence] {
        &self.equivs
    }

    pub fn predicate(&self, name: &str) -> Result<&[bool], StructureError> {
        self.preds
            .iter()
            .find(|p| p.name == name)
            .map(|p| p.members.as_slice())
            .ok_or_else(|| StructureError::UnknownPredicate(name.to_string()))
    }

    /// Looks up an equivalence by name, including `Id` and `Full`.
    /// Returns the partition and whether it is convex.
    pub fn equivalence(&self, name: &str) -> Result<(&Partition, bool), StructureError> {
        match name {
            EQUALITY => Ok((&self.equality, true)),
            FULL => Ok((&self.full, true)),
            _ => self
                .equivs
                .iter()
                .find(|e| e.name == name)
                .map(|e| (&e.partition, e.convex))
                .ok_or_else(|| StructureError::UnknownEquivalence(name.to_string())),
        }
    }

    pub fn convex_equivalence(&self, name: &str) -> Result<&Partition, StructureError> {
        let (p, convex) = self.equivalence(name)?;
        if convex {
            Ok(p)
        } else {
            Err(StructureError::NotConvex(name.to_string()))
        }
    }

    /// All convex equivalences as `(name, partition)`: declared convex ones
    /// followed by `Id` and `Full`.
    pub fn convex_equivalences(&self) -> Vec<(&str, &Partition)> {
        let mut out: Vec<(&str, &Partition)> = self
            .equivs
            .iter()
            .filter(|e| e.convex)
            .map(|e| (e.name.as_str(), &e.partition))
            .collect();
        out.push((EQUALITY, &self.equality));
        out.push((FULL, &self.full));
        out
    }

    /// The `n`-th consecutive class after (`n > 0`) or before (`n < 0`) the
    /// class of `a`; `None` when it does not exist.
    pub fn class_successor(
        &self,
        equivalence: &str,
        a: usize,
        n: i64,
    ) -> Result<Option<ClassRef>, StructureError> {
        if a >= self.size {
            return Err(StructureError::ElementOutOfRange {
                element: a,
                size: self.size,
            });
        }
        let p = self.convex_equivalence(equivalence)?;
        Ok(p.successor_block(a, n).map(|b| ClassRef {
            equivalence: equivalence.to_string(),
            min: b[0],
        }))
    }

    /// Elements of a class reference.
    pub fn class_members(&self, class: &ClassRef) -> Result<&[usize], StructureError> {
        let (p, _) = self.equivalence(&class.equivalence)?;
        Ok(p.block_of(class.min))
    }

    /// The same structure with the order reversed (`e ↦ size-1-e`).
    pub fn reversed(&self) -> Self {
        let n = self.size;
        Self {
            size: n,
            preds: self
                .preds
                .iter()
                .map(|p| Predicate {
                    name: p.name.clone(),
                    members: p.members.iter().rev().copied().collect(),
                })
                .collect(),
            equivs: self
                .equivs
                .iter()
                .map(|e| Equivalence {
                    name: e.name.clone(),
                    convex: e.convex,
                    partition: e.partition.reversed(),
                })
                .collect(),
            equality: Partition::equality(n),
            full: Partition::full(n),
        }
    }
}

/// Finest convex partition each of whose classes is a union of `r`-classes.
pub fn convex_closure(r: &Partition) -> Partition {
    r.convex_closure()
}
