use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use super::ast::{ExtCmp, Formula};
use super::Signature;

/// The three band shapes relating `x` to classes around `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BandShape {
    /// `S^{-m}_{E1}(y) <= x < S^{-n}_{E2}(y)`
    Below,
    /// `S^{-m}_{E1}(y) <= x <= S^{n}_{E2}(y)`
    Around,
    /// `S^{m}_{E1}(y) < x <= S^{n}_{E2}(y)`
    Above,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Band {
    pub shape: BandShape,
    pub lower: String,
    pub m: u32,
    pub upper: String,
    pub n: u32,
}

impl Band {
    pub fn to_formula(&self) -> Formula {
        let (m, n) = (self.m as i64, self.n as i64);
        let (lo, hi) = match self.shape {
            BandShape::Below => (
                Formula::ext("x", ExtCmp::InOrAbove, &self.lower, -m, "y"),
                Formula::ext("x", ExtCmp::BelowStrict, &self.upper, -n, "y"),
            ),
            BandShape::Around => (
                Formula::ext("x", ExtCmp::InOrAbove, &self.lower, -m, "y"),
                Formula::ext("x", ExtCmp::BelowOrIn, &self.upper, n, "y"),
            ),
            BandShape::Above => (
                Formula::ext("x", ExtCmp::AboveStrict, &self.lower, m, "y"),
                Formula::ext("x", ExtCmp::BelowOrIn, &self.upper, n, "y"),
            ),
        };
        lo.and(hi)
    }
}

/// A unary formula, optionally conjoined with a band.
///
/// Without a band the unary part may speak about `x` or about `y`; with a band
/// it always speaks about `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct UConvexAtom {
    pub unary: Formula,
    pub band: Option<Band>,
}

impl UConvexAtom {
    pub fn to_formula(&self) -> Formula {
        match (&self.unary, &self.band) {
            (u, None) => u.clone(),
            (Formula::True, Some(b)) => b.to_formula(),
            (u, Some(b)) => u.clone().and(b.to_formula()),
        }
    }
}

impl fmt::Display for UConvexAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

/// `⊤` followed by every predicate and its negation, over `x`.
pub fn default_unary_basis(sig: &Signature) -> Vec<Formula> {
    let mut out = vec![Formula::True];
    for p in sig.predicates() {
        out.push(Formula::pred(p, "x"));
        out.push(Formula::pred(p, "x").not());
    }
    out
}

/// All u-convex atoms with shifts up to `max_shift`, without duplicates.
///
/// `unary_basis` holds formulas in the single free variable `x`.
pub fn enumerate_uconvex_atoms(
    sig: &Signature,
    max_shift: u32,
    unary_basis: &[Formula],
) -> Vec<UConvexAtom> {
    let convex = sig.convex_equivalences();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut push = |atom: UConvexAtom| {
        if seen.insert(atom.clone()) {
            out.push(atom);
        }
    };
    for psi in unary_basis {
        push(UConvexAtom {
            unary: psi.clone(),
            band: None,
        });
        if *psi != Formula::True {
            push(UConvexAtom {
                unary: psi.rename_free("x", "y"),
                band: None,
            });
        }
    }
    for psi in unary_basis {
        for shape in [BandShape::Below, BandShape::Around, BandShape::Above] {
            for &lower in &convex {
                for &upper in &convex {
                    for m in 0..=max_shift {
                        for n in 0..=max_shift {
                            push(UConvexAtom {
                                unary: psi.clone(),
                                band: Some(Band {
                                    shape,
                                    lower: lower.to_string(),
                                    m,
                                    upper: upper.to_string(),
                                    n,
                                }),
                            });
                        }
                    }
                }
            }
        }
    }
    out
}
