use serde::Serialize;

use crate::structures::{FiniteCcelStructure, EQUALITY, FULL};

/// Names available to formulas: unary predicates and equivalences with their
/// convexity flag. `Id` and `Full` are always present and convex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Signature {
    preds: Vec<String>,
    equivs: Vec<(String, bool)>,
}

impl Signature {
    pub fn new<P, E>(preds: P, equivs: E) -> Self
    where
        P: IntoIterator,
        P::Item: Into<String>,
        E: IntoIterator<Item = (String, bool)>,
    {
        let mut equivs: Vec<(String, bool)> = equivs
            .into_iter()
            .filter(|(n, _)| n != EQUALITY && n != FULL)
            .collect();
        equivs.push((EQUALITY.to_string(), true));
        equivs.push((FULL.to_string(), true));
        Self {
            preds: preds.into_iter().map(Into::into).collect(),
            equivs,
        }
    }

    /// Only `<`, `=`, `Id` and `Full`.
    pub fn empty() -> Self {
        Self::new(Vec::<String>::new(), Vec::new())
    }

    pub fn of(s: &FiniteCcelStructure) -> Self {
        Self::new(
            s.predicates().iter().map(|p| p.name.clone()),
            s.equivalences()
                .iter()
                .map(|e| (e.name.clone(), e.convex)),
        )
    }

    pub fn predicates(&self) -> &[String] {
        &self.preds
    }

    /// All equivalences, including `Id` and `Full` last.
    pub fn equivalences(&self) -> &[(String, bool)] {
        &self.equivs
    }

    pub fn has_predicate(&self, name: &str) -> bool {
        self.preds.iter().any(|p| p == name)
    }

    /// `Some(convex)` when `name` is an equivalence.
    pub fn equivalence_convex(&self, name: &str) -> Option<bool> {
        self.equivs.iter().find(|(n, _)| n == name).map(|(_, c)| *c)
    }

    /// Convex equivalence names: declared ones, then `Id`, then `Full`.
    pub fn convex_equivalences(&self) -> Vec<&str> {
        self.equivs
            .iter()
            .filter(|(_, c)| *c)
            .map(|(n, _)| n.as_str())
            .collect()
    }
}
