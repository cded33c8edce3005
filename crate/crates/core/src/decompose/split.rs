use serde::Serialize;

use super::DecomposeError;
use crate::structures::{convex_closure, FiniteCcelStructure, Partition};

/// `R(x, y) ⟺ ⋁_i (x ∈ colors[i] ∧ E(x, y) ∧ y ∈ colors[i])`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlmostConvexSplit {
    pub closure: Partition,
    pub colors: Vec<Vec<usize>>,
}

impl AlmostConvexSplit {
    pub fn reconstruct(&self) -> Partition {
        let n = self.closure.size();
        let mut color = vec![0; n];
        for (i, c) in self.colors.iter().enumerate() {
            for &e in c {
                color[e] = i;
            }
        }
        let labels: Vec<usize> = (0..n)
            .map(|e| self.closure.block_index(e) * self.colors.len() + color[e])
            .collect();
        Partition::from_labels(&labels)
    }
}

/// Colors the `R`-classes inside each class of `E`, a convex equivalence
/// coarser than `R` (by default the convex closure of `R`).
///
/// Inside every `E`-class the `R`-classes are numbered by their least
/// element; color `i` collects the `i`-th ones.
pub fn almost_convex_split(
    s: &FiniteCcelStructure,
    r: &Partition,
    e: Option<&Partition>,
) -> Result<AlmostConvexSplit, DecomposeError> {
    for p in std::iter::once(r).chain(e) {
        if p.size() != s.size() {
            return Err(DecomposeError::SizeMismatch {
                expected: s.size(),
                found: p.size(),
            });
        }
    }
    let closure = match e {
        None => convex_closure(r),
        Some(e) if !e.is_convex() => return Err(DecomposeError::NotConvex),
        Some(e) if !r.refines(e) => {
            return Err(DecomposeError::Verification(format!(
                "{e} is not coarser than {r}"
            )))
        }
        Some(e) => e.clone(),
    };
    let mut colors: Vec<Vec<usize>> = Vec::new();
    for block in closure.blocks() {
        let mut inner: Vec<usize> = block.iter().map(|&e| r.block_index(e)).collect();
        inner.sort_unstable();
        inner.dedup();
        for (i, &rb) in inner.iter().enumerate() {
            if colors.len() <= i {
                colors.push(Vec::new());
            }
            colors[i].extend_from_slice(&r.blocks()[rb]);
        }
    }
    for c in colors.iter_mut() {
        c.sort_unstable();
    }
    let out = AlmostConvexSplit { closure, colors };
    if out.reconstruct() != *r {
        return Err(DecomposeError::Verification(
            "coloring does not reconstruct the relation".into(),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let s = FiniteCcelStructure::new(4, vec![], vec![]).unwrap();
        let r = Partition::new(4, vec![vec![0], vec![1], vec![2, 3]]).unwrap();
        // the closure of this R is R itself, so a single color
        let out = almost_convex_split(&s, &r, None).unwrap();
        assert_eq!(out.colors.len(), 1);
        let e = Partition::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let out = almost_convex_split(&s, &r, Some(&e)).unwrap();
        assert_eq!(out.colors, vec![vec![0, 2, 3], vec![1]]);

        let s3 = FiniteCcelStructure::new(3, vec![], vec![]).unwrap();
        let eq = Partition::equality(3);
        assert_eq!(almost_convex_split(&s3, &eq, None).unwrap().colors.len(), 1);
        let out = almost_convex_split(&s3, &eq, Some(&Partition::full(3))).unwrap();
        assert_eq!(out.colors, vec![vec![0], vec![1], vec![2]]);

        let r = Partition::new(4, vec![vec![0, 2, 3], vec![1]]).unwrap();
        let out = almost_convex_split(&s, &r, None).unwrap();
        assert_eq!(out.closure, Partition::full(4));
        assert_eq!(out.colors, vec![vec![0, 2, 3], vec![1]]);
    }
}
