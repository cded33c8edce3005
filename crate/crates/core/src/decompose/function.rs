use serde::Serialize;

use super::{DecomposeError, NamedPartition, Relation};
use crate::structures::{FiniteCcelStructure, Partition};

/// On `guard`, `{f(x)} = S^shift_E(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctionCase {
    pub guard: Vec<usize>,
    pub equivalence: NamedPartition,
    pub shift: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctionDecomposition {
    pub cases: Vec<FunctionCase>,
}

impl FunctionDecomposition {
    /// Reassembles the function; `None` where no case applies or the
    /// successor class is not a singleton.
    pub fn apply(&self, x: usize) -> Option<usize> {
        let c = self.cases.iter().find(|c| c.guard.contains(&x))?;
        match c.equivalence.partition.successor_block(x, c.shift) {
            Some([y]) => Some(*y),
            _ => None,
        }
    }
}

/// Splits every block of `e` into its extreme element (the maximum when
/// `max` is set, else the minimum) and the rest.
fn split_extremes(e: &Partition, max: bool) -> Partition {
    let n = e.size();
    let mut blocks = Vec::new();
    for b in e.blocks() {
        if b.len() == 1 {
            blocks.push(b.clone());
        } else if max {
            blocks.push(b[..b.len() - 1].to_vec());
            blocks.push(vec![b[b.len() - 1]]);
        } else {
            blocks.push(vec![b[0]]);
            blocks.push(b[1..].to_vec());
        }
    }
    Partition::new(n, blocks).expect("split of a partition is a partition")
}

fn point_case(f: &[usize], a: usize) -> Result<(Partition, i64), DecomposeError> {
    let n = f.len();
    let up = f[a] >= a;
    let theta: Vec<bool> = (0..n)
        .map(|v| {
            (f[v] >= v) == up && (v > a || f[v] <= f[a]) && (v < a || f[v] >= f[a])
        })
        .collect();
    let psi = Relation::from_fn(n, |x, y| {
        (0..=y).any(|v| theta[v] && if up { x <= f[v] } else { x < f[v] })
    });
    let e = psi.row_partition();
    let block = e.block_of(f[a]);
    let extreme = if up { block[block.len() - 1] } else { block[0] };
    if extreme != f[a] {
        return Err(DecomposeError::Verification(format!(
            "f({a}) = {} is not an extreme point of its class",
            f[a]
        )));
    }
    let ep = split_extremes(&e, up);
    let shift = ep.block_index(f[a]) as i64 - ep.block_index(a) as i64;
    if ep.successor_block(a, shift) != Some(&[f[a]][..]) {
        return Err(DecomposeError::Verification(format!(
            "successor class of {a} is not {{{}}}",
            f[a]
        )));
    }
    Ok((ep, shift))
}

/// Piecewise description of `f` by singleton successor classes.
pub fn function_decompose(
    s: &FiniteCcelStructure,
    f: &[usize],
) -> Result<FunctionDecomposition, DecomposeError> {
    let n = s.size();
    if f.len() != n {
        return Err(DecomposeError::SizeMismatch {
            expected: n,
            found: f.len(),
        });
    }
    if let Some(&bad) = f.iter().find(|&&v| v >= n) {
        return Err(DecomposeError::Structure(
            crate::structures::StructureError::ElementOutOfRange {
                element: bad,
                size: n,
            },
        ));
    }
    let mut cases: Vec<FunctionCase> = Vec::new();
    for a in 0..n {
        let (ep, shift) = point_case(f, a)?;
        match cases
            .iter_mut()
            .find(|c| c.shift == shift && c.equivalence.partition == ep)
        {
            Some(c) => c.guard.push(a),
            None => cases.push(FunctionCase {
                guard: vec![a],
                equivalence: NamedPartition::identify(s, ep),
                shift,
            }),
        }
    }
    let out = FunctionDecomposition { cases };
    for a in 0..n {
        if out.apply(a) != Some(f[a]) {
            return Err(DecomposeError::Verification(format!(
                "reassembled function differs at {a}"
            )));
        }
    }
    for c in &out.cases {
        if c.guard.windows(2).any(|w| f[w[0]] > f[w[1]]) {
            return Err(DecomposeError::Verification(
                "a piece is not order preserving".into(),
            ));
        }
    }
    Ok(out)
}
