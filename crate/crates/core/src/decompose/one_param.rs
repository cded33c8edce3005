use std::collections::HashSet;

use serde::Serialize;

use super::bc::BcExpression;
use super::convex::{convex_normal_form, ConvexBound, ConvexNormalForm};
use super::{members, DecomposeError, Relation};
use crate::formulas::ExtCmp;
use crate::structures::{FiniteCcelStructure, Partition, EQUALITY};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PieceKind {
    /// A whole class of a convex equivalence lying above the class of `a`.
    WholeClass,
    /// An end part of the class of `a` on which `N_φ(a, ·)` is constant.
    EndPart,
}

/// A member of the convex partition of `(a, ∞)` (or, mirrored, `(-∞, a)`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OneParamPiece {
    pub members: Vec<usize>,
    pub kind: PieceKind,
    pub equivalence: String,
    /// Value of `N_φ(a, ·)` on the level set the piece was cut from.
    pub level: usize,
    pub above: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OneParamReport {
    pub param: usize,
    pub set: Vec<usize>,
    pub expression: BcExpression,
    pub pieces: Vec<OneParamPiece>,
}

/// Number of φ-types over `(-∞, y]` realized in `[b, ∞)`.
pub fn n_phi(rel: &Relation, y: usize, b: usize) -> usize {
    (b..rel.size())
        .map(|x| (0..=y).map(|c| rel.get(x, c)).collect::<Vec<bool>>())
        .collect::<HashSet<_>>()
        .len()
}

fn fail(msg: impl Into<String>) -> DecomposeError {
    DecomposeError::Verification(msg.into())
}

/// `(-∞, a]` adjusted by whole classes so that it becomes the solution set
/// of the bound.
fn bound_to_bc(
    s: &FiniteCcelStructure,
    b: &ConvexBound,
) -> Result<BcExpression, DecomposeError> {
    let p = s.convex_equivalence(&b.equivalence)?;
    let a = b.param;
    let class = |j: i64| -> Option<BcExpression> {
        p.successor_block(a, j)
            .map(|blk| BcExpression::class(&b.equivalence, p, blk[0]))
    };
    let range = |lo: i64, hi: i64| -> Vec<BcExpression> {
        (lo..=hi).filter_map(class).collect()
    };
    // x <= S^k(a)
    let at_most = |k: i64| -> BcExpression {
        if k >= 0 {
            let mut parts = vec![BcExpression::up_to(a)];
            parts.extend(range(0, k));
            BcExpression::Union(parts)
        } else {
            BcExpression::up_to(a).minus(BcExpression::Union(range(k + 1, 0)))
        }
    };
    // x < S^k(a)
    let below = |k: i64| -> BcExpression {
        if k > 0 {
            let mut parts = vec![BcExpression::up_to(a)];
            parts.extend(range(0, k - 1));
            BcExpression::Union(parts)
        } else {
            BcExpression::up_to(a).minus(BcExpression::Union(range(k, 0)))
        }
    };
    if p.successor_block(a, b.shift).is_none() {
        return Ok(BcExpression::Empty);
    }
    let out = match b.cmp {
        ExtCmp::BelowOrIn => at_most(b.shift),
        ExtCmp::BelowStrict => below(b.shift),
        ExtCmp::InOrAbove => below(b.shift).complement(),
        ExtCmp::AboveStrict => at_most(b.shift).complement(),
    };
    if out.eval(s.size()) != b.set(s)? {
        return Err(fail("bound expression disagrees with the bound"));
    }
    Ok(out)
}

fn convex_to_bc(
    s: &FiniteCcelStructure,
    c: &[usize],
    a: usize,
) -> Result<BcExpression, DecomposeError> {
    match convex_normal_form(s, c, &[a], s.size())? {
        ConvexNormalForm::Everything => Ok(BcExpression::Empty.complement()),
        ConvexNormalForm::Nothing => Ok(BcExpression::Empty),
        ConvexNormalForm::Band { lower, upper } => Ok(BcExpression::Inter(vec![
            bound_to_bc(s, &lower)?,
            bound_to_bc(s, &upper)?,
        ])),
    }
}

/// Partition from a key function; elements with equal keys share a block.
fn partition_by<K: Eq + std::hash::Hash + Clone>(n: usize, key: impl Fn(usize) -> K) -> Partition {
    let mut ids: Vec<K> = Vec::new();
    let labels: Vec<usize> = (0..n)
        .map(|x| {
            let k = key(x);
            match ids.iter().position(|i| *i == k) {
                Some(i) => i,
                None => {
                    ids.push(k);
                    ids.len() - 1
                }
            }
        })
        .collect();
    Partition::from_labels(&labels)
}

fn check_equivalence(n: usize, r: impl Fn(usize, usize) -> bool, what: &str) -> Result<(), DecomposeError> {
    for x in 0..n {
        if !r(x, x) {
            return Err(fail(format!("{what} is not reflexive at {x}")));
        }
        for y in 0..n {
            if r(x, y) != r(y, x) {
                return Err(fail(format!("{what} is not symmetric at ({x},{y})")));
            }
            if !r(x, y) {
                continue;
            }
            for z in 0..n {
                if r(y, z) && !r(x, z) {
                    return Err(fail(format!("{what} is not transitive at ({x},{y},{z})")));
                }
            }
        }
    }
    Ok(())
}

/// Union of the classes of `r` that lie inside `target`, after checking that
/// every class of `r` inside `within` is contained in or disjoint from it.
fn classes_inside(
    name: &str,
    r: &Partition,
    within: &[usize],
    target: &[bool],
) -> Result<BcExpression, DecomposeError> {
    let mut parts = Vec::new();
    let mut seen = HashSet::new();
    for &x in within {
        let idx = r.block_index(x);
        if !seen.insert(idx) {
            continue;
        }
        let blk = &r.blocks()[idx];
        let inside = blk.iter().filter(|&&e| target[e]).count();
        if inside != 0 && inside != blk.len() {
            return Err(fail(format!("class {blk:?} of {name} splits the target set")));
        }
        if inside != 0 {
            parts.push(BcExpression::class(name, r, blk[0]));
        }
    }
    Ok(BcExpression::Union(parts))
}

struct Ctx<'a> {
    s: &'a FiniteCcelStructure,
    rel: &'a Relation,
    a: usize,
    target: Vec<bool>,
    counter: usize,
}

impl Ctx<'_> {
    fn fresh(&mut self, stem: &str) -> String {
        self.counter += 1;
        format!("{stem}{}", self.counter)
    }

    /// `E(y,z) ∧ y ≡_φ z` over the elements below the class of `y`.
    fn whole_class(
        &mut self,
        e: &Partition,
        class: &[usize],
    ) -> Result<BcExpression, DecomposeError> {
        let rel = self.rel;
        let n = rel.size();
        let r = partition_by(n, |y| {
            let lo = e.block_of(y)[0];
            (e.block_index(y), (0..lo).map(|c| rel.get(y, c)).collect::<Vec<bool>>())
        });
        let name = self.fresh("R");
        classes_inside(&name, &r, class, &self.target)
    }

    /// End part `c0` of the class of `a` under `e`, with `N_φ(a, ·)` constant
    /// equal to `level` on it.
    fn end_part(
        &mut self,
        e: &Partition,
        c0: &[usize],
        level: usize,
    ) -> Result<BcExpression, DecomposeError> {
        let (rel, a) = (self.rel, self.a);
        let n = rel.size();
        let start = c0[0];
        let d_max = |y: usize| if y < start { start as isize - 1 } else { y as isize };
        let in_d = |x: usize, y: usize| (x as isize) <= d_max(y);
        let theta: Vec<bool> = (0..n)
            .map(|y| {
                let rest: Vec<usize> = e.block_of(y).iter().copied().filter(|&b| !in_d(b, y)).collect();
                !rest.is_empty() && rest.iter().all(|&b| n_phi(rel, y, b) == level)
            })
            .collect();
        if !theta[a] {
            return Err(fail(format!("θ fails at the parameter {a}")));
        }
        let op_equal = |y: usize, z: usize, from: usize| (from..n).all(|d| rel.get(d, y) == rel.get(d, z));
        let r = |y: usize, z: usize| {
            e.related(y, z)
                && ((!theta[y] && !theta[z])
                    || (theta[y] && theta[z] && op_equal(y, z, (d_max(y.max(z)) + 1) as usize)))
        };
        check_equivalence(n, r, "the constant-level relation")?;
        let psi = Relation::from_fn(n, |x, y| {
            e.related(x, y)
                && theta[y]
                && (0..n).any(|z| r(y, z) && !in_d(x, z) && rel.get(x, z))
        });
        for &b in c0 {
            if psi.get(b, a) != self.target[b] {
                return Err(fail(format!("ψ and φ disagree at {b}")));
            }
        }
        // finitely many ψ-positions on a class
        let positions = |x: usize| -> usize {
            e.block_of(x)
                .iter()
                .map(|&c| psi.column(c))
                .collect::<HashSet<_>>()
                .len()
        };
        let n_c = positions(a);
        let r2 = partition_by(n, |x| {
            let blk = e.block_of(x);
            if positions(x) == n_c {
                (e.block_index(x), blk.iter().map(|&c| psi.get(x, c)).collect::<Vec<bool>>())
            } else {
                (e.block_index(x), Vec::new())
            }
        });
        let psi_a = psi.column(a);
        let name = self.fresh("R");
        let inside = classes_inside(&name, &r2, e.block_of(a), &psi_a)?;
        let band = convex_to_bc(self.s, c0, a)?;
        Ok(BcExpression::Inter(vec![band, inside]))
    }
}

/// Expression for `D ∩ (a, ∞)` and the partition of `(a, ∞)` it was built on.
fn upper_part(
    s: &FiniteCcelStructure,
    rel: &Relation,
    a: usize,
) -> Result<(BcExpression, Vec<OneParamPiece>), DecomposeError> {
    let n = s.size();
    let target = rel.column(a);
    let mut ctx = Ctx {
        s,
        rel,
        a,
        target: target.clone(),
        counter: 0,
    };
    let mut pieces = Vec::new();
    let mut parts = Vec::new();
    let mut end = n;
    while end > a + 1 {
        let levels: Vec<usize> = (a + 1..end).map(|x| n_phi(rel, a, x)).collect();
        let j = *levels.iter().min().expect("nonempty");
        let level_set: Vec<usize> = (a + 1..end).filter(|&x| levels[x - a - 1] == j).collect();
        let lo = level_set[0];
        if level_set.len() != end - lo {
            return Err(fail("level set of N_φ(a, ·) is not a final part"));
        }
        let ConvexNormalForm::Band { upper, .. } = convex_normal_form(s, &level_set, &[a], n)? else {
            return Err(fail("level set has no band form"));
        };
        let e = s.convex_equivalence(&upper.equivalence)?.clone();
        if e.block_of(end - 1)[e.block_of(end - 1).len() - 1] != end - 1 {
            return Err(fail("upper bound does not end on a class boundary"));
        }
        let first = e.block_index(lo);
        let last = e.block_index(end - 1);
        let new_end;
        if e.block_index(a) != first {
            for idx in first..=last {
                let class = e.blocks()[idx].clone();
                parts.push(ctx.whole_class(&e, &class)?);
                pieces.push(OneParamPiece {
                    members: class,
                    kind: PieceKind::WholeClass,
                    equivalence: upper.equivalence.clone(),
                    level: j,
                    above: true,
                });
            }
            new_end = e.blocks()[first][0];
        } else {
            let blk = e.blocks()[first].clone();
            let c0: Vec<usize> = blk.into_iter().filter(|&x| x >= lo).collect();
            parts.push(ctx.end_part(&e, &c0, j)?);
            pieces.push(OneParamPiece {
                members: c0,
                kind: PieceKind::EndPart,
                equivalence: upper.equivalence.clone(),
                level: j,
                above: true,
            });
            for idx in first + 1..=last {
                let class = e.blocks()[idx].clone();
                parts.push(ctx.whole_class(&e, &class)?);
                pieces.push(OneParamPiece {
                    members: class,
                    kind: PieceKind::WholeClass,
                    equivalence: upper.equivalence.clone(),
                    level: j,
                    above: true,
                });
            }
            new_end = lo;
        }
        if new_end <= a || new_end >= end {
            return Err(fail("partition step made no progress"));
        }
        end = new_end;
    }
    pieces.reverse();
    let expr = BcExpression::Union(parts).simplify();
    let upper_target: Vec<bool> = (0..n).map(|x| x > a && target[x]).collect();
    let got = expr.eval(n);
    if got != upper_target {
        return Err(fail("upper part does not reproduce D ∩ (a, ∞)"));
    }
    let canonical = if members(&upper_target).len() == n - 1 - a {
        BcExpression::Above(a)
    } else {
        expr
    };
    Ok((canonical, pieces))
}

/// Boolean-combination description of `φ(U, a)`.
pub fn one_param_decompose(
    s: &FiniteCcelStructure,
    rel: &Relation,
    a: usize,
) -> Result<OneParamReport, DecomposeError> {
    let n = s.size();
    if rel.size() != n {
        return Err(DecomposeError::SizeMismatch {
            expected: n,
            found: rel.size(),
        });
    }
    if a >= n {
        return Err(crate::structures::StructureError::ElementOutOfRange { element: a, size: n }.into());
    }
    let (up, mut pieces) = upper_part(s, rel, a)?;
    let rs = s.reversed();
    let (down, down_pieces) = upper_part(&rs, &rel.reversed(), n - 1 - a)?;
    let down = match down {
        BcExpression::Above(_) => BcExpression::below(a, n),
        other => other.reflect(n),
    };
    for p in down_pieces.into_iter().rev() {
        let mut m: Vec<usize> = p.members.iter().map(|&e| n - 1 - e).collect();
        m.sort_unstable();
        pieces.insert(
            0,
            OneParamPiece {
                members: m,
                above: false,
                ..p
            },
        );
    }
    let target = rel.column(a);
    let mid = if target[a] {
        BcExpression::class(EQUALITY, &Partition::equality(n), a)
    } else {
        BcExpression::Empty
    };
    let expression = BcExpression::Union(vec![down, mid, up]).simplify();
    if expression.eval(n) != target {
        return Err(fail("expression does not reproduce the definable set"));
    }
    Ok(OneParamReport {
        param: a,
        set: members(&target),
        expression,
        pieces,
    })
}
