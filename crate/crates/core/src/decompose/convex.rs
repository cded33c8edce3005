use std::fmt;

use serde::Serialize;

use super::{indicator, successor_set, DecomposeError};
use crate::formulas::{ExtCmp, Formula};
use crate::semantics::Evaluator;
use crate::structures::{FiniteCcelStructure, EQUALITY};

/// One side of a band: `S^shift_E(param) cmp x` or `x cmp S^shift_E(param)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvexBound {
    pub param: usize,
    pub equivalence: String,
    pub shift: i64,
    pub cmp: ExtCmp,
}

impl ConvexBound {
    pub fn set(&self, s: &FiniteCcelStructure) -> Result<Vec<bool>, DecomposeError> {
        let p = s.convex_equivalence(&self.equivalence)?;
        Ok(successor_set(p, self.param, self.shift, self.cmp))
    }

    fn param_var(&self) -> String {
        format!("p{}", self.param)
    }

    pub fn to_formula(&self) -> Formula {
        Formula::ext("x", self.cmp, &self.equivalence, self.shift, &self.param_var())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ConvexNormalForm {
    Everything,
    Nothing,
    Band { lower: ConvexBound, upper: ConvexBound },
}

impl ConvexNormalForm {
    pub fn set(&self, s: &FiniteCcelStructure) -> Result<Vec<bool>, DecomposeError> {
        Ok(match self {
            ConvexNormalForm::Everything => vec![true; s.size()],
            ConvexNormalForm::Nothing => vec![false; s.size()],
            ConvexNormalForm::Band { lower, upper } => {
                let l = lower.set(s)?;
                let u = upper.set(s)?;
                l.iter().zip(&u).map(|(a, b)| *a && *b).collect()
            }
        })
    }

    /// The band as a formula in `x`, with parameter `c` written as `pc`.
    pub fn to_formula(&self) -> Formula {
        match self {
            ConvexNormalForm::Everything => Formula::True,
            ConvexNormalForm::Nothing => Formula::False,
            ConvexNormalForm::Band { lower, upper } => lower.to_formula().and(upper.to_formula()),
        }
    }

    pub fn params(&self) -> Vec<usize> {
        match self {
            ConvexNormalForm::Band { lower, upper } => {
                let mut v = vec![lower.param, upper.param];
                v.dedup();
                v
            }
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for ConvexNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConvexNormalForm::Everything => write!(f, "true"),
            ConvexNormalForm::Nothing => write!(f, "false"),
            ConvexNormalForm::Band { lower, upper } => {
                let op = |c: ExtCmp| match c {
                    ExtCmp::BelowStrict | ExtCmp::AboveStrict => "<",
                    _ => "<=",
                };
                write!(
                    f,
                    "S[{},{}]({}) {} x {} S[{},{}]({})",
                    lower.equivalence,
                    lower.shift,
                    lower.param,
                    op(lower.cmp),
                    op(upper.cmp),
                    upper.equivalence,
                    upper.shift,
                    upper.param
                )
            }
        }
    }
}

/// Best bound by (|shift|, number of classes, non-strict first, parameter
/// order, equivalence order).
fn best_bound(
    s: &FiniteCcelStructure,
    params: &[usize],
    max_shift: usize,
    target: &[bool],
    lower: bool,
) -> Option<ConvexBound> {
    let shapes: [(ExtCmp, i64); 2] = if lower {
        [(ExtCmp::InOrAbove, -1), (ExtCmp::AboveStrict, 1)]
    } else {
        [(ExtCmp::BelowOrIn, 1), (ExtCmp::BelowStrict, -1)]
    };
    let mut best: Option<((usize, usize, usize, usize, usize), ConvexBound)> = None;
    for (pi, &a) in params.iter().enumerate() {
        for (ei, (name, p)) in s.convex_equivalences().into_iter().enumerate() {
            for (si, &(cmp, sign)) in shapes.iter().enumerate() {
                for k in 0..=max_shift {
                    let shift = sign * k as i64;
                    if successor_set(p, a, shift, cmp) == target {
                        let key = (k, p.block_count(), si, pi, ei);
                        if best.as_ref().is_none_or(|(b, _)| key < *b) {
                            best = Some((
                                key,
                                ConvexBound {
                                    param: a,
                                    equivalence: name.to_string(),
                                    shift,
                                    cmp,
                                },
                            ));
                        }
                        break;
                    }
                }
            }
        }
    }
    best.map(|(_, b)| b)
}

/// A band definition of the convex set `c` with parameters from `params`,
/// using the structure's convex equivalences (including `Id` and `Full`).
pub fn convex_normal_form(
    s: &FiniteCcelStructure,
    c: &[usize],
    params: &[usize],
    max_shift: usize,
) -> Result<ConvexNormalForm, DecomposeError> {
    let n = s.size();
    if let Some(&e) = c.iter().chain(params).find(|&&e| e >= n) {
        return Err(crate::structures::StructureError::ElementOutOfRange { element: e, size: n }.into());
    }
    let set = indicator(n, c);
    let lo = set.iter().position(|&b| b);
    let hi = set.iter().rposition(|&b| b);
    if let (Some(lo), Some(hi)) = (lo, hi) {
        if set[lo..=hi].iter().any(|&b| !b) {
            return Err(DecomposeError::NotConvex);
        }
    }
    let form = match (lo, hi, params.first()) {
        (None, _, None) => return Ok(ConvexNormalForm::Nothing),
        (Some(0), Some(h), None) if h == n - 1 => return Ok(ConvexNormalForm::Everything),
        (_, _, None) => return Err(DecomposeError::NoParameters),
        (None, _, Some(&a)) => ConvexNormalForm::Band {
            lower: ConvexBound {
                param: a,
                equivalence: EQUALITY.into(),
                shift: 0,
                cmp: ExtCmp::InOrAbove,
            },
            upper: ConvexBound {
                param: a,
                equivalence: EQUALITY.into(),
                shift: 0,
                cmp: ExtCmp::BelowStrict,
            },
        },
        (Some(lo), Some(hi), Some(_)) => {
            let final_part: Vec<bool> = (0..n).map(|x| x >= lo).collect();
            let initial_part: Vec<bool> = (0..n).map(|x| x <= hi).collect();
            let lower = best_bound(s, params, max_shift, &final_part, true)
                .ok_or(DecomposeError::NoRepresentation { bound: max_shift })?;
            let upper = best_bound(s, params, max_shift, &initial_part, false)
                .ok_or(DecomposeError::NoRepresentation { bound: max_shift })?;
            ConvexNormalForm::Band { lower, upper }
        }
        (Some(_), None, _) => unreachable!(),
    };
    verify(s, &form, &set)?;
    Ok(form)
}

fn verify(
    s: &FiniteCcelStructure,
    form: &ConvexNormalForm,
    set: &[bool],
) -> Result<(), DecomposeError> {
    let f = form.to_formula();
    let names: Vec<String> = form.params().iter().map(|p| format!("p{p}")).collect();
    let mut vars = vec!["x"];
    vars.extend(names.iter().map(String::as_str));
    let ev = Evaluator::new(s, &f, &vars)?;
    let mut buf = vec![0];
    buf.extend(form.params());
    for x in 0..s.size() {
        buf[0] = x;
        if ev.eval(&buf) != set[x] {
            return Err(DecomposeError::Verification(format!(
                "{form} disagrees with the target set at {x}"
            )));
        }
    }
    Ok(())
}
