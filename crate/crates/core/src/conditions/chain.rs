use std::fmt;

use serde::Serialize;

use super::{check_lb, check_lf_family, check_rb, check_uconvex_expressibility};
use super::{Bounds, ConditionError, ConditionTag, ConditionVerdict, Status};
use crate::theories::{binary_battery, TheoryFamily, DEFAULT_DISTANCE_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainBounds {
    pub rb_arity: usize,
    pub seq_len: usize,
    pub lb_arity: usize,
    pub distance: u32,
    pub formulas: usize,
    pub seed: u64,
    pub clique_limit: usize,
}

impl Default for ChainBounds {
    fn default() -> Self {
        Self { rb_arity: 2, seq_len: 3, lb_arity: 3, distance: 2, formulas: 24, seed: 1, clique_limit: 16 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainRow {
    pub condition: ConditionTag,
    pub status: Status,
    pub verdict: ConditionVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub family: String,
    pub rows: Vec<ChainRow>,
}

impl ChainReport {
    pub fn status(&self, tag: ConditionTag) -> Option<Status> {
        self.rows.iter().find(|r| r.condition == tag).map(|r| r.status)
    }
}

impl fmt::Display for ChainReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<16}", self.family)?;
        for r in &self.rows {
            let mark = if r.status.refuted() { "no" } else { "yes" };
            write!(f, " {}={:<4}", r.condition, mark)?;
        }
        Ok(())
    }
}

/// Runs RB, UCONVEX (over a battery of binary formulas), LB and LF, and
/// checks that RB => UCONVEX => LB => LF.
pub fn implication_chain_report(
    fam: TheoryFamily,
    b: &ChainBounds,
) -> Result<ChainReport, ConditionError> {
    let rb = check_rb(fam, b.rb_arity, b.seq_len, b.distance)?;
    let battery = binary_battery(fam, b.formulas, b.seed);
    let battery_bounds = Bounds { formulas: Some(battery.len()), ..Bounds::default() };

    let mut uconvex =
        ConditionVerdict::new(ConditionTag::Uconvex, Status::ConsistentUpToBounds, battery_bounds.clone());
    for f in &battery {
        let v = check_uconvex_expressibility(fam, f, None, DEFAULT_DISTANCE_BUDGET)?;
        if v.status.refuted() {
            uconvex = v;
            uconvex.bounds.formulas = Some(battery.len());
            break;
        }
    }

    let lb = check_lb(fam, b.lb_arity, b.distance)?;

    let mut lf = ConditionVerdict::new(ConditionTag::Lf, Status::HoldsExactly, battery_bounds);
    lf.bounds.clique_limit = Some(b.clique_limit);
    let mut n_phi = 0;
    for f in &battery {
        let v = check_lf_family(fam, f, "x", &["y"], b.clique_limit, DEFAULT_DISTANCE_BUDGET)?;
        n_phi = n_phi.max(v.n_phi.unwrap_or(0));
        if v.status != Status::HoldsExactly {
            lf.status = Status::ConsistentUpToBounds;
        }
    }
    lf.n_phi = Some(n_phi);
    if lf.status == Status::HoldsExactly {
        lf.status = Status::ConsistentUpToBounds;
    }

    let rows: Vec<ChainRow> = [rb, uconvex, lb, lf]
        .into_iter()
        .map(|v| ChainRow { condition: v.condition, status: v.status, verdict: v })
        .collect();
    for w in rows.windows(2) {
        if !w[0].status.refuted() && w[1].status.refuted() {
            return Err(ConditionError::ChainViolation(format!(
                "{fam}: {} holds but {} is refuted",
                w[0].condition, w[1].condition
            )));
        }
    }
    Ok(ChainReport { family: fam.to_string(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn marks(fam: TheoryFamily) -> Vec<bool> {
        let b = ChainBounds { formulas: 12, ..ChainBounds::default() };
        let r = implication_chain_report(fam, &b).unwrap();
        r.rows.iter().map(|r| !r.status.refuted()).collect()
    }

    #[test]
    fn expected_table() {
        assert_eq!(marks(TheoryFamily::ColoredDense(2)), [true, true, true, true]);
        assert_eq!(marks(TheoryFamily::DenseClasses(2)), [false, false, true, true]);
        assert_eq!(marks(TheoryFamily::DenseClasses(3)), [false, false, false, true]);
        assert_eq!(marks(TheoryFamily::LexDense), [false, true, true, true]);
    }
}
