use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

use serde::Serialize;

use super::{Bounds, ConditionError, ConditionTag, ConditionVerdict, Status, Witness};
use crate::formulas::{fresh_var, Formula};
use crate::theories::{atomic_type_sat, enumerate_types, AtomicConstraint, AtomicType, Literal, TheoryFamily};

/// What the order and unary predicates see of an increasing tuple: the
/// 1-type of each point and, for each gap (both ends included), the
/// sequences of 1-types of length at most `seq_len` realizable inside it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Fingerprint {
    pub points: Vec<usize>,
    pub gaps: Vec<BTreeSet<Vec<usize>>>,
}

fn var_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn sequences(alphabet: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|s| {
                (0..alphabet).map(move |a| {
                    let mut t = s.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Fingerprint of an increasing type.
pub fn fingerprint(
    fam: TheoryFamily,
    t: &AtomicType,
    seq_len: usize,
) -> Result<Fingerprint, ConditionError> {
    if !t.is_increasing() {
        return Err(ConditionError::Arity(format!("type {t} is not increasing")));
    }
    let base = AtomicConstraint::from_formula(&t.to_formula(fam))?;
    let one_types = fam.one_types("_");
    let mut taken: BTreeSet<String> = t.vars.iter().cloned().collect();
    let mut fresh = Vec::with_capacity(seq_len);
    for _ in 0..seq_len {
        let v = fresh_var(&taken, "s");
        taken.insert(v.clone());
        fresh.push(v);
    }
    let seqs = sequences(one_types.len(), seq_len);
    let mut gaps = Vec::new();
    for g in 0..=t.arity() {
        let lo = g.checked_sub(1).map(|i| t.vars[i].as_str());
        let hi = t.vars.get(g).map(String::as_str);
        let mut realizable = BTreeSet::new();
        for s in &seqs {
            let mut c = base.clone();
            let names = &fresh[..s.len()];
            if let Some(lo) = lo {
                c.push(Literal::pos(Formula::lt(lo, &names[0])));
            }
            if let Some(hi) = hi {
                c.push(Literal::pos(Formula::lt(&names[s.len() - 1], hi)));
            }
            for w in names.windows(2) {
                c.push(Literal::pos(Formula::lt(&w[0], &w[1])));
            }
            for (name, &k) in names.iter().zip(s) {
                let u = one_types[k].rename_free("_", name);
                if u != Formula::True {
                    c.push(Literal::pos(u));
                }
            }
            if atomic_type_sat(fam, &c)? {
                realizable.insert(s.clone());
            }
        }
        gaps.push(realizable);
    }
    let points = if fam.colors() > 0 { t.color.clone() } else { vec![0; t.arity()] };
    Ok(Fingerprint { points, gaps })
}

fn increasing_types(fam: TheoryFamily, n: usize, bound: u32) -> Vec<AtomicType> {
    let names = var_names(n);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    enumerate_types(fam, &refs, bound).into_iter().filter(AtomicType::is_increasing).collect()
}

fn first_collision<K: Eq + Hash>(
    types: Vec<AtomicType>,
    mut key: impl FnMut(&AtomicType) -> Result<K, ConditionError>,
) -> Result<Option<(AtomicType, AtomicType)>, ConditionError> {
    let mut seen: HashMap<K, AtomicType> = HashMap::new();
    for t in types {
        let k = key(&t)?;
        if let Some(prev) = seen.get(&k) {
            return Ok(Some((prev.clone(), t)));
        }
        seen.insert(k, t);
    }
    Ok(None)
}

/// Rubin binarity on increasing `arity`-tuples: distinct complete types must
/// have distinct fingerprints.
pub fn check_rb(
    fam: TheoryFamily,
    arity: usize,
    seq_len: usize,
    distance: u32,
) -> Result<ConditionVerdict, ConditionError> {
    if arity == 0 || seq_len == 0 {
        return Err(ConditionError::Arity("RB needs arity and sequence length at least 1".into()));
    }
    let bounds = Bounds {
        arity: Some(arity),
        seq_len: Some(seq_len),
        distance: fam.has_distances().then_some(distance),
        ..Bounds::default()
    };
    let types = increasing_types(fam, arity, distance);
    let hit = first_collision(types, |t| fingerprint(fam, t, seq_len))?;
    Ok(match hit {
        Some((a, b)) => {
            let mut v = ConditionVerdict::new(ConditionTag::Rb, Status::Refuted, bounds);
            v.witness = Some(Witness::pair(fam, &a, &b));
            v
        }
        None => ConditionVerdict::new(ConditionTag::Rb, Status::HoldsExactly, bounds),
    })
}

/// Linear binarity on increasing `arity`-tuples: a complete type is
/// determined by the sequence of 2-types of consecutive points.
pub fn check_lb(
    fam: TheoryFamily,
    arity: usize,
    distance: u32,
) -> Result<ConditionVerdict, ConditionError> {
    if arity < 2 {
        return Err(ConditionError::Arity("LB needs arity at least 2".into()));
    }
    let bounds = Bounds {
        arity: Some(arity),
        distance: fam.has_distances().then_some(distance),
        ..Bounds::default()
    };
    let types = increasing_types(fam, arity, distance);
    let hit = first_collision(types, |t| {
        t.vars
            .windows(2)
            .map(|w| t.restrict(fam, &[&w[0], &w[1]]).map_err(ConditionError::from))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(match hit {
        Some((a, b)) => {
            let mut v = ConditionVerdict::new(ConditionTag::Lb, Status::Refuted, bounds);
            v.witness = Some(Witness::pair(fam, &a, &b));
            v
        }
        None => ConditionVerdict::new(ConditionTag::Lb, Status::HoldsExactly, bounds),
    })
}
