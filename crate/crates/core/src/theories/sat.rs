use serde::Serialize;

use super::{TheoryError, TheoryFamily, CLASS_EQUIV};
use crate::formulas::{ExtCmp, Formula, Var};
use crate::structures::{EQUALITY, FULL};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Literal {
    pub positive: bool,
    pub atom: Formula,
}

impl Literal {
    pub fn pos(atom: Formula) -> Self {
        Self { positive: true, atom }
    }

    pub fn neg(atom: Formula) -> Self {
        Self { positive: false, atom }
    }
}

/// A conjunction of literals.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct AtomicConstraint {
    pub literals: Vec<Literal>,
}

impl AtomicConstraint {
    pub fn new(literals: Vec<Literal>) -> Self {
        Self { literals }
    }

    /// Flattens a conjunction of atoms and negated atoms.
    pub fn from_formula(f: &Formula) -> Result<Self, TheoryError> {
        fn go(f: &Formula, out: &mut Vec<Literal>) -> Result<(), TheoryError> {
            match f {
                Formula::True => Ok(()),
                Formula::And(a, b) => {
                    go(a, out)?;
                    go(b, out)
                }
                Formula::Not(a) if a.is_atomic() => {
                    out.push(Literal::neg((**a).clone()));
                    Ok(())
                }
                a if a.is_atomic() => {
                    out.push(Literal::pos(a.clone()));
                    Ok(())
                }
                other => Err(TheoryError::NotALiteral(other.to_string())),
            }
        }
        let mut literals = Vec::new();
        go(f, &mut literals)?;
        Ok(Self { literals })
    }

    pub fn push(&mut self, lit: Literal) {
        self.literals.push(lit);
    }

    pub fn extend(&mut self, other: &AtomicConstraint) {
        self.literals.extend(other.literals.iter().cloned());
    }

    pub fn to_formula(&self) -> Formula {
        Formula::conj(self.literals.iter().map(|l| {
            if l.positive {
                l.atom.clone()
            } else {
                l.atom.clone().not()
            }
        }))
    }

    fn vars(&self) -> Vec<Var> {
        let mut out: Vec<Var> = Vec::new();
        for l in &self.literals {
            for v in l.atom.free_vars() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }
}

/// `c[to] - c[from] <= w`.
type DiffEdge = (usize, usize, i64);

/// Normal forms of literals once the weak order is fixed.
enum Core {
    Const(bool),
    Color { rank: usize, color: usize, positive: bool },
    SameClass { a: usize, b: usize, positive: bool },
    Diff(DiffEdge),
}

fn order_cmp(cmp: ExtCmp, ord: std::cmp::Ordering) -> bool {
    super::ext_cmp_holds(cmp, ord)
}

/// Difference constraint for `c[e] - c[a] (cmp) shift`, possibly negated.
fn ext_edge(cmp: ExtCmp, positive: bool, e: usize, a: usize, shift: i64) -> DiffEdge {
    // upper(k): c[e] - c[a] <= k ; lower(k): c[e] - c[a] >= k
    let (upper, k) = match (cmp, positive) {
        (ExtCmp::BelowStrict, true) => (true, shift - 1),
        (ExtCmp::BelowOrIn, true) => (true, shift),
        (ExtCmp::AboveStrict, true) => (false, shift + 1),
        (ExtCmp::InOrAbove, true) => (false, shift),
        (ExtCmp::BelowStrict, false) => (false, shift),
        (ExtCmp::BelowOrIn, false) => (false, shift + 1),
        (ExtCmp::AboveStrict, false) => (true, shift),
        (ExtCmp::InOrAbove, false) => (true, shift - 1),
    };
    if upper {
        (a, e, k)
    } else {
        (e, a, -k)
    }
}

fn core(
    fam: TheoryFamily,
    lit: &Literal,
    rank: &dyn Fn(&str) -> usize,
) -> Result<Core, TheoryError> {
    let illegal = || TheoryError::IllegalAtom(lit.atom.to_string(), fam.to_string());
    let p = lit.positive;
    Ok(match &lit.atom {
        Formula::True => Core::Const(p),
        Formula::False => Core::Const(!p),
        Formula::Lt(x, y) => Core::Const((rank(x) < rank(y)) == p),
        Formula::Eq(x, y) => Core::Const((rank(x) == rank(y)) == p),
        Formula::Pred(name, x) => Core::Color {
            rank: rank(x),
            color: fam.color_index(name).ok_or_else(illegal)?,
            positive: p,
        },
        Formula::Equiv(e, x, y) if e == EQUALITY => Core::Const((rank(x) == rank(y)) == p),
        Formula::Equiv(e, _, _) if e == FULL => Core::Const(p),
        Formula::Equiv(e, x, y) if e == CLASS_EQUIV && fam.has_classes() => {
            let (a, b) = (rank(x), rank(y));
            if fam.is_lex() {
                let (lo, hi) = (a.min(b), a.max(b));
                match (p, lo == hi) {
                    (true, _) => Core::SameClass { a: lo, b: hi, positive: true },
                    (false, true) => Core::Const(false),
                    (false, false) => Core::Diff((hi, lo, -1)),
                }
            } else {
                Core::SameClass { a, b, positive: p }
            }
        }
        Formula::Ext(at) => {
            let (e, a) = (rank(&at.elem), rank(&at.anchor));
            if at.equiv == EQUALITY {
                Core::Const((at.shift == 0 && order_cmp(at.cmp, e.cmp(&a))) == p)
            } else if at.equiv == FULL {
                let t = at.shift == 0 && matches!(at.cmp, ExtCmp::BelowOrIn | ExtCmp::InOrAbove);
                Core::Const(t == p)
            } else if at.equiv == CLASS_EQUIV && fam.is_lex() {
                if !fam.has_distances() && at.shift != 0 {
                    Core::Const(!p)
                } else {
                    Core::Diff(ext_edge(at.cmp, p, e, a, at.shift))
                }
            } else {
                return Err(illegal());
            }
        }
        _ => return Err(TheoryError::NotALiteral(lit.atom.to_string())),
    })
}

/// Calls `f` with every weak order of `k` items as a rank vector; stops when
/// `f` returns true.
fn any_weak_order(k: usize, f: &mut dyn FnMut(&[usize], usize) -> bool) -> bool {
    fn rec(
        i: usize,
        k: usize,
        rank: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize], usize) -> bool,
    ) -> bool {
        if i == k {
            // ranks must be onto 0..r
            let r = rank.iter().max().map_or(0, |m| m + 1);
            let mut seen = vec![false; r];
            for &x in rank.iter() {
                seen[x] = true;
            }
            return seen.iter().all(|&b| b) && f(rank, r);
        }
        for v in 0..k {
            rank[i] = v;
            if rec(i + 1, k, rank, f) {
                return true;
            }
        }
        false
    }
    let mut rank = vec![0; k];
    rec(0, k, &mut rank, f)
}

/// Bellman-Ford: false iff the difference constraints contain a negative
/// cycle.
fn difference_feasible(n: usize, edges: &[DiffEdge]) -> bool {
    let mut dist = vec![0i64; n];
    for _ in 0..n {
        let mut changed = false;
        for &(u, v, w) in edges {
            if dist[u] + w < dist[v] {
                dist[v] = dist[u] + w;
                changed = true;
            }
        }
        if !changed {
            return true;
        }
    }
    edges.iter().all(|&(u, v, w)| dist[u] + w >= dist[v])
}

fn colorable(nodes: usize, conflicts: &[(usize, usize)], colors: usize) -> bool {
    fn rec(i: usize, assign: &mut Vec<usize>, conflicts: &[(usize, usize)], colors: usize) -> bool {
        if i == assign.len() {
            return true;
        }
        let used = assign[..i].iter().max().map_or(0, |m| m + 1);
        for c in 0..(used + 1).min(colors) {
            let ok = conflicts.iter().all(|&(a, b)| {
                !((a == i && b < i && assign[b] == c) || (b == i && a < i && assign[a] == c))
            });
            if ok {
                assign[i] = c;
                if rec(i + 1, assign, conflicts, colors) {
                    return true;
                }
            }
        }
        false
    }
    rec(0, &mut vec![0; nodes], conflicts, colors)
}

fn find(parent: &mut [usize], x: usize) -> usize {
    if parent[x] != x {
        let r = find(parent, parent[x]);
        parent[x] = r;
    }
    parent[x]
}

fn family_consistent(fam: TheoryFamily, r: usize, cores: &[Core]) -> bool {
    if cores.iter().any(|c| matches!(c, Core::Const(false))) {
        return false;
    }
    // colors: exactly one per rank
    if let TheoryFamily::ColoredDense(c) = fam {
        for rank in 0..r {
            let mut allowed = vec![true; c];
            let mut forced = None;
            for cc in cores {
                if let Core::Color { rank: k, color, positive } = *cc {
                    if k != rank {
                        continue;
                    }
                    if positive {
                        if forced.is_some_and(|f| f != color) {
                            return false;
                        }
                        forced = Some(color);
                    } else {
                        allowed[color] = false;
                    }
                }
            }
            match forced {
                Some(f) if !allowed[f] => return false,
                None if !allowed.iter().any(|&b| b) => return false,
                _ => {}
            }
        }
    }
    if let TheoryFamily::DenseClasses(n) = fam {
        let mut parent: Vec<usize> = (0..r).collect();
        for cc in cores {
            if let Core::SameClass { a, b, positive: true } = *cc {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
        let mut roots: Vec<usize> = (0..r).map(|i| find(&mut parent, i)).collect();
        let mut ids = roots.clone();
        ids.sort_unstable();
        ids.dedup();
        for x in roots.iter_mut() {
            *x = ids.binary_search(x).unwrap();
        }
        let mut conflicts = Vec::new();
        for cc in cores {
            if let Core::SameClass { a, b, positive: false } = *cc {
                if roots[a] == roots[b] {
                    return false;
                }
                conflicts.push((roots[a], roots[b]));
            }
        }
        if !colorable(ids.len(), &conflicts, n) {
            return false;
        }
    }
    if fam.is_lex() {
        let mut edges: Vec<DiffEdge> = (1..r).map(|i| (i, i - 1, 0)).collect();
        for cc in cores {
            match *cc {
                Core::SameClass { a, b, .. } => {
                    edges.push((a, b, 0));
                    edges.push((b, a, 0));
                }
                Core::Diff(e) => edges.push(e),
                _ => {}
            }
        }
        if !difference_feasible(r, &edges) {
            return false;
        }
    }
    true
}

/// Whether some tuple in the family's canonical model satisfies `c`.
pub fn atomic_type_sat(fam: TheoryFamily, c: &AtomicConstraint) -> Result<bool, TheoryError> {
    for l in &c.literals {
        fam.check_formula(&l.atom)?;
        if !l.atom.is_atomic() {
            return Err(TheoryError::NotALiteral(l.atom.to_string()));
        }
    }
    let vars = c.vars();
    let mut err = None;
    let found = any_weak_order(vars.len(), &mut |rank, r| {
        let rank_of = |v: &str| rank[vars.iter().position(|w| w == v).unwrap()];
        let cores: Result<Vec<Core>, _> = c.literals.iter().map(|l| core(fam, l, &rank_of)).collect();
        match cores {
            Ok(cores) => family_consistent(fam, r, &cores),
            Err(e) => {
                err = Some(e);
                true
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::parse_formula;
    use crate::theories::enumerate_types;

    fn constraint(fam: TheoryFamily, text: &str) -> AtomicConstraint {
        let f = parse_formula(text, &fam.signature()).unwrap();
        AtomicConstraint::from_formula(&f).unwrap()
    }

    #[test]
    fn pigeonhole() {
        let text = "x < y & y < z & !E0(x,y) & !E0(y,z) & !E0(x,z)";
        let t2 = TheoryFamily::DenseClasses(2);
        assert!(!atomic_type_sat(t2, &constraint(t2, text)).unwrap());
        let t3 = TheoryFamily::DenseClasses(3);
        assert!(atomic_type_sat(t3, &constraint(t3, text)).unwrap());
    }

    #[test]
    fn zeta_distances_add() {
        let z = TheoryFamily::LexOverZeta;
        let succ = |a: &str, b: &str, d: i64| {
            format!("S[E0,{d}]({a}) <= {b} & {b} <= S[E0,{d}]({a})")
        };
        let ok = format!("{} & {} & {}", succ("x", "y", 1), succ("y", "z", 1), succ("x", "z", 2));
        assert!(atomic_type_sat(z, &constraint(z, &ok)).unwrap());
        let bad = format!("{} & {} & {}", succ("x", "y", 1), succ("y", "z", 1), succ("x", "z", 3));
        assert!(!atomic_type_sat(z, &constraint(z, &bad)).unwrap());
    }

    #[test]
    fn order_and_colors() {
        let c = TheoryFamily::ColoredDense(2);
        assert!(!atomic_type_sat(c, &constraint(c, "x < y & y < x")).unwrap());
        assert!(!atomic_type_sat(c, &constraint(c, "P0(x) & P1(x)")).unwrap());
        assert!(!atomic_type_sat(c, &constraint(c, "!P0(x) & !P1(x)")).unwrap());
        assert!(!atomic_type_sat(c, &constraint(c, "x = y & P0(x) & P1(y)")).unwrap());
        assert!(atomic_type_sat(c, &constraint(c, "x < y & P0(x) & P1(y)")).unwrap());
        assert!(!atomic_type_sat(c, &constraint(c, "!(x < y) & !(y < x) & !(x = y)")).unwrap());
    }

    #[test]
    fn lex_dense_has_no_successor_classes() {
        let l = TheoryFamily::LexDense;
        assert!(!atomic_type_sat(l, &constraint(l, "S[E0,1](x) <= y")).unwrap());
        assert!(atomic_type_sat(l, &constraint(l, "!(S[E0,1](x) <= y)")).unwrap());
        assert!(!atomic_type_sat(l, &constraint(l, "x < y & y < z & E0(x,z) & !E0(x,y)")).unwrap());
    }

    #[test]
    fn illegal_atoms() {
        let t2 = TheoryFamily::DenseClasses(2);
        let c = AtomicConstraint::new(vec![Literal::pos(Formula::pred("P0", "x"))]);
        assert!(matches!(atomic_type_sat(t2, &c), Err(TheoryError::IllegalAtom(..))));
    }

    #[test]
    fn every_enumerated_type_is_satisfiable_and_exclusive() {
        for fam in [
            TheoryFamily::ColoredDense(2),
            TheoryFamily::DenseClasses(2),
            TheoryFamily::DenseClasses(3),
            TheoryFamily::LexDense,
            TheoryFamily::LexOverZeta,
        ] {
            let ts = enumerate_types(fam, &["x", "y", "z"], 2);
            for t in &ts {
                let c = AtomicConstraint::from_formula(&t.to_formula(fam)).unwrap();
                assert!(atomic_type_sat(fam, &c).unwrap(), "{fam}: {t}");
            }
            // two distinct types are jointly unsatisfiable
            for (i, a) in ts.iter().enumerate().step_by(7) {
                for b in ts.iter().skip(i + 1).step_by(5) {
                    let mut c = AtomicConstraint::from_formula(&a.to_formula(fam)).unwrap();
                    c.extend(&AtomicConstraint::from_formula(&b.to_formula(fam)).unwrap());
                    assert!(!atomic_type_sat(fam, &c).unwrap(), "{fam}: {a} / {b}");
                }
            }
        }
    }
}
