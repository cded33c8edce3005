use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{TheoryFamily, CLASS_EQUIV};
use crate::formulas::{parse_formula, ExtCmp, Formula};

const CMPS: [ExtCmp; 4] = [
    ExtCmp::BelowStrict,
    ExtCmp::BelowOrIn,
    ExtCmp::AboveStrict,
    ExtCmp::InOrAbove,
];

fn curated(fam: TheoryFamily, binary: bool) -> Vec<&'static str> {
    let mut v = vec![
        "x < y",
        "x = y",
        "exists z. (x < z & z < y)",
        "forall z. (z < x -> z < y)",
        "exists z. (y < z & forall w. (w < x | z < w))",
    ];
    v.extend(match fam {
        TheoryFamily::ColoredDense(_) => vec![
            "P0(x)",
            "P0(x) & !P0(y) & x < y",
            "exists z. (x < z & z < y & !P0(z))",
            "forall z. (x < z -> exists w. (z < w & P0(w)))",
            "exists z. (P0(z) & z < x & forall w. (z < w & w < y -> P0(w)))",
        ],
        TheoryFamily::DenseClasses(_) => vec![
            "E0(x,y)",
            "exists z. (x < z & z < y & !E0(z,x) & !E0(z,y))",
            "exists z. (E0(x,z) & !E0(y,z))",
            "forall z. (E0(x,z) | E0(y,z))",
            "exists z. (z < x & forall w. (E0(w,z) -> E0(w,y)))",
        ],
        TheoryFamily::LexDense => vec![
            "E0(x,y)",
            "x < S[E0,0](y)",
            "exists z. (E0(z,x) & x < z)",
            "exists z. (!E0(z,x) & x < z & z < y)",
            "forall z. (E0(x,z) -> z < y)",
            "exists z. (x < z & !E0(z,x) & forall w. (x < w & w < z -> E0(w,x) | E0(w,z)))",
        ],
        TheoryFamily::LexOverZeta => vec![
            "S[E0,1](x) <= y & y <= S[E0,1](x)",
            "x < S[E0,-1](y)",
            "exists z. (S[E0,1](x) <= z & z < y)",
            "forall z. (x < z & z < y -> E0(z,x) | E0(z,y))",
            "exists z. (S[E0,1](x) <= z & z <= S[E0,1](x) & S[E0,1](z) <= y & y <= S[E0,1](z))",
            "exists z. (x < z & z < y & !E0(z,x) & !E0(z,y))",
        ],
    });
    if !binary {
        v.extend(match fam {
            TheoryFamily::ColoredDense(_) => vec!["x < z & z < y & P0(z)"],
            TheoryFamily::DenseClasses(_) => vec!["!E0(x,y) & !E0(y,z) & !E0(x,z)"],
            _ => vec!["E0(x,z) & x < y & y < z & !E0(x,y)"],
        });
    }
    v
}

struct Gen<'a> {
    fam: TheoryFamily,
    rng: &'a mut ChaCha8Rng,
}

impl Gen<'_> {
    fn pick<'v>(&mut self, vars: &[&'v str]) -> &'v str {
        vars[self.rng.random_range(0..vars.len())]
    }

    fn atom(&mut self, u: &str, v: &str) -> Formula {
        let mut kinds = vec![0, 1, 2];
        match self.fam {
            TheoryFamily::ColoredDense(_) => kinds.push(3),
            TheoryFamily::DenseClasses(_) => kinds.extend([4, 4]),
            _ => kinds.extend([4, 5, 5]),
        }
        match kinds[self.rng.random_range(0..kinds.len())] {
            0 => Formula::lt(u, v),
            1 => Formula::eq(u, v),
            2 => Formula::lt(v, u),
            3 => {
                let k = self.rng.random_range(0..self.fam.colors());
                Formula::pred(&TheoryFamily::color_name(k), u)
            }
            4 => Formula::equiv(CLASS_EQUIV, u, v),
            _ => {
                let cmp = CMPS[self.rng.random_range(0..4)];
                let shift = if self.fam.has_distances() { self.rng.random_range(-1..=1) } else { 0 };
                Formula::ext(u, cmp, CLASS_EQUIV, shift, v)
            }
        }
    }

    fn literal(&mut self, vars: &[&str], must: Option<&str>) -> Formula {
        let u = must.unwrap_or_else(|| self.pick(vars));
        let v = self.pick(vars);
        let a = if self.rng.random_bool(0.5) { self.atom(u, v) } else { self.atom(v, u) };
        if self.rng.random_bool(0.3) {
            a.not()
        } else {
            a
        }
    }

    fn combine(&mut self, a: Formula, b: Formula) -> Formula {
        match self.rng.random_range(0..4) {
            0 | 1 => a.and(b),
            2 => a.or(b),
            _ => a.implies(b),
        }
    }

    fn formula(&mut self, depth: usize, vars: &[&str], fresh: &[&str]) -> Formula {
        if depth == 0 || fresh.is_empty() || self.rng.random_bool(0.25) {
            let n = self.rng.random_range(1..=3);
            let mut f = self.literal(vars, None);
            for _ in 1..n {
                let g = self.literal(vars, None);
                f = self.combine(f, g);
            }
            return f;
        }
        let v = fresh[0];
        let mut scope = vars.to_vec();
        scope.push(v);
        let lit = self.literal(&scope, Some(v));
        let inner = self.formula(depth - 1, &scope, &fresh[1..]);
        let body = self.combine(lit, inner);
        let q = if self.rng.random_bool(0.5) {
            Formula::exists(v, body)
        } else {
            Formula::forall(v, body)
        };
        if self.rng.random_bool(0.3) {
            let l = self.literal(vars, None);
            self.combine(l, q)
        } else {
            q
        }
    }
}

fn build(fam: TheoryFamily, count: usize, seed: u64, free: &[&str]) -> Vec<Formula> {
    let sig = fam.signature();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for text in curated(fam, free.len() < 3) {
        let f = parse_formula(text, &sig).expect("curated formula parses");
        if seen.insert(f.clone()) {
            out.push(f);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count {
        let f = Gen { fam, rng: &mut rng }.formula(2, free, &["u", "w"]);
        if seen.insert(f.clone()) {
            out.push(f);
        }
    }
    out
}

/// At least `count` formulas with free variables among `x, y, z` and
/// quantifier depth at most 2.
pub fn battery(fam: TheoryFamily, count: usize, seed: u64) -> Vec<Formula> {
    build(fam, count, seed, &["x", "y", "z"])
}

/// At least `count` formulas with free variables among `x, y` and quantifier
/// depth at most 2.
pub fn binary_battery(fam: TheoryFamily, count: usize, seed: u64) -> Vec<Formula> {
    build(fam, count, seed, &["x", "y"])
}
