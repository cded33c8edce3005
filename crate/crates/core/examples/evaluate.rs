//! Parse a structure and evaluate formulas on it.

use ccel::formulas::{parse_formula, Signature};
use ccel::semantics::{count_types_over_cut, definable_set, expand_all};
use ccel::structures::parse_structure;

fn main() {
    let s = parse_structure(include_str!("data/s.ccel")).expect("valid structure");
    let sig = Signature::of(&s);

    let f = parse_formula("S[E0,1](y) <= x & x <= S[E0,1](y)", &sig).unwrap();
    for y in 0..s.size() {
        let set = definable_set(&s, &f, "x", &["y"], &[y]).unwrap();
        println!("next E0-class after {y}: {set:?}");
    }
    println!("expanded: {}", expand_all(&f));

    let g = parse_formula("x < S[E0,1](y)", &sig).unwrap();
    for cut in 0..=s.size() {
        let r = count_types_over_cut(&s, &g, &["x"], &["y"], cut).unwrap();
        println!("cut {cut}: {} types", r.count);
    }
}
