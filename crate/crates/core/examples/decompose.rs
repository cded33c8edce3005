//! Normal forms for relations, functions and convex sets on a finite structure.

use ccel::decompose::{
    almost_convex_split, convex_normal_form, function_decompose, monotone_decompose, Relation,
};
use ccel::formulas::{parse_formula, Signature};
use ccel::structures::parse_structure;

fn main() {
    let s = parse_structure(include_str!("data/s.ccel")).expect("valid structure");

    let phi = parse_formula("x <= S[E0,0](y)", &Signature::of(&s)).unwrap();
    let rel = Relation::from_formula(&s, &phi, "x", "y").unwrap();
    let cases = monotone_decompose(&s, &rel).unwrap();
    println!("monotone cases: {}", serde_json::to_string(&cases).unwrap());

    let f = function_decompose(&s, &[1, 1, 2, 4, 4]).unwrap();
    println!("function pieces: {}", serde_json::to_string(&f).unwrap());

    let nf = convex_normal_form(&s, &[2, 3, 4], &[2], 2).unwrap();
    println!("convex set {{2,3,4}}: {nf}");

    let (r, _) = s.equivalence("R").unwrap();
    let split = almost_convex_split(&s, r, None).unwrap();
    println!("R splits into {} colors: {:?}", split.colors.len(), split.colors);
}
