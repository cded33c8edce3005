//! Quantifier elimination and sentence decisions in the theory families.

use ccel::formulas::parse_formula;
use ccel::theories::{decide_sentence, eliminate_quantifiers, TheoryFamily, DEFAULT_DISTANCE_BUDGET};

fn main() {
    let cases = [
        ("t:2", "exists z. (x < z & z < y & !E0(z,x) & !E0(z,y))"),
        ("lex-dense", "exists z. (E0(z,x) & x < z & z < y)"),
        ("lex-zeta", "exists w. (S[E0,1](x) <= w & w <= S[E0,1](x) & S[E0,1](w) <= y & y <= S[E0,1](w))"),
        ("colored-dense:2", "exists z. (x < z & z < y & P1(z))"),
    ];
    for (name, text) in cases {
        let fam: TheoryFamily = name.parse().unwrap();
        let f = parse_formula(text, &fam.signature()).unwrap();
        let q = eliminate_quantifiers(fam, &f, DEFAULT_DISTANCE_BUDGET).unwrap();
        println!("{fam}: {f}\n    == {q}");
    }

    let fam = TheoryFamily::DenseClasses(3);
    let s = parse_formula("exists x. exists y. exists z. (!E0(x,y) & !E0(y,z) & !E0(x,z))", &fam.signature()).unwrap();
    println!("{fam} |= {s}: {}", decide_sentence(fam, &s, DEFAULT_DISTANCE_BUDGET).unwrap());
}
