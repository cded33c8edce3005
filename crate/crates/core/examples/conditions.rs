//! Binarity and finiteness conditions across the theory families.

use ccel::conditions::{check_lb, implication_chain_report, ChainBounds};
use ccel::theories::TheoryFamily;

fn main() {
    let families = [
        TheoryFamily::ColoredDense(2),
        TheoryFamily::LexDense,
        TheoryFamily::LexOverZeta,
        TheoryFamily::DenseClasses(2),
        TheoryFamily::DenseClasses(3),
    ];
    for fam in families {
        let report = implication_chain_report(fam, &ChainBounds::default()).unwrap();
        println!("{report}");
    }

    let v = check_lb(TheoryFamily::DenseClasses(3), 3, 0).unwrap();
    if let Some(w) = v.witness {
        println!("t:3 is not linearly binary: {w}");
    }
}
