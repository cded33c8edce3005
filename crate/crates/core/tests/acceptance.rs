//! End-to-end acceptance run: one PASS/FAIL line per criterion.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ccel::cli::{dispatch, Outcome, Report, EXIT_OK, EXIT_REFUTED};
use ccel::conditions::{check_lb, check_rb, monotonicity_sentence};
use ccel::decompose::{
    almost_convex_split, convex_normal_form, function_decompose, initial_successor_form,
    monotone_decompose, one_param_decompose, DecomposeError, Relation,
};
use ccel::formulas::{parse_formula, Formula, Signature};
use ccel::semantics::evaluate;
use ccel::structures::{parse_structure, FiniteCcelStructure, Partition};
use ccel::theories::{
    battery, binary_battery, decide_sentence, eliminate_quantifiers, enumerate_types, required_bound,
    TheoryFamily, WitnessEvaluator, DEFAULT_DISTANCE_BUDGET,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FAMILIES: [TheoryFamily; 5] = [
    TheoryFamily::ColoredDense(2),
    TheoryFamily::LexDense,
    TheoryFamily::LexOverZeta,
    TheoryFamily::DenseClasses(2),
    TheoryFamily::DenseClasses(3),
];

fn cli(args: &[&str]) -> Outcome {
    dispatch(std::iter::once("ccel").chain(args.iter().copied()))
}

fn json_report(args: &[&str], code: i32) -> Report {
    let mut full = args.to_vec();
    full.push("--json");
    let out = cli(&full);
    assert_eq!(out.code, code, "{args:?}: {}", out.output);
    let report = Report::from_json(&out.output).expect("report parses");
    assert_eq!(report.to_json() + "\n", out.output, "JSON is canonical");
    report
}

fn within(start: Instant, limit: Duration, what: &str) {
    let t = start.elapsed();
    assert!(t < limit, "{what} took {t:?}, limit {limit:?}");
}

fn criterion_1() {
    let start = Instant::now();
    let r = json_report(&["check", "lb", "--theory", "t:2", "--arity", "3..4"], EXIT_OK);
    assert_eq!(r.status, "holds-exactly");
    within(start, Duration::from_secs(5), "t:2 LB");

    let start = Instant::now();
    let r = json_report(&["check", "--condition", "lb", "--theory", "t:3", "--arity", "3"], EXIT_REFUTED);
    assert_eq!(r.status, "refuted");
    assert!(r.witness.is_some());
    within(start, Duration::from_secs(5), "t:3 LB");

    let fam = TheoryFamily::DenseClasses(3);
    let w = check_lb(fam, 3, 0).unwrap().witness.expect("witness");
    for pair in [["x1", "x2"], ["x2", "x3"]] {
        assert_eq!(w.left.restrict(fam, &pair).unwrap(), w.right.restrict(fam, &pair).unwrap());
    }
    let outer = Formula::equiv("E0", "x1", "x3");
    assert_ne!(w.left.eval(fam, &outer).unwrap(), w.right.eval(fam, &outer).unwrap());
}

fn criterion_2() {
    let start = Instant::now();
    let r = json_report(&["types", "--theory", "lex-dense", "--arity", "1"], EXIT_OK);
    assert_eq!(r.result["count"], 1);
    let r = json_report(&["types", "--theory", "lex-dense", "--arity", "2", "--formula", "x < y"], EXIT_OK);
    assert_eq!(r.result["count"], 2);

    let r = json_report(&["check", "rb", "--theory", "lex-dense"], EXIT_REFUTED);
    assert!(r.witness.is_some());
    let fam = TheoryFamily::LexDense;
    let w = check_rb(fam, 2, 3, 0).unwrap().witness.expect("witness");
    let lt = Formula::lt("x1", "x2");
    let e = Formula::equiv("E0", "x1", "x2");
    assert!(w.left.eval(fam, &lt).unwrap() && w.right.eval(fam, &lt).unwrap());
    assert_ne!(w.left.eval(fam, &e).unwrap(), w.right.eval(fam, &e).unwrap());

    let r = json_report(&["check", "uconvex", "--theory", "lex-dense"], EXIT_OK);
    let verdicts = r.result.as_array().expect("verdict list");
    assert_eq!(verdicts.len(), binary_battery(fam, 60, 0).len());
    assert!(verdicts.iter().all(|v| v["status"] == "holds-exactly" && v.get("normal_form").is_some()));
    within(start, Duration::from_secs(10), "lex reproductions");
}

fn criterion_3() {
    let start = Instant::now();
    let r = json_report(&["check", "chain"], EXIT_OK);
    let expected = [
        ("colored-dense:2", [true, true, true, true]),
        ("lex-dense", [false, true, true, true]),
        ("lex-zeta", [false, true, true, true]),
        ("t:2", [false, false, true, true]),
        ("t:3", [false, false, false, true]),
    ];
    let families = r.result["families"].as_array().expect("families");
    assert_eq!(families.len(), expected.len());
    for (row, (name, marks)) in families.iter().zip(expected) {
        assert_eq!(row["family"], name);
        let got: Vec<bool> = row["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["status"] != "refuted")
            .collect();
        assert_eq!(got, marks, "{name}");
    }
    within(start, Duration::from_secs(30), "chain");
}

fn random_structure(rng: &mut ChaCha8Rng, max: usize) -> FiniteCcelStructure {
    let n = rng.random_range(1..=max);
    let convex = |rng: &mut ChaCha8Rng| {
        let mut blocks = vec![vec![0]];
        for e in 1..n {
            if rng.random_bool(0.5) {
                blocks.push(Vec::new());
            }
            blocks.last_mut().unwrap().push(e);
        }
        blocks
    };
    let pred: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
    let (e0, e1) = (convex(rng), convex(rng));
    FiniteCcelStructure::new(n, vec![("P0".into(), pred)], vec![("E0".into(), true, e0), ("E1".into(), true, e1)])
        .unwrap()
}

fn decompose_round_trips(s: &FiniteCcelStructure, rel: &Relation) {
    let n = s.size();
    for a in 0..n {
        assert_eq!(one_param_decompose(s, rel, a).unwrap().expression.eval(n), rel.column(a));
    }
    match monotone_decompose(s, rel) {
        Ok(cl) => {
            assert_eq!(cl.relation(n), *rel);
            for y in 0..n {
                assert_eq!(initial_successor_form(s, rel, y).unwrap().set(y), rel.column(y));
            }
        }
        Err(DecomposeError::NotInitialSegment { .. } | DecomposeError::NotMonotone { .. }) => {}
        Err(e) => panic!("{e}"),
    }
}

fn criterion_4() {
    let start = Instant::now();
    let formulas = [
        "E0(x,y)",
        "x < y & !E1(x,y)",
        "x <= S[E0,1](y)",
        "S[E1,-1](y) < x | P0(x)",
        "forall z. (E0(z,x) -> z < y)",
        "exists z. (E0(z,y) & x <= z)",
    ];
    let mut exhaustive = 0;
    for s in common::small_structures(6) {
        let n = s.size();
        let sig = Signature::of(&s);
        for text in formulas {
            let rel = Relation::from_formula(&s, &parse_formula(text, &sig).unwrap(), "x", "y").unwrap();
            decompose_round_trips(&s, &rel);
            exhaustive += 1;
        }
        let (e0, _) = s.equivalence("E0").unwrap();
        let f: Vec<usize> = (0..n).map(|x| e0.block_of(x)[0]).collect();
        let d = function_decompose(&s, &f).unwrap();
        assert!((0..n).all(|a| d.apply(a) == Some(f[a])));
        for lo in 0..n {
            for hi in lo..n {
                let c: Vec<usize> = (lo..=hi).collect();
                let form = convex_normal_form(&s, &c, &[lo], n).unwrap();
                let want: Vec<bool> = (0..n).map(|x| (lo..=hi).contains(&x)).collect();
                assert_eq!(form.set(&s).unwrap(), want);
                exhaustive += 1;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let cases = 10_000;
    for _ in 0..cases {
        let s = random_structure(&mut rng, 9);
        let n = s.size();
        match rng.random_range(0..5) {
            0 => {
                let mut t: Vec<usize> = (0..n).map(|_| rng.random_range(0..=n)).collect();
                t.sort_unstable();
                let rel = Relation::from_fn(n, |x, y| x < t[y]);
                let cl = monotone_decompose(&s, &rel).unwrap();
                assert_eq!(cl.relation(n), rel);
            }
            1 => {
                let f: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
                let d = function_decompose(&s, &f).unwrap();
                assert!((0..n).all(|a| d.apply(a) == Some(f[a])));
            }
            2 => {
                let lo = rng.random_range(0..n);
                let hi = rng.random_range(lo..n);
                let a = rng.random_range(0..n);
                let c: Vec<usize> = (lo..=hi).collect();
                let form = convex_normal_form(&s, &c, &[a], n).unwrap();
                let want: Vec<bool> = (0..n).map(|x| (lo..=hi).contains(&x)).collect();
                assert_eq!(form.set(&s).unwrap(), want);
            }
            3 => {
                let cells: Vec<bool> = (0..n * n).map(|_| rng.random_bool(0.5)).collect();
                let rel = Relation::from_fn(n, |x, y| cells[x * n + y]);
                let a = rng.random_range(0..n);
                assert_eq!(one_param_decompose(&s, &rel, a).unwrap().expression.eval(n), rel.column(a));
            }
            _ => {
                let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
                let r = Partition::from_labels(&labels);
                assert_eq!(almost_convex_split(&s, &r, None).unwrap().reconstruct(), r);
            }
        }
    }
    assert!(exhaustive > 0);
    within(start, Duration::from_secs(300), "decomposition round trips");
}

fn criterion_5() {
    let start = Instant::now();
    for fam in FAMILIES {
        let formulas = battery(fam, 60, 0);
        assert!(formulas.len() >= 50);
        for f in formulas {
            let q = eliminate_quantifiers(fam, &f, DEFAULT_DISTANCE_BUDGET).unwrap();
            assert!(q.is_quantifier_free());
            let bound = required_bound(fam, &f).max(q.max_shift() as u32);
            let free: Vec<String> = f.free_vars().into_iter().collect();
            let names: Vec<&str> = free.iter().map(String::as_str).collect();
            let oracle = WitnessEvaluator::new(fam, &f);
            for t in enumerate_types(fam, &names, bound) {
                assert_eq!(t.eval(fam, &q).unwrap(), oracle.holds_on_type(&f, &t).unwrap(), "{fam}: {f} on {t}");
            }
        }
    }
    within(start, Duration::from_secs(120), "QE cross-validation");
}

fn criterion_6() {
    let (checked, bad) = common::successor_discrepancies(&common::single_equivalence_structures(6), 3);
    assert!(checked > 0);
    assert_eq!(bad, 0, "{bad} of {checked} successor atoms disagree with their definition");
    let s = parse_structure("size 4\nequiv E0 convex = [[0,1],[2,3]]").unwrap();
    for cmp in common::CMPS {
        for shift in [2, -1] {
            let f = Formula::ext("x", cmp, "E0", shift, "y");
            for x in 0..4 {
                assert!(!evaluate(&s, &f, &common::assignment(&[("x", x), ("y", 0)])).unwrap());
            }
        }
    }
}

fn criterion_7() {
    for fam in FAMILIES {
        for f in binary_battery(fam, 60, 0) {
            let s = monotonicity_sentence(fam, &f);
            assert!(decide_sentence(fam, &s, DEFAULT_DISTANCE_BUDGET).unwrap(), "{fam}: {f}");
        }
    }
}

fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=max + 1 {
            cur[i] = v;
            rec(i + 1, max.max(v), cur, out);
        }
    }
    let mut out = Vec::new();
    rec(1, 0, &mut vec![0; n], &mut out);
    out
}

fn criterion_8() {
    for n in 1..=6usize {
        let s = FiniteCcelStructure::new(n, vec![], vec![]).unwrap();
        for labels in all_partitions(n) {
            let r = Partition::from_labels(&labels);
            let out = almost_convex_split(&s, &r, None).unwrap();
            assert_eq!(out.reconstruct(), r);
            let k = out.colors.len();
            if k < 2 {
                continue;
            }
            let fewer = k - 1;
            for code in 0..fewer.pow(n as u32) {
                let color: Vec<usize> = (0..n).map(|i| code / fewer.pow(i as u32) % fewer).collect();
                let reconstructs = (0..n).all(|x| {
                    (0..n).all(|y| r.related(x, y) == (out.closure.related(x, y) && color[x] == color[y]))
                });
                assert!(!reconstructs, "{r} needs fewer than {k} colors");
            }
        }
    }
    let blocks = vec![vec![0, 1], vec![2, 3]];
    let s = FiniteCcelStructure::new(4, vec![], vec![]).unwrap();
    let r = Partition::new(4, vec![vec![0], vec![1], vec![2, 3]]).unwrap();
    let e = Partition::new(4, blocks).unwrap();
    assert_eq!(almost_convex_split(&s, &r, Some(&e)).unwrap().colors.len(), 2);
}

fn main() -> ExitCode {
    let criteria: [(&str, fn()); 8] = [
        ("1 LB separates t:2 from t:3", criterion_1),
        ("2 lexicographic family: types, RB witness, u-convex normal forms", criterion_2),
        ("3 implication chain table", criterion_3),
        ("4 decomposition round trips", criterion_4),
        ("5 quantifier elimination against witness evaluation", criterion_5),
        ("6 successor atoms against their first-order definition", criterion_6),
        ("7 monotonicity of sup over battery formulas", criterion_7),
        ("8 almost-convex split minimality", criterion_8),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("criterion {name}: PASS ({secs:.2} s)"),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {name}: FAIL ({secs:.2} s) {msg}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
