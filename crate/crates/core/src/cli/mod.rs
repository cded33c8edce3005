//! The `ccel` command line: argument parsing and dispatch to the library.

mod report;

use std::collections::BTreeMap;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

pub use report::Report;

use crate::conditions::{
    check_lb, check_lf_family, check_lf_structure, check_rb, check_uconvex_expressibility,
    implication_chain_report, ChainBounds, ConditionError, ConditionVerdict, Status,
};
use crate::decompose::{
    almost_convex_split, convex_normal_form, function_decompose, initial_successor_form,
    monotone_decompose, one_param_decompose, DecomposeError, Relation,
};
use crate::formulas::{parse_formula, Formula, FormulaError, Signature};
use crate::semantics::{count_types_over_cut, definable_set, evaluate, SemanticsError};
use crate::structures::{parse_structure, FiniteCcelStructure, Partition, StructureError};
use crate::theories::{
    binary_battery, decide_sentence, eliminate_quantifiers, enumerate_types, Decider, TheoryError,
    TheoryFamily, DEFAULT_DISTANCE_BUDGET,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ccel", version, about = "Structure theory for colored orders with convex equivalences")]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a structure file and/or a formula.
    Validate(ValidateArgs),
    /// Evaluate a formula on a structure.
    Eval(EvalArgs),
    /// Enumerate atomic types of a theory family.
    Types(TypesArgs),
    /// Count phi-types over an initial segment of a structure.
    CountCut(CountCutArgs),
    /// Normal forms on finite structures.
    Decompose {
        #[arg(value_enum)]
        kind: DecomposeKind,
        #[command(flatten)]
        args: DecomposeArgs,
    },
    /// Quantifier elimination in a theory family.
    Qe(TheoryFormulaArgs),
    /// Decide a sentence in a theory family.
    Decide(TheoryFormulaArgs),
    /// Check a structural condition.
    Check(CheckArgs),
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(long)]
    structure: Option<String>,
    #[arg(long)]
    formula: Option<String>,
    #[arg(long)]
    theory: Option<TheoryFamily>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    structure: String,
    #[arg(long)]
    formula: String,
    /// Values of free variables, e.g. `x=1,y=2`; one unassigned variable
    /// yields its definable set.
    #[arg(long, default_value = "")]
    assign: String,
}

#[derive(Args, Debug)]
struct TypesArgs {
    #[arg(long)]
    theory: TheoryFamily,
    #[arg(long)]
    arity: usize,
    /// Keep only types satisfying this formula.
    #[arg(long)]
    formula: Option<String>,
    #[arg(long, default_value_t = 0)]
    distance: u32,
}

#[derive(Args, Debug)]
struct CountCutArgs {
    #[arg(long)]
    structure: String,
    #[arg(long)]
    formula: String,
    #[arg(long, default_value = "x")]
    xs: String,
    #[arg(long, default_value = "y")]
    ys: String,
    /// Size of the initial segment; every cut when omitted.
    #[arg(long)]
    cut: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DecomposeKind {
    Initial,
    Monotone,
    Function,
    Convex,
    OneParam,
    Split,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[arg(long)]
    structure: String,
    /// Binary formula phi(x, y).
    #[arg(long)]
    formula: Option<String>,
    /// Function as `a:f(a),...`.
    #[arg(long)]
    map: Option<String>,
    /// Parameter value (initial, one-param).
    #[arg(long)]
    param: Option<usize>,
    /// Convex set as `e1,e2,...`.
    #[arg(long)]
    set: Option<String>,
    /// Parameters of a convex normal form as `e1,e2,...`.
    #[arg(long)]
    params: Option<String>,
    #[arg(long, default_value_t = 3)]
    max_shift: usize,
    /// Relation to split: an equivalence name or blocks like `[[0],[1,2]]`.
    #[arg(long)]
    relation: Option<String>,
    /// Convex equivalence coarser than the relation.
    #[arg(long)]
    coarse: Option<String>,
}

#[derive(Args, Debug)]
struct TheoryFormulaArgs {
    #[arg(long)]
    theory: TheoryFamily,
    #[arg(long)]
    formula: String,
    #[arg(long, default_value_t = DEFAULT_DISTANCE_BUDGET)]
    budget: u32,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ConditionName {
    Rb,
    Lb,
    Lf,
    Uconvex,
    Chain,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(value_enum)]
    which: Option<ConditionName>,
    #[arg(long, value_enum)]
    condition: Option<ConditionName>,
    #[arg(long)]
    theory: Option<TheoryFamily>,
    #[arg(long)]
    structure: Option<String>,
    /// Arity or inclusive range `lo..hi`.
    #[arg(long)]
    arity: Option<String>,
    #[arg(long, default_value_t = 3)]
    seq_len: usize,
    #[arg(long, default_value_t = 2)]
    distance: u32,
    #[arg(long)]
    formula: Option<String>,
    #[arg(long)]
    max_shift: Option<u32>,
    /// Number of battery formulas when no formula is given.
    #[arg(long, default_value_t = 60)]
    count: usize,
    #[arg(long, default_value_t = 16)]
    limit: usize,
    #[arg(long, default_value = "x")]
    xs: String,
    #[arg(long, default_value = "y")]
    ys: String,
}

/// A failed command: exit code and message.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

macro_rules! usage_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                usage(e.to_string())
            }
        }
    )*};
}

usage_from!(FormulaError, StructureError, SemanticsError, TheoryError, std::io::Error);

impl From<ConditionError> for Failure {
    fn from(e: ConditionError) -> Self {
        let code = match e {
            ConditionError::Unverified(_) | ConditionError::ChainViolation(_) => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

/// Outcome of [`dispatch`]: exit code, the text for standard output and the
/// report it was rendered from (absent on usage errors).
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
    pub report: Option<Report>,
}

/// Runs the command line `argv` (including the program name).
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return Outcome { code, output: e.to_string(), report: None };
        }
    };
    let start = Instant::now();
    let (code, mut report) = match run(&cli) {
        Ok(r) => {
            let code = if r.status == Status::Refuted.to_string() { EXIT_REFUTED } else { EXIT_OK };
            (code, r)
        }
        Err(f) => {
            let status = if f.code == EXIT_REFUTED { "refuted" } else { "error" };
            (f.code, Report::new(command_name(&cli.command), status, Value::String(f.message)))
        }
    };
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    let output = if cli.json { report.to_json() + "\n" } else { report.to_human() };
    Outcome { code, output, report: Some(report) }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Validate(_) => "validate".into(),
        Command::Eval(_) => "eval".into(),
        Command::Types(_) => "types".into(),
        Command::CountCut(_) => "count-cut".into(),
        Command::Decompose { kind, .. } => {
            format!("decompose {}", kind.to_possible_value().expect("named").get_name())
        }
        Command::Qe(_) => "qe".into(),
        Command::Decide(_) => "decide".into(),
        Command::Check(a) => match a.which.or(a.condition) {
            Some(c) => format!("check {}", c.to_possible_value().expect("named").get_name()),
            None => "check".into(),
        },
    }
}

fn to_value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("results serialize")
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let name = command_name(&cli.command);
    match &cli.command {
        Command::Validate(a) => validate(&name, a),
        Command::Eval(a) => eval(&name, a),
        Command::Types(a) => types(&name, a),
        Command::CountCut(a) => count_cut(&name, a),
        Command::Decompose { kind, args } => decompose(&name, *kind, args),
        Command::Qe(a) => {
            let f = parse_formula(&a.formula, &a.theory.signature())?;
            let q = eliminate_quantifiers(a.theory, &f, a.budget)?;
            Ok(Report::new(name, "ok", json!({ "formula": f.to_string(), "quantifier_free": q.to_string() })))
        }
        Command::Decide(a) => {
            let f = parse_formula(&a.formula, &a.theory.signature())?;
            let b = decide_sentence(a.theory, &f, a.budget)?;
            Ok(Report::new(name, "ok", Value::Bool(b)))
        }
        Command::Check(a) => check(&name, a, cli.seed),
    }
}

fn load(path: &str) -> Result<FiniteCcelStructure, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?;
    Ok(parse_structure(&text)?)
}

fn list(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| usage(format!("`{t}` is not an element"))))
        .collect()
}

fn names(text: &str) -> Vec<&str> {
    text.split(',').map(str::trim).filter(|t| !t.is_empty()).collect()
}

fn validate(name: &str, a: &ValidateArgs) -> Result<Report, Failure> {
    let mut result = serde_json::Map::new();
    let mut sig = a.theory.map(|t| t.signature());
    if let Some(path) = &a.structure {
        let s = load(path)?;
        result.insert("structure".into(), Value::String(crate::structures::render_structure(&s)));
        result.insert("size".into(), json!(s.size()));
        sig = Some(Signature::of(&s));
    }
    if let Some(text) = &a.formula {
        let sig = sig.ok_or_else(|| usage("a formula needs --structure or --theory"))?;
        let f = parse_formula(text, &sig)?;
        if let Some(fam) = a.theory {
            fam.check_formula(&f)?;
        }
        result.insert("formula".into(), Value::String(f.to_string()));
        result.insert("free_vars".into(), to_value(&f.free_vars()));
        result.insert("quantifier_depth".into(), json!(f.quantifier_depth()));
    }
    if result.is_empty() {
        return Err(usage("nothing to validate: give --structure and/or --formula"));
    }
    Ok(Report::new(name, "ok", Value::Object(result)))
}

fn eval(name: &str, a: &EvalArgs) -> Result<Report, Failure> {
    let s = load(&a.structure)?;
    let f = parse_formula(&a.formula, &Signature::of(&s))?;
    let mut assignment = BTreeMap::new();
    for item in names(&a.assign) {
        let (v, e) = item.split_once('=').ok_or_else(|| usage(format!("bad assignment `{item}`")))?;
        let e: usize = e.trim().parse().map_err(|_| usage(format!("bad element in `{item}`")))?;
        assignment.insert(v.trim().to_string(), e);
    }
    let open: Vec<String> = f.free_vars().into_iter().filter(|v| !assignment.contains_key(v)).collect();
    match open.as_slice() {
        [] => Ok(Report::new(name, "ok", Value::Bool(evaluate(&s, &f, &assignment)?))),
        [x] => {
            let params: Vec<&str> = assignment.keys().map(String::as_str).collect();
            let values: Vec<usize> = assignment.values().copied().collect();
            let set = definable_set(&s, &f, x, &params, &values)?;
            Ok(Report::new(name, "ok", json!({ "variable": x, "set": set })))
        }
        _ => Err(usage(format!("unassigned free variables: {}", open.join(", ")))),
    }
}

fn type_vars(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

fn types(name: &str, a: &TypesArgs) -> Result<Report, Failure> {
    let fam = a.theory;
    let vars = type_vars(a.arity);
    let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    let mut decider = match &a.formula {
        Some(text) => Some(Decider::new(fam, &parse_formula(text, &fam.signature())?, DEFAULT_DISTANCE_BUDGET)?),
        None => None,
    };
    let bound = a.distance.max(decider.as_ref().map_or(0, Decider::bound));
    let mut kept = Vec::new();
    for t in enumerate_types(fam, &refs, bound) {
        if let Some(d) = decider.as_mut() {
            if !d.decide(&t)? {
                continue;
            }
        }
        kept.push(t.to_formula(fam).to_string());
    }
    let bounds = if fam.has_distances() { json!({ "distance": bound }) } else { json!({}) };
    Ok(Report::new(name, "ok", json!({ "count": kept.len(), "types": kept })).with_bounds(bounds))
}

fn count_cut(name: &str, a: &CountCutArgs) -> Result<Report, Failure> {
    let s = load(&a.structure)?;
    let f = parse_formula(&a.formula, &Signature::of(&s))?;
    let (xs, ys) = (names(&a.xs), names(&a.ys));
    match a.cut {
        Some(cut) => {
            let r = count_types_over_cut(&s, &f, &xs, &ys, cut)?;
            Ok(Report::new(name, "ok", to_value(&r)))
        }
        None => {
            let v = check_lf_structure(&s, &f, &xs, &ys)?;
            Ok(Report::new(name, "ok", json!({ "max_count": v.n_phi })))
        }
    }
}

fn decompose_failure(e: DecomposeError) -> Failure {
    let code = match e {
        DecomposeError::Verification(_) => EXIT_INTERNAL,
        DecomposeError::NotInitialSegment { .. }
        | DecomposeError::NotMonotone { .. }
        | DecomposeError::NotConvex
        | DecomposeError::NoRepresentation { .. } => EXIT_REFUTED,
        _ => EXIT_USAGE,
    };
    Failure { code, message: e.to_string() }
}

fn partition_arg(s: &FiniteCcelStructure, text: &str) -> Result<Partition, Failure> {
    if text.trim_start().starts_with('[') {
        let blocks: Vec<Vec<usize>> =
            serde_json::from_str(text).map_err(|e| usage(format!("bad partition `{text}`: {e}")))?;
        Ok(Partition::new(s.size(), blocks)?)
    } else {
        Ok(s.equivalence(text)?.0.clone())
    }
}

fn decompose(name: &str, kind: DecomposeKind, a: &DecomposeArgs) -> Result<Report, Failure> {
    let s = load(&a.structure)?;
    let relation = || -> Result<Relation, Failure> {
        let text = a.formula.as_deref().ok_or_else(|| usage("--formula is required"))?;
        let f = parse_formula(text, &Signature::of(&s))?;
        Relation::from_formula(&s, &f, "x", "y").map_err(decompose_failure)
    };
    let param = || a.param.ok_or_else(|| usage("--param is required"));
    let result = match kind {
        DecomposeKind::Initial => {
            let form = initial_successor_form(&s, &relation()?, param()?).map_err(decompose_failure)?;
            json!({ "form": form.to_string(), "detail": to_value(&form) })
        }
        DecomposeKind::Monotone => to_value(&monotone_decompose(&s, &relation()?).map_err(decompose_failure)?),
        DecomposeKind::Function => {
            let text = a.map.as_deref().ok_or_else(|| usage("--map is required"))?;
            let mut f = vec![None; s.size()];
            for item in names(text) {
                let (k, v) = item.split_once(':').ok_or_else(|| usage(format!("bad map entry `{item}`")))?;
                let k: usize = k.trim().parse().map_err(|_| usage(format!("bad map entry `{item}`")))?;
                let v: usize = v.trim().parse().map_err(|_| usage(format!("bad map entry `{item}`")))?;
                *f.get_mut(k).ok_or_else(|| usage(format!("{k} is outside the domain")))? = Some(v);
            }
            let f: Vec<usize> = f
                .into_iter()
                .enumerate()
                .map(|(k, v)| v.ok_or_else(|| usage(format!("no value for {k}"))))
                .collect::<Result<_, _>>()?;
            to_value(&function_decompose(&s, &f).map_err(decompose_failure)?)
        }
        DecomposeKind::Convex => {
            let c = list(a.set.as_deref().ok_or_else(|| usage("--set is required"))?)?;
            let params = list(a.params.as_deref().unwrap_or(""))?;
            let nf = convex_normal_form(&s, &c, &params, a.max_shift).map_err(decompose_failure)?;
            json!({ "form": nf.to_string(), "detail": to_value(&nf) })
        }
        DecomposeKind::OneParam => {
            to_value(&one_param_decompose(&s, &relation()?, param()?).map_err(decompose_failure)?)
        }
        DecomposeKind::Split => {
            let r = partition_arg(&s, a.relation.as_deref().ok_or_else(|| usage("--relation is required"))?)?;
            let e = a.coarse.as_deref().map(|t| partition_arg(&s, t)).transpose()?;
            let split = almost_convex_split(&s, &r, e.as_ref()).map_err(decompose_failure)?;
            json!({ "colors": split.colors.len(), "detail": to_value(&split) })
        }
    };
    Ok(Report::new(name, "ok", json!({ "decomposition": result, "verification": "ok" })))
}

fn arities(text: Option<&str>, default: usize) -> Result<Vec<usize>, Failure> {
    let Some(text) = text else { return Ok(vec![default]) };
    let bad = || usage(format!("bad arity `{text}`"));
    match text.split_once("..") {
        Some((lo, hi)) => {
            let lo: usize = lo.trim().parse().map_err(|_| bad())?;
            let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            Ok((lo..=hi).collect())
        }
        None => Ok(vec![text.trim().parse().map_err(|_| bad())?]),
    }
}

fn verdict_report(name: &str, verdicts: Vec<ConditionVerdict>) -> Report {
    let status = if let Some(v) = verdicts.iter().find(|v| v.status.refuted()) {
        v.status
    } else if verdicts.iter().all(|v| v.status == Status::HoldsExactly) {
        Status::HoldsExactly
    } else {
        Status::ConsistentUpToBounds
    };
    let witness = verdicts.iter().find_map(|v| v.witness.as_ref()).map(to_value);
    let bounds = verdicts.last().map(|v| to_value(&v.bounds)).unwrap_or_else(|| json!({}));
    let mut r = Report::new(name, status.to_string(), to_value(&verdicts)).with_bounds(bounds);
    r.witness = witness;
    r
}

fn check(name: &str, a: &CheckArgs, seed: u64) -> Result<Report, Failure> {
    let which = match (a.which, a.condition) {
        (Some(x), Some(y)) if x != y => return Err(usage("conflicting conditions")),
        (Some(x), _) | (None, Some(x)) => x,
        (None, None) => return Err(usage("name a condition: rb, lb, lf, uconvex or chain")),
    };
    if which == ConditionName::Chain {
        let families = match a.theory {
            Some(f) => vec![f],
            None => vec![
                TheoryFamily::ColoredDense(2),
                TheoryFamily::LexDense,
                TheoryFamily::LexOverZeta,
                TheoryFamily::DenseClasses(2),
                TheoryFamily::DenseClasses(3),
            ],
        };
        let bounds = ChainBounds { distance: a.distance, seed, ..ChainBounds::default() };
        let mut rows = Vec::new();
        let mut table = Vec::new();
        for fam in families {
            let r = implication_chain_report(fam, &bounds)?;
            table.push(r.to_string());
            rows.push(r);
        }
        return Ok(Report::new(name, "ok", json!({ "table": table, "families": to_value(&rows) }))
            .with_bounds(to_value(&bounds)));
    }
    if which == ConditionName::Lf {
        if let Some(path) = &a.structure {
            let s = load(path)?;
            let text = a.formula.as_deref().ok_or_else(|| usage("--formula is required"))?;
            let f = parse_formula(text, &Signature::of(&s))?;
            let v = check_lf_structure(&s, &f, &names(&a.xs), &names(&a.ys))?;
            return Ok(verdict_report(name, vec![v]));
        }
    }
    let fam = a.theory.ok_or_else(|| usage("--theory is required"))?;
    let formulas = || -> Result<Vec<Formula>, Failure> {
        Ok(match &a.formula {
            Some(text) => vec![parse_formula(text, &fam.signature())?],
            None => binary_battery(fam, a.count, seed),
        })
    };
    let verdicts = match which {
        ConditionName::Rb => arities(a.arity.as_deref(), 2)?
            .into_iter()
            .map(|n| check_rb(fam, n, a.seq_len, a.distance))
            .collect::<Result<Vec<_>, _>>()?,
        ConditionName::Lb => arities(a.arity.as_deref(), 3)?
            .into_iter()
            .map(|n| check_lb(fam, n, a.distance))
            .collect::<Result<Vec<_>, _>>()?,
        ConditionName::Lf => {
            let (xs, ys) = (names(&a.xs), names(&a.ys));
            let [x] = xs.as_slice() else { return Err(usage("LF over a theory takes one object variable")) };
            formulas()?
                .iter()
                .map(|f| check_lf_family(fam, f, x, &ys, a.limit, DEFAULT_DISTANCE_BUDGET))
                .collect::<Result<Vec<_>, _>>()?
        }
        ConditionName::Uconvex => {
            let mut out = Vec::new();
            for f in formulas()? {
                let v = check_uconvex_expressibility(fam, &f, a.max_shift, DEFAULT_DISTANCE_BUDGET)?;
                let stop = v.status.refuted();
                out.push(v);
                if stop {
                    break;
                }
            }
            out
        }
        ConditionName::Chain => unreachable!(),
    };
    Ok(verdict_report(name, verdicts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &str) -> Outcome {
        dispatch(std::iter::once("ccel").chain(args.split_whitespace()))
    }

    #[test]
    fn exit_codes() {
        let o = run("check --condition lb --theory t:3 --arity 3 --json");
        assert_eq!(o.code, EXIT_REFUTED, "{}", o.output);
        let r = Report::from_json(&o.output).unwrap();
        assert!(r.witness.is_some());
        assert_eq!(r.to_json() + "\n", o.output);
        assert_eq!(run("check lb --theory t:2 --arity 3..4").code, EXIT_OK);
        assert_eq!(run("frobnicate").code, EXIT_USAGE);
        assert_eq!(run("check lb --theory q:1").code, EXIT_USAGE);
        assert_eq!(run("--help").code, EXIT_OK);
    }

    #[test]
    fn decide_and_types() {
        let o = dispatch([
            "ccel",
            "decide",
            "--theory",
            "lex-dense",
            "--formula",
            "forall x. exists y. (x < y & E0(x,y))",
            "--json",
        ]);
        assert_eq!(o.code, EXIT_OK);
        assert_eq!(o.report.unwrap().result, Value::Bool(true));
        let o = dispatch(["ccel", "types", "--theory", "lex-dense", "--arity", "2", "--formula", "x < y"]);
        assert_eq!(o.report.unwrap().result["count"], json!(2));
    }
}
