//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error, 3 budget refusal.
//! Tables are CSV with a header row; structured results are JSON with big
//! integers and rationals as decimal strings.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::budget::Budget;
use crate::clt::{error_scan, exact_prob, leading_term, rational_to_f64, CltQuery};
use crate::count::{count_arrangement_restricted, count_product_hits, FullCounter};
use crate::encode::{build_tripartite, simplices_by_arrangement, triangles_by_triple, LabeledHypergraph, PointSet};
use crate::error::{Error, Result};
use crate::feasible::{complete_arrangement, enumerate_feasible, feasible_count, is_feasible};
use crate::json::{parse_rational, read_sets, render_rational, sets_to_json, LabelSetsJson, PointSetJson, SymmetricSetJson};
use crate::modp::{removal_procedure, trivial_split, LinearStructure};
use crate::oracle::{oracle_count, oracle_histogram, ProgressionKind};
use crate::sample::generate_random_set;
use crate::verify::{run_all, Tier};
use crate::weights::{SpaceParams, WeightArrangement, WeightTuple};

#[derive(Debug, Parser)]
#[command(name = "symprog", version, about = "Exact progression counting in symmetric subsets of Z_q^n")]
pub struct Cli {
    /// Enumeration budget; overrides SYMPROG_BUDGET.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Progression counts from pattern counting.
    #[command(subcommand)]
    Count(CountCmd),
    /// Brute-force progression count.
    Oracle(OracleArgs),
    /// Feasible weight arrangements.
    #[command(subcommand)]
    Feasible(FeasibleCmd),
    /// The linear system over F_p and the mod-p constructions.
    #[command(subcommand)]
    Modp(ModpCmd),
    /// Graph and hypergraph encodings.
    #[command(subcommand)]
    Encode(EncodeCmd),
    /// Local limit theorem comparisons.
    #[command(subcommand)]
    Clt(CltCmd),
    /// Acceptance suite.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Seeded random symmetric set, as JSON.
    RandomSet(RandomSetArgs),
}

#[derive(Debug, Args)]
pub struct ArrangementArgs {
    /// Number of symbols; checked against the arrangement when given.
    #[arg(long)]
    pub q: Option<usize>,
    /// Dimension; checked against the arrangement when given.
    #[arg(long)]
    pub n: Option<usize>,
    /// Unshifted weight tuples as a JSON array of arrays, e.g. '[[2,2,2],[2,2,2],[2,2,2]]'.
    #[arg(long)]
    pub arrangement: String,
}

#[derive(Debug, Subcommand)]
pub enum CountCmd {
    /// Restricted progressions with the given weight arrangement.
    Restricted(ArrangementArgs),
    /// Full progressions over F_p with the given weight arrangement.
    Full(ArrangementArgs),
    /// Progressions landing in a product of symmetric sets.
    Product {
        #[arg(long, value_enum, default_value = "restricted")]
        kind: ProgressionKind,
        /// JSON file with q symmetric sets.
        #[arg(long)]
        sets: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, value_enum, default_value = "restricted")]
    pub kind: ProgressionKind,
    /// JSON file with q symmetric sets; without it, every progression of Z_q^n is histogrammed.
    #[arg(long, conflicts_with_all = ["q", "n"])]
    pub sets: Option<PathBuf>,
    #[arg(long, requires = "n")]
    pub q: Option<usize>,
    #[arg(long, requires = "q")]
    pub n: Option<usize>,
    /// Emit the per-arrangement histogram as CSV instead of the total.
    #[arg(long)]
    pub histogram: bool,
}

#[derive(Debug, Subcommand)]
pub enum FeasibleCmd {
    /// Whether an arrangement is feasible.
    Check(ArrangementArgs),
    /// Completes two tuples to the unique feasible arrangement.
    Derive {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        w1: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        w2: Vec<usize>,
    },
    /// Feasible arrangements over Z_N.
    Enumerate {
        #[arg(long)]
        q: usize,
        #[arg(long = "N")]
        modulus: u64,
        #[arg(long)]
        count_only: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum ModpCmd {
    /// The matrices A, K, B' and B as JSON.
    Matrices {
        #[arg(long)]
        p: usize,
    },
    /// Whether A m = w has an integer solution.
    Solvable {
        #[arg(long)]
        p: usize,
        /// Weight vector of length p(p-1), rows (j, b) at j*(p-1) + b.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        w: Vec<i64>,
    },
    /// Drops congruence classes of density at most mu / (2 p^(p-1)).
    Removal {
        #[arg(long)]
        sets: PathBuf,
        /// Rational in (0, 1], e.g. 1/10 or 0.1.
        #[arg(long)]
        mu: String,
    },
    /// Coordinate-sum split into progression-free sets.
    Split {
        #[arg(long)]
        sets: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum EncodeCmd {
    /// Triangles of the tripartite graph, per associated point triple.
    Triangles {
        #[arg(long = "N")]
        radius: Option<i64>,
        /// JSON point set {"N": .., "points": [[x, y], ...]}.
        #[arg(long)]
        set: PathBuf,
    },
    /// Simplices of the labeled hypergraph, per label arrangement.
    Simplices {
        #[arg(long)]
        q: Option<usize>,
        #[arg(long = "N")]
        modulus: Option<u64>,
        /// JSON label sets {"q": .., "N": .., "sets": [...]}.
        #[arg(long)]
        sets: PathBuf,
        /// Scan every vertex tuple instead of extending free vertices.
        #[arg(long)]
        scan: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum CltCmd {
    /// Exact probability against the main term at one point.
    Compare {
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        w: Vec<i64>,
    },
    /// Worst relative error over a central window, per n.
    Scan {
        #[arg(long)]
        ell: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 0.0)]
        radius: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Runs every acceptance check.
    All {
        #[arg(long, value_enum, default_value = "quick")]
        tier: Tier,
    },
}

#[derive(Debug, Args)]
pub struct RandomSetArgs {
    #[arg(long)]
    pub q: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub density: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Result of a command: text output and exit code.
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Budget { .. } => 3,
        Error::Contract(_) => 1,
        Error::Input(_) | Error::Range(_) | Error::Io(_) | Error::Json(_) => 2,
    }
}

/// Parses, runs and writes output; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = run(&cli).and_then(|out| {
        match &cli.out {
            Some(path) => std::fs::write(path, &out.text)?,
            None => print!("{}", out.text),
        }
        Ok(out.code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    let budget = match cli.budget {
        Some(limit) => Budget::new(limit)?,
        None => Budget::from_env()?,
    };
    match &cli.command {
        Command::Count(cmd) => count(cmd, &budget),
        Command::Oracle(args) => oracle(args, &budget),
        Command::Feasible(cmd) => feasible(cmd, &budget),
        Command::Modp(cmd) => modp(cmd),
        Command::Encode(cmd) => encode(cmd, &budget),
        Command::Clt(cmd) => clt(cmd),
        Command::Verify(VerifyCmd::All { tier }) => verify(*tier),
        Command::RandomSet(args) => random_set(args),
    }
}

fn parse_arrangement(args: &ArrangementArgs) -> Result<WeightArrangement> {
    let rows: Vec<Vec<usize>> = serde_json::from_str(&args.arrangement)?;
    let q = rows.len();
    let n = rows.first().map(|r| r.iter().sum()).unwrap_or(0);
    if args.q.is_some_and(|v| v != q) || args.n.is_some_and(|v| v != n) {
        return Err(Error::Input(format!("arrangement has q={q}, n={n}, which disagrees with the flags")));
    }
    WeightArrangement::from_rows(rows, &SpaceParams::new(q, n)?)
}

fn count(cmd: &CountCmd, budget: &Budget) -> Result<Output> {
    let value = match cmd {
        CountCmd::Restricted(args) => count_arrangement_restricted(&parse_arrangement(args)?),
        CountCmd::Full(args) => {
            let arr = parse_arrangement(args)?;
            FullCounter::new(arr.q())?.count_arrangement(&arr)?
        }
        CountCmd::Product { kind, sets } => count_product_hits(&read_sets(sets)?, *kind, budget)?,
    };
    Ok(Output::ok(format!("{value}\n")))
}

fn flat(arr: &WeightArrangement) -> String {
    arr.flatten().iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn oracle(args: &OracleArgs, budget: &Budget) -> Result<Output> {
    let result = match (&args.sets, args.q, args.n) {
        (Some(path), _, _) => oracle_count(&read_sets(path)?, args.kind, budget)?,
        (None, Some(q), Some(n)) => {
            let params = match args.kind {
                ProgressionKind::Restricted => SpaceParams::new(q, n)?,
                ProgressionKind::Full => SpaceParams::prime(q, n)?,
            };
            oracle_histogram(&params, args.kind, budget)?
        }
        _ => return Err(Error::Input("give --sets or both --q and --n".into())),
    };
    if !args.histogram {
        return Ok(Output::ok(format!("{}\n", result.count)));
    }
    let mut text = String::from("arrangement,count\n");
    for (arr, c) in &result.histogram {
        writeln!(text, "{},{c}", flat(arr)).expect("string write");
    }
    Ok(Output::ok(text))
}

fn feasible(cmd: &FeasibleCmd, budget: &Budget) -> Result<Output> {
    match cmd {
        FeasibleCmd::Check(args) => Ok(Output::ok(format!("{}\n", is_feasible(&parse_arrangement(args)?)))),
        FeasibleCmd::Derive { q, n, w1, w2 } => {
            let params = SpaceParams::new(*q, *n)?;
            let a = WeightTuple::new(w1.clone(), &params)?;
            let b = WeightTuple::new(w2.clone(), &params)?;
            let value = match complete_arrangement(&a, &b)? {
                Some(arr) => json!(arr.tuples()),
                None => serde_json::Value::Null,
            };
            Ok(Output::ok(format!("{value}\n")))
        }
        FeasibleCmd::Enumerate { q, modulus, count_only } => {
            if *count_only {
                if *q < 3 || *modulus == 0 {
                    return Err(Error::Input(format!("need q >= 3 and N >= 1 (q={q}, N={modulus})")));
                }
                return Ok(Output::ok(format!("{}\n", feasible_count(*q, *modulus))));
            }
            let mut text = String::from("arrangement\n");
            for arr in enumerate_feasible(*q, *modulus, budget)? {
                let row: Vec<String> = arr.values().iter().map(ToString::to_string).collect();
                writeln!(text, "{}", row.join(" ")).expect("string write");
            }
            Ok(Output::ok(text))
        }
    }
}

fn modp(cmd: &ModpCmd) -> Result<Output> {
    match cmd {
        ModpCmd::Matrices { p } => {
            let s = LinearStructure::new(*p)?;
            let rows = |m: &crate::matrix::ExactMatrix| m.to_i64_rows().expect("integer matrix");
            let value = json!({
                "p": p,
                "A": rows(s.a()),
                "K": rows(s.k()),
                "B_prime": rows(s.b_prime()),
                "B": rows(s.b()),
            });
            Ok(Output::ok(format!("{}\n", serde_json::to_string_pretty(&value)?)))
        }
        ModpCmd::Solvable { p, w } => {
            let s = LinearStructure::new(*p)?;
            let solution = s.particular_solution(w)?;
            let value = json!({ "solvable": solution.is_some(), "particular_solution": solution });
            Ok(Output::ok(format!("{value}\n")))
        }
        ModpCmd::Removal { sets, mu } => {
            let report = removal_procedure(&read_sets(sets)?, &parse_rational(mu)?)?;
            let value = json!({
                "threshold": render_rational(&report.threshold),
                "removed": report.removed,
                "removed_density": report.removed_density.iter().map(render_rational).collect::<Vec<_>>(),
                "sets": sets_to_json(&report.pruned),
            });
            Ok(Output::ok(format!("{}\n", serde_json::to_string_pretty(&value)?)))
        }
        ModpCmd::Split { sets } => {
            let out = trivial_split(&read_sets(sets)?)?;
            Ok(Output::ok(format!("{}\n", serde_json::to_string_pretty(&sets_to_json(&out))?)))
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn encode(cmd: &EncodeCmd, budget: &Budget) -> Result<Output> {
    match cmd {
        EncodeCmd::Triangles { radius, set } => {
            let raw: PointSetJson = read_json(set)?;
            if radius.is_some_and(|r| r != raw.radius) {
                return Err(Error::Input(format!("--N disagrees with N={} in the point set", raw.radius)));
            }
            let g = build_tripartite(PointSet::from_json(raw)?);
            let mut text = String::from("label,triangle_count\n");
            for (triple, c) in triangles_by_triple(&g.triangles(budget)?) {
                let label: Vec<String> = triple.iter().flat_map(|p| [p.0.to_string(), p.1.to_string()]).collect();
                writeln!(text, "{},{c}", label.join(" ")).expect("string write");
            }
            Ok(Output::ok(text))
        }
        EncodeCmd::Simplices { q, modulus, sets, scan } => {
            let raw: LabelSetsJson = read_json(sets)?;
            if q.is_some_and(|v| v != raw.q) || modulus.is_some_and(|v| v != raw.modulus) {
                return Err(Error::Input("--q/--N disagree with the label sets file".into()));
            }
            let h = LabeledHypergraph::from_json(raw)?;
            let simplices = if *scan { h.enumerate_simplices_scan(budget)? } else { h.enumerate_simplices(budget)? };
            let mut text = String::from("label,simplex_count\n");
            for (arr, family) in simplices_by_arrangement(&simplices) {
                let label: Vec<String> = arr.values().iter().map(ToString::to_string).collect();
                writeln!(text, "{},{}", label.join(" "), family.len()).expect("string write");
            }
            Ok(Output::ok(text))
        }
    }
}

fn join_w(w: &[i64]) -> String {
    w.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn clt(cmd: &CltCmd) -> Result<Output> {
    let mut text = String::from("n,w,exact,leading,rel_err\n");
    match cmd {
        CltCmd::Compare { ell, n, w } => {
            let qr = CltQuery::new(*ell, *n, w.clone())?;
            let exact = exact_prob(&qr);
            let approx = rational_to_f64(&exact);
            let leading = leading_term(&qr);
            let rel = if approx > 0.0 { ((approx - leading).abs() / approx).to_string() } else { "inf".into() };
            writeln!(text, "{n},{},{},{leading},{rel}", join_w(w), render_rational(&exact)).expect("string write");
        }
        CltCmd::Scan { ell, ns, radius } => {
            let report = error_scan(*ell, ns, *radius)?;
            for row in &report.rows {
                writeln!(text, "{},{},{},{},{}", row.n, join_w(&row.worst), row.exact, row.leading, row.max_rel_err)
                    .expect("string write");
            }
            eprintln!("sandwich constants: upper {} lower {}", report.sandwich.upper, report.sandwich.lower);
        }
    }
    Ok(Output::ok(text))
}

fn verify(tier: Tier) -> Result<Output> {
    let reports = run_all(tier);
    let mut text = String::new();
    for r in &reports {
        writeln!(text, "{r}").expect("string write");
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    writeln!(text, "{} passed, {failed} failed", reports.len() - failed).expect("string write");
    Ok(Output { text, code: i32::from(failed > 0) })
}

fn random_set(args: &RandomSetArgs) -> Result<Output> {
    let params = SpaceParams::new(args.q, args.n)?;
    let (set, density) = generate_random_set(params, args.density, args.seed)?;
    let mut value = serde_json::to_value(SymmetricSetJson::from(&set))?;
    value["density"] = json!(render_rational(&density));
    value["points"] = json!(set.cardinality().to_string());
    Ok(Output::ok(format!("{value}\n")))
}
