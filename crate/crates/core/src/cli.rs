//! Command-line front end: `eval`, `transform`, `analyze`, `bench`, `gen`.
//!
//! Exit codes: 0 true or non-empty, 1 false or empty, 2 usage, 3 data error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

use crate::colorcode::{eval_colorcoding, HashFamily};
use crate::error::{Error, Result};
use crate::graphs::{analyze, ineq_graph};
use crate::plan::{
    blowup_report, check_intermediate_bounds, default_plan, eval_cq, eval_plan_with_stats, parse_plan, print_plan,
    to_dot, transform, EvalStats, NodePath, Plan,
};
use crate::query::{parse_query, preprocess_local_inequalities, InequalitySet, CQ};
use crate::relcore::{load_csv, Database, Relation, Schema};
use crate::strategies::{
    choose_strategy, eval_even_cycle, eval_even_cycle_ineq, even_cycle_query, match_even_cycle, run_strategy,
    FamilyChoice, Strategy, StrategyOptions,
};
use crate::testgen::{self, RandomCqParams};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "cqineq", version, about = "Conjunctive queries with inequalities")]
pub struct Cli {
    /// Worker cap. Evaluation is sequential, so any value ≥ 1 is accepted.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a query over a directory of CSV files.
    Eval(EvalArgs),
    /// Rewrite a plan with H-projections.
    Transform(TransformArgs),
    /// Structural report as JSON.
    Analyze(AnalyzeArgs),
    /// Timing suites, CSV on stdout.
    Bench(BenchArgs),
    /// Write a generated instance to a directory.
    Gen(GenArgs),
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Query file (`q(x) :- R(x,y), S(y,z), x != z.`).
    pub query: PathBuf,
    /// Directory holding one headerless `{relation}.csv` per relation.
    pub data: PathBuf,
    #[arg(long, default_value = "auto")]
    pub strategy: Strategy,
    /// SPJ plan for the `plan` strategy.
    #[arg(long)]
    pub plan: Option<PathBuf>,
    /// Stats JSON destination; `-` for stderr.
    #[arg(long)]
    pub stats: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub family: FamilyArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random-family size (default from k and a 10⁻³ failure rate).
    #[arg(long)]
    pub reps: Option<usize>,
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    pub query: PathBuf,
    /// Input plan; the default left-deep plan otherwise.
    #[arg(long)]
    pub plan: Option<PathBuf>,
    /// Also write the transformed plan as DOT (`-` for stdout).
    #[arg(long)]
    pub dot: Option<PathBuf>,
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    pub query: PathBuf,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "path")]
    pub suite: Suite,
    /// Comma-separated sizes (tuples per relation, or edges for `cycle`).
    #[arg(long, value_delimiter = ',', default_values_t = [1000, 10000, 100000])]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Path length or cycle half-length.
    #[arg(long)]
    pub k: Option<usize>,
    /// Runs per point; the fastest is reported.
    #[arg(long, default_value_t = 3)]
    pub repeat: usize,
    /// Print `-` for times so output is byte-identical across runs.
    #[arg(long)]
    pub no_time: bool,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    /// Tuples per relation (`path`), edges (`cycle`), or max tuples (`q0`).
    #[arg(long, default_value_t = 20)]
    pub size: usize,
    #[arg(long, default_value_t = 5)]
    pub dom: i64,
    /// Grid side for `grid`, vertices for `coloring`.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Edge probability for `coloring`.
    #[arg(long, default_value_t = 0.5)]
    pub prob: f64,
    #[arg(long, value_enum, default_value = "i1")]
    pub pattern: Pattern,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// `(P^k, I1)` through the transformed plan.
    Path,
    /// Color coding against the oracle on small random queries.
    Colorcode,
    /// Even-cycle detection against the oracle on random digraphs.
    Cycle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Q0,
    Path,
    Random,
    Coloring,
    Grid,
    Cycle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Pattern {
    None,
    I1,
    I2,
    I3,
}

/// Entry point of the binary.
pub fn main() -> i32 {
    let out = std::io::stdout();
    let err = std::io::stderr();
    run(std::env::args_os(), &mut out.lock(), &mut err.lock())
}

/// Parses `args` and runs the command, writing to the given streams.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_TRUE };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    if cli.threads == 0 {
        let _ = writeln!(err, "error: --threads must be at least 1");
        return EXIT_USAGE;
    }
    let res = match &cli.command {
        Command::Eval(a) => cmd_eval(a, out, err),
        Command::Transform(a) => cmd_transform(a, out, err),
        Command::Analyze(a) => cmd_analyze(a, out),
        Command::Bench(a) => cmd_bench(a, out, err),
        Command::Gen(a) => cmd_gen(a, out),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Inapplicable(_) => EXIT_USAGE,
        _ => EXIT_DATA,
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |e| Error::io(path, e)
}

pub fn read_query(path: &Path) -> Result<(CQ, InequalitySet)> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let (q, i) = parse_query(&text)?;
    q.validate()?;
    Ok((q, i))
}

pub fn read_plan(path: &Path) -> Result<Plan> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    parse_plan(&text)
}

/// Loads `{dir}/{relation}.csv` for every relation of `q`.
pub fn load_database(q: &CQ, dir: &Path) -> Result<Database> {
    let mut db = Database::new();
    for (name, arity) in q.relation_arities() {
        let schema = Schema::new((0..arity).map(|i| format!("c{i}")))?;
        db.insert(name.clone(), load_csv(dir.join(format!("{name}.csv")), schema)?);
    }
    Ok(db)
}

fn write_json(dest: &Path, value: &Json, err: &mut dyn Write) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    if dest == Path::new("-") {
        err.write_all(text.as_bytes()).map_err(io_err(dest))
    } else {
        std::fs::write(dest, text).map_err(io_err(dest))
    }
}

fn path_key(p: &NodePath) -> String {
    if p.is_empty() {
        "root".into()
    } else {
        p.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

fn sizes_json(stats: &EvalStats) -> Json {
    json!(stats.sizes.iter().map(|(p, s)| json!({"node": path_key(p), "size": s})).collect::<Vec<_>>())
}

fn phis_json(plan: &Plan) -> Json {
    json!(blowup_report(plan)
        .phis
        .iter()
        .map(|(p, attrs, phi)| json!({"node": path_key(p), "attrs": attrs, "phi": *phi as u64}))
        .collect::<Vec<_>>())
}

/// Evaluates with `strategy`, returning the answer, the strategy that ran,
/// and strategy-specific stats.
pub fn evaluate(
    strategy: Strategy,
    q: &CQ,
    ineqs: &InequalitySet,
    db: &Database,
    opts: &StrategyOptions,
) -> Result<(Relation, Strategy, Json)> {
    let mut extra = json!({});
    let st = match strategy {
        Strategy::Auto => {
            let c = choose_strategy(q, ineqs, opts);
            extra["rationale"] = json!(c.rationale);
            c.strategy
        }
        s => s,
    };
    let head = Schema::new(q.head.iter().cloned())?;
    let r = match st {
        Strategy::Plan => {
            let p = match &opts.plan {
                Some(p) => p.clone(),
                None => default_plan(q)?,
            };
            let t = transform(&p, q, ineqs)?;
            let (r, stats) = eval_plan_with_stats(&t.plan, db)?;
            extra["tuples_scanned"] = json!(stats.tuples_scanned);
            extra["max_intermediate"] = json!(stats.max_intermediate());
            extra["intermediates"] = sizes_json(&stats);
            extra["phi"] = phis_json(&t.plan);
            r.renamed(head)?
        }
        Strategy::ColorCode => {
            let pre = preprocess_local_inequalities(q, ineqs, db)?;
            let k = ineq_graph(&pre.ineqs).vertex_count();
            let family = match opts.family {
                FamilyChoice::Exhaustive => None,
                FamilyChoice::Random => {
                    let reps = opts.reps.unwrap_or_else(|| HashFamily::reps_for(k, 1e-3));
                    Some(HashFamily::random(&db.active_domain(), k.max(1), reps, opts.seed))
                }
            };
            let (r, stats) = eval_colorcoding(q, ineqs, db, family.as_ref(), &eval_cq)?;
            extra["colorcode"] = serde_json::to_value(&stats).expect("serializable");
            r
        }
        Strategy::Cycle if !ineqs.has_constants() && match_even_cycle(q).is_some() => {
            let (rel, k, rename) = match_even_cycle(q).expect("checked");
            let mut mapped = InequalitySet::new();
            for (a, b) in ineqs.pairs() {
                mapped.add(&rename[a], &rename[b]);
            }
            let r = db.relation(&rel)?;
            let (found, stats) = if mapped.is_empty() { eval_even_cycle(r, k)? } else { eval_even_cycle_ineq(r, k, &mapped)? };
            extra["cycle"] = serde_json::to_value(&stats).expect("serializable");
            Relation::boolean(found)
        }
        s => run_strategy(s, q, ineqs, db, opts)?.0,
    };
    Ok((r, st, extra))
}

fn write_rows(r: &Relation, out: &mut dyn Write) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for t in r.iter() {
        w.write_record(t.iter().map(|v| v.to_string()))
            .map_err(|e| Error::io("<stdout>", std::io::Error::other(e)))?;
    }
    w.flush().map_err(io_err(Path::new("<stdout>")))
}

pub fn cmd_eval(a: &EvalArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let (q, ineqs) = read_query(&a.query)?;
    let db = load_database(&q, &a.data)?;
    let opts = StrategyOptions {
        family: match a.family {
            FamilyArg::Exhaustive => FamilyChoice::Exhaustive,
            FamilyArg::Random => FamilyChoice::Random,
        },
        seed: a.seed,
        reps: a.reps,
        plan: a.plan.as_deref().map(read_plan).transpose()?,
        ..StrategyOptions::default()
    };
    let start = Instant::now();
    let (r, st, mut extra) = evaluate(a.strategy, &q, &ineqs, &db, &opts)?;
    let wall = start.elapsed();
    if q.is_boolean() {
        writeln!(out, "{}", !r.is_empty()).map_err(io_err(Path::new("<stdout>")))?;
    } else {
        write_rows(&r, out)?;
    }
    if let Some(dest) = &a.stats {
        extra["strategy"] = json!(st.name());
        extra["rows"] = json!(r.len());
        extra["database_size"] = json!(db.size());
        extra["wall_ms"] = json!(wall.as_secs_f64() * 1e3);
        write_json(dest, &extra, err)?;
    }
    Ok(if r.is_empty() { EXIT_FALSE } else { EXIT_TRUE })
}

pub fn cmd_transform(a: &TransformArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let (q, ineqs) = read_query(&a.query)?;
    let p = match &a.plan {
        Some(path) => read_plan(path)?,
        None => default_plan(&q)?,
    };
    let t = transform(&p, &q, &ineqs)?;
    out.write_all(print_plan(&t.plan).as_bytes()).map_err(io_err(Path::new("<stdout>")))?;
    if let Some(dest) = &a.dot {
        let dot = to_dot(&t.plan);
        if dest == Path::new("-") {
            out.write_all(dot.as_bytes()).map_err(io_err(dest))?;
        } else {
            std::fs::write(dest, dot).map_err(io_err(dest))?;
        }
    }
    if let Some(dest) = &a.stats {
        let steps: Vec<String> = t.steps.iter().map(|s| format!("{s:?}")).collect();
        let report = json!({
            "operators": t.plan.operator_sequence(),
            "phi": phis_json(&t.plan),
            "max_phi": blowup_report(&t.plan).max_phi as u64,
            "push_steps": steps,
        });
        write_json(dest, &report, err)?;
    }
    Ok(EXIT_TRUE)
}

pub fn cmd_analyze(a: &AnalyzeArgs, out: &mut dyn Write) -> Result<i32> {
    let (q, ineqs) = read_query(&a.query)?;
    let report = analyze(&q, &ineqs)?;
    let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
    out.write_all(text.as_bytes()).map_err(io_err(Path::new("<stdout>")))?;
    Ok(EXIT_TRUE)
}

/// Least-squares line `y = slope·x + intercept` with its R².
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> LinearFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    LinearFit { slope, intercept: my - slope * mx, r2 }
}

/// One measured point of the `(P^k, I1)` suite.
#[derive(Clone, Debug)]
pub struct PathPoint {
    pub size: usize,
    pub seconds: f64,
    pub max_intermediate: usize,
    /// Intermediates above `e · max φ` times the plain plan's matching node.
    pub bound_violations: usize,
    pub result: bool,
}

/// Times the transformed plan of `(P^k, I1)` on a random instance with
/// `size` tuples per relation over a domain of `size` values.
pub fn bench_path_point(k: usize, size: usize, seed: u64, repeat: usize) -> Result<PathPoint> {
    let q = testgen::path_query(k);
    let ineqs = testgen::i1(k);
    let db = testgen::gen_path_instance_sized(k, size, size as i64, seed);
    let p = default_plan(&q)?;
    let t = transform(&p, &q, &ineqs)?;
    let (_, plain) = eval_plan_with_stats(&p, &db)?;
    let mut best = f64::INFINITY;
    let mut last = None;
    for _ in 0..repeat.max(1) {
        let start = Instant::now();
        let r = eval_plan_with_stats(&t.plan, &db)?;
        best = best.min(start.elapsed().as_secs_f64());
        last = Some(r);
    }
    let (r, stats) = last.expect("at least one run");
    let factor = blowup_report(&t.plan).size_factor;
    Ok(PathPoint {
        size,
        seconds: best,
        max_intermediate: stats.max_intermediate(),
        bound_violations: check_intermediate_bounds(&t, &stats, &plain, factor).len(),
        result: !r.is_empty(),
    })
}

fn fmt_time(secs: f64, hide: bool) -> String {
    if hide {
        "-".into()
    } else {
        format!("{:.3}", secs * 1e3)
    }
}

pub fn cmd_bench(a: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let o = |e| Error::io("<stdout>", e);
    writeln!(out, "suite,strategy,size,time_ms,max_intermediate,result,agrees").map_err(o)?;
    match a.suite {
        Suite::Path => {
            let k = a.k.unwrap_or(8);
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for &n in &a.sizes {
                let pt = bench_path_point(k, n, a.seed, a.repeat)?;
                writeln!(
                    out,
                    "path,plan,{},{},{},{},{}",
                    n,
                    fmt_time(pt.seconds, a.no_time),
                    pt.max_intermediate,
                    pt.result,
                    pt.bound_violations == 0
                )
                .map_err(o)?;
                xs.push(n as f64);
                ys.push(pt.seconds);
            }
            if xs.len() >= 2 && !a.no_time {
                let fit = linear_fit(&xs, &ys);
                let _ = writeln!(err, "linear fit: {:.3e} s/tuple, R² = {:.4}", fit.slope, fit.r2);
            }
        }
        Suite::Colorcode => {
            let params = RandomCqParams { dom: 4, max_tuples: 6, ..Default::default() };
            for (i, &n) in a.sizes.iter().enumerate() {
                let seed = a.seed.wrapping_add(i as u64);
                let (q, ineqs, db) = testgen::gen_random_cq(&RandomCqParams { max_tuples: n.min(50), ..params.clone() }, seed);
                let want = crate::strategies::eval_oracle(&q, &ineqs, &db)?;
                let start = Instant::now();
                let (got, stats) = eval_colorcoding(&q, &ineqs, &db, None, &eval_cq)?;
                let secs = start.elapsed().as_secs_f64();
                writeln!(
                    out,
                    "colorcode,colorcode,{},{},{},{},{}",
                    db.size(),
                    fmt_time(secs, a.no_time),
                    stats.inner_calls,
                    got.len(),
                    got == want.renamed(got.schema().clone())?
                )
                .map_err(o)?;
            }
        }
        Suite::Cycle => {
            let k = a.k.unwrap_or(2);
            let q = even_cycle_query("E", k);
            for &n in &a.sizes {
                let nodes = ((n as f64).sqrt() * 2.0).ceil().max(3.0) as i64;
                let r = testgen::random_digraph(nodes, n, a.seed);
                let db = Database::new().with("E", r.clone());
                let start = Instant::now();
                let (found, stats) = eval_even_cycle(&r, k)?;
                let secs = start.elapsed().as_secs_f64();
                let want = !crate::strategies::eval_oracle(&q, &InequalitySet::new(), &db)?.is_empty();
                writeln!(
                    out,
                    "cycle,cycle,{},{},{},{},{}",
                    r.len(),
                    fmt_time(secs, a.no_time),
                    stats.light_max_intermediate,
                    found,
                    found == want
                )
                .map_err(o)?;
            }
        }
    }
    Ok(EXIT_TRUE)
}

pub fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> Result<i32> {
    let (q, ineqs, db) = match a.kind {
        GenKind::Q0 => {
            let (q, i) = testgen::q0();
            (q, i, testgen::q0_instance(a.dom, a.size, a.seed))
        }
        GenKind::Path => {
            let q = testgen::path_query(a.k);
            let i = match a.pattern {
                Pattern::None => InequalitySet::new(),
                Pattern::I1 => testgen::i1(a.k),
                Pattern::I2 | Pattern::I3 if a.k % 2 == 0 => {
                    return Err(Error::Generator("I2 and I3 need an odd k".into()));
                }
                Pattern::I2 => testgen::i2(a.k),
                Pattern::I3 => testgen::i3(a.k),
            };
            (q, i, testgen::gen_path_instance_sized(a.k, a.size, a.dom, a.seed))
        }
        GenKind::Random => testgen::gen_random_cq(&RandomCqParams { dom: a.dom, ..Default::default() }, a.seed),
        GenKind::Coloring => {
            let g = testgen::random_graph(a.n, a.prob, a.seed);
            testgen::gen_3coloring_reduction(&g, testgen::PackingFamily::Path)?
        }
        GenKind::Grid => {
            let lists = testgen::random_lists(a.n * a.n, a.dom.max(1), 2, 3, a.seed);
            testgen::gen_grid_listcolor_reduction(a.n, &lists)?
        }
        GenKind::Cycle => {
            let nodes = a.dom.max(3);
            let r = testgen::random_digraph(nodes, a.size, a.seed);
            (even_cycle_query("E", a.k), InequalitySet::new(), Database::new().with("E", r))
        }
    };
    testgen::write_instance(&a.out, &q, &ineqs, &db)?;
    writeln!(out, "wrote {} relations and query.cq to {}", db.names().count(), a.out.display())
        .map_err(|e| Error::io(&a.out, e))?;
    Ok(EXIT_TRUE)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("cqineq").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&[]).0, EXIT_USAGE);
        assert_eq!(run_args(&["eval", "q.cq", "d", "--strategy", "magic"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--threads", "0", "analyze", "q.cq"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).0, EXIT_TRUE);
    }

    #[test]
    fn linear_fit_exact_line() {
        let f = linear_fit(&[1.0, 2.0, 3.0], &[3.0, 5.0, 7.0]);
        assert!((f.slope - 2.0).abs() < 1e-12 && (f.intercept - 1.0).abs() < 1e-12 && (f.r2 - 1.0).abs() < 1e-12);
    }
}
