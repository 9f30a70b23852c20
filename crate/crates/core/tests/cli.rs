use std::path::Path;

use cqineq::cli::{run, EXIT_DATA, EXIT_FALSE, EXIT_TRUE};
use cqineq::plan::{parse_plan, print_plan};

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("cqineq").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn write_query(dir: &Path, text: &str) -> String {
    let path = dir.join("query.cq");
    std::fs::write(&path, text).unwrap();
    p(&path).to_string()
}

#[test]
fn q0_oracle_and_plan_agree() {
    let dir = tempfile::tempdir().unwrap();
    for seed in ["1", "2", "5"] {
        let d = dir.path().join(seed);
        assert_eq!(cli(&["gen", "q0", "--out", p(&d), "--seed", seed, "--size", "25", "--dom", "4"]).0, EXIT_TRUE);
        let q = d.join("query.cq");
        let oracle = cli(&["eval", p(&q), p(&d), "--strategy", "oracle"]);
        let plan = cli(&["eval", p(&q), p(&d), "--strategy", "plan"]);
        assert_eq!(oracle.1, plan.1);
        assert_eq!(oracle.0, plan.0);
    }
}

#[test]
fn boolean_answers_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let q = write_query(dir.path(), "q() :- R(x,y), R(y,z), x != z.");
    std::fs::write(dir.path().join("R.csv"), "1,2\n2,3\n").unwrap();
    let (code, out, _) = cli(&["eval", &q, p(dir.path())]);
    assert_eq!((code, out.as_str()), (EXIT_TRUE, "true\n"));
    std::fs::write(dir.path().join("R.csv"), "1,2\n2,1\n").unwrap();
    let (code, out, _) = cli(&["eval", &q, p(dir.path()), "--strategy", "oracle"]);
    assert_eq!((code, out.as_str()), (EXIT_FALSE, "false\n"));
}

#[test]
fn malformed_csv_reports_row() {
    let dir = tempfile::tempdir().unwrap();
    let q = write_query(dir.path(), "q(x) :- R(x,y).");
    std::fs::write(dir.path().join("R.csv"), "1,2\n3\n").unwrap();
    let (code, _, err) = cli(&["eval", &q, p(dir.path())]);
    assert_eq!(code, EXIT_DATA);
    assert!(err.contains("row 2"), "{err}");
    let (code, _, _) = cli(&["eval", &q, p(&dir.path().join("missing"))]);
    assert_eq!(code, EXIT_DATA);
}

#[test]
fn stats_go_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let q = write_query(dir.path(), "q(x) :- R(x,y), S(y,z), x != z.");
    std::fs::write(dir.path().join("R.csv"), "1,2\n3,2\n").unwrap();
    std::fs::write(dir.path().join("S.csv"), "2,1\n").unwrap();
    let stats = dir.path().join("stats.json");
    let (code, out, _) = cli(&["eval", &q, p(dir.path()), "--strategy", "plan", "--stats", p(&stats)]);
    assert_eq!((code, out.as_str()), (EXIT_TRUE, "3\n"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&stats).unwrap()).unwrap();
    assert_eq!(v["strategy"], "plan");
    assert_eq!(v["tuples_scanned"], 3);
    assert!(v["phi"].as_array().unwrap().iter().any(|h| h["phi"] == 1));
}

#[test]
fn transform_prints_parseable_plans() {
    let dir = tempfile::tempdir().unwrap();
    let q = write_query(dir.path(), r#"q0(w) :- R(x,y,"a"), S(y,z), T(z,w), x != z, y != w, x != w."#);
    let dot = dir.path().join("plan.dot");
    let (code, out, _) = cli(&["transform", &q, "--dot", p(&dot)]);
    assert_eq!(code, EXIT_TRUE);
    let plan = parse_plan(&out).unwrap();
    assert_eq!(print_plan(&plan), out);
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));

    let q = write_query(dir.path(), r#"q0(w) :- R(x,y,"a"), S(y,z), T(z,w)."#);
    let (_, out, _) = cli(&["transform", &q]);
    assert!(parse_plan(&out).unwrap().hprojections().iter().all(|(_, _, h)| !h.has_edges()));
}

fn analyze(dir: &Path, text: &str) -> serde_json::Value {
    let q = write_query(dir, text);
    let (code, out, err) = cli(&["analyze", &q]);
    assert_eq!(code, EXIT_TRUE, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn analyze_reports_structure() {
    let dir = tempfile::tempdir().unwrap();
    let p7 = "q() :- R1(x1,x2), R2(x2,x3), R3(x3,x4), R4(x4,x5), R5(x5,x6), R6(x6,x7), R7(x7,x8), \
              x1 != x3, x2 != x4, x3 != x5, x4 != x6, x5 != x7, x6 != x8.";
    assert_eq!(analyze(dir.path(), p7)["tw_primal_augmented"], 2);
    assert_eq!(analyze(dir.path(), "q() :- R(x1,x2,x3,x4).")["frac_packing"], "1");
    assert_eq!(analyze(dir.path(), "q() :- R1(x1,x2), R2(x2,x3), R3(x3,x1).")["acyclic"], false);
}

#[test]
fn bench_is_deterministic() {
    let args = ["bench", "--suite", "colorcode", "--sizes", "5,10,20", "--seed", "4", "--no-time"];
    let (code, a, _) = cli(&args);
    assert_eq!(code, EXIT_TRUE);
    assert_eq!(a, cli(&args).1);
    assert!(a.lines().skip(1).all(|l| l.ends_with(",true")), "{a}");
    let (_, path, _) = cli(&["bench", "--sizes", "200,400", "--k", "4", "--repeat", "1", "--no-time"]);
    assert_eq!(path.lines().count(), 3);
    let (_, cyc, _) = cli(&["bench", "--suite", "cycle", "--sizes", "30,60", "--no-time"]);
    assert!(cyc.lines().skip(1).all(|l| l.ends_with(",true")), "{cyc}");
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["q0", "path", "random", "coloring", "grid", "cycle"] {
        let (a, b) = (dir.path().join(format!("{kind}-a")), dir.path().join(format!("{kind}-b")));
        assert_eq!(cli(&["gen", kind, "--out", p(&a), "--seed", "9"]).0, EXIT_TRUE, "{kind}");
        cli(&["gen", kind, "--out", p(&b), "--seed", "9"]);
        let mut names: Vec<_> = std::fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
        names.sort();
        for n in names {
            assert_eq!(std::fs::read(a.join(&n)).unwrap(), std::fs::read(b.join(&n)).unwrap());
        }
        let q = a.join("query.cq");
        let code = cli(&["eval", p(&q), p(&a), "--strategy", "oracle"]).0;
        assert!(code == EXIT_TRUE || code == EXIT_FALSE, "{kind}: {code}");
    }
}
