//! Color coding with the exhaustive and the random hash family.

use cqineq::colorcode::{eval_colorcoding, HashFamily};
use cqineq::plan::eval_cq;
use cqineq::query::parse_query;
use cqineq::strategies::eval_oracle;
use cqineq::testgen::gen_path_instances;

fn main() -> cqineq::Result<()> {
    let (q, ineqs) = parse_query("q(x1) :- R1(x1,x2), R2(x2,x3), R3(x3,x4), x1 != x3, x2 != x4, x1 != x4.")?;
    let db = gen_path_instances(3, 5, 0.4, 11);
    let want = eval_oracle(&q, &ineqs, &db)?;

    let (exact, stats) = eval_colorcoding(&q, &ineqs, &db, None, &eval_cq)?;
    println!("exhaustive: {} rows, {stats:?}, matches oracle: {}", exact.len(), exact == want);

    let k = 4;
    let reps = HashFamily::reps_for(k, 1e-3);
    let family = HashFamily::random(&db.active_domain(), k, reps, 42);
    let (approx, stats) = eval_colorcoding(&q, &ineqs, &db, Some(&family), &eval_cq)?;
    println!("random ({reps} functions): {} rows, {stats:?}, matches oracle: {}", approx.len(), approx == want);
    Ok(())
}
