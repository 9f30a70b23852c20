//! Rewrites the q0 plan with H-projections and checks it against the oracle.

use cqineq::plan::{blowup_report, eval_plan, print_plan, q0_plan, to_dot, transform};
use cqineq::relcore::Schema;
use cqineq::strategies::eval_oracle;
use cqineq::testgen::{q0, q0_instance};

fn main() -> cqineq::Result<()> {
    let (q, ineqs) = q0();
    let p = q0_plan();
    println!("input plan:\n{}", print_plan(&p));

    let t = transform(&p, &q, &ineqs)?;
    println!("transformed plan:\n{}", print_plan(&t.plan));
    let report = blowup_report(&t.plan);
    for (path, attrs, phi) in &report.phis {
        println!("  H-projection at {path:?} onto {attrs:?}: phi = {phi}");
    }
    println!("size factor e*max phi = {:.3}", report.size_factor);

    let db = q0_instance(4, 20, 7);
    let got = eval_plan(&t.plan, &db)?.renamed(Schema::new(q.head.iter().cloned())?)?;
    let want = eval_oracle(&q, &ineqs, &db)?;
    println!("answer {got}, oracle agrees: {}", got == want);
    println!("{}", to_dot(&t.plan));
    Ok(())
}
