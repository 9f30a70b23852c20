//! The dispatcher's choice on a few query shapes, and every strategy on one instance.

use cqineq::query::parse_query;
use cqineq::strategies::{choose_strategy, run_strategy, Strategy, StrategyOptions};
use cqineq::testgen::gen_path_instances;

fn main() -> cqineq::Result<()> {
    let opts = StrategyOptions::default();
    for text in [
        "q() :- R(x1,x2,x3), x1 != x3.",
        "q() :- R1(y,x1), R2(y,x2), R3(y,x3), x1 != x2, x2 != x3, x1 != x3.",
        "q() :- E(x1,x2), E(x2,x3), E(x3,x4), E(x4,x1), x1 != x3.",
        "q() :- R1(x1,x2), R2(x2,x3), R3(x3,x4), x1 != x3, x2 != x4.",
    ] {
        let (q, i) = parse_query(text)?;
        let c = choose_strategy(&q, &i, &opts);
        println!("{text}\n  -> {} ({})", c.strategy, c.rationale);
    }

    let (q, i) = parse_query("q() :- R1(x1,x2), R2(x2,x3), R3(x3,x4), x1 != x3, x2 != x4.")?;
    let db = gen_path_instances(3, 4, 0.3, 3);
    for s in [Strategy::Oracle, Strategy::Plan, Strategy::ColorCode, Strategy::Augment, Strategy::Vclc, Strategy::Auto] {
        match run_strategy(s, &q, &i, &db, &opts) {
            Ok((r, ran)) => println!("{s}: {} (ran {ran})", !r.is_empty()),
            Err(e) => println!("{s}: {e}"),
        }
    }
    Ok(())
}
