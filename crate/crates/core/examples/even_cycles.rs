//! Heavy/light even-cycle detection with and without inequalities.

use cqineq::query::InequalitySet;
use cqineq::strategies::{eval_even_cycle, eval_even_cycle_ineq};
use cqineq::testgen::random_digraph;

fn main() -> cqineq::Result<()> {
    for (nodes, edges) in [(30, 40), (30, 120), (60, 200)] {
        let r = random_digraph(nodes, edges, 1);
        let (found, st) = eval_even_cycle(&r, 2)?;
        println!("C4 on {nodes} nodes, {} edges: {found}; delta {} heavy {} light max {} (bound {})", r.len(), st.delta, st.heavy_hitters, st.light_max_intermediate, st.light_bound);

        let ineqs = InequalitySet::from_pairs([("x1", "x3"), ("x2", "x4")]);
        let (found, st) = eval_even_cycle_ineq(&r, 2, &ineqs)?;
        println!("  with x1 != x3, x2 != x4: {found}; projected {:?} vs N*phi {:?}", st.projected, st.projected_bounds);
    }
    Ok(())
}
