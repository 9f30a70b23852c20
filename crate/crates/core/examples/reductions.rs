//! 3-coloring and grid list coloring encoded as queries with inequalities.

use cqineq::strategies::eval_oracle;
use cqineq::testgen::{gen_3coloring_reduction, gen_grid_listcolor_reduction, is_3_colorable, random_graph, random_lists, PackingFamily};

fn main() -> cqineq::Result<()> {
    for seed in 0..5 {
        let g = random_graph(5, 0.6, seed);
        let (q, i, db) = gen_3coloring_reduction(&g, PackingFamily::Path)?;
        let truth = !eval_oracle(&q, &i, &db)?.is_empty();
        println!("G(5, 0.6) seed {seed}: {} edges, query says {truth}, brute force says {}", g.edge_count(), is_3_colorable(&g));
    }
    let lists = random_lists(9, 3, 2, 2, 4);
    let (q, i, db) = gen_grid_listcolor_reduction(3, &lists)?;
    println!("3x3 grid as P^{} with {} inequalities: {}", q.atoms.len(), i.len(), !eval_oracle(&q, &i, &db)?.is_empty());
    Ok(())
}
