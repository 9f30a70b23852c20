//! List coloring on a tree, a clique and a grid, with per-component dispatch.

use cqineq::graphs::UGraph;
use cqineq::listcolor::{classify_graph, solve_components, ListColoringInstance};
use cqineq::testgen::{grid_graph, random_lists};

fn main() -> cqineq::Result<()> {
    let star = UGraph::from_edges(&["c", "a", "b", "d"], &[(0, 1), (0, 2), (0, 3)]);
    let tree = ListColoringInstance::from_ints(star, &[&[1, 2], &[1], &[2, 3], &[1, 3]])?;
    report("star", &tree);

    let k3 = UGraph::from_edges(&["u", "v", "w"], &[(0, 1), (1, 2), (0, 2)]);
    let clique = ListColoringInstance::from_ints(k3, &[&[1, 2], &[1, 2], &[1, 2]])?;
    report("triangle with two colors", &clique);

    let g = grid_graph(3);
    let grid = ListColoringInstance::new(g, random_lists(9, 3, 2, 3, 5))?;
    report("3x3 grid", &grid);
    Ok(())
}

fn report(label: &str, inst: &ListColoringInstance) {
    let r = solve_components(inst);
    println!("{label}: class {}, components {:?}", classify_graph(&inst.graph), r.classes);
    match r.assignment {
        Some(a) => println!("  coloring {:?}, valid: {}", a.iter().map(|v| v.to_string()).collect::<Vec<_>>(), inst.verify(&a)),
        None => println!("  no coloring"),
    }
}
