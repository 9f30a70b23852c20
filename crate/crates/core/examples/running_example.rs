//! The forbidden tree of the running example and its small equivalent subrelation.

use cqineq::ineqcore::{build_forbidden_tree_ordered, equivalent_subrelation, minimally_forbidden};
use cqineq::testgen::{running_example, running_example_scan_order};

fn main() -> cqineq::Result<()> {
    let (h, r) = running_example();
    println!("H0 = {h}");
    println!("phi(H0) = {}", h.phi());
    println!("R has {} tuples", r.len());

    let tree = build_forbidden_tree_ordered(&running_example_scan_order(), 2, &h)?;
    println!("T_H0(R): {} nodes, {} leaves, depth {}", tree.node_count(), tree.leaf_count(), tree.depth());
    for t in minimally_forbidden(&tree) {
        println!("  minimally forbidden {t}");
    }
    println!("E_H0(R) in canonical scan order = {}", equivalent_subrelation(&r, &h)?);
    println!("{}", tree.to_dot());
    Ok(())
}
