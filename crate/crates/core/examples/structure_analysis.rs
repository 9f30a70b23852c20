//! Treewidth, packings and covers of the path query under several inequality patterns.

use cqineq::graphs::{analyze, augmented_graph, treewidth_exact};
use cqineq::query::InequalitySet;
use cqineq::testgen::{i1, i2, i3, i4, i4_printed_formula, path_query, validate_grid_pairs};

fn main() -> cqineq::Result<()> {
    let cases: Vec<(&str, usize, InequalitySet)> = vec![
        ("P^7, none", 7, InequalitySet::new()),
        ("P^7, I1", 7, i1(7)),
        ("P^7, I2", 7, i2(7)),
        ("P^7, I3", 7, i3(7)),
        ("P^15, I4 (p=4)", 15, i4(4)),
    ];
    for (label, k, ineqs) in cases {
        let q = path_query(k);
        let (tw, _) = treewidth_exact(&augmented_graph(&q, &ineqs).primal())?;
        let a = analyze(&q, &ineqs)?;
        println!("{label}: primal augmented tw {tw}, packing {} / {}, cover {}, G^I {}", a.int_packing, a.frac_packing, a.frac_cover, a.listcolor_class);
    }
    let check = validate_grid_pairs(4, &i4_printed_formula(4));
    println!("literal I4 index formula forms the 4x4 grid: {}", check.is_grid);
    println!("  stray pairs {:?}", check.extraneous);
    println!("  missing grid edges {:?}", check.missing);
    Ok(())
}
