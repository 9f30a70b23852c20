//! Instance generators: the worked examples, the query families used in
//! the structural results, the hardness reductions, and seeded random
//! workloads.

use std::collections::BTreeSet;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graphs::{integer_vertex_packing_max, UGraph};
use crate::ineqcore::BipartiteIneqGraph;
use crate::query::{format_query, Atom, InequalitySet, Term, CQ};
use crate::relcore::{write_csv, Database, Relation, Schema, Tuple, Value};

fn rel_of(attrs: &[&str], rows: impl IntoIterator<Item = Tuple>) -> Relation {
    Relation::new(Schema::new(attrs.iter().copied()).expect("distinct attrs"), rows).expect("arity matches")
}

fn pairs(rows: &[(i64, i64)]) -> Vec<Tuple> {
    rows.iter().map(|&(a, b)| Tuple::ints(&[a, b])).collect()
}

/// `H0` and the relation `R(x1, x2)` of the running example.
pub fn running_example() -> (BipartiteIneqGraph, Relation) {
    let h = BipartiteIneqGraph::from_names(
        &["x1", "x2"],
        &["y1", "y2", "y3"],
        &[("x1", "y1"), ("x1", "y2"), ("x2", "y2"), ("x2", "y3")],
    )
    .expect("valid graph");
    (h, rel_of(&["x1", "x2"], pairs(&RUNNING_EXAMPLE_ROWS)))
}

const RUNNING_EXAMPLE_ROWS: [(i64, i64); 11] = [
    (1, 1), (1, 2), (1, 4), (1, 8), (2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (5, 2), (10, 2),
];

/// A scan order of the running-example relation that reproduces the drawn
/// forbidden tree (10 leaves and the 7 drawn node labels).
pub fn running_example_scan_order() -> Vec<Tuple> {
    pairs(&[(1, 1), (1, 2), (1, 4), (1, 8), (2, 1), (2, 3), (3, 2), (5, 2), (2, 2), (2, 4), (10, 2)])
}

/// `{(1,2), (3,4), (5,6)}`: every scan order yields `φ(H0) = 12` minimally
/// forbidden tuples.
pub fn tight_instance() -> Relation {
    rel_of(&["x1", "x2"], pairs(&[(1, 2), (3, 4), (5, 6)]))
}

/// The plan example: `q0(w) :- R(x,y,"a"), S(y,z), T(z,w)` with
/// `x != z, y != w, x != w`.
pub fn q0() -> (CQ, InequalitySet) {
    crate::query::parse_query(r#"q0(w) :- R(x,y,"a"), S(y,z), T(z,w), x != z, y != w, x != w."#).expect("valid query")
}

/// Random database for [`q0`]: integers `1..=dom`, the third column of `R`
/// drawn from `{"a", "b"}`.
pub fn q0_instance(dom: i64, max_tuples: usize, seed: u64) -> Database {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ab = [Value::text("a"), Value::text("b")];
    let gen = |arity: usize, text_last: bool, rng: &mut ChaCha8Rng| -> Vec<Tuple> {
        let n = rng.gen_range(0..=max_tuples);
        (0..n)
            .map(|_| {
                Tuple(
                    (0..arity)
                        .map(|i| {
                            if text_last && i + 1 == arity {
                                ab[rng.gen_range(0..2)].clone()
                            } else {
                                Value::Int(rng.gen_range(1..=dom))
                            }
                        })
                        .collect(),
                )
            })
            .collect()
    };
    let r = gen(3, true, &mut rng);
    let s = gen(2, false, &mut rng);
    let t = gen(2, false, &mut rng);
    Database::new()
        .with("R", rel_of(&["a", "b", "c"], r))
        .with("S", rel_of(&["a", "b"], s))
        .with("T", rel_of(&["a", "b"], t))
}

fn xs(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// `P^k() = R1(x1,x2), …, Rk(xk,x_{k+1})`.
pub fn path_query(k: usize) -> CQ {
    let v = xs(k + 1);
    let atoms = (0..k).map(|i| Atom::vars(&format!("R{}", i + 1), &[&v[i], &v[i + 1]])).collect();
    CQ::new(&format!("p{k}"), &[], atoms)
}

/// `C^k() = R1(x1,x2), …, Rk(xk,x1)`.
pub fn cycle_query(k: usize) -> CQ {
    let v = xs(k);
    let atoms = (0..k).map(|i| Atom::vars(&format!("R{}", i + 1), &[&v[i], &v[(i + 1) % k]])).collect();
    CQ::new(&format!("c{k}"), &[], atoms)
}

/// `S^k() = R(x1, …, xk)`.
pub fn single_atom_query(k: usize) -> CQ {
    let v = xs(k);
    let refs: Vec<&str> = v.iter().map(String::as_str).collect();
    CQ::new(&format!("s{k}"), &[], vec![Atom::vars("R", &refs)])
}

/// `F^k() = R1(x1), …, Rk(xk)`.
pub fn cross_query(k: usize) -> CQ {
    let v = xs(k);
    let atoms = (0..k).map(|i| Atom::vars(&format!("R{}", i + 1), &[&v[i]])).collect();
    CQ::new(&format!("f{k}"), &[], atoms)
}

/// `Z^n() = R1(y,x1), …, Rn(y,xn)`.
pub fn star_query(n: usize) -> CQ {
    let v = xs(n);
    let atoms = (0..n).map(|i| Atom::vars(&format!("R{}", i + 1), &["y", &v[i]])).collect();
    CQ::new(&format!("z{n}"), &[], atoms)
}

/// All pairs among `vars`.
pub fn complete_ineqs(vars: &[String]) -> InequalitySet {
    let mut i = InequalitySet::new();
    for (n, a) in vars.iter().enumerate() {
        for b in &vars[n + 1..] {
            i.add(a, b);
        }
    }
    i
}

fn ineqs_from(pairs: impl IntoIterator<Item = (usize, usize)>) -> InequalitySet {
    let mut i = InequalitySet::new();
    for (a, b) in pairs {
        i.add(&format!("x{a}"), &format!("x{b}"));
    }
    i
}

/// `I1 = {x_i != x_{i+2} : i ∈ [k-1]}` on `P^k`.
pub fn i1(k: usize) -> InequalitySet {
    ineqs_from((1..k).map(|i| (i, i + 2)))
}

/// `I2` on `P^k` (k odd): `x_i != x_{i+(k+1)/2}` for `i ∈ [(k+1)/2]`,
/// pairing the two halves of the path into a ladder.
pub fn i2(k: usize) -> InequalitySet {
    let s = (k + 1) / 2;
    ineqs_from((1..=s).map(|i| (i, i + s)))
}

/// `I3` on `P^k` (k odd): `x_i != x_{k+2-i}` for `i ∈ [(k+1)/2]`, folding
/// the path onto itself.
pub fn i3(k: usize) -> InequalitySet {
    ineqs_from((1..=(k + 1) / 2).map(|i| (i, k + 2 - i)))
}

/// Path index (1-based) of grid cell `(row, col)` on the snake that runs
/// left to right on even rows and right to left on odd rows.
pub fn snake_index(p: usize, row: usize, col: usize) -> usize {
    row * p + if row % 2 == 0 { col } else { p - 1 - col } + 1
}

/// The `p × p` grid over path indices `0..p²` (vertex `i` is `x_{i+1}`).
pub fn grid_graph(p: usize) -> UGraph {
    let names = xs(p * p);
    let mut g = UGraph::from_edges(&names, &[]);
    for r in 0..p {
        for c in 0..p {
            let v = snake_index(p, r, c) - 1;
            if c + 1 < p {
                g.add_edge(v, snake_index(p, r, c + 1) - 1);
            }
            if r + 1 < p {
                g.add_edge(v, snake_index(p, r + 1, c) - 1);
            }
        }
    }
    g
}

/// `I4` on `P^{p²-1}`: the vertical grid edges that are not path edges.
pub fn i4(p: usize) -> InequalitySet {
    let mut out = Vec::new();
    for r in 0..p.saturating_sub(1) {
        for c in 0..p {
            let (a, b) = (snake_index(p, r, c), snake_index(p, r + 1, c));
            if a.abs_diff(b) != 1 {
                out.push((a.min(b), a.max(b)));
            }
        }
    }
    ineqs_from(out)
}

/// The index formula `x_i != x_{⌊i/p⌋+1+2p-(i mod p)}`, `i = 1..p(p-1)`,
/// taken literally.
pub fn i4_printed_formula(p: usize) -> Vec<(usize, usize)> {
    (1..=p * (p - 1)).map(|i| (i, i / p + 1 + 2 * p - (i % p))).collect()
}

/// Whether path edges plus `pairs` form exactly the snake grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridCheck {
    pub is_grid: bool,
    /// Pairs that are not grid edges or fall outside `x1..x_{p²}`.
    pub extraneous: Vec<(usize, usize)>,
    /// Grid edges missing from path ∪ pairs.
    pub missing: Vec<(usize, usize)>,
}

pub fn validate_grid_pairs(p: usize, pairs: &[(usize, usize)]) -> GridCheck {
    let n = p * p;
    let grid = grid_graph(p);
    let grid_edges: BTreeSet<(usize, usize)> = grid.edges().iter().map(|&(a, b)| (a + 1, b + 1)).collect();
    let mut have: BTreeSet<(usize, usize)> = (1..n).map(|i| (i, i + 1)).collect();
    let mut extraneous = Vec::new();
    for &(a, b) in pairs {
        let e = (a.min(b), a.max(b));
        if e.1 > n || e.0 == 0 || !grid_edges.contains(&e) {
            extraneous.push((a, b));
        } else {
            have.insert(e);
        }
    }
    let missing: Vec<(usize, usize)> = grid_edges.difference(&have).copied().collect();
    GridCheck {
        is_grid: extraneous.is_empty() && missing.is_empty(),
        extraneous,
        missing,
    }
}

/// Grid list coloring as `(P^k, I4)` with `k + 1 = p²`: `R_i` holds the
/// pairs `(a, b)` with `a != b`, `a ∈ L(x_i)`, `b ∈ L(x_{i+1})`. `lists`
/// is indexed by path position.
pub fn gen_grid_listcolor_reduction(p: usize, lists: &[BTreeSet<Value>]) -> Result<(CQ, InequalitySet, Database)> {
    if p < 2 {
        return Err(Error::Generator("grid reduction needs p ≥ 2".into()));
    }
    let n = p * p;
    if lists.len() != n {
        return Err(Error::Generator(format!("expected {n} lists, got {}", lists.len())));
    }
    let q = path_query(n - 1);
    let mut db = Database::new();
    for i in 0..n - 1 {
        let mut rows = Vec::new();
        for a in &lists[i] {
            for b in &lists[i + 1] {
                if a != b {
                    rows.push(Tuple(vec![a.clone(), b.clone()]));
                }
            }
        }
        db.insert(format!("R{}", i + 1), rel_of(&["a", "b"], rows));
    }
    Ok((q, i4(p), db))
}

/// Random lists over colors `1..=colors` with sizes in `min..=max`.
pub fn random_lists(n: usize, colors: i64, min: usize, max: usize, seed: u64) -> Vec<BTreeSet<Value>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<i64> = (1..=colors).collect();
    (0..n)
        .map(|_| {
            let size = rng.gen_range(min..=max).min(all.len());
            all.choose_multiple(&mut rng, size).map(|&c| Value::Int(c)).collect()
        })
        .collect()
}

/// Query families with unbounded integer vertex packing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PackingFamily {
    Path,
    Cross,
}

/// 3-coloring of `g` as `(q, I)`: a family member with an integer vertex
/// packing of size `|V|`; atoms meeting the packing hold `(c, 0, …, 0)` for
/// `c = 1, 2, 3` at the packed position, the rest hold `(0, …, 0)`, and
/// `I` has `x_u != x_v` per edge.
pub fn gen_3coloring_reduction(g: &UGraph, family: PackingFamily) -> Result<(CQ, InequalitySet, Database)> {
    let n = g.vertex_count();
    let q = match family {
        PackingFamily::Path => path_query((2 * n).saturating_sub(1).max(1)),
        PackingFamily::Cross => cross_query(n.max(1)),
    };
    let (size, packing) = integer_vertex_packing_max(&q)?;
    if size < n {
        return Err(Error::Generator(format!("packing {size} is smaller than |V| = {n}")));
    }
    let chosen = &packing[..n];
    let mut db = Database::new();
    for a in &q.atoms {
        let attrs: Vec<String> = (0..a.arity()).map(|i| format!("c{i}")).collect();
        let schema = Schema::new(attrs)?;
        let pos = a.terms.iter().position(|t| matches!(t, Term::Var(v) if chosen.contains(v)));
        let zero = |c: i64, at: Option<usize>| Tuple((0..a.arity()).map(|i| Value::Int(if Some(i) == at { c } else { 0 })).collect());
        let rows: Vec<Tuple> = match pos {
            Some(p) => (1..=3).map(|c| zero(c, Some(p))).collect(),
            None => vec![zero(0, None)],
        };
        db.insert(a.relation.clone(), Relation::new(schema, rows)?);
    }
    let mut ineqs = InequalitySet::new();
    for (u, v) in g.edges() {
        ineqs.add(&chosen[u], &chosen[v]);
    }
    Ok((q, ineqs, db))
}

/// Brute-force 3-colorability.
pub fn is_3_colorable(g: &UGraph) -> bool {
    let n = g.vertex_count();
    let mut c = vec![0u8; n];
    fn go(i: usize, g: &UGraph, c: &mut Vec<u8>) -> bool {
        if i == g.vertex_count() {
            return true;
        }
        for col in 1..=3 {
            if g.neighbors(i).iter().all(|&w| w >= i || c[w] != col) {
                c[i] = col;
                if go(i + 1, g, c) {
                    return true;
                }
            }
        }
        false
    }
    go(0, g, &mut c)
}

/// Every graph on `n` labelled vertices.
pub fn all_graphs(n: usize) -> Vec<UGraph> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    (0..1u64 << slots.len())
        .map(|mask| {
            let mut g = UGraph::with_vertices(n);
            for (i, &(a, b)) in slots.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    g.add_edge(a, b);
                }
            }
            g
        })
        .collect()
}

/// Uniform random graph `G(n, prob)`.
pub fn random_graph(n: usize, prob: f64, seed: u64) -> UGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = UGraph::with_vertices(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(prob) {
                g.add_edge(a, b);
            }
        }
    }
    g
}

/// Database for [`path_query`]`(k)`: each pair over `1..=dom` enters each
/// `R_i` independently with probability `density`.
pub fn gen_path_instances(k: usize, dom: i64, density: f64, seed: u64) -> Database {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut db = Database::new();
    for i in 1..=k {
        let mut rows = Vec::new();
        for a in 1..=dom {
            for b in 1..=dom {
                if density >= 1.0 || rng.gen_bool(density.clamp(0.0, 1.0)) {
                    rows.push(Tuple::ints(&[a, b]));
                }
            }
        }
        db.insert(format!("R{i}"), rel_of(&["a", "b"], rows));
    }
    db
}

/// Database for [`path_query`]`(k)` with about `tuples` random pairs over
/// `1..=dom` per relation.
pub fn gen_path_instance_sized(k: usize, tuples: usize, dom: i64, seed: u64) -> Database {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut db = Database::new();
    for i in 1..=k {
        let rows: Vec<Tuple> = (0..tuples).map(|_| Tuple::ints(&[rng.gen_range(1..=dom), rng.gen_range(1..=dom)])).collect();
        db.insert(format!("R{i}"), rel_of(&["a", "b"], rows));
    }
    db
}

/// Random directed graph with `edges` distinct edges over `1..=nodes`, no loops.
pub fn random_digraph(nodes: i64, edges: usize, seed: u64) -> Relation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = (nodes * (nodes - 1)).max(0) as usize;
    let mut set = BTreeSet::new();
    while set.len() < edges.min(cap) {
        let (a, b) = (rng.gen_range(1..=nodes), rng.gen_range(1..=nodes));
        if a != b {
            set.insert((a, b));
        }
    }
    rel_of(&["src", "dst"], set.into_iter().map(|(a, b)| Tuple::ints(&[a, b])))
}

/// Shape limits for [`gen_random_cq`].
#[derive(Clone, Debug)]
pub struct RandomCqParams {
    pub max_atoms: usize,
    pub max_arity: usize,
    pub max_vars: usize,
    /// Largest number of variables mentioned by `I`.
    pub max_ineq_vars: usize,
    pub dom: i64,
    pub max_tuples: usize,
    /// Chance that a term is a constant.
    pub const_prob: f64,
    /// Chance that a variable goes to the head.
    pub head_prob: f64,
    pub binary_only: bool,
}

impl Default for RandomCqParams {
    fn default() -> Self {
        RandomCqParams {
            max_atoms: 4,
            max_arity: 3,
            max_vars: 6,
            max_ineq_vars: 4,
            dom: 5,
            max_tuples: 8,
            const_prob: 0.05,
            head_prob: 0.3,
            binary_only: false,
        }
    }
}

/// Random `(q, I, D)` within `params`; the same seed gives the same output.
pub fn gen_random_cq(params: &RandomCqParams, seed: u64) -> (CQ, InequalitySet, Database) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_atoms = rng.gen_range(1..=params.max_atoms.max(1));
    let n_vars = rng.gen_range(1..=params.max_vars.max(1));
    let pool = xs(n_vars);
    let mut atoms = Vec::new();
    let mut arities = Vec::new();
    for i in 0..n_atoms {
        // Reuse an earlier relation now and then so atoms share relations.
        let reuse = i > 0 && rng.gen_bool(0.25);
        let (name, arity) = if reuse {
            let j = rng.gen_range(0..i);
            (atoms.get(j).map(|a: &Atom| a.relation.clone()).expect("earlier atom"), arities[j])
        } else {
            let arity = if params.binary_only { rng.gen_range(1..=2) } else { rng.gen_range(1..=params.max_arity.max(1)) };
            (format!("R{}", i + 1), arity)
        };
        let terms = (0..arity)
            .map(|_| {
                if rng.gen_bool(params.const_prob) {
                    Term::Const(Value::Int(rng.gen_range(1..=params.dom)))
                } else {
                    Term::var(&pool[rng.gen_range(0..n_vars)])
                }
            })
            .collect();
        atoms.push(Atom::new(&name, terms));
        arities.push(arity);
    }
    let mut q = CQ::new("q", &[], atoms);
    let vars = q.vars();
    q.head = vars.iter().filter(|_| rng.gen_bool(params.head_prob)).cloned().collect();
    let mut ivars = vars.clone();
    ivars.shuffle(&mut rng);
    ivars.truncate(rng.gen_range(0..=params.max_ineq_vars.min(vars.len())));
    let mut ineqs = InequalitySet::new();
    for (n, a) in ivars.iter().enumerate() {
        for b in &ivars[n + 1..] {
            if rng.gen_bool(0.5) {
                ineqs.add(a, b);
            }
        }
    }
    if !ivars.is_empty() && rng.gen_bool(0.1) {
        let v = &ivars[rng.gen_range(0..ivars.len())];
        ineqs.add_const(v, Value::Int(rng.gen_range(1..=params.dom)));
    }
    let mut db = Database::new();
    for (name, arity) in q.relation_arities() {
        let count = rng.gen_range(0..=params.max_tuples);
        let rows: Vec<Tuple> = (0..count)
            .map(|_| Tuple((0..arity).map(|_| Value::Int(rng.gen_range(1..=params.dom))).collect()))
            .collect();
        let attrs: Vec<String> = (0..arity).map(|i| format!("c{i}")).collect();
        db.insert(name, Relation::new(Schema::new(attrs).expect("distinct"), rows).expect("arity"));
    }
    (q, ineqs, db)
}

/// Writes `query.cq` and one headerless `{relation}.csv` per relation.
pub fn write_instance(dir: &Path, q: &CQ, ineqs: &InequalitySet, db: &Database) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let qp = dir.join("query.cq");
    std::fs::write(&qp, format_query(q, ineqs) + "\n").map_err(|e| Error::io(&qp, e))?;
    for (name, rel) in db.relations() {
        write_csv(&dir.join(format!("{name}.csv")), rel)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ineqcore::{build_forbidden_tree_ordered, minimally_forbidden};
    use crate::listcolor::{solve_backtracking, ListColoringInstance};
    use crate::strategies::eval_oracle;

    #[test]
    fn running_example_shape() {
        let (h, r) = running_example();
        assert_eq!(r.len(), 11);
        assert_eq!(h.edges().len(), 4);
        assert_eq!(h.phi(), 12);
        let order = running_example_scan_order();
        assert_eq!(order.iter().cloned().collect::<BTreeSet<_>>(), r.tuples().iter().cloned().collect());
        let tree = build_forbidden_tree_ordered(&order, 2, &h).unwrap();
        assert_eq!(tree.leaf_count(), 10);
        assert_eq!(Relation::new(r.schema().clone(), tree.labels()).unwrap().len(), 7);
        assert_eq!(minimally_forbidden(&tree).len(), 2);
    }

    #[test]
    fn snake_and_formula() {
        assert_eq!(snake_index(4, 0, 0), 1);
        assert_eq!(snake_index(4, 1, 0), 8);
        assert!(validate_grid_pairs(4, &i4(4).pairs().map(|(a, b)| (num(a), num(b))).collect::<Vec<_>>()).is_grid);
        let printed = validate_grid_pairs(4, &i4_printed_formula(4));
        assert!(!printed.is_grid);
        assert!(printed.extraneous.contains(&(4, 10)));
    }

    fn num(v: &str) -> usize {
        v[1..].parse().unwrap()
    }

    #[test]
    fn grid_reduction_small() {
        let all = |c: &[i64]| -> Vec<BTreeSet<Value>> { (0..4).map(|_| c.iter().map(|&x| Value::Int(x)).collect()).collect() };
        let (q, i, db) = gen_grid_listcolor_reduction(2, &all(&[1, 2, 3])).unwrap();
        assert!(!eval_oracle(&q, &i, &db).unwrap().is_empty());
        let (q, i, db) = gen_grid_listcolor_reduction(2, &all(&[1])).unwrap();
        assert!(eval_oracle(&q, &i, &db).unwrap().is_empty());
        for seed in 0..10 {
            let lists = random_lists(9, 4, 2, 3, seed);
            let (q, i, db) = gen_grid_listcolor_reduction(3, &lists).unwrap();
            let inst = ListColoringInstance::new(grid_graph(3), lists).unwrap();
            assert_eq!(!eval_oracle(&q, &i, &db).unwrap().is_empty(), solve_backtracking(&inst).is_some());
        }
    }

    #[test]
    fn three_coloring_cliques() {
        let k = |n: usize| {
            let mut g = UGraph::with_vertices(n);
            for a in 0..n {
                for b in a + 1..n {
                    g.add_edge(a, b);
                }
            }
            g
        };
        for fam in [PackingFamily::Path, PackingFamily::Cross] {
            let (q, i, db) = gen_3coloring_reduction(&k(3), fam).unwrap();
            assert!(!eval_oracle(&q, &i, &db).unwrap().is_empty());
            let (q, i, db) = gen_3coloring_reduction(&k(4), fam).unwrap();
            assert!(eval_oracle(&q, &i, &db).unwrap().is_empty());
            assert!(db.size() <= 3 * q.atoms.len());
        }
    }

    #[test]
    fn generators_are_seeded() {
        let p = RandomCqParams::default();
        let a = gen_random_cq(&p, 42);
        let b = gen_random_cq(&p, 42);
        assert_eq!(format_query(&a.0, &a.1), format_query(&b.0, &b.1));
        assert_eq!(a.2, b.2);
        assert_eq!(gen_path_instances(3, 3, 0.5, 9), gen_path_instances(3, 3, 0.5, 9));
        let full = gen_path_instances(2, 3, 1.0, 1);
        assert_eq!(full.get("R1").unwrap().len(), 9);
        assert_eq!(random_digraph(10, 30, 3).len(), 30);
    }

    #[test]
    fn pattern_sizes() {
        assert_eq!(i1(7).len(), 6);
        assert_eq!(i2(7).len(), 4);
        assert!(i2(7).contains("x4", "x8"));
        assert!(i3(7).contains("x1", "x8") && i3(7).contains("x4", "x5"));
        assert_eq!(i4(4).len(), 9);
    }
}
