//! Bipartite inequality graphs, the forbidden-tuple tree `T_H(R)`, the
//! small H-equivalent subrelation `E_H(R)` and the H-projection operator.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::relcore::{Relation, Tuple, Value};

/// `H = (X, Y, E)`: every edge `(x, y)` stands for the inequality `x != y`
/// between an attribute of the relation being reduced (left) and an
/// attribute of the rest of the plan (right).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BipartiteIneqGraph {
    left: Vec<String>,
    right: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
}

impl BipartiteIneqGraph {
    pub fn new(
        left: Vec<String>,
        right: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let ls: BTreeSet<&String> = left.iter().collect();
        let rs: BTreeSet<&String> = right.iter().collect();
        if ls.len() != left.len() || rs.len() != right.len() {
            return Err(Error::Contract("duplicate vertex in bipartite graph".into()));
        }
        if let Some(shared) = ls.intersection(&rs).next() {
            return Err(Error::Contract(format!("{shared} is on both sides of the graph")));
        }
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        if let Some(&(i, j)) = edges.iter().find(|&&(i, j)| i >= left.len() || j >= right.len()) {
            return Err(Error::Contract(format!("edge ({i},{j}) out of range")));
        }
        Ok(BipartiteIneqGraph { left, right, edges })
    }

    /// Builds the graph from named edges.
    pub fn from_names<S: AsRef<str>>(
        left: &[S],
        right: &[S],
        edges: &[(S, S)],
    ) -> Result<Self> {
        let left: Vec<String> = left.iter().map(|s| s.as_ref().to_string()).collect();
        let right: Vec<String> = right.iter().map(|s| s.as_ref().to_string()).collect();
        let mut idx = Vec::new();
        for (a, b) in edges {
            let i = left.iter().position(|l| l == a.as_ref());
            let j = right.iter().position(|r| r == b.as_ref());
            match (i, j) {
                (Some(i), Some(j)) => idx.push((i, j)),
                _ => {
                    return Err(Error::Contract(format!(
                        "edge ({}, {}) not between left and right vertices",
                        a.as_ref(),
                        b.as_ref()
                    )))
                }
            }
        }
        BipartiteIneqGraph::new(left, right, idx)
    }

    /// Graph with the given left side and no right side or edges.
    pub fn witness_only(left: Vec<String>) -> Self {
        BipartiteIneqGraph {
            left,
            right: Vec::new(),
            edges: BTreeSet::new(),
        }
    }

    pub fn left(&self) -> &[String] {
        &self.left
    }

    pub fn right(&self) -> &[String] {
        &self.right
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn named_edges(&self) -> Vec<(&str, &str)> {
        self.edges
            .iter()
            .map(|&(i, j)| (self.left[i].as_str(), self.right[j].as_str()))
            .collect()
    }

    pub fn has_edges(&self) -> bool {
        !self.edges.is_empty()
    }

    pub fn right_degree(&self, j: usize) -> usize {
        self.edges.iter().filter(|&&(_, b)| b == j).count()
    }

    /// `φ(H) = ℓ'! · ∏ d(y)` over right vertices of positive degree.
    /// Saturates at `u128::MAX`.
    pub fn phi(&self) -> u128 {
        let mut result: u128 = 1;
        let mut ell = 0u128;
        for j in 0..self.right.len() {
            let d = self.right_degree(j) as u128;
            if d > 0 {
                ell += 1;
                result = result.saturating_mul(d).saturating_mul(ell);
            }
        }
        result
    }

    /// Left neighbours of each right vertex.
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.right.len()];
        for &(i, j) in &self.edges {
            adj[j].push(i);
        }
        adj
    }
}

impl fmt::Display for BipartiteIneqGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .named_edges()
            .iter()
            .map(|(a, b)| format!("({a},{b})"))
            .collect();
        write!(
            f,
            "H(left {{{}}}, right {{{}}}, edges {{{}}})",
            self.left.join(","),
            self.right.join(","),
            edges.join(",")
        )
    }
}

/// `φ` of a graph (free-function form).
pub fn phi(h: &BipartiteIneqGraph) -> u128 {
    h.phi()
}

/// `e · φ(H)`, the node-count bound of the forbidden tree.
pub fn size_bound(h: &BipartiteIneqGraph) -> f64 {
    std::f64::consts::E * h.phi() as f64
}

/// True iff some tuple of `r` satisfies every edge inequality against `t`.
/// `t` is over the right side of `h`, tuples of `r` over its left side.
pub fn is_h_accepted(t: &Tuple, h: &BipartiteIneqGraph, r: &Relation) -> Result<bool> {
    if t.arity() != h.right.len() {
        return Err(Error::Contract(format!(
            "tuple {t} has arity {}, graph has {} right vertices",
            t.arity(),
            h.right.len()
        )));
    }
    if r.schema().arity() != h.left.len() {
        return Err(Error::Contract(format!(
            "relation arity {} differs from {} left vertices",
            r.schema().arity(),
            h.left.len()
        )));
    }
    Ok(r.iter().any(|s| h.edges.iter().all(|&(i, j)| s[i] != t[j])))
}

/// `t1` subsumes `t2` when each position of `t1` is ⊥ or equals `t2`'s.
pub fn subsumes(t1: &Tuple, t2: &Tuple) -> bool {
    t1.arity() == t2.arity() && t1.iter().zip(t2.iter()).all(|(a, b)| a.is_bottom() || a == b)
}

#[derive(Clone, Debug)]
pub struct TreeNode {
    /// `None` is the ⊥* label.
    pub label: Option<Tuple>,
    /// `(right index, value)` on the edge from the parent.
    pub edge: Option<(usize, Value)>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub depth: usize,
}

/// The tree `T_H(R)`. Node 0 is the root.
#[derive(Clone, Debug)]
pub struct ForbiddenTree {
    nodes: Vec<TreeNode>,
    right: Vec<String>,
}

impl ForbiddenTree {
    /// Builds the tree scanning `tuples` in the given order. `left_pos[i]`
    /// is the tuple position holding left vertex `i`.
    fn build_positional<'a>(
        h: &BipartiteIneqGraph,
        left_pos: &[usize],
        tuples: impl IntoIterator<Item = &'a Tuple>,
    ) -> ForbiddenTree {
        let ell = h.right.len();
        let adj = h.adjacency();
        let mut nodes = vec![TreeNode {
            label: None,
            edge: None,
            parent: None,
            children: Vec::new(),
            depth: 0,
        }];
        // Partial assignment of each open leaf, kept beside the open list.
        let mut open: Vec<(usize, Vec<Option<Value>>)> = vec![(0, vec![None; ell])];

        for t in tuples {
            if open.is_empty() {
                break;
            }
            let mut next_open = Vec::with_capacity(open.len());
            for (v, assigned) in open {
                let clashes = assigned.iter().enumerate().any(|(j, a)| match a {
                    Some(a) => adj[j].iter().any(|&i| &t[left_pos[i]] == a),
                    None => false,
                });
                if clashes {
                    next_open.push((v, assigned));
                    continue;
                }
                nodes[v].label = Some(t.clone());
                let depth = nodes[v].depth;
                if depth >= ell {
                    continue;
                }
                let mut labels: BTreeSet<(usize, Value)> = BTreeSet::new();
                for &(i, j) in &h.edges {
                    if assigned[j].is_none() {
                        labels.insert((j, t[left_pos[i]].clone()));
                    }
                }
                for (j, a) in labels {
                    let id = nodes.len();
                    nodes.push(TreeNode {
                        label: None,
                        edge: Some((j, a.clone())),
                        parent: Some(v),
                        children: Vec::new(),
                        depth: depth + 1,
                    });
                    nodes[v].children.push(id);
                    let mut child = assigned.clone();
                    child[j] = Some(a);
                    next_open.push((id, child));
                }
            }
            open = next_open;
        }
        ForbiddenTree {
            nodes,
            right: h.right.clone(),
        }
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&v| self.nodes[v].children.is_empty())
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().count()
    }

    /// Leaves still labelled ⊥*.
    pub fn bottom_leaf_count(&self) -> usize {
        self.leaves().filter(|&v| self.nodes[v].label.is_none()).count()
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    /// `tup(v)`: path edge labels, ⊥ elsewhere.
    pub fn tup(&self, v: usize) -> Tuple {
        let mut out = vec![Value::Bottom; self.right.len()];
        let mut cur = Some(v);
        while let Some(c) = cur {
            if let Some((j, a)) = &self.nodes[c].edge {
                out[*j] = a.clone();
            }
            cur = self.nodes[c].parent;
        }
        Tuple(out)
    }

    /// Labels of all non-⊥* nodes.
    pub fn labels(&self) -> Vec<Tuple> {
        let mut out: Vec<Tuple> = self.nodes.iter().filter_map(|n| n.label.clone()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Renders the tree in DOT, right vertices named by `right`.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph T {\n  node [shape=box];\n");
        for (id, n) in self.nodes.iter().enumerate() {
            let label = match &n.label {
                Some(t) => t.to_string(),
                None => "⊥*".to_string(),
            };
            let _ = writeln!(s, "  n{id} [label=\"{label}\"];");
        }
        for (id, n) in self.nodes.iter().enumerate() {
            if let (Some(p), Some((j, a))) = (n.parent, &n.edge) {
                let _ = writeln!(s, "  n{p} -> n{id} [label=\"({}, {a})\"];", self.right[*j]);
            }
        }
        s.push_str("}\n");
        s
    }
}

fn check_left_arity(r: &Relation, h: &BipartiteIneqGraph) -> Result<()> {
    if r.schema().arity() != h.left.len() {
        return Err(Error::Contract(format!(
            "relation arity {} differs from {} left vertices",
            r.schema().arity(),
            h.left.len()
        )));
    }
    Ok(())
}

/// `T_H(R)` scanning `r` in canonical order. Left vertex `i` is column `i`.
pub fn build_forbidden_tree(r: &Relation, h: &BipartiteIneqGraph) -> Result<ForbiddenTree> {
    build_forbidden_tree_ordered(r.tuples(), r.schema().arity(), h)
}

/// `T_H(R)` scanning `tuples` in the given order.
pub fn build_forbidden_tree_ordered(
    tuples: &[Tuple],
    arity: usize,
    h: &BipartiteIneqGraph,
) -> Result<ForbiddenTree> {
    if arity != h.left.len() || tuples.iter().any(|t| t.arity() != arity) {
        return Err(Error::Contract("tuple arity differs from left side of H".into()));
    }
    let pos: Vec<usize> = (0..arity).collect();
    Ok(ForbiddenTree::build_positional(h, &pos, tuples))
}

/// `tup(v)` of every ⊥* leaf.
pub fn forbidden_tuples(tree: &ForbiddenTree) -> BTreeSet<Tuple> {
    tree.leaves()
        .filter(|&v| tree.nodes[v].label.is_none())
        .map(|v| tree.tup(v))
        .collect()
}

/// Forbidden tuples not subsumed by a different forbidden tuple.
pub fn minimally_forbidden(tree: &ForbiddenTree) -> BTreeSet<Tuple> {
    let all: Vec<Tuple> = forbidden_tuples(tree).into_iter().collect();
    all.iter()
        .filter(|t| !all.iter().any(|s| s != *t && subsumes(s, t)))
        .cloned()
        .collect()
}

/// `E_H(R)`, an H-equivalent subset of `r` with at most `e·φ(H)` tuples.
pub fn equivalent_subrelation(r: &Relation, h: &BipartiteIneqGraph) -> Result<Relation> {
    check_left_arity(r, h)?;
    let tree = build_forbidden_tree(r, h)?;
    Ok(Relation::from_tuples(r.schema().clone(), tree.labels()))
}

/// `Π^H_X(R)`: groups `r` by `x` and keeps `E_H` of each group. The schema
/// is unchanged so witnesses stay available to later operators.
pub fn h_project(r: &Relation, x: &[String], h: &BipartiteIneqGraph) -> Result<Relation> {
    let schema = r.schema();
    let x_pos = x
        .iter()
        .map(|a| {
            schema
                .position(a)
                .ok_or_else(|| Error::Contract(format!("grouping attribute {a} not in {schema}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let rest: BTreeSet<&str> = schema
        .attrs()
        .iter()
        .filter(|a| !x.contains(a))
        .map(String::as_str)
        .collect();
    let left: BTreeSet<&str> = h.left.iter().map(String::as_str).collect();
    if rest != left {
        return Err(Error::Contract(format!(
            "left side of H {{{}}} must equal the projected-out attributes {{{}}}",
            h.left.join(","),
            rest.into_iter().collect::<Vec<_>>().join(",")
        )));
    }
    let left_pos: Vec<usize> = h.left.iter().map(|a| schema.position(a).unwrap()).collect();

    if !h.has_edges() {
        // Witness-only projection: the first tuple of each group.
        let mut seen = BTreeSet::new();
        let kept: Vec<Tuple> = r
            .iter()
            .filter(|t| seen.insert(t.pick(&x_pos)))
            .cloned()
            .collect();
        return Ok(Relation::from_tuples(schema.clone(), kept));
    }

    let mut groups: BTreeMap<Tuple, Vec<&Tuple>> = BTreeMap::new();
    for t in r.iter() {
        groups.entry(t.pick(&x_pos)).or_default().push(t);
    }
    let mut out = Vec::new();
    for members in groups.values() {
        let tree = ForbiddenTree::build_positional(h, &left_pos, members.iter().copied());
        out.extend(tree.nodes.into_iter().filter_map(|n| n.label));
    }
    Ok(Relation::from_tuples(schema.clone(), out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcore::Schema;

    fn h0() -> BipartiteIneqGraph {
        BipartiteIneqGraph::from_names(
            &["x1", "x2"],
            &["y1", "y2", "y3"],
            &[("x1", "y1"), ("x1", "y2"), ("x2", "y2"), ("x2", "y3")],
        )
        .unwrap()
    }

    fn rel(rows: &[[i64; 2]]) -> Relation {
        Relation::new(Schema::new(["x1", "x2"]).unwrap(), rows.iter().map(|r| Tuple::ints(r))).unwrap()
    }

    fn running_r() -> Relation {
        rel(&[
            [1, 1], [1, 2], [1, 4], [1, 8], [2, 1], [2, 2],
            [2, 3], [2, 4], [3, 2], [5, 2], [10, 2],
        ])
    }

    fn b(vals: &[Option<i64>]) -> Tuple {
        Tuple(vals.iter().map(|v| v.map(Value::Int).unwrap_or(Value::Bottom)).collect())
    }

    #[test]
    fn phi_values() {
        assert_eq!(h0().phi(), 12);
        let h2 = BipartiteIneqGraph::from_names(
            &["A", "B", "B'"],
            &["C", "E", "C'", "D"],
            &[("A", "D"), ("B", "D")],
        )
        .unwrap();
        assert_eq!(h2.phi(), 2);
        let empty = BipartiteIneqGraph::from_names::<&str>(&["a"], &["b"], &[]).unwrap();
        assert_eq!(empty.phi(), 1);
    }

    #[test]
    fn acceptance_on_running_example() {
        let r = running_r();
        assert!(is_h_accepted(&Tuple::ints(&[2, 1, 3]), &h0(), &r).unwrap());
        assert!(!is_h_accepted(&Tuple::ints(&[2, 1, 2]), &h0(), &r).unwrap());
        let free = BipartiteIneqGraph::from_names::<&str>(&["x1", "x2"], &["y"], &[]).unwrap();
        assert!(is_h_accepted(&Tuple::ints(&[1]), &free, &r).unwrap());
        assert!(is_h_accepted(&Tuple::ints(&[1, 2]), &h0(), &r).is_err());
    }

    #[test]
    fn subsumption() {
        assert!(subsumes(&b(&[Some(1), Some(2), None]), &Tuple::ints(&[1, 2, 1])));
        let t = Tuple::ints(&[3, 4, 5]);
        assert!(subsumes(&t, &t));
        assert!(!subsumes(&b(&[Some(1), None, None]), &Tuple::ints(&[2, 1, 1])));
    }

    #[test]
    fn running_example_tree() {
        let order: Vec<Tuple> = [
            [1, 1], [1, 2], [1, 4], [1, 8], [2, 1], [2, 3],
            [3, 2], [5, 2], [2, 2], [2, 4], [10, 2],
        ]
        .iter()
        .map(|r| Tuple::ints(r))
        .collect();
        let tree = build_forbidden_tree_ordered(&order, 2, &h0()).unwrap();
        let want: BTreeSet<Tuple> = [b(&[Some(1), Some(2), None]), b(&[Some(2), Some(1), Some(2)])].into();
        assert_eq!(minimally_forbidden(&tree), want);
        let e = Relation::new(Schema::new(["x1", "x2"]).unwrap(), tree.labels()).unwrap();
        assert_eq!(e, rel(&[[1, 1], [1, 2], [1, 4], [2, 1], [2, 3], [3, 2], [5, 2]]));
        assert_eq!(tree.leaf_count(), 10);
        assert!(tree.depth() <= 3);

        // Canonical order gives a different, still minimal-set-preserving tree.
        let canon = build_forbidden_tree(&running_r(), &h0()).unwrap();
        assert_eq!(minimally_forbidden(&canon), want);
    }

    #[test]
    fn tight_instance() {
        let tree = build_forbidden_tree(&rel(&[[1, 2], [3, 4], [5, 6]]), &h0()).unwrap();
        assert_eq!(tree.bottom_leaf_count(), 12);
        assert_eq!(minimally_forbidden(&tree).len(), 12);
    }

    #[test]
    fn empty_relation_tree() {
        let tree = build_forbidden_tree(&rel(&[]), &h0()).unwrap();
        assert_eq!(tree.node_count(), 1);
        let want: BTreeSet<Tuple> = [b(&[None, None, None])].into();
        assert_eq!(minimally_forbidden(&tree), want);
        assert!(equivalent_subrelation(&rel(&[]), &h0()).unwrap().is_empty());
    }

    #[test]
    fn no_edges_keeps_one_witness() {
        let free = BipartiteIneqGraph::from_names::<&str>(&["x1", "x2"], &["y"], &[]).unwrap();
        let e = equivalent_subrelation(&running_r(), &free).unwrap();
        assert_eq!(e.len(), 1);
        let tree = build_forbidden_tree(&running_r(), &free).unwrap();
        assert!(forbidden_tuples(&tree).is_empty());
    }

    #[test]
    fn h_projection_keeps_schema() {
        let r = Relation::new(
            Schema::new(["g", "x1", "x2"]).unwrap(),
            running_r().iter().flat_map(|t| {
                [Tuple::ints(&[0]).concat(t), Tuple::ints(&[1]).concat(t)]
            }),
        )
        .unwrap();
        let h = BipartiteIneqGraph::from_names(
            &["x1", "x2"],
            &["y1", "y2", "y3"],
            &[("x1", "y1"), ("x1", "y2"), ("x2", "y2"), ("x2", "y3")],
        )
        .unwrap();
        let p = h_project(&r, &["g".to_string()], &h).unwrap();
        assert_eq!(p.schema(), r.schema());
        assert_eq!(p.len(), 14);

        let w = BipartiteIneqGraph::witness_only(vec!["x2".into()]);
        let p = h_project(&running_r(), &["x1".to_string()], &w).unwrap();
        assert_eq!(p.len(), 5);
        let id = BipartiteIneqGraph::witness_only(vec![]);
        assert_eq!(h_project(&running_r(), &["x1".into(), "x2".into()], &id).unwrap(), running_r());
        assert!(h_project(&running_r(), &["x1".into()], &h0()).is_err());
    }

    #[test]
    fn dot_output_mentions_edge_labels() {
        let tree = build_forbidden_tree(&running_r(), &h0()).unwrap();
        let dot = tree.to_dot();
        assert!(dot.contains("(y3, 1)"));
        assert!(dot.contains("⊥*"));
    }
}
