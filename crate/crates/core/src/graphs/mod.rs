//! Structural analysis of `(q, I)`: incidence, inequality and augmented
//! graphs, GYO acyclicity, treewidth, vertex packings and covers.

mod lp;
mod packing;
mod treewidth;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use lp::{fractional_edge_cover_min, fractional_vertex_packing_max, solve_lp, LpSolution, PackingSolution};
pub use packing::{integer_vertex_packing_max, vertex_cover_min, MAX_BRUTE_FORCE_VARS};
pub use treewidth::{
    treewidth_exact, treewidth_lower, treewidth_upper, verify_decomposition, TreeDecomposition, MAX_EXACT_VERTICES,
};

use crate::error::{Error, Result};
use crate::query::{InequalitySet, CQ};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexKind {
    Var,
    Atom,
    Ineq,
}

/// Simple undirected graph with named, tagged vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UGraph {
    names: Vec<String>,
    kinds: Vec<VertexKind>,
    adj: Vec<BTreeSet<usize>>,
    index: BTreeMap<String, usize>,
}

impl UGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph over variable vertices `names` with the given edges.
    pub fn from_edges<S: AsRef<str>>(names: &[S], edges: &[(usize, usize)]) -> Self {
        let mut g = UGraph::new();
        for n in names {
            g.add_vertex(n.as_ref(), VertexKind::Var);
        }
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    /// Vertices `0..n` named by their index.
    pub fn with_vertices(n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        Self::from_edges(&names, &[])
    }

    /// Returns the existing id when the name is already present.
    pub fn add_vertex(&mut self, name: &str, kind: VertexKind) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.kinds.push(kind);
        self.adj.push(BTreeSet::new());
        self.index.insert(name.to_string(), i);
        i
    }

    /// Loops are ignored.
    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.adj[a].insert(b);
            self.adj[b].insert(a);
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, ns) in self.adj.iter().enumerate() {
            out.extend(ns.range(a + 1..).map(|&b| (a, b)));
        }
        out
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(&b)
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.kinds[v]
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertex_count()];
        let mut out = Vec::new();
        for s in 0..self.vertex_count() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                for &w in &self.adj[comp[i]] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.components().len() == self.vertex_count()
    }

    pub fn is_clique(&self) -> bool {
        let n = self.vertex_count();
        self.adj.iter().all(|ns| ns.len() + 1 == n)
    }

    /// Subgraph induced by `vertices`; vertex `i` of the result is `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> UGraph {
        let mut g = UGraph::new();
        for &v in vertices {
            g.add_vertex(&self.names[v], self.kinds[v]);
        }
        let pos: BTreeMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        for (i, &v) in vertices.iter().enumerate() {
            for w in &self.adj[v] {
                if let Some(&j) = pos.get(w) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Variable vertices, adjacent when they are adjacent here or share a
    /// non-variable neighbour.
    pub fn primal(&self) -> UGraph {
        let vars: Vec<usize> = (0..self.vertex_count()).filter(|&v| self.kinds[v] == VertexKind::Var).collect();
        let mut g = self.induced(&vars);
        for v in 0..self.vertex_count() {
            if self.kinds[v] == VertexKind::Var {
                continue;
            }
            let ns: Vec<usize> = self.adj[v].iter().filter_map(|w| g.vertex(&self.names[*w])).collect();
            for (i, &a) in ns.iter().enumerate() {
                for &b in &ns[i + 1..] {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }
}

impl fmt::Display for UGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph({} vertices; ", self.vertex_count())?;
        let es: Vec<String> = self
            .edges()
            .iter()
            .map(|&(a, b)| format!("{}-{}", self.names[a], self.names[b]))
            .collect();
        write!(f, "{})", es.join(", "))
    }
}

/// Name of the `i`-th atom vertex (1-based).
pub fn atom_vertex_name(relation: &str, i: usize) -> String {
    format!("{relation}#{i}")
}

fn add_query(g: &mut UGraph, q: &CQ) {
    for v in q.vars() {
        g.add_vertex(&v, VertexKind::Var);
    }
    for (i, a) in q.atoms.iter().enumerate() {
        let av = g.add_vertex(&atom_vertex_name(&a.relation, i + 1), VertexKind::Atom);
        for v in a.variables() {
            let x = g.add_vertex(v, VertexKind::Var);
            g.add_edge(av, x);
        }
    }
}

/// Incidence graph `G^q` between variables and atoms.
pub fn query_graph(q: &CQ) -> UGraph {
    let mut g = UGraph::new();
    add_query(&mut g, q);
    g
}

/// `G^I` over the variables mentioned by `I`.
pub fn ineq_graph(i: &InequalitySet) -> UGraph {
    let mut g = UGraph::new();
    for v in i.variables() {
        g.add_vertex(&v, VertexKind::Var);
    }
    for (a, b) in i.pairs() {
        let (x, y) = (g.add_vertex(a, VertexKind::Var), g.add_vertex(b, VertexKind::Var));
        g.add_edge(x, y);
    }
    g
}

/// `G^{q,I}`: `G^q` plus one fresh atom vertex `I(a,b)` per inequality.
pub fn augmented_graph(q: &CQ, i: &InequalitySet) -> UGraph {
    let mut g = UGraph::new();
    add_query(&mut g, q);
    for (a, b) in i.pairs() {
        let iv = g.add_vertex(&format!("I({a},{b})"), VertexKind::Ineq);
        let x = g.add_vertex(a, VertexKind::Var);
        let y = g.add_vertex(b, VertexKind::Var);
        g.add_edge(iv, x);
        g.add_edge(iv, y);
    }
    g
}

/// GYO reduction: repeatedly drop variables private to one hyperedge and
/// hyperedges contained in another; acyclic iff nothing remains.
pub fn gyo_is_acyclic(q: &CQ) -> bool {
    let mut edges: Vec<BTreeSet<String>> = q
        .atoms
        .iter()
        .map(|a| a.variables().into_iter().map(str::to_string).collect())
        .collect();
    loop {
        let mut changed = false;
        let mut count: BTreeMap<&String, usize> = BTreeMap::new();
        for e in &edges {
            for v in e {
                *count.entry(v).or_default() += 1;
            }
        }
        let lonely: BTreeSet<String> = count.into_iter().filter(|&(_, c)| c == 1).map(|(v, _)| v.clone()).collect();
        for e in edges.iter_mut() {
            let before = e.len();
            e.retain(|v| !lonely.contains(v));
            changed |= e.len() != before;
        }
        let mut i = 0;
        while i < edges.len() {
            let absorbed = edges[i].is_empty()
                || (0..edges.len()).any(|j| j != i && edges[i].is_subset(&edges[j]) && (edges[i] != edges[j] || j < i));
            if absorbed {
                edges.remove(i);
                changed = true;
            } else {
                i += 1;
            }
        }
        if !changed {
            return edges.is_empty();
        }
    }
}

/// Structural report printed by `analyze`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Analysis {
    pub acyclic: bool,
    pub tw_incidence: Option<usize>,
    pub tw_primal: Option<usize>,
    pub tw_augmented: Option<usize>,
    pub tw_primal_augmented: Option<usize>,
    pub tw_ineq: Option<usize>,
    pub int_packing: usize,
    pub frac_packing: String,
    pub frac_cover: String,
    pub vertex_cover: usize,
    pub listcolor_class: String,
}

/// Exact treewidth when within the size guard, otherwise `None`.
pub fn treewidth_if_small(g: &UGraph) -> Option<usize> {
    treewidth_exact(g).ok().map(|(w, _)| w)
}

pub fn analyze(q: &CQ, i: &InequalitySet) -> Result<Analysis> {
    q.validate()?;
    let gq = query_graph(q);
    let gqi = augmented_graph(q, i);
    let gi = ineq_graph(i);
    let (int_packing, _) = integer_vertex_packing_max(q)?;
    let (vertex_cover, _) = vertex_cover_min(q)?;
    let packing = fractional_vertex_packing_max(q);
    let cover = fractional_edge_cover_min(q);
    if packing.value != cover.value {
        return Err(Error::Contract(format!(
            "LP duality violated: packing {} vs cover {}",
            packing.value, cover.value
        )));
    }
    Ok(Analysis {
        acyclic: gyo_is_acyclic(q),
        tw_incidence: treewidth_if_small(&gq),
        tw_primal: treewidth_if_small(&gq.primal()),
        tw_augmented: treewidth_if_small(&gqi),
        tw_primal_augmented: treewidth_if_small(&gqi.primal()),
        tw_ineq: treewidth_if_small(&gi),
        int_packing,
        frac_packing: packing.value.to_string(),
        frac_cover: cover.value.to_string(),
        vertex_cover,
        listcolor_class: crate::listcolor::classify_graph(&gi).to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::parse_query;

    fn q(text: &str) -> (CQ, InequalitySet) {
        parse_query(text).unwrap()
    }

    #[test]
    fn incidence_and_augmented_shapes() {
        let (p, i) = q("p() :- R(x,y), S(y,z), x != z.");
        let g = query_graph(&p);
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 4);
        let empty = augmented_graph(&p, &InequalitySet::new());
        assert_eq!(empty, g);
        let a = augmented_graph(&p, &i);
        assert_eq!(a.vertex_count(), 6);
        assert_eq!(a.edge_count(), 6);
        assert_eq!(a.primal().edge_count(), 3);
        assert_eq!(ineq_graph(&i).edge_count(), 1);
    }

    #[test]
    fn gyo() {
        let (p, _) = q("p() :- R(a,b), R(b,c), R(c,d).");
        assert!(gyo_is_acyclic(&p));
        let (c, _) = q("c() :- R(a,b), R(b,c), R(c,a).");
        assert!(!gyo_is_acyclic(&c));
        let (s, _) = q("s() :- R(a,b,c).");
        assert!(gyo_is_acyclic(&s));
        let (t, _) = q("t() :- R(a,b,c), S(a,b), S(b,c), S(a,c).");
        assert!(gyo_is_acyclic(&t));
        let (d, _) = q("d() :- R(a,b), R(a,b).");
        assert!(gyo_is_acyclic(&d));
    }

    #[test]
    fn components_and_classes() {
        let g = UGraph::from_edges(&["a", "b", "c", "d"], &[(0, 1), (2, 3)]);
        assert_eq!(g.components(), vec![vec![0, 1], vec![2, 3]]);
        assert!(g.is_forest());
        assert!(!g.is_clique());
        let k3 = UGraph::from_edges(&["a", "b", "c"], &[(0, 1), (1, 2), (0, 2)]);
        assert!(k3.is_clique());
        assert!(!k3.is_forest());
    }
}
