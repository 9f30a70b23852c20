use std::collections::{BTreeSet, HashSet};

use super::UGraph;
use crate::error::{Error, Result};

/// Largest graph the exact solver accepts.
pub const MAX_EXACT_VERTICES: usize = 25;

/// A tree of bags over the vertex ids of some [`UGraph`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<BTreeSet<usize>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(BTreeSet::len).max().unwrap_or(0).saturating_sub(1)
    }

    /// One bag holding every vertex.
    pub fn trivial(g: &UGraph) -> Self {
        TreeDecomposition {
            bags: vec![(0..g.vertex_count()).collect()],
            edges: Vec::new(),
        }
    }
}

/// Checks the tree shape and the three decomposition conditions: every
/// vertex is in a bag, every edge is inside a bag, and the bags holding a
/// vertex form a connected subtree.
pub fn verify_decomposition(t: &TreeDecomposition, g: &UGraph) -> bool {
    let m = t.bags.len();
    if m == 0 {
        return g.vertex_count() == 0;
    }
    if t.edges.len() + 1 != m || t.edges.iter().any(|&(a, b)| a >= m || b >= m || a == b) {
        return false;
    }
    let mut adj = vec![Vec::new(); m];
    for &(a, b) in &t.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let connected_within = |allowed: &dyn Fn(usize) -> bool, start: usize| {
        let mut seen = vec![false; m];
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] && allowed(w) {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count
    };
    if connected_within(&|_| true, 0) != m {
        return false;
    }
    if t.bags.iter().flatten().any(|&v| v >= g.vertex_count()) {
        return false;
    }
    for v in 0..g.vertex_count() {
        let holding: Vec<usize> = (0..m).filter(|&b| t.bags[b].contains(&v)).collect();
        if holding.is_empty() {
            return false;
        }
        if connected_within(&|b| t.bags[b].contains(&v), holding[0]) != holding.len() {
            return false;
        }
    }
    g.edges().iter().all(|&(a, b)| t.bags.iter().any(|bag| bag.contains(&a) && bag.contains(&b)))
}

/// Decomposition induced by an elimination order.
fn decomposition_from_order(g: &UGraph, order: &[usize]) -> TreeDecomposition {
    let n = g.vertex_count();
    if n == 0 {
        return TreeDecomposition::default();
    }
    let mut rank = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).clone()).collect();
    let mut bags = Vec::with_capacity(n);
    let mut higher = Vec::with_capacity(n);
    for &v in order {
        let up: Vec<usize> = adj[v].iter().copied().filter(|&w| rank[w] > rank[v]).collect();
        for (i, &a) in up.iter().enumerate() {
            for &b in &up[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        let mut bag: BTreeSet<usize> = up.iter().copied().collect();
        bag.insert(v);
        bags.push(bag);
        higher.push(up);
    }
    let mut edges = Vec::new();
    let mut last_root: Option<usize> = None;
    for i in 0..n {
        match higher[i].iter().map(|&w| rank[w]).min() {
            Some(p) => edges.push((i, p)),
            None => {
                if let Some(r) = last_root {
                    edges.push((r, i));
                }
                last_root = Some(i);
            }
        }
    }
    TreeDecomposition { bags, edges }
}

/// Greedy min-fill elimination; any graph size.
pub fn treewidth_upper(g: &UGraph) -> (usize, TreeDecomposition) {
    let order = min_fill_order(g);
    let t = decomposition_from_order(g, &order);
    (t.width(), t)
}

fn min_fill_order(g: &UGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).clone()).collect();
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut order = Vec::with_capacity(n);
    while !alive.is_empty() {
        let fill = |v: usize| {
            let ns: Vec<usize> = adj[v].iter().copied().collect();
            let mut missing = 0;
            for (i, &a) in ns.iter().enumerate() {
                missing += ns[i + 1..].iter().filter(|b| !adj[a].contains(b)).count();
            }
            (missing, ns.len(), v)
        };
        let v = alive.iter().copied().min_by_key(|&v| fill(v)).expect("non-empty");
        let ns: Vec<usize> = adj[v].iter().copied().collect();
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        for &w in &ns {
            adj[w].remove(&v);
        }
        adj[v].clear();
        alive.remove(&v);
        order.push(v);
    }
    order
}

/// Minor-min-width lower bound: contract a minimum-degree vertex into its
/// minimum-degree neighbour until no edges remain.
pub fn treewidth_lower(g: &UGraph) -> usize {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).clone()).collect();
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut lb = 0;
    loop {
        let Some(v) = alive.iter().copied().filter(|&v| !adj[v].is_empty()).min_by_key(|&v| (adj[v].len(), v)) else {
            return lb;
        };
        lb = lb.max(adj[v].len());
        let u = adj[v].iter().copied().min_by_key(|&w| (adj[w].len(), w)).expect("has neighbour");
        let ns: Vec<usize> = adj[v].iter().copied().collect();
        for w in ns {
            adj[w].remove(&v);
            if w != u {
                adj[w].insert(u);
                adj[u].insert(w);
            }
        }
        adj[v].clear();
        alive.remove(&v);
    }
}

struct Exact {
    n: usize,
    adj: Vec<u32>,
    failed: HashSet<u32>,
}

impl Exact {
    /// Neighbours of `v` in the graph left after eliminating `gone`.
    fn nbrs(&self, gone: u32, v: usize) -> u32 {
        let mut reach = 0u32;
        let mut seen = 1u32 << v;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            let mut m = self.adj[u] & !seen;
            seen |= m;
            reach |= m & !gone;
            m &= gone;
            while m != 0 {
                let w = m.trailing_zeros() as usize;
                m &= m - 1;
                stack.push(w);
            }
        }
        reach
    }

    /// Depth-first search for an elimination order of width at most `k`.
    fn search(&mut self, gone: u32, k: usize, order: &mut Vec<usize>) -> bool {
        let full = if self.n == 32 { u32::MAX } else { (1u32 << self.n) - 1 };
        let left = full & !gone;
        if (left.count_ones() as usize) <= k + 1 {
            let mut m = left;
            while m != 0 {
                order.push(m.trailing_zeros() as usize);
                m &= m - 1;
            }
            return true;
        }
        if self.failed.contains(&gone) {
            return false;
        }
        let mut candidates = Vec::new();
        let mut m = left;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let ns = self.nbrs(gone, v);
            if (ns.count_ones() as usize) > k {
                continue;
            }
            let simplicial = bits(ns).all(|a| ns & !(1 << a) & !self.nbrs(gone, a) == 0);
            if simplicial {
                candidates = vec![v];
                break;
            }
            candidates.push(v);
        }
        for v in candidates {
            order.push(v);
            if self.search(gone | (1 << v), k, order) {
                return true;
            }
            order.pop();
        }
        self.failed.insert(gone);
        false
    }
}

fn bits(mut m: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            v
        })
    })
}

/// Optimal width with a witness decomposition, by search over
/// elimination orders between the minor-min-width and min-fill bounds.
pub fn treewidth_exact(g: &UGraph) -> Result<(usize, TreeDecomposition)> {
    let n = g.vertex_count();
    if n > MAX_EXACT_VERTICES {
        return Err(Error::Guard(format!(
            "exact treewidth is limited to {MAX_EXACT_VERTICES} vertices (graph has {n}); use treewidth_upper for a bound"
        )));
    }
    let (ub, upper) = treewidth_upper(g);
    let lb = treewidth_lower(g);
    let mut ex = Exact {
        n,
        adj: (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w))).collect(),
        failed: HashSet::new(),
    };
    for k in lb..ub {
        ex.failed.clear();
        let mut order = Vec::new();
        if ex.search(0, k, &mut order) {
            let t = decomposition_from_order(g, &order);
            debug_assert!(t.width() <= k);
            return Ok((t.width(), t));
        }
    }
    Ok((ub, upper))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(p: usize) -> UGraph {
        let mut edges = Vec::new();
        for r in 0..p {
            for c in 0..p {
                let v = r * p + c;
                if c + 1 < p {
                    edges.push((v, v + 1));
                }
                if r + 1 < p {
                    edges.push((v, v + p));
                }
            }
        }
        let names: Vec<String> = (0..p * p).map(|i| format!("v{i}")).collect();
        UGraph::from_edges(&names, &edges)
    }

    fn clique(n: usize) -> UGraph {
        let mut g = UGraph::with_vertices(n);
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b);
            }
        }
        g
    }

    #[test]
    fn small_graphs() {
        let path = UGraph::from_edges(&["a", "b", "c", "d"], &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(treewidth_exact(&path).unwrap().0, 1);
        assert_eq!(treewidth_upper(&path).0, 1);
        assert_eq!(treewidth_exact(&clique(5)).unwrap().0, 4);
        assert_eq!(treewidth_upper(&clique(5)).0, 4);
        let cycle = UGraph::from_edges(&["a", "b", "c", "d", "e"], &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(treewidth_exact(&cycle).unwrap().0, 2);
        assert_eq!(treewidth_exact(&UGraph::with_vertices(3)).unwrap().0, 0);
        assert_eq!(treewidth_exact(&UGraph::new()).unwrap().0, 0);
    }

    #[test]
    fn grids() {
        for p in 2..=5 {
            let g = grid(p);
            let (w, t) = treewidth_exact(&g).unwrap();
            assert_eq!(w, p, "grid {p}x{p}");
            assert!(verify_decomposition(&t, &g));
            assert!(treewidth_lower(&g) <= w);
        }
    }

    #[test]
    fn guard() {
        assert!(matches!(treewidth_exact(&UGraph::with_vertices(26)), Err(Error::Guard(_))));
    }

    #[test]
    fn verification_conditions() {
        let g = UGraph::from_edges(&["a", "b", "c"], &[(0, 1), (1, 2)]);
        let good = TreeDecomposition {
            bags: vec![[0, 1].into(), [1, 2].into()],
            edges: vec![(0, 1)],
        };
        assert!(verify_decomposition(&good, &g));
        let missing_edge = TreeDecomposition {
            bags: vec![[0, 1].into(), [2].into()],
            edges: vec![(0, 1)],
        };
        assert!(!verify_decomposition(&missing_edge, &g));
        let split = TreeDecomposition {
            bags: vec![[0, 1].into(), [2].into(), [1, 2].into()],
            edges: vec![(0, 1), (1, 2)],
        };
        assert!(!verify_decomposition(&split, &g));
        let t = TreeDecomposition::trivial(&g);
        assert!(verify_decomposition(&t, &g));
        assert_eq!(t.width(), 2);
    }
}
