//! List coloring: a backtracking oracle plus the polynomial cases used by
//! the vertex-cover strategy (forests, cliques, bounded treewidth).

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::graphs::{treewidth_exact, treewidth_upper, TreeDecomposition, UGraph, MAX_EXACT_VERTICES};
use crate::relcore::Value;

/// Default treewidth bound for the bag DP.
pub const DEFAULT_TW_BOUND: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListColoringInstance {
    pub graph: UGraph,
    /// Admissible colors, indexed by vertex id.
    pub lists: Vec<BTreeSet<Value>>,
}

pub type Assignment = Vec<Value>;

impl ListColoringInstance {
    pub fn new(graph: UGraph, lists: Vec<BTreeSet<Value>>) -> Result<Self> {
        if lists.len() != graph.vertex_count() {
            return Err(Error::Contract(format!(
                "{} lists for {} vertices",
                lists.len(),
                graph.vertex_count()
            )));
        }
        Ok(ListColoringInstance { graph, lists })
    }

    /// Instance with integer colors.
    pub fn from_ints(graph: UGraph, lists: &[&[i64]]) -> Result<Self> {
        let lists = lists.iter().map(|l| l.iter().map(|&c| Value::Int(c)).collect()).collect();
        Self::new(graph, lists)
    }

    /// `c(v) ∈ L(v)` everywhere and endpoints of every edge differ.
    pub fn verify(&self, a: &[Value]) -> bool {
        a.len() == self.lists.len()
            && a.iter().zip(&self.lists).all(|(c, l)| l.contains(c))
            && self.graph.edges().iter().all(|&(u, v)| a[u] != a[v])
    }

    fn restrict(&self, vertices: &[usize]) -> ListColoringInstance {
        ListColoringInstance {
            graph: self.graph.induced(vertices),
            lists: vertices.iter().map(|&v| self.lists[v].clone()).collect(),
        }
    }
}

pub fn solve_backtracking(inst: &ListColoringInstance) -> Option<Assignment> {
    let g = &inst.graph;
    let n = g.vertex_count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (inst.lists[v].len(), std::cmp::Reverse(g.degree(v)), v));
    let mut color: Vec<Option<&Value>> = vec![None; n];
    fn go<'a>(i: usize, order: &[usize], inst: &'a ListColoringInstance, color: &mut Vec<Option<&'a Value>>) -> bool {
        let Some(&v) = order.get(i) else {
            return true;
        };
        for c in &inst.lists[v] {
            if inst.graph.neighbors(v).iter().all(|&w| color[w] != Some(c)) {
                color[v] = Some(c);
                if go(i + 1, order, inst, color) {
                    return true;
                }
            }
        }
        color[v] = None;
        false
    }
    go(0, &order, inst, &mut color).then(|| color.into_iter().map(|c| c.expect("colored").clone()).collect())
}

/// Bottom-up feasibility then top-down choice, per tree of the forest.
pub fn solve_tree(inst: &ListColoringInstance) -> Result<Option<Assignment>> {
    let g = &inst.graph;
    if !g.is_forest() {
        return Err(Error::Contract("solve_tree needs a forest".into()));
    }
    let n = g.vertex_count();
    let mut assignment: Vec<Option<Value>> = vec![None; n];
    for comp in g.components() {
        let root = comp[0];
        // BFS order and parents.
        let mut order = vec![root];
        let mut parent = vec![usize::MAX; n];
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            for &w in g.neighbors(u) {
                if w != parent[u] {
                    parent[w] = u;
                    order.push(w);
                }
            }
            i += 1;
        }
        let mut feasible: HashMap<usize, BTreeSet<Value>> = HashMap::new();
        for &u in order.iter().rev() {
            let ok: BTreeSet<Value> = inst.lists[u]
                .iter()
                .filter(|c| {
                    g.neighbors(u)
                        .iter()
                        .filter(|&&w| w != parent[u])
                        .all(|w| feasible[w].iter().any(|d| d != *c))
                })
                .cloned()
                .collect();
            feasible.insert(u, ok);
        }
        for &u in &order {
            let pick = feasible[&u]
                .iter()
                .find(|c| parent[u] == usize::MAX || assignment[parent[u]].as_ref() != Some(*c))
                .cloned();
            match pick {
                Some(c) => assignment[u] = Some(c),
                None => return Ok(None),
            }
        }
    }
    Ok(Some(assignment.into_iter().map(|c| c.expect("assigned")).collect()))
}

/// Perfect matching of vertices into colors by augmenting paths.
pub fn solve_complete(inst: &ListColoringInstance) -> Result<Option<Assignment>> {
    let g = &inst.graph;
    if !g.is_clique() {
        return Err(Error::Contract("solve_complete needs a complete graph".into()));
    }
    let n = g.vertex_count();
    let colors: Vec<&Value> = inst.lists.iter().flatten().collect::<BTreeSet<_>>().into_iter().collect();
    if colors.len() < n {
        return Ok(None);
    }
    let cid: HashMap<&Value, usize> = colors.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let opts: Vec<Vec<usize>> = inst.lists.iter().map(|l| l.iter().map(|c| cid[c]).collect()).collect();
    let mut owner: Vec<Option<usize>> = vec![None; colors.len()];
    fn augment(v: usize, opts: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for &c in &opts[v] {
            if seen[c] {
                continue;
            }
            seen[c] = true;
            if owner[c].map_or(true, |w| augment(w, opts, owner, seen)) {
                owner[c] = Some(v);
                return true;
            }
        }
        false
    }
    for v in 0..n {
        let mut seen = vec![false; colors.len()];
        if !augment(v, &opts, &mut owner, &mut seen) {
            return Ok(None);
        }
    }
    let mut out: Vec<Option<Value>> = vec![None; n];
    for (c, o) in owner.iter().enumerate() {
        if let Some(v) = o {
            out[*v] = Some(colors[c].clone());
        }
    }
    Ok(Some(out.into_iter().map(|c| c.expect("matched")).collect()))
}

/// Dynamic programming over the bags of a tree decomposition.
pub fn solve_with_decomposition<'a>(inst: &'a ListColoringInstance, t: &TreeDecomposition) -> Option<Assignment> {
    let g = &inst.graph;
    let n = g.vertex_count();
    if n == 0 {
        return Some(Vec::new());
    }
    let m = t.bags.len();
    let mut adj = vec![Vec::new(); m];
    for &(a, b) in &t.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut order = vec![0];
    let mut parent = vec![usize::MAX; m];
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        for &w in &adj[u] {
            if w != parent[u] {
                parent[w] = u;
                order.push(w);
            }
        }
        i += 1;
    }
    let bags: Vec<Vec<usize>> = t.bags.iter().map(|b| b.iter().copied().collect()).collect();
    let shared = |b: usize| -> Vec<usize> {
        let p = parent[b];
        bags[b].iter().copied().filter(|v| t.bags[p].contains(v)).collect()
    };
    // For each non-root bag: projection onto the parent-shared vertices → a full bag assignment.
    let mut tables: Vec<HashMap<Vec<&'a Value>, Vec<&'a Value>>> = vec![HashMap::new(); m];
    let mut root_pick: Option<Vec<&Value>> = None;
    for &b in order.iter().rev() {
        let vs = &bags[b];
        let children: Vec<usize> = adj[b].iter().copied().filter(|&c| c != parent[b]).collect();
        let child_keys: Vec<Vec<usize>> = children
            .iter()
            .map(|&c| shared(c).iter().map(|v| vs.iter().position(|w| w == v).expect("shared")).collect())
            .collect();
        let key_pos: Vec<usize> = if b == order[0] {
            Vec::new()
        } else {
            shared(b).iter().map(|v| vs.iter().position(|w| w == v).expect("shared")).collect()
        };
        let mut cur: Vec<&Value> = Vec::with_capacity(vs.len());
        let mut table = HashMap::new();
        #[allow(clippy::too_many_arguments)]
        fn enumerate<'a>(
            i: usize,
            vs: &[usize],
            inst: &'a ListColoringInstance,
            cur: &mut Vec<&'a Value>,
            accept: &mut dyn FnMut(&[&'a Value]),
        ) {
            if i == vs.len() {
                accept(cur);
                return;
            }
            for c in &inst.lists[vs[i]] {
                if (0..i).all(|j| cur[j] != c || !inst.graph.has_edge(vs[i], vs[j])) {
                    cur.push(c);
                    enumerate(i + 1, vs, inst, cur, accept);
                    cur.pop();
                }
            }
        }
        let mut accept = |a: &[&'a Value]| {
            let ok = children.iter().zip(&child_keys).all(|(&c, kp)| {
                let key: Vec<&Value> = kp.iter().map(|&p| a[p]).collect();
                tables[c].contains_key(&key)
            });
            if ok {
                let key: Vec<&Value> = key_pos.iter().map(|&p| a[p]).collect();
                table.entry(key).or_insert_with(|| a.to_vec());
            }
        };
        enumerate(0, vs, inst, &mut cur, &mut accept);
        if b == order[0] {
            root_pick = table.into_values().next();
        } else {
            tables[b] = table;
        }
    }
    let root_pick = root_pick?;
    let mut chosen: Vec<Option<Vec<&Value>>> = vec![None; m];
    chosen[order[0]] = Some(root_pick);
    let mut out: Vec<Option<&Value>> = vec![None; n];
    for &b in &order {
        if b != order[0] {
            let p = parent[b];
            let pa = chosen[p].as_ref().expect("parent first");
            let key: Vec<&Value> = shared(b)
                .iter()
                .map(|v| pa[bags[p].iter().position(|w| w == v).expect("shared")])
                .collect();
            chosen[b] = Some(tables[b][&key].clone());
        }
        for (v, c) in bags[b].iter().zip(chosen[b].as_ref().expect("chosen")) {
            out[*v] = Some(c);
        }
    }
    out.into_iter().map(|c| c.cloned()).collect()
}

/// How a connected component was solved.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ComponentClass {
    Clique,
    Forest,
    BoundedTreewidth(usize),
    General,
}

impl fmt::Display for ComponentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentClass::Clique => write!(f, "clique"),
            ComponentClass::Forest => write!(f, "forest"),
            ComponentClass::BoundedTreewidth(w) => write!(f, "treewidth {w}"),
            ComponentClass::General => write!(f, "general"),
        }
    }
}

fn classify_component(g: &UGraph, bound: usize) -> (ComponentClass, Option<TreeDecomposition>) {
    if g.is_clique() {
        return (ComponentClass::Clique, None);
    }
    if g.is_forest() {
        return (ComponentClass::Forest, None);
    }
    let (w, t) = if g.vertex_count() <= MAX_EXACT_VERTICES {
        treewidth_exact(g).expect("within guard")
    } else {
        treewidth_upper(g)
    };
    if w <= bound {
        (ComponentClass::BoundedTreewidth(w), Some(t))
    } else {
        (ComponentClass::General, None)
    }
}

/// Overall class of a graph: its hardest component class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphClass(pub Vec<ComponentClass>);

impl GraphClass {
    /// Every component falls in a polynomial case.
    pub fn is_easy(&self) -> bool {
        !self.0.contains(&ComponentClass::General)
    }
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kinds: BTreeSet<String> = self
            .0
            .iter()
            .map(|c| match c {
                ComponentClass::BoundedTreewidth(_) => "bounded-treewidth".to_string(),
                other => other.to_string(),
            })
            .collect();
        if kinds.is_empty() {
            return write!(f, "empty");
        }
        write!(f, "{}", kinds.into_iter().collect::<Vec<_>>().join("+"))
    }
}

pub fn classify_graph(g: &UGraph) -> GraphClass {
    classify_graph_with_bound(g, DEFAULT_TW_BOUND)
}

pub fn classify_graph_with_bound(g: &UGraph, bound: usize) -> GraphClass {
    GraphClass(
        g.components()
            .iter()
            .map(|c| classify_component(&g.induced(c), bound).0)
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentsReport {
    pub assignment: Option<Assignment>,
    /// Each component (vertex ids) with the solver it was dispatched to.
    pub classes: Vec<(Vec<usize>, ComponentClass)>,
}

pub fn solve_components(inst: &ListColoringInstance) -> ComponentsReport {
    solve_components_with_bound(inst, DEFAULT_TW_BOUND)
}

pub fn solve_components_with_bound(inst: &ListColoringInstance, bound: usize) -> ComponentsReport {
    let mut out: Vec<Option<Value>> = vec![None; inst.graph.vertex_count()];
    let mut classes = Vec::new();
    let mut ok = true;
    for comp in inst.graph.components() {
        let sub = inst.restrict(&comp);
        let (class, t) = classify_component(&sub.graph, bound);
        let solved = if ok {
            match &class {
                ComponentClass::Clique => solve_complete(&sub).expect("clique"),
                ComponentClass::Forest => solve_tree(&sub).expect("forest"),
                ComponentClass::BoundedTreewidth(_) => solve_with_decomposition(&sub, t.as_ref().expect("decomposition")),
                ComponentClass::General => solve_backtracking(&sub),
            }
        } else {
            None
        };
        match solved {
            Some(a) => {
                for (v, c) in comp.iter().zip(a) {
                    out[*v] = Some(c);
                }
            }
            None => ok = false,
        }
        classes.push((comp, class));
    }
    ComponentsReport {
        assignment: ok.then(|| out.into_iter().map(|c| c.expect("assigned")).collect()),
        classes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, edges: &[(usize, usize)]) -> UGraph {
        let mut g = UGraph::with_vertices(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    #[test]
    fn backtracking_examples() {
        let e = g(2, &[(0, 1)]);
        assert!(solve_backtracking(&ListColoringInstance::from_ints(e.clone(), &[&[1], &[1]]).unwrap()).is_none());
        let a = solve_backtracking(&ListColoringInstance::from_ints(e, &[&[1], &[1, 2]]).unwrap()).unwrap();
        assert_eq!(a, vec![Value::Int(1), Value::Int(2)]);
        let tri = g(3, &[(0, 1), (1, 2), (0, 2)]);
        assert!(solve_backtracking(&ListColoringInstance::from_ints(tri, &[&[1, 2], &[1, 2], &[1, 2]]).unwrap()).is_none());
    }

    #[test]
    fn tree_examples() {
        let p = ListColoringInstance::from_ints(g(3, &[(0, 1), (1, 2)]), &[&[1], &[1, 2], &[2]]).unwrap();
        assert!(solve_tree(&p).unwrap().is_none());
        let single = ListColoringInstance::new(g(1, &[]), vec![BTreeSet::new()]).unwrap();
        assert!(solve_tree(&single).unwrap().is_none());
        let star = ListColoringInstance::from_ints(g(4, &[(0, 1), (0, 2), (0, 3)]), &[&[1], &[1, 2], &[1, 2], &[1, 2]]).unwrap();
        let a = solve_tree(&star).unwrap().unwrap();
        assert_eq!(a, vec![Value::Int(1), Value::Int(2), Value::Int(2), Value::Int(2)]);
        let tri = ListColoringInstance::from_ints(g(3, &[(0, 1), (1, 2), (0, 2)]), &[&[1], &[2], &[3]]).unwrap();
        assert!(matches!(solve_tree(&tri), Err(Error::Contract(_))));
    }

    #[test]
    fn complete_examples() {
        let k3 = g(3, &[(0, 1), (1, 2), (0, 2)]);
        let none = ListColoringInstance::from_ints(k3.clone(), &[&[1, 2], &[1, 2], &[1, 2]]).unwrap();
        assert!(solve_complete(&none).unwrap().is_none());
        let some = ListColoringInstance::from_ints(k3, &[&[1, 2], &[2, 3], &[1, 3]]).unwrap();
        assert!(some.verify(&solve_complete(&some).unwrap().unwrap()));
        let k2 = ListColoringInstance::from_ints(g(2, &[(0, 1)]), &[&[1], &[2]]).unwrap();
        assert_eq!(solve_complete(&k2).unwrap().unwrap(), vec![Value::Int(1), Value::Int(2)]);
        let path = ListColoringInstance::from_ints(g(3, &[(0, 1), (1, 2)]), &[&[1], &[2], &[3]]).unwrap();
        assert!(matches!(solve_complete(&path), Err(Error::Contract(_))));
    }

    #[test]
    fn components_dispatch() {
        let mut graph = g(6, &[(0, 1), (1, 2), (3, 4), (4, 5), (3, 5)]);
        graph.add_edge(0, 1);
        let inst = ListColoringInstance::from_ints(graph, &[&[1, 2], &[1, 2], &[1, 2], &[1, 2, 3], &[1, 2, 3], &[1, 2, 3]]).unwrap();
        let r = solve_components(&inst);
        assert!(inst.verify(r.assignment.as_ref().unwrap()));
        assert_eq!(r.classes.iter().map(|c| c.1.clone()).collect::<Vec<_>>(), vec![ComponentClass::Forest, ComponentClass::Clique]);
        let empty = ListColoringInstance::new(UGraph::new(), vec![]).unwrap();
        assert_eq!(solve_components(&empty).assignment, Some(vec![]));
    }

    #[test]
    fn bag_dp_on_cycle() {
        let c5 = g(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let two = ListColoringInstance::from_ints(c5.clone(), &[&[1, 2][..]; 5]).unwrap();
        let r = solve_components(&two);
        assert_eq!(r.classes[0].1, ComponentClass::BoundedTreewidth(2));
        assert!(r.assignment.is_none());
        let three = ListColoringInstance::from_ints(c5, &[&[1, 2], &[1, 2], &[1, 2], &[1, 2], &[1, 2, 3]]).unwrap();
        assert!(three.verify(&solve_components(&three).assignment.unwrap()));
    }
}
