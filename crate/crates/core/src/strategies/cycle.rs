//! Even directed cycles `C_{2k}() = R(x1,x2), …, R(x_{2k},x1)` by the
//! heavy/light split with threshold `δ = ⌈N^{1/k}⌉`.

use std::collections::{BTreeMap, BTreeSet};

use super::eval_transformed_plan;
use crate::error::{Error, Result};
use crate::ineqcore::{h_project, BipartiteIneqGraph};
use crate::query::{Atom, InequalitySet, Term, CQ};
use crate::relcore::{Database, Relation, Schema, Tuple, Value};

/// Instrumentation of one cycle evaluation.
#[derive(Clone, Debug, Default, PartialEq, serde::Serialize)]
pub struct CycleStats {
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    pub heavy_hitters: usize,
    /// Pinned evaluations run in the heavy case.
    pub heavy_checks: usize,
    /// Largest relation built in the light case.
    pub light_max_intermediate: usize,
    /// `N · δ^{k-1}`.
    pub light_bound: u128,
    /// `|Π^{H_i}_{x1,x_{k+1}}(q_i^f)|` for both halves (inequality version).
    pub projected: [usize; 2],
    /// `N · φ(H_i)`.
    pub projected_bounds: [u128; 2],
    pub found_heavy: bool,
    pub found_light: bool,
}

impl CycleStats {
    pub fn light_within_bound(&self) -> bool {
        self.light_max_intermediate as u128 <= self.light_bound
    }

    pub fn projected_within_bound(&self) -> bool {
        self.projected.iter().zip(&self.projected_bounds).all(|(&s, &b)| s as u128 <= b)
    }
}

/// `⌈N^{1/k}⌉`, computed exactly on integers.
pub fn threshold(n: usize, k: usize) -> usize {
    if n == 0 {
        return 1;
    }
    let k = k.max(1) as u32;
    let mut d = (n as f64).powf(1.0 / k as f64).floor().max(1.0) as usize;
    while (d as u128).pow(k) < n as u128 {
        d += 1;
    }
    while d > 1 && ((d - 1) as u128).pow(k) >= n as u128 {
        d -= 1;
    }
    d
}

/// `x1, …, x_{2k}`.
pub fn cycle_vars(k: usize) -> Vec<String> {
    (1..=2 * k).map(|i| format!("x{i}")).collect()
}

/// The Boolean query `C_{2k}` over `relation`.
pub fn even_cycle_query(relation: &str, k: usize) -> CQ {
    let vars = cycle_vars(k);
    let atoms = (0..2 * k)
        .map(|i| Atom::vars(relation, &[&vars[i], &vars[(i + 1) % (2 * k)]]))
        .collect();
    CQ::new(&format!("c{}", 2 * k), &[], atoms)
}

/// Recognises a Boolean query whose atoms, in order, form a directed cycle
/// of even length over one binary relation with distinct variables.
/// Returns the relation, `k`, and the renaming of its variables onto
/// `x1, …, x_{2k}`.
pub fn match_even_cycle(q: &CQ) -> Option<(String, usize, BTreeMap<String, String>)> {
    let m = q.atoms.len();
    if !q.is_boolean() || m == 0 || m % 2 == 1 {
        return None;
    }
    let rel = &q.atoms[0].relation;
    let mut seq = Vec::with_capacity(m);
    for (i, a) in q.atoms.iter().enumerate() {
        if &a.relation != rel || a.arity() != 2 {
            return None;
        }
        let (Term::Var(s), Term::Var(t)) = (&a.terms[0], &a.terms[1]) else {
            return None;
        };
        let next = &q.atoms[(i + 1) % m];
        if next.terms[0] != Term::Var(t.clone()) {
            return None;
        }
        seq.push(s.clone());
    }
    if seq.iter().collect::<BTreeSet<_>>().len() != m {
        return None;
    }
    let names = cycle_vars(m / 2);
    Some((rel.clone(), m / 2, seq.into_iter().zip(names).collect()))
}

fn check_binary(r: &Relation, k: usize) -> Result<()> {
    if r.schema().arity() != 2 {
        return Err(Error::Contract(format!("cycle query needs a binary relation, got arity {}", r.schema().arity())));
    }
    if k == 0 {
        return Err(Error::Contract("cycle length 2k needs k ≥ 1".into()));
    }
    Ok(())
}

fn out_degrees(r: &Relation) -> BTreeMap<&Value, usize> {
    let mut d = BTreeMap::new();
    for t in r.iter() {
        *d.entry(&t[0]).or_insert(0) += 1;
    }
    d
}

fn adjacency(r: &Relation, keep: impl Fn(&Tuple) -> bool) -> BTreeMap<&Value, Vec<&Value>> {
    let mut adj: BTreeMap<&Value, Vec<&Value>> = BTreeMap::new();
    for t in r.iter().filter(|t| keep(t)) {
        adj.entry(&t[0]).or_default().push(&t[1]);
    }
    adj
}

/// Pairs `(x1, x_{steps+1})` joined by walks of `steps` edges, with the
/// largest intermediate seen.
fn walk_pairs<'a>(adj: &BTreeMap<&'a Value, Vec<&'a Value>>, steps: usize) -> (BTreeSet<(&'a Value, &'a Value)>, usize) {
    let mut cur: BTreeSet<(&Value, &Value)> = adj.iter().flat_map(|(a, bs)| bs.iter().map(move |b| (*a, *b))).collect();
    let mut max = cur.len();
    for _ in 1..steps {
        let mut joined = 0usize;
        let mut next = BTreeSet::new();
        for &(a, b) in &cur {
            if let Some(cs) = adj.get(b) {
                joined += cs.len();
                next.extend(cs.iter().map(|c| (a, *c)));
            }
        }
        max = max.max(joined);
        cur = next;
    }
    (cur, max)
}

/// Decides `C_{2k}` on `r`.
pub fn eval_even_cycle(r: &Relation, k: usize) -> Result<(bool, CycleStats)> {
    check_binary(r, k)?;
    let n = r.len();
    let delta = threshold(n, k);
    let deg = out_degrees(r);
    let heavy: Vec<&Value> = deg.iter().filter(|(_, &d)| d >= delta).map(|(v, _)| *v).collect();
    let mut st = CycleStats {
        n,
        k,
        delta,
        heavy_hitters: heavy.len(),
        light_bound: n as u128 * (delta as u128).pow(k as u32 - 1),
        ..Default::default()
    };
    let full = adjacency(r, |_| true);
    // Heavy case: closed walks of length 2k starting at a heavy value.
    for &a in &heavy {
        st.heavy_checks += 1;
        let mut frontier: BTreeSet<&Value> = [a].into();
        for _ in 0..2 * k {
            frontier = frontier.iter().filter_map(|v| full.get(v)).flatten().copied().collect();
        }
        if frontier.contains(a) {
            st.found_heavy = true;
            return Ok((true, st));
        }
    }
    // Light case: both halves over edges between light values.
    let is_light = |v: &Value| deg.get(v).map_or(true, |&d| d < delta);
    let light = adjacency(r, |t| is_light(&t[0]) && is_light(&t[1]));
    let (q1, m1) = walk_pairs(&light, k);
    let (q2, m2) = walk_pairs(&light, k);
    st.light_max_intermediate = m1.max(m2);
    let flipped: Vec<(&Value, &Value)> = q2.iter().map(|&(b, a)| (a, b)).collect::<BTreeSet<_>>().into_iter().collect();
    let found = sorted_intersect(&q1.into_iter().collect::<Vec<_>>(), &flipped);
    st.found_light = found;
    Ok((found, st))
}

fn sorted_intersect<T: Ord>(a: &[T], b: &[T]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Full path tuples `(v_0, …, v_steps)` over `adj`, with the largest
/// intermediate seen.
fn full_paths(adj: &BTreeMap<&Value, Vec<&Value>>, steps: usize) -> (Vec<Vec<Value>>, usize) {
    let mut cur: Vec<Vec<Value>> = adj
        .iter()
        .flat_map(|(a, bs)| bs.iter().map(move |b| vec![(*a).clone(), (*b).clone()]))
        .collect();
    let mut max = cur.len();
    for _ in 1..steps {
        let mut next = Vec::new();
        for p in &cur {
            if let Some(cs) = adj.get(p.last().expect("non-empty")) {
                for c in cs {
                    let mut q = p.clone();
                    q.push((*c).clone());
                    next.push(q);
                }
            }
        }
        max = max.max(next.len());
        cur = next;
    }
    (cur, max)
}

/// Decides `(C_{2k}, I)` for `I` over `x1, …, x_{2k}`.
///
/// Heavy case: for every heavy value `a` and every position `i`, the
/// pinned acyclic query with `x_i = a` runs through the transformed plan.
/// Light case: `q1^f` over `x1..x_{k+1}` and `q2^f` over
/// `x_{k+1}..x_{2k}, x1`, filtered by their own inequalities, H-projected
/// onto `(x1, x_{k+1})` with the crossing inequalities as edges, then
/// intersected, checking the crossing inequalities on witness pairs.
pub fn eval_even_cycle_ineq(r: &Relation, k: usize, ineqs: &InequalitySet) -> Result<(bool, CycleStats)> {
    check_binary(r, k)?;
    if ineqs.has_constants() {
        return Err(Error::Contract("cycle inequalities must be between variables".into()));
    }
    let vars = cycle_vars(k);
    if let Some(v) = ineqs.variables().into_iter().find(|v| !vars.contains(v)) {
        return Err(Error::Scope(format!("inequality variable {v} is not one of x1..x{}", 2 * k)));
    }
    let n = r.len();
    let delta = threshold(n, k);
    let deg = out_degrees(r);
    let heavy: Vec<Value> = deg.iter().filter(|(_, &d)| d >= delta).map(|(v, _)| (*v).clone()).collect();
    let mut st = CycleStats {
        n,
        k,
        delta,
        heavy_hitters: heavy.len(),
        light_bound: n as u128 * (delta as u128).pow(k as u32 - 1),
        ..Default::default()
    };

    let rel_name = "R";
    let db = Database::new().with(rel_name, r.clone());
    for a in &heavy {
        for pin in 0..2 * k {
            st.heavy_checks += 1;
            let term = |i: usize| {
                if i == pin {
                    Term::Const(a.clone())
                } else {
                    Term::var(&vars[i])
                }
            };
            let atoms: Vec<Atom> = (0..2 * k).map(|i| Atom::new(rel_name, vec![term(i), term((i + 1) % (2 * k))])).collect();
            let q = CQ::new("pinned", &[], atoms);
            let mut pi = InequalitySet::new();
            for (x, y) in ineqs.pairs() {
                match (x == vars[pin], y == vars[pin]) {
                    (true, _) => pi.add_const(y, a.clone()),
                    (_, true) => pi.add_const(x, a.clone()),
                    _ => {
                        pi.add(x, y);
                    }
                }
            }
            if !eval_transformed_plan(&q, &pi, &db, None)?.is_empty() {
                st.found_heavy = true;
                return Ok((true, st));
            }
        }
    }

    let is_light = |v: &Value| deg.get(v).map_or(true, |&d| d < delta);
    let light = adjacency(r, |t| is_light(&t[0]) && is_light(&t[1]));
    // Half 1 covers x1..x_{k+1}; half 2 covers x_{k+1}..x_{2k}, x1.
    let half1: Vec<String> = vars[..=k].to_vec();
    let mut half2: Vec<String> = vars[k..].to_vec();
    half2.push(vars[0].clone());
    let inner1: BTreeSet<&str> = vars[1..k].iter().map(String::as_str).collect();
    let inner2: BTreeSet<&str> = vars[k + 1..].iter().map(String::as_str).collect();
    let set1: BTreeSet<String> = half1.iter().cloned().collect();
    let set2: BTreeSet<String> = half2.iter().cloned().collect();
    let i1 = ineqs.restrict(&set1);
    let i2 = ineqs.restrict(&set2);
    let i12 = ineqs.difference(&i1.union(&i2));
    let cross: Vec<(String, String)> = i12
        .pairs()
        .map(|(a, b)| if inner1.contains(a) { (a.to_string(), b.to_string()) } else { (b.to_string(), a.to_string()) })
        .collect();

    let (p1, m1) = full_paths(&light, k);
    let (p2, m2) = full_paths(&light, k);
    st.light_max_intermediate = m1.max(m2);
    let build = |rows: Vec<Vec<Value>>, names: &[String], own: &InequalitySet| -> Result<Relation> {
        let schema = Schema::new(names.iter().cloned())?;
        let rel = Relation::new(schema, rows.into_iter().map(Tuple))?;
        let s = rel.schema().clone();
        Ok(rel.filter(|t| own.satisfied_by(|v| s.position(v).map(|p| &t[p]))))
    };
    let q1f = build(p1, &half1, &i1)?;
    let q2f = build(p2, &half2, &i2)?;

    let x1 = vec![vars[0].clone(), vars[k].clone()];
    let x2 = vec![vars[k].clone(), vars[0].clone()];
    let names = |s: &BTreeSet<&str>| -> Vec<String> { vars.iter().filter(|v| s.contains(v.as_str())).cloned().collect() };
    let h1 = BipartiteIneqGraph::from_names(&names(&inner1), &names(&inner2), &cross)?;
    let rev: Vec<(String, String)> = cross.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
    let h2 = BipartiteIneqGraph::from_names(&names(&inner2), &names(&inner1), &rev)?;
    let e1 = h_project(&q1f, &x1, &h1)?;
    let e2 = h_project(&q2f, &x2, &h2)?;
    st.projected = [e1.len(), e2.len()];
    st.projected_bounds = [n as u128 * h1.phi(), n as u128 * h2.phi()];

    // Group witnesses by (x1, x_{k+1}) and test the crossing inequalities.
    let group = |rel: &Relation, key: &[String]| -> Result<BTreeMap<(Value, Value), Vec<Tuple>>> {
        let s = rel.schema();
        let (a, b) = (s.index_of(&key[0])?, s.index_of(&key[1])?);
        let mut g: BTreeMap<(Value, Value), Vec<Tuple>> = BTreeMap::new();
        for t in rel.iter() {
            g.entry((t[a].clone(), t[b].clone())).or_default().push(t.clone());
        }
        Ok(g)
    };
    let g1 = group(&e1, &x1)?;
    let g2 = group(&e2, &[vars[0].clone(), vars[k].clone()])?;
    let (s1, s2) = (e1.schema().clone(), e2.schema().clone());
    let pos: Vec<(usize, usize)> = cross
        .iter()
        .map(|(a, b)| Ok((s1.index_of(a)?, s2.index_of(b)?)))
        .collect::<Result<_>>()?;
    for (key, w1) in &g1 {
        if let Some(w2) = g2.get(key) {
            if w1.iter().any(|t1| w2.iter().any(|t2| pos.iter().all(|&(a, b)| t1[a] != t2[b]))) {
                st.found_light = true;
                return Ok((true, st));
            }
        }
    }
    Ok((false, st))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategies::eval_oracle;

    fn graph(edges: &[(i64, i64)]) -> Relation {
        Relation::new(Schema::new(["src", "dst"]).unwrap(), edges.iter().map(|&(a, b)| Tuple::ints(&[a, b]))).unwrap()
    }

    #[test]
    fn thresholds() {
        assert_eq!(threshold(100, 2), 10);
        assert_eq!(threshold(101, 2), 11);
        assert_eq!(threshold(8, 3), 2);
        assert_eq!(threshold(9, 3), 3);
        assert_eq!(threshold(5, 1), 5);
    }

    #[test]
    fn cycles_and_dags() {
        let c4 = graph(&[(1, 2), (2, 3), (3, 4), (4, 1)]);
        assert!(eval_even_cycle(&c4, 2).unwrap().0);
        let dag = graph(&[(1, 2), (2, 3), (1, 3), (3, 4)]);
        assert!(!eval_even_cycle(&dag, 2).unwrap().0);
        assert!(!eval_even_cycle(&dag, 1).unwrap().0);
        let c6 = graph(&[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1)]);
        assert!(eval_even_cycle(&c6, 3).unwrap().0);
        assert!(!eval_even_cycle(&c6, 2).unwrap().0);
    }

    #[test]
    fn inequalities_force_distinct_vertices() {
        let k = 2;
        let vars = cycle_vars(k);
        let mut all = InequalitySet::new();
        for (i, a) in vars.iter().enumerate() {
            for b in &vars[i + 1..] {
                all.add(a, b);
            }
        }
        let c4 = graph(&[(1, 2), (2, 3), (3, 4), (4, 1)]);
        assert!(eval_even_cycle_ineq(&c4, k, &all).unwrap().0);
        // A 2-cycle walked twice is a closed 4-walk but not a simple 4-cycle.
        let back = graph(&[(1, 2), (2, 1)]);
        assert!(eval_even_cycle(&back, k).unwrap().0);
        assert!(!eval_even_cycle_ineq(&back, k, &all).unwrap().0);
        let q = even_cycle_query("R", k);
        let db = Database::new().with("R", back.clone());
        assert!(eval_oracle(&q, &all, &db).unwrap().is_empty());
        assert_eq!(eval_even_cycle_ineq(&c4, k, &InequalitySet::new()).unwrap().0, eval_even_cycle(&c4, k).unwrap().0);
    }

    #[test]
    fn matcher() {
        let q = even_cycle_query("E", 3);
        let (rel, k, rename) = match_even_cycle(&q).unwrap();
        assert_eq!((rel.as_str(), k), ("E", 3));
        assert_eq!(rename["x1"], "x1");
        let odd = CQ::new("t", &[], vec![Atom::vars("E", &["a", "b"]), Atom::vars("E", &["b", "c"]), Atom::vars("E", &["c", "a"])]);
        assert!(match_even_cycle(&odd).is_none());
    }
}
