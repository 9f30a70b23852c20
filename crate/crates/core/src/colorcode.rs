//! Color coding for `(q, I)`: hash the active domain into `p` colors,
//! enumerate the proper colorings of `G^I`, and take the union of the plain
//! query over every color-consistent subinstance.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graphs::{ineq_graph, UGraph};
use crate::query::{preprocess_local_inequalities, Atom, InequalitySet, Term, CQ};
use crate::relcore::{Database, Relation, Schema, Value};

/// Cap on the number of functions an exhaustive family may hold.
pub const MAX_EXHAUSTIVE_FUNCTIONS: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyMode {
    Exhaustive,
    Random { seed: u64 },
}

/// Functions `dom → [p]`, each stored as one color per domain value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HashFamily {
    pub p: usize,
    pub domain: Vec<Value>,
    pub functions: Vec<Vec<usize>>,
    pub mode: FamilyMode,
    index: BTreeMap<Value, usize>,
}

impl HashFamily {
    fn build(domain: &[Value], p: usize, functions: Vec<Vec<usize>>, mode: FamilyMode) -> Self {
        let domain: Vec<Value> = domain.to_vec();
        let index = domain.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        HashFamily {
            p,
            domain,
            functions,
            mode,
            index,
        }
    }

    /// One representative of every function `dom → [p]` up to renaming of
    /// colors (colors appear in first-use order). The set of proper
    /// colorings is closed under renaming, so the union computed with these
    /// equals the union over all `p^|dom|` functions.
    pub fn exhaustive(domain: &[Value], p: usize) -> Result<Self> {
        let p = p.max(1);
        let n = domain.len();
        let mut functions = Vec::new();
        let mut cur = Vec::with_capacity(n);
        fn go(n: usize, p: usize, used: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) -> bool {
            if cur.len() == n {
                out.push(cur.clone());
                return out.len() <= MAX_EXHAUSTIVE_FUNCTIONS;
            }
            for c in 0..(used + 1).min(p) {
                cur.push(c);
                let ok = go(n, p, used.max(c + 1), cur, out);
                cur.pop();
                if !ok {
                    return false;
                }
            }
            true
        }
        if !go(n, p, 0, &mut cur, &mut functions) {
            return Err(Error::Guard(format!(
                "exhaustive family over {n} values exceeds {MAX_EXHAUSTIVE_FUNCTIONS} functions; use the random family"
            )));
        }
        Ok(Self::build(domain, p, functions, FamilyMode::Exhaustive))
    }

    /// Literally every function `dom → [p]`.
    pub fn all_functions(domain: &[Value], p: usize) -> Result<Self> {
        let p = p.max(1);
        let total = (p as f64).powi(domain.len() as i32);
        if total > MAX_EXHAUSTIVE_FUNCTIONS as f64 {
            return Err(Error::Guard(format!("{total} functions exceed {MAX_EXHAUSTIVE_FUNCTIONS}")));
        }
        let mut functions = vec![Vec::new()];
        for _ in domain {
            functions = functions
                .into_iter()
                .flat_map(|f: Vec<usize>| {
                    (0..p).map(move |c| {
                        let mut g = f.clone();
                        g.push(c);
                        g
                    })
                })
                .collect();
        }
        Ok(Self::build(domain, p, functions, FamilyMode::Exhaustive))
    }

    /// `reps` uniform random functions from a seeded generator.
    pub fn random(domain: &[Value], p: usize, reps: usize, seed: u64) -> Self {
        let p = p.max(1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let functions = (0..reps).map(|_| domain.iter().map(|_| rng.gen_range(0..p)).collect()).collect();
        Self::build(domain, p, functions, FamilyMode::Random { seed })
    }

    /// Repetitions so that a fixed answer survives every trial with
    /// probability at most `failure`, using the `k!/k^k ≥ e^{-k}` bound.
    pub fn reps_for(k: usize, failure: f64) -> usize {
        let k = k.max(1) as i32;
        ((1.0 / failure).ln() * std::f64::consts::E.powi(k)).ceil().max(1.0) as usize
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// Color of `v` under function `f`; `None` outside the domain.
    pub fn color(&self, f: usize, v: &Value) -> Option<usize> {
        self.index.get(v).map(|&i| self.functions[f][i])
    }

    pub fn covers(&self, values: &[Value]) -> bool {
        values.iter().all(|v| self.index.contains_key(v))
    }
}

/// Colors of the inequality-graph variables.
pub type Coloring = BTreeMap<String, usize>;

/// Proper colorings of `gi` with colors `0..p`, without duplicates.
pub fn valid_colorings(gi: &UGraph, p: usize) -> Vec<Coloring> {
    let n = gi.vertex_count();
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::with_capacity(n);
    fn go(gi: &UGraph, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Coloring>) {
        let v = cur.len();
        if v == gi.vertex_count() {
            out.push(cur.iter().enumerate().map(|(i, &c)| (gi.name(i).to_string(), c)).collect());
            return;
        }
        for c in 0..p {
            if gi.neighbors(v).iter().all(|&w| w >= v || cur[w] != c) {
                cur.push(c);
                go(gi, p, cur, out);
                cur.pop();
            }
        }
    }
    if p > 0 || n == 0 {
        go(gi, p, &mut cur, &mut out);
    }
    out
}

/// Keeps the tuples of each relation whose hashed value at every position
/// bound to a colored variable equals that variable's color.
/// `provenance` maps `(relation, position)` to the variable there.
pub fn subinstance(
    db: &Database,
    c: &Coloring,
    h: &dyn Fn(&Value) -> Option<usize>,
    provenance: &BTreeMap<(String, usize), String>,
) -> Database {
    let mut out = Database::new();
    for (name, rel) in db.relations() {
        let checks: Vec<(usize, usize)> = provenance
            .iter()
            .filter(|((r, _), _)| r == name)
            .filter_map(|((_, pos), var)| c.get(var).map(|&col| (*pos, col)))
            .collect();
        let kept = if checks.is_empty() {
            rel.clone()
        } else {
            rel.filter(|t| checks.iter().all(|&(pos, col)| h(&t[pos]) == Some(col)))
        };
        out.insert(name.clone(), kept);
    }
    out
}

/// Work done by one color-coding run.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct ColorCodeStats {
    pub functions: usize,
    pub colorings: usize,
    /// `(h, c)` pairs whose subinstance had no empty relation.
    pub inner_calls: usize,
}

/// Query with one private relation copy `{rel}#{i}` per atom, plus the
/// matching database and the position → variable map.
fn separate_atoms(q: &CQ, db: &Database) -> Result<(CQ, Database, BTreeMap<(String, usize), String>)> {
    let mut atoms = Vec::new();
    let mut out = Database::new();
    let mut prov = BTreeMap::new();
    for (i, a) in q.atoms.iter().enumerate() {
        let name = format!("{}#{}", a.relation, i + 1);
        out.insert(name.clone(), db.relation(&a.relation)?.clone());
        for (pos, t) in a.terms.iter().enumerate() {
            if let Term::Var(v) = t {
                prov.insert((name.clone(), pos), v.clone());
            }
        }
        atoms.push(Atom::new(&name, a.terms.clone()));
    }
    let sq = CQ {
        name: q.name.clone(),
        head: q.head.clone(),
        atoms,
    };
    Ok((sq, out, prov))
}

pub type Inner<'a> = &'a dyn Fn(&CQ, &Database) -> Result<Relation>;

/// `∪_{h ∈ F} ∪_{c ∈ C(G^I)} inner(q, D[c,h])`. Local and constant
/// inequalities are applied to the database first. When `family` is `None`
/// an exhaustive family over the active domain with `p = max(k, 1)` is used.
pub fn eval_colorcoding(
    q: &CQ,
    ineqs: &InequalitySet,
    db: &Database,
    family: Option<&HashFamily>,
    inner: Inner<'_>,
) -> Result<(Relation, ColorCodeStats)> {
    let pre = preprocess_local_inequalities(q, ineqs, db)?;
    let gi = ineq_graph(&pre.ineqs);
    let k = gi.vertex_count();
    let (sq, sdb, prov) = separate_atoms(&pre.query, &pre.db)?;
    let owned;
    let family = match family {
        Some(f) => f,
        None => {
            owned = HashFamily::exhaustive(&sdb.active_domain(), k.max(1))?;
            &owned
        }
    };
    let schema = Schema::new(q.head.iter().cloned())?;
    let mut stats = ColorCodeStats {
        functions: family.len(),
        ..Default::default()
    };
    if k == 0 {
        let r = inner(&sq, &sdb)?;
        stats.inner_calls = 1;
        return Ok((r.renamed(schema)?, stats));
    }
    if !family.covers(&sdb.active_domain()) {
        return Err(Error::Contract("hash family does not cover the active domain".into()));
    }
    let colorings = valid_colorings(&gi, family.p);
    stats.colorings = colorings.len();
    let mut acc: BTreeSet<_> = BTreeSet::new();
    for f in 0..family.len() {
        let h = |v: &Value| family.color(f, v);
        for c in &colorings {
            let sub = subinstance(&sdb, c, &h, &prov);
            if sub.relations().any(|(_, r)| r.is_empty()) {
                continue;
            }
            stats.inner_calls += 1;
            acc.extend(inner(&sq, &sub)?.tuples().iter().cloned());
        }
    }
    Ok((Relation::new(schema, acc)?, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plan::eval_cq;
    use crate::query::parse_query;
    use crate::relcore::Tuple;

    fn ints(v: &[i64]) -> Vec<Value> {
        v.iter().map(|&i| Value::Int(i)).collect()
    }

    #[test]
    fn coloring_counts() {
        let edge = UGraph::from_edges(&["x", "y"], &[(0, 1)]);
        assert_eq!(valid_colorings(&edge, 2).len(), 2);
        let tri = UGraph::from_edges(&["x", "y", "z"], &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(valid_colorings(&tri, 2).len(), 0);
        assert_eq!(valid_colorings(&UGraph::from_edges(&["a", "b", "c"], &[]), 2).len(), 8);
    }

    #[test]
    fn family_sizes() {
        let d = ints(&[1, 2, 3, 4]);
        assert_eq!(HashFamily::all_functions(&d, 2).unwrap().len(), 16);
        // Partitions of 4 values into at most 2 blocks.
        assert_eq!(HashFamily::exhaustive(&d, 2).unwrap().len(), 8);
        let r = HashFamily::random(&d, 3, 5, 7);
        assert_eq!(r, HashFamily::random(&d, 3, 5, 7));
        assert!(r.functions.iter().flatten().all(|&c| c < 3));
    }

    #[test]
    fn subinstance_filters() {
        let schema = Schema::new(["a"]).unwrap();
        let db = Database::new().with("R", Relation::new(schema, [Tuple::ints(&[1]), Tuple::ints(&[2])]).unwrap());
        let prov: BTreeMap<_, _> = [(("R".to_string(), 0), "x".to_string())].into();
        let c: Coloring = [("x".to_string(), 1)].into();
        let identity = |v: &Value| match v {
            Value::Int(i) => Some(*i as usize),
            _ => None,
        };
        let sub = subinstance(&db, &c, &identity, &prov);
        assert_eq!(sub.get("R").unwrap().tuples(), &[Tuple::ints(&[1])]);
        let untouched = subinstance(&db, &Coloring::new(), &identity, &prov);
        assert_eq!(untouched, db);
    }

    #[test]
    fn path_with_equal_endpoints_only() {
        let (q, i) = parse_query("p() :- R(x1,x2), R(x2,x3), x1 != x3.").unwrap();
        let schema = Schema::new(["a", "b"]).unwrap();
        let r = Relation::new(schema, [Tuple::ints(&[1, 2]), Tuple::ints(&[2, 1])]).unwrap();
        let db = Database::new().with("R", r);
        let (out, _) = eval_colorcoding(&q, &i, &db, None, &eval_cq).unwrap();
        assert!(out.is_empty());
        let (plain, _) = eval_colorcoding(&q, &InequalitySet::new(), &db, None, &eval_cq).unwrap();
        assert_eq!(plain.len(), 1);
    }
}
