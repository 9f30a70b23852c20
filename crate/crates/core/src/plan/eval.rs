use std::collections::{BTreeMap, BTreeSet};

use super::{NodePath, Plan};
use crate::error::{Error, Result};
use crate::ineqcore::{h_project, BipartiteIneqGraph};
use crate::relcore::{join, product, project, select, Database, Relation, Schema, Tuple, Value};

/// Counters gathered while evaluating a plan.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvalStats {
    /// Output cardinality of every node, keyed by path.
    pub sizes: BTreeMap<NodePath, usize>,
    /// Base tuples read by scans.
    pub tuples_scanned: usize,
}

impl EvalStats {
    pub fn max_intermediate(&self) -> usize {
        self.sizes.values().copied().max().unwrap_or(0)
    }
}

pub fn eval_plan(plan: &Plan, db: &Database) -> Result<Relation> {
    eval_plan_with_stats(plan, db).map(|(r, _)| r)
}

pub fn eval_plan_with_stats(plan: &Plan, db: &Database) -> Result<(Relation, EvalStats)> {
    let mut stats = EvalStats::default();
    let mut path = Vec::new();
    let r = eval_node(plan, db, &mut path, &mut stats)?;
    Ok((r, stats))
}

fn as_plan_error(e: Error) -> Error {
    match e {
        Error::Schema(m) => Error::Plan(m),
        other => other,
    }
}

fn eval_node(plan: &Plan, db: &Database, path: &mut NodePath, stats: &mut EvalStats) -> Result<Relation> {
    let mut child = |i: usize, c: &Plan, stats: &mut EvalStats| -> Result<Relation> {
        path.push(i);
        let r = eval_node(c, db, path, stats);
        path.pop();
        r
    };
    let out = match plan {
        Plan::Scan { relation, attrs, .. } => {
            let base = db.relation(relation)?;
            if base.schema().arity() != attrs.len() {
                return Err(Error::Plan(format!(
                    "relation {relation} has arity {}, scan expects {}",
                    base.schema().arity(),
                    attrs.len()
                )));
            }
            stats.tuples_scanned += base.len();
            base.renamed(Schema::new(attrs.iter().cloned()).map_err(as_plan_error)?)?
        }
        Plan::Select { preds, child: c } => {
            let r = child(0, c, stats)?;
            select(&r, preds).map_err(as_plan_error)?
        }
        Plan::Project { attrs, child: c } => {
            let r = child(0, c, stats)?;
            project(&r, attrs).map_err(as_plan_error)?
        }
        Plan::HProject { attrs, graph, child: c } => {
            let r = child(0, c, stats)?;
            h_project(&r, attrs, graph)?
        }
        Plan::Join { on, left, right } => {
            let l = child(0, left, stats)?;
            let r = child(1, right, stats)?;
            join(&l, &r, on).map_err(as_plan_error)?
        }
        Plan::Product { left, right } => {
            let l = child(0, left, stats)?;
            let r = child(1, right, stats)?;
            product(&l, &r).map_err(as_plan_error)?
        }
    };
    stats.sizes.insert(path.clone(), out.len());
    Ok(out)
}

/// Brute-force test of `before ≡^H_X after`: for every X-value present in
/// either relation and every tuple over the right side of `h` drawn from
/// `domain`, both groups accept or both reject.
///
/// Returns the first counterexample `(group, tuple)` found.
pub fn check_h_equivalence(
    before: &Relation,
    after: &Relation,
    x: &[String],
    h: &BipartiteIneqGraph,
    domain: &[Value],
) -> Result<Option<(Tuple, Tuple)>> {
    let positions = |r: &Relation, names: &[String]| -> Result<Vec<usize>> {
        names.iter().map(|a| r.schema().index_of(a)).collect()
    };
    let (bx, ax) = (positions(before, x)?, positions(after, x)?);
    let (bl, al) = (positions(before, h.left())?, positions(after, h.left())?);

    let group = |r: &Relation, xp: &[usize], lp: &[usize]| -> BTreeMap<Tuple, Vec<Tuple>> {
        let mut g: BTreeMap<Tuple, Vec<Tuple>> = BTreeMap::new();
        for t in r.iter() {
            g.entry(t.pick(xp)).or_default().push(t.pick(lp));
        }
        g
    };
    let gb = group(before, &bx, &bl);
    let ga = group(after, &ax, &al);
    let keys: BTreeSet<&Tuple> = gb.keys().chain(ga.keys()).collect();
    let ell = h.right().len();
    if ell > 0 && domain.is_empty() {
        return Ok(None);
    }
    let empty = Vec::new();
    let accepts = |rows: &[Tuple], t: &[Value]| rows.iter().any(|s| h.edges().iter().all(|&(i, j)| s[i] != t[j]));

    for key in keys {
        let (rb, ra) = (gb.get(key).unwrap_or(&empty), ga.get(key).unwrap_or(&empty));
        let mut idx = vec![0usize; ell];
        loop {
            let t: Vec<Value> = idx.iter().map(|&i| domain[i].clone()).collect();
            if accepts(rb, &t) != accepts(ra, &t) {
                return Ok(Some((key.clone(), Tuple(t))));
            }
            // Odometer over domain^ell.
            let mut k = 0;
            while k < ell {
                idx[k] += 1;
                if idx[k] < domain.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == ell {
                break;
            }
        }
    }
    Ok(None)
}
