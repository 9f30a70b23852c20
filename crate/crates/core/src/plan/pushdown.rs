use std::collections::{BTreeMap, BTreeSet};

use super::pullup::{pull_up_projections, PullUp};
use super::{EvalStats, NodePath, Plan};
use crate::error::{Error, Result};
use crate::ineqcore::BipartiteIneqGraph;
use crate::query::{InequalitySet, CQ};
use crate::relcore::{Predicate, Value};

/// Inequalities restated over plan attributes, each placed at the P0 node
/// where both endpoints first meet.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AttrInequalities {
    pub pairs: Vec<(String, String)>,
    pub constants: Vec<(String, Value)>,
    placement: BTreeMap<NodePath, Vec<Predicate>>,
}

impl AttrInequalities {
    fn within(&self, attrs: &BTreeSet<&str>) -> Vec<Predicate> {
        let mut out: Vec<Predicate> = self
            .pairs
            .iter()
            .filter(|(a, b)| attrs.contains(a.as_str()) && attrs.contains(b.as_str()))
            .map(|(a, b)| Predicate::Ne(a.clone(), b.clone()))
            .collect();
        out.extend(
            self.constants
                .iter()
                .filter(|(a, _)| attrs.contains(a.as_str()))
                .map(|(a, c)| Predicate::NeConst(a.clone(), c.clone())),
        );
        out
    }

    /// Pairs `(a, b)` with `a ∈ s1`, `b ∈ s2`, oriented that way.
    fn cross(&self, s1: &BTreeSet<&str>, s2: &BTreeSet<&str>) -> BTreeSet<(String, String)> {
        let mut out = BTreeSet::new();
        for (a, b) in &self.pairs {
            if s1.contains(a.as_str()) && s2.contains(b.as_str()) {
                out.insert((a.clone(), b.clone()));
            }
            if s1.contains(b.as_str()) && s2.contains(a.as_str()) {
                out.insert((b.clone(), a.clone()));
            }
        }
        out
    }
}

fn common_prefix(a: &[usize], b: &[usize]) -> NodePath {
    a.iter().zip(b).take_while(|(x, y)| x == y).map(|(x, _)| *x).collect()
}

/// Maps variable inequalities to attribute inequalities over `p0`. Among
/// the attributes of the two variables, the pair meeting deepest in the
/// plan wins; ties go to the earliest pair in scan order.
pub fn attribute_inequalities(p0: &Plan, ineqs: &InequalitySet) -> Result<AttrInequalities> {
    let mut scan_of: BTreeMap<String, NodePath> = BTreeMap::new();
    let mut attrs_of: BTreeMap<String, Vec<String>> = BTreeMap::new();
    p0.visit(&mut |n, path| {
        if let Plan::Scan { attrs, vars, .. } = n {
            for (a, v) in attrs.iter().zip(vars) {
                scan_of.insert(a.clone(), path.clone());
                if let Some(v) = v {
                    attrs_of.entry(v.clone()).or_default().push(a.clone());
                }
            }
        }
    });
    let lookup = |v: &str| {
        attrs_of
            .get(v)
            .ok_or_else(|| Error::Transform(format!("variable {v} is not bound by any scan")))
    };
    let mut out = AttrInequalities::default();
    for (x, y) in ineqs.pairs() {
        let mut best: Option<(usize, &String, &String)> = None;
        for a in lookup(x)? {
            for b in lookup(y)? {
                let depth = common_prefix(&scan_of[a], &scan_of[b]).len();
                if best.map_or(true, |(d, _, _)| depth > d) {
                    best = Some((depth, a, b));
                }
            }
        }
        let (_, a, b) = best.expect("variables have attributes");
        let at = common_prefix(&scan_of[a], &scan_of[b]);
        out.placement
            .entry(at)
            .or_default()
            .push(Predicate::Ne(a.clone(), b.clone()));
        out.pairs.push((a.clone(), b.clone()));
    }
    for (x, c) in ineqs.constants() {
        let a = &lookup(x)?[0];
        out.placement
            .entry(scan_of[a].clone())
            .or_default()
            .push(Predicate::NeConst(a.clone(), c.clone()));
        out.constants.push((a.clone(), c.clone()));
    }
    Ok(out)
}

/// One reverse rule application, kept for equivalence testing.
#[derive(Clone, Debug)]
pub struct PushStep {
    /// P0 node the step rewrote.
    pub path: NodePath,
    /// Grouping attributes and graph of the context H-projection.
    pub attrs: Vec<String>,
    pub graph: BipartiteIneqGraph,
    /// `Π^H_X(σ_I(S))` over the untouched P0 subtree.
    pub before: Plan,
    /// The fully rewritten subtree.
    pub after: Plan,
    /// The subtree after this rule only, children still in `before` form.
    pub single: Plan,
}

/// Output of [`transform`].
#[derive(Clone, Debug)]
pub struct Transformed {
    pub plan: Plan,
    pub pullup: PullUp,
    pub ineqs: AttrInequalities,
    pub steps: Vec<PushStep>,
    /// Original-plan node each transformed node stands in for.
    pub origins: BTreeMap<NodePath, NodePath>,
}

struct Built {
    plan: Plan,
    origins: Vec<(NodePath, NodePath)>,
}

impl Built {
    fn leaf(plan: Plan, origin: NodePath) -> Built {
        Built {
            plan,
            origins: vec![(Vec::new(), origin)],
        }
    }

    fn shifted(origins: Vec<(NodePath, NodePath)>, i: usize) -> impl Iterator<Item = (NodePath, NodePath)> {
        origins.into_iter().map(move |(mut p, o)| {
            p.insert(0, i);
            (p, o)
        })
    }

    fn unary(self, origin: NodePath, f: impl FnOnce(Box<Plan>) -> Plan) -> Built {
        let mut origins = vec![(Vec::new(), origin)];
        origins.extend(Built::shifted(self.origins, 0));
        Built {
            plan: f(Box::new(self.plan)),
            origins,
        }
    }

    fn binary(l: Built, r: Built, origin: NodePath, f: impl FnOnce(Box<Plan>, Box<Plan>) -> Plan) -> Built {
        let mut origins = vec![(Vec::new(), origin)];
        origins.extend(Built::shifted(l.origins, 0));
        origins.extend(Built::shifted(r.origins, 1));
        Built {
            plan: f(Box::new(l.plan), Box::new(r.plan)),
            origins,
        }
    }
}

type Edges = BTreeSet<(String, String)>;

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Full,
    Single,
}

struct Pusher<'a> {
    pu: &'a PullUp,
    ineqs: &'a AttrInequalities,
    order: BTreeMap<String, usize>,
    steps: Vec<PushStep>,
}

fn set_of(v: &[String]) -> BTreeSet<&str> {
    v.iter().map(String::as_str).collect()
}

impl<'a> Pusher<'a> {
    /// `H = (att0 \ x, right endpoints of E, E restricted to that left side)`.
    fn graph(&self, att0: &[String], x: &[String], edges: &Edges) -> BipartiteIneqGraph {
        let xs = set_of(x);
        let left: Vec<String> = att0.iter().filter(|a| !xs.contains(a.as_str())).cloned().collect();
        let ls = set_of(&left);
        let kept: Vec<&(String, String)> = edges.iter().filter(|(a, _)| ls.contains(a.as_str())).collect();
        let mut right: Vec<String> = kept.iter().map(|(_, b)| b.clone()).collect::<BTreeSet<_>>().into_iter().collect();
        right.sort_by_key(|a| self.order.get(a).copied().unwrap_or(usize::MAX));
        let edges: Vec<(usize, usize)> = kept
            .iter()
            .map(|(a, b)| {
                (
                    left.iter().position(|l| l == a).unwrap(),
                    right.iter().position(|r| r == b).unwrap(),
                )
            })
            .collect();
        BipartiteIneqGraph::new(left, right, edges).expect("sides are disjoint by construction")
    }

    fn node(&self, path: &[usize]) -> &'a Plan {
        self.pu.p0.at(path).expect("path from the pull-up")
    }

    fn before_expr(&self, path: &[usize], edges: &Edges) -> Plan {
        let node = self.node(path);
        let att0 = node.base_attrs();
        let x = &self.pu.final_x[path];
        let preds = self.ineqs.within(&set_of(&att0));
        let mut p = node.clone();
        if !preds.is_empty() {
            p = Plan::select(preds, p);
        }
        if set_of(x) != set_of(&att0) {
            p = Plan::HProject {
                attrs: x.clone(),
                graph: self.graph(&att0, x, edges),
                child: Box::new(p),
            };
        }
        p
    }

    fn child(&mut self, path: &[usize], i: usize, edges: &Edges, mode: Mode) -> Built {
        let mut cp = path.to_vec();
        cp.push(i);
        match mode {
            Mode::Full => self.gen(&cp, edges, Mode::Full),
            Mode::Single => Built::leaf(self.before_expr(&cp, edges), Vec::new()),
        }
    }

    fn gen(&mut self, path: &[usize], edges: &Edges, mode: Mode) -> Built {
        let node = self.node(path);
        let att0 = node.base_attrs();
        let core_x = self.pu.core_x[path].clone();
        let origin = self.pu.origins[path].clone();
        let placed = self.ineqs.placement.get(path).cloned().unwrap_or_default();

        let mut built = match node {
            Plan::Scan { .. } => {
                let b = Built::leaf(node.clone(), origin.clone());
                if placed.is_empty() {
                    b
                } else {
                    b.unary(origin.clone(), |c| Plan::Select { preds: placed, child: c })
                }
            }
            Plan::Select { preds, .. } => {
                let xs = set_of(&core_x);
                let inner: Edges = edges.iter().filter(|(a, _)| !xs.contains(a.as_str())).cloned().collect();
                let c = self.child(path, 0, &inner, mode);
                c.unary(origin.clone(), |c| Plan::Select { preds: preds.clone(), child: c })
            }
            Plan::Join { left, right, .. } | Plan::Product { left, right } => {
                let (z1, z2) = (left.base_attrs(), right.base_attrs());
                let mut lp = path.to_vec();
                lp.push(0);
                let mut rp = path.to_vec();
                rp.push(1);
                let (x1, x2) = (&self.pu.final_x[&lp], &self.pu.final_x[&rp]);
                let out1: Vec<String> = z1.iter().filter(|a| !x1.contains(a)).cloned().collect();
                let out2: Vec<String> = z2.iter().filter(|a| !x2.contains(a)).cloned().collect();
                let side_edges = |out: &[String], other: &[String]| -> Edges {
                    let os = set_of(out);
                    let mut e: Edges = edges.iter().filter(|(a, _)| os.contains(a.as_str())).cloned().collect();
                    e.extend(self.ineqs.cross(&os, &set_of(other)));
                    e
                };
                let (e1, e2) = (side_edges(&out1, &z2), side_edges(&out2, &z1));
                let l = self.child(path, 0, &e1, mode);
                let r = self.child(path, 1, &e2, mode);
                let mut b = match node {
                    Plan::Join { on, .. } => Built::binary(l, r, origin.clone(), |l, r| Plan::Join {
                        on: on.clone(),
                        left: l,
                        right: r,
                    }),
                    _ => Built::binary(l, r, origin.clone(), |l, r| Plan::Product { left: l, right: r }),
                };
                if !placed.is_empty() {
                    b = b.unary(origin.clone(), |c| Plan::Select { preds: placed, child: c });
                }
                if set_of(&core_x) != set_of(&att0) {
                    let graph = self.graph(&att0, &core_x, edges);
                    b = b.unary(origin.clone(), |c| Plan::HProject {
                        attrs: core_x.clone(),
                        graph,
                        child: c,
                    });
                }
                b
            }
            Plan::Project { .. } | Plan::HProject { .. } => unreachable!("P0 is projection-free"),
        };

        let absorbed: Vec<(Vec<String>, NodePath)> = self
            .pu
            .absorbed_at(path)
            .into_iter()
            .map(|(x, o)| (x.to_vec(), o.clone()))
            .collect();
        for (x, o) in absorbed.into_iter().rev() {
            let graph = self.graph(&att0, &x, edges);
            built = built.unary(o, |c| Plan::HProject { attrs: x, graph, child: c });
        }

        if mode == Mode::Full {
            let x = self.pu.final_x[path].clone();
            let single = self.gen(path, edges, Mode::Single).plan;
            self.steps.push(PushStep {
                path: path.to_vec(),
                graph: self.graph(&att0, &x, edges),
                attrs: x,
                before: self.before_expr(path, edges),
                after: built.plan.clone(),
                single,
            });
        }
        built
    }
}

/// Rebuilds a plan for `(q, I)` from the pull-up trace: starts from
/// `Π^{H0}_X(σ_I(P0))` and replays the projection rules in reverse with
/// H-projections, placing each inequality where its endpoints meet.
pub fn push_down_h_projections(pu: &PullUp, ineqs: &AttrInequalities) -> Result<(Plan, Vec<PushStep>, BTreeMap<NodePath, NodePath>)> {
    let order: BTreeMap<String, usize> = pu.p0.base_attrs().into_iter().enumerate().map(|(i, a)| (a, i)).collect();
    for (a, b) in &ineqs.pairs {
        if !order.contains_key(a) || !order.contains_key(b) {
            return Err(Error::Transform(format!("inequality {a} != {b} is not over plan attributes")));
        }
    }
    let mut pusher = Pusher {
        pu,
        ineqs,
        order,
        steps: Vec::new(),
    };
    let mut built = pusher.gen(&[], &Edges::new(), Mode::Full);
    let att0 = pu.p0.base_attrs();
    let x = pu.attrs.clone();
    if set_of(&x) != set_of(&att0) {
        let already = matches!(&built.plan, Plan::HProject { attrs, .. } if set_of(attrs) == set_of(&x));
        if !already {
            let graph = pusher.graph(&att0, &x, &Edges::new());
            built = built.unary(Vec::new(), |c| Plan::HProject {
                attrs: x.clone(),
                graph,
                child: c,
            });
        }
    }
    built = built.unary(Vec::new(), |c| Plan::Project { attrs: x, child: c });
    Ok((built.plan, pusher.steps, built.origins.into_iter().collect()))
}

/// Rewrites a plan computing `q` into one computing `(q, I)`.
pub fn transform(p: &Plan, q: &CQ, ineqs: &InequalitySet) -> Result<Transformed> {
    let pu = pull_up_projections(p)?;
    let vars: BTreeSet<String> = q.vars().into_iter().collect();
    let prov = pu.p0.provenance();
    if let Some(v) = prov.values().find(|v| !vars.contains(*v)) {
        return Err(Error::Transform(format!("plan binds variable {v}, which the query lacks")));
    }
    let ai = attribute_inequalities(&pu.p0, ineqs)?;
    let (plan, steps, origins) = push_down_h_projections(&pu, &ai)?;
    Ok(Transformed {
        plan,
        pullup: pu,
        ineqs: ai,
        steps,
        origins,
    })
}

/// φ of every H-projection and the resulting blow-up factors.
#[derive(Clone, Debug, PartialEq)]
pub struct BlowupReport {
    pub phis: Vec<(NodePath, Vec<String>, u128)>,
    pub max_phi: u128,
    /// `e · max φ`: bound on the growth of any intermediate relation.
    pub size_factor: f64,
    /// `(e · max φ)²`: bound on the growth of the running time.
    pub time_factor: f64,
}

pub fn blowup_report(p: &Plan) -> BlowupReport {
    let phis: Vec<(NodePath, Vec<String>, u128)> = p
        .hprojections()
        .into_iter()
        .map(|(path, attrs, g)| (path, attrs.to_vec(), g.phi()))
        .collect();
    let max_phi = phis.iter().map(|(_, _, f)| *f).max().unwrap_or(1);
    let size_factor = std::f64::consts::E * max_phi as f64;
    BlowupReport {
        phis,
        max_phi,
        size_factor,
        time_factor: size_factor * size_factor,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundViolation {
    pub path: NodePath,
    pub origin: NodePath,
    pub size: usize,
    pub original_size: usize,
    pub bound: f64,
}

/// Compares every transformed intermediate with the original plan's node it
/// stands in for, against `factor ×` the original size.
pub fn check_intermediate_bounds(
    t: &Transformed,
    transformed: &EvalStats,
    original: &EvalStats,
    factor: f64,
) -> Vec<BoundViolation> {
    let mut out = Vec::new();
    for (path, size) in &transformed.sizes {
        let Some(origin) = t.origins.get(path) else { continue };
        let Some(&orig) = original.sizes.get(origin) else { continue };
        let bound = factor * orig as f64;
        if *size as f64 > bound + 1e-9 {
            out.push(BoundViolation {
                path: path.clone(),
                origin: origin.clone(),
                size: *size,
                original_size: orig,
                bound,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plan::q0_plan;
    use crate::query::parse_query;

    fn q0() -> (CQ, InequalitySet) {
        parse_query(r#"q(w) :- R(x,y,"a"), S(y,z), T(z,w), x != z, y != w, x != w."#).unwrap()
    }

    #[test]
    fn q0_attribute_mapping() {
        let (_, i) = q0();
        let pu = pull_up_projections(&q0_plan()).unwrap();
        let ai = attribute_inequalities(&pu.p0, &i).unwrap();
        let mut pairs: Vec<(String, String)> = ai
            .pairs
            .iter()
            .map(|(a, b)| if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) })
            .collect();
        pairs.sort();
        assert_eq!(
            pairs,
            vec![("A".into(), "C".into()), ("A".into(), "D".into()), ("B".into(), "D".into())]
        );
    }

    #[test]
    fn q0_transformed_shape() {
        let (q, i) = q0();
        let t = transform(&q0_plan(), &q, &i).unwrap();
        assert_eq!(
            t.plan.operator_sequence(),
            vec!["project", "hproject", "hproject", "select", "join", "select", "hproject", "select", "join", "scan", "scan", "scan"]
        );
        let hp = t.plan.hprojections();
        let summary: Vec<(Vec<String>, Vec<(&str, &str)>, u128)> = hp
            .iter()
            .map(|(_, x, g)| (x.to_vec(), g.named_edges(), g.phi()))
            .collect();
        assert_eq!(summary[0].0, vec!["D"]);
        assert!(summary[0].1.is_empty());
        assert_eq!(hp[0].2.left(), &["A", "B", "E", "B'", "C", "C'"]);
        assert_eq!(summary[1].0, vec!["C", "E", "C'", "D"]);
        assert!(summary[1].1.is_empty());
        assert_eq!(hp[1].2.left(), &["A", "B", "B'"]);
        assert_eq!(summary[2].0, vec!["C", "E"]);
        assert_eq!(summary[2].1, vec![("A", "D"), ("B", "D")]);
        assert_eq!(summary.iter().map(|s| s.2).collect::<Vec<_>>(), vec![1, 1, 2]);
        let report = blowup_report(&t.plan);
        assert_eq!(report.max_phi, 2);
        assert!((report.time_factor - (2.0 * std::f64::consts::E).powi(2)).abs() < 1e-9);
    }

    #[test]
    fn no_inequalities_gives_witness_projections() {
        let (q, _) = q0();
        let t = transform(&q0_plan(), &q, &InequalitySet::new()).unwrap();
        assert!(t.plan.hprojections().iter().all(|(_, _, g)| !g.has_edges()));
        assert_eq!(blowup_report(&t.plan).max_phi, 1);
    }
}
