//! Select-project-join plans extended with the H-projection operator, and
//! the rewrite that turns a plan for `q` into one for `(q, I)`.

mod dot;
mod eval;
mod pullup;
mod pushdown;
mod text;

use std::collections::{BTreeMap, BTreeSet};

pub use dot::to_dot;
pub use eval::{check_h_equivalence, eval_plan, eval_plan_with_stats, EvalStats};
pub use pullup::{pull_up_projections, PullRule, PullStep, PullUp};
pub use pushdown::{
    attribute_inequalities, blowup_report, check_intermediate_bounds, push_down_h_projections,
    transform, AttrInequalities, BlowupReport, BoundViolation, PushStep, Transformed,
};
pub use text::{parse_plan, print_plan};

use crate::error::{Error, Result};
use crate::ineqcore::BipartiteIneqGraph;
use crate::query::{Term, CQ};
use crate::relcore::{Database, Predicate, Relation, Schema};

/// Position of a node: child indices from the root.
pub type NodePath = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Plan {
    /// Base relation scan. `vars[i]` is the query variable bound to
    /// `attrs[i]`, `None` for constant positions.
    Scan {
        relation: String,
        attrs: Vec<String>,
        vars: Vec<Option<String>>,
    },
    Select {
        preds: Vec<Predicate>,
        child: Box<Plan>,
    },
    Project {
        attrs: Vec<String>,
        child: Box<Plan>,
    },
    /// `Π^H_X`: keeps every attribute; reduces each X-group to `E_H`.
    HProject {
        attrs: Vec<String>,
        graph: BipartiteIneqGraph,
        child: Box<Plan>,
    },
    Join {
        on: Vec<(String, String)>,
        left: Box<Plan>,
        right: Box<Plan>,
    },
    Product {
        left: Box<Plan>,
        right: Box<Plan>,
    },
}

impl Plan {
    pub fn scan(relation: &str, attrs: &[(&str, Option<&str>)]) -> Plan {
        Plan::Scan {
            relation: relation.to_string(),
            attrs: attrs.iter().map(|(a, _)| a.to_string()).collect(),
            vars: attrs.iter().map(|(_, v)| v.map(str::to_string)).collect(),
        }
    }

    pub fn select(preds: Vec<Predicate>, child: Plan) -> Plan {
        Plan::Select {
            preds,
            child: Box::new(child),
        }
    }

    pub fn project(attrs: &[&str], child: Plan) -> Plan {
        Plan::Project {
            attrs: attrs.iter().map(|s| s.to_string()).collect(),
            child: Box::new(child),
        }
    }

    pub fn join(on: &[(&str, &str)], left: Plan, right: Plan) -> Plan {
        Plan::Join {
            on: on.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn product(left: Plan, right: Plan) -> Plan {
        Plan::Product {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn children(&self) -> Vec<&Plan> {
        match self {
            Plan::Scan { .. } => vec![],
            Plan::Select { child, .. } | Plan::Project { child, .. } | Plan::HProject { child, .. } => {
                vec![child]
            }
            Plan::Join { left, right, .. } | Plan::Product { left, right } => vec![left, right],
        }
    }

    /// Output attributes in order.
    pub fn schema(&self) -> Vec<String> {
        match self {
            Plan::Scan { attrs, .. } => attrs.clone(),
            Plan::Select { child, .. } | Plan::HProject { child, .. } => child.schema(),
            Plan::Project { attrs, .. } => attrs.clone(),
            Plan::Join { left, right, .. } | Plan::Product { left, right } => {
                let mut s = left.schema();
                s.extend(right.schema());
                s
            }
        }
    }

    /// Every scan attribute below this node, in scan order.
    pub fn base_attrs(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit(&mut |n, _| {
            if let Plan::Scan { attrs, .. } = n {
                out.extend(attrs.iter().cloned());
            }
        });
        out
    }

    /// Attribute → variable map collected from the scans.
    pub fn provenance(&self) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        self.visit(&mut |n, _| {
            if let Plan::Scan { attrs, vars, .. } = n {
                for (a, v) in attrs.iter().zip(vars) {
                    if let Some(v) = v {
                        out.insert(a.clone(), v.clone());
                    }
                }
            }
        });
        out
    }

    /// Pre-order traversal with node paths.
    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a Plan, &NodePath)) {
        fn go<'a>(n: &'a Plan, path: &mut NodePath, f: &mut dyn FnMut(&'a Plan, &NodePath)) {
            f(n, path);
            for (i, c) in n.children().into_iter().enumerate() {
                path.push(i);
                go(c, path, f);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), f)
    }

    pub fn at(&self, path: &[usize]) -> Option<&Plan> {
        let mut cur = self;
        for &i in path {
            cur = *cur.children().get(i)?;
        }
        Some(cur)
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_, _| n += 1);
        n
    }

    /// Structural checks: distinct scan attributes, projections within the
    /// child schema, predicates over known attributes.
    pub fn validate(&self) -> Result<()> {
        let base = self.base_attrs();
        let distinct: BTreeSet<&String> = base.iter().collect();
        if distinct.len() != base.len() {
            return Err(Error::Plan("scan attributes must be distinct across the plan".into()));
        }
        let mut err = None;
        self.visit(&mut |n, path| {
            if err.is_some() {
                return;
            }
            let check = |attrs: &[String], against: &[String], what: &str| -> Option<Error> {
                attrs.iter().find(|a| !against.contains(a)).map(|a| {
                    Error::Plan(format!("{what} at {path:?} uses unknown attribute {a}"))
                })
            };
            err = match n {
                Plan::Scan { attrs, vars, .. } if attrs.len() != vars.len() => {
                    Some(Error::Plan(format!("scan at {path:?} has mismatched provenance")))
                }
                Plan::Select { preds, child } => {
                    let s = child.schema();
                    preds.iter().find_map(|p| {
                        let attrs: Vec<String> = p.attrs().into_iter().map(str::to_string).collect();
                        check(&attrs, &s, "selection")
                    })
                }
                Plan::Project { attrs, child } | Plan::HProject { attrs, child, .. } => {
                    check(attrs, &child.schema(), "projection")
                }
                Plan::Join { on, left, right } => {
                    let (l, r) = (left.schema(), right.schema());
                    on.iter().find_map(|(a, b)| {
                        check(std::slice::from_ref(a), &l, "join").or_else(|| check(std::slice::from_ref(b), &r, "join"))
                    })
                }
                _ => None,
            };
        });
        err.map_or(Ok(()), Err)
    }

    /// Visible operators in pre-order, e.g. `["project", "hproject", ...]`.
    pub fn operator_sequence(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        self.visit(&mut |n, _| {
            out.push(match n {
                Plan::Scan { .. } => "scan",
                Plan::Select { .. } => "select",
                Plan::Project { .. } => "project",
                Plan::HProject { .. } => "hproject",
                Plan::Join { .. } => "join",
                Plan::Product { .. } => "product",
            })
        });
        out
    }

    /// Every H-projection with its path, in pre-order.
    pub fn hprojections(&self) -> Vec<(NodePath, &[String], &BipartiteIneqGraph)> {
        let mut out = Vec::new();
        self.visit(&mut |n, path| {
            if let Plan::HProject { attrs, graph, .. } = n {
                out.push((path.clone(), attrs.as_slice(), graph));
            }
        });
        out
    }
}

/// Plan attribute name for the variable at `pos` of atom `atom`.
fn attr_name(var: &str, atom: usize, repeat: Option<usize>) -> String {
    match repeat {
        None => format!("{var}@{atom}"),
        Some(p) => format!("{var}@{atom}.{p}"),
    }
}

/// Scan of one atom, with selections for constants and repeated variables.
/// Returns the plan and the attribute chosen for each variable.
fn atom_scan(q: &CQ, i: usize) -> (Plan, BTreeMap<String, String>) {
    let atom = &q.atoms[i];
    let mut attrs = Vec::new();
    let mut vars = Vec::new();
    let mut preds = Vec::new();
    let mut first: BTreeMap<String, String> = BTreeMap::new();
    for (pos, t) in atom.terms.iter().enumerate() {
        match t {
            Term::Var(v) => {
                if let Some(a) = first.get(v) {
                    let name = attr_name(v, i, Some(pos));
                    preds.push(Predicate::Eq(a.clone(), name.clone()));
                    attrs.push(name);
                } else {
                    let name = attr_name(v, i, None);
                    first.insert(v.clone(), name.clone());
                    attrs.push(name);
                }
                vars.push(Some(v.clone()));
            }
            Term::Const(c) => {
                let name = format!("c{pos}@{i}");
                preds.push(Predicate::EqConst(name.clone(), c.clone()));
                attrs.push(name);
                vars.push(None);
            }
        }
    }
    let scan = Plan::Scan {
        relation: atom.relation.clone(),
        attrs,
        vars,
    };
    let plan = if preds.is_empty() { scan } else { Plan::select(preds, scan) };
    (plan, first)
}

/// Left-deep plan in atom order. After each join it projects to one
/// attribute per variable still needed by a later atom or the head; the
/// last step projects to the head in head order.
pub fn default_plan(q: &CQ) -> Result<Plan> {
    q.validate()?;
    if q.atoms.is_empty() {
        return Err(Error::Plan("query has no atoms".into()));
    }
    let n = q.atoms.len();
    let needed_after = |j: usize| -> BTreeSet<String> {
        let mut s: BTreeSet<String> = q.head.iter().cloned().collect();
        for a in &q.atoms[j + 1..] {
            s.extend(a.variables().into_iter().map(str::to_string));
        }
        s
    };
    let head_attrs = |m: &BTreeMap<String, String>| -> Vec<String> { q.head.iter().map(|v| m[v].clone()).collect() };

    let (mut plan, mut bound) = atom_scan(q, 0);
    if n == 1 {
        let head = head_attrs(&bound);
        if head != plan.schema() {
            plan = Plan::Project {
                attrs: head,
                child: Box::new(plan),
            };
        }
        return Ok(plan);
    }
    for j in 1..n {
        let (scan, vars) = atom_scan(q, j);
        let on: Vec<(String, String)> = q.atoms[j]
            .variables()
            .into_iter()
            .filter_map(|v| bound.get(v).map(|a| (a.clone(), vars[v].clone())))
            .collect();
        plan = if on.is_empty() {
            Plan::product(plan, scan)
        } else {
            Plan::Join {
                on,
                left: Box::new(plan),
                right: Box::new(scan),
            }
        };
        for (v, a) in vars {
            bound.entry(v).or_insert(a);
        }
        let keep: Vec<String> = if j == n - 1 {
            head_attrs(&bound)
        } else {
            let need = needed_after(j);
            let schema = plan.schema();
            // One attribute per needed variable, in schema order.
            schema
                .into_iter()
                .filter(|a| bound.iter().any(|(v, b)| b == a && need.contains(v)))
                .collect()
        };
        if keep != plan.schema() {
            plan = Plan::Project {
                attrs: keep,
                child: Box::new(plan),
            };
        }
        bound.retain(|_, a| plan.schema().contains(a));
    }
    Ok(plan)
}

/// Evaluates `q` (no inequalities) with [`default_plan`]; columns are
/// named by the head variables.
pub fn eval_cq(q: &CQ, db: &Database) -> Result<Relation> {
    let r = eval_plan(&default_plan(q)?, db)?;
    r.renamed(Schema::new(q.head.iter().cloned())?)
}

/// The hand-written plan `P_{q0}` for `q0`, with
/// attributes `A, B, E` (R), `B', C` (S), `C', D` (T).
pub fn q0_plan() -> Plan {
    let r = Plan::scan("R", &[("A", Some("x")), ("B", Some("y")), ("E", None)]);
    let s = Plan::scan("S", &[("B'", Some("y")), ("C", Some("z"))]);
    let t = Plan::scan("T", &[("C'", Some("z")), ("D", Some("w"))]);
    let rs = Plan::project(&["C", "E"], Plan::join(&[("B", "B'")], r, s));
    let sel = Plan::select(
        vec![Predicate::EqConst("E".into(), crate::relcore::Value::text("a"))],
        rs,
    );
    Plan::project(&["D"], Plan::join(&[("C", "C'")], sel, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::parse_query;

    #[test]
    fn q0_plan_schema() {
        let p = q0_plan();
        p.validate().unwrap();
        assert_eq!(p.schema(), vec!["D"]);
        assert_eq!(p.base_attrs(), vec!["A", "B", "E", "B'", "C", "C'", "D"]);
        assert_eq!(p.provenance()["B'"], "y");
    }

    #[test]
    fn default_plan_for_path() {
        let (q, _) = parse_query("q() :- R1(x1,x2), R2(x2,x3), R3(x3,x4).").unwrap();
        let p = default_plan(&q).unwrap();
        p.validate().unwrap();
        assert_eq!(p.schema(), Vec::<String>::new());
        assert_eq!(
            p.operator_sequence(),
            vec!["project", "join", "project", "join", "scan", "scan", "scan"]
        );
        match p.at(&[0, 0]).unwrap() {
            Plan::Project { attrs, .. } => assert_eq!(attrs, &vec!["x3@1".to_string()]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn default_plan_constants_and_repeats() {
        let (q, _) = parse_query(r#"q(w) :- R(x,x,"a"), T(x,w)."#).unwrap();
        let p = default_plan(&q).unwrap();
        p.validate().unwrap();
        assert_eq!(p.schema(), vec!["w@1"]);
        let mut selects = 0;
        p.visit(&mut |n, _| {
            if let Plan::Select { preds, .. } = n {
                selects += preds.len();
            }
        });
        assert_eq!(selects, 2);
    }
}
