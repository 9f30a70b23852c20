use std::collections::{BTreeMap, BTreeSet};

use super::{NodePath, Plan};
use crate::error::{Error, Result};
use crate::relcore::Predicate;

/// One projection-pulling rule application.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PullRule {
    /// `Π_X(Π_Y(R)) = Π_X(R)`: the original projection `outer` swallows the
    /// projection `inner` pulled up from below.
    Absorb {
        outer: Vec<String>,
        inner: Vec<String>,
    },
    /// `σ_θ(Π_X(R)) = Π_X(σ_θ(R))`.
    Commute { preds: Vec<Predicate> },
    /// `Π_{X1}(R1) ⋈ Π_{X2}(R2) = Π_{X1 ∪ X2}(R1 ⋈ R2)`, written through the
    /// product/selection form and restored. `None` marks a side that kept
    /// every attribute.
    Distribute {
        left: Option<Vec<String>>,
        right: Option<Vec<String>>,
        on: Vec<(String, String)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullStep {
    /// Node of the projection-free plan the rule was applied at.
    pub path: NodePath,
    /// Node of the original plan that triggered it.
    pub origin: NodePath,
    pub rule: PullRule,
}

/// `P_{q,⊤} = Π_X(P0)` together with the rule trace that produced it.
#[derive(Clone, Debug)]
pub struct PullUp {
    pub p0: Plan,
    pub attrs: Vec<String>,
    /// Rules in application order (bottom-up).
    pub trace: Vec<PullStep>,
    /// Original-plan path of each P0 node.
    pub origins: BTreeMap<NodePath, NodePath>,
    /// Attributes the original subtree at each P0 node exposes, before and
    /// after the projections stacked directly above it.
    pub(super) core_x: BTreeMap<NodePath, Vec<String>>,
    pub(super) final_x: BTreeMap<NodePath, Vec<String>>,
}

impl PullUp {
    /// Projections stacked above a P0 node, outermost first.
    pub(super) fn absorbed_at(&self, path: &[usize]) -> Vec<(&[String], &NodePath)> {
        let mut out: Vec<(&[String], &NodePath)> = self
            .trace
            .iter()
            .filter(|s| s.path == path)
            .filter_map(|s| match &s.rule {
                PullRule::Absorb { outer, .. } => Some((outer.as_slice(), &s.origin)),
                _ => None,
            })
            .collect();
        out.reverse();
        out
    }
}

fn same_set(a: &[String], b: &[String]) -> bool {
    a.iter().collect::<BTreeSet<_>>() == b.iter().collect::<BTreeSet<_>>()
}

/// Pulls every projection of an SPJ plan to the top.
pub fn pull_up_projections(plan: &Plan) -> Result<PullUp> {
    plan.validate()?;
    let mut out = PullUp {
        p0: plan.clone(),
        attrs: Vec::new(),
        trace: Vec::new(),
        origins: BTreeMap::new(),
        core_x: BTreeMap::new(),
        final_x: BTreeMap::new(),
    };
    let (p0, x) = pull(plan, &mut Vec::new(), &mut Vec::new(), &mut out)?;
    out.p0 = p0;
    out.attrs = x;
    Ok(out)
}

fn pull(node: &Plan, orig: &mut NodePath, path: &mut NodePath, st: &mut PullUp) -> Result<(Plan, Vec<String>)> {
    let with_child = |orig: &mut NodePath, path: &mut NodePath, i: usize, st: &mut PullUp, c: &Plan, extend_path: bool| {
        orig.push(i);
        if extend_path {
            path.push(i);
        }
        let r = pull(c, orig, path, st);
        orig.pop();
        if extend_path {
            path.pop();
        }
        r
    };
    let result = match node {
        Plan::Scan { attrs, .. } => {
            st.origins.insert(path.clone(), orig.clone());
            st.core_x.insert(path.clone(), attrs.clone());
            (node.clone(), attrs.clone())
        }
        Plan::Project { attrs, child } => {
            let (c0, inner) = with_child(orig, path, 0, st, child, false)?;
            if let Some(a) = attrs.iter().find(|a| !inner.contains(a)) {
                return Err(Error::Plan(format!("projection keeps {a}, which the child does not expose")));
            }
            if !same_set(attrs, &inner) {
                st.trace.push(PullStep {
                    path: path.clone(),
                    origin: orig.clone(),
                    rule: PullRule::Absorb {
                        outer: attrs.clone(),
                        inner,
                    },
                });
            }
            st.final_x.insert(path.clone(), attrs.clone());
            return Ok((c0, attrs.clone()));
        }
        Plan::Select { preds, child } => {
            let (c0, x) = with_child(orig, path, 0, st, child, true)?;
            st.origins.insert(path.clone(), orig.clone());
            st.core_x.insert(path.clone(), x.clone());
            st.trace.push(PullStep {
                path: path.clone(),
                origin: orig.clone(),
                rule: PullRule::Commute { preds: preds.clone() },
            });
            (Plan::select(preds.clone(), c0), x)
        }
        Plan::Join { left, right, .. } | Plan::Product { left, right } => {
            let (l0, x1) = with_child(orig, path, 0, st, left, true)?;
            let (r0, x2) = with_child(orig, path, 1, st, right, true)?;
            let on = match node {
                Plan::Join { on, .. } => on.clone(),
                _ => Vec::new(),
            };
            let full = |x: &Vec<String>, p: &Plan| (!same_set(x, &p.base_attrs())).then(|| x.clone());
            st.origins.insert(path.clone(), orig.clone());
            st.trace.push(PullStep {
                path: path.clone(),
                origin: orig.clone(),
                rule: PullRule::Distribute {
                    left: full(&x1, &l0),
                    right: full(&x2, &r0),
                    on: on.clone(),
                },
            });
            let mut x = x1;
            x.extend(x2);
            st.core_x.insert(path.clone(), x.clone());
            let joined = match node {
                Plan::Join { .. } => Plan::Join {
                    on,
                    left: Box::new(l0),
                    right: Box::new(r0),
                },
                _ => Plan::product(l0, r0),
            };
            (joined, x)
        }
        Plan::HProject { .. } => {
            return Err(Error::Plan("pull-up expects a plain select-project-join plan".into()))
        }
    };
    st.final_x.insert(path.clone(), result.1.clone());
    Ok(result)
}
