//! End-to-end evaluators for `(q, I)` and a dispatcher choosing among them.
//!
//! Every evaluator returns a relation whose columns are the head variables.

mod cycle;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num::BigRational;

pub use cycle::{even_cycle_query, eval_even_cycle, eval_even_cycle_ineq, match_even_cycle, CycleStats};

use crate::colorcode::{eval_colorcoding, HashFamily};
use crate::error::{Error, Result};
use crate::graphs::{augmented_graph, fractional_edge_cover_min, ineq_graph, treewidth_if_small, vertex_cover_min};
use crate::listcolor::{classify_graph, solve_components, ListColoringInstance};
use crate::plan::{default_plan, eval_cq, eval_plan, transform, Plan};
use crate::query::{full_query, preprocess_local_inequalities, Atom, InequalitySet, Term, CQ};
use crate::relcore::{Database, Relation, Schema, Tuple, Value};

/// Largest active domain `augment` will square.
pub const MAX_AUGMENT_DOMAIN: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strategy {
    Oracle,
    Plan,
    ColorCode,
    Augment,
    Cover,
    Vclc,
    Cycle,
    Auto,
}

impl Strategy {
    pub const ALL: [Strategy; 8] = [
        Strategy::Oracle,
        Strategy::Plan,
        Strategy::ColorCode,
        Strategy::Augment,
        Strategy::Cover,
        Strategy::Vclc,
        Strategy::Cycle,
        Strategy::Auto,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Oracle => "oracle",
            Strategy::Plan => "plan",
            Strategy::ColorCode => "colorcode",
            Strategy::Augment => "augment",
            Strategy::Cover => "cover",
            Strategy::Vclc => "vclc",
            Strategy::Cycle => "cycle",
            Strategy::Auto => "auto",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .iter()
            .copied()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::Contract(format!("unknown strategy {s}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyChoice {
    Exhaustive,
    Random,
}

/// Knobs shared by the evaluators and the dispatcher.
#[derive(Clone, Debug)]
pub struct StrategyOptions {
    /// Largest fractional edge cover `cover` accepts.
    pub cover_bound: BigRational,
    /// Largest vertex cover `vclc` accepts.
    pub max_vertex_cover: usize,
    /// `auto` picks `augment` when `tw(G^{q,I})` is at most this.
    pub augment_tw: usize,
    pub family: FamilyChoice,
    pub seed: u64,
    /// Random-family size; `None` derives it from `k`.
    pub reps: Option<usize>,
    pub plan: Option<Plan>,
}

impl Default for StrategyOptions {
    fn default() -> Self {
        StrategyOptions {
            cover_bound: BigRational::from_integer(1.into()),
            max_vertex_cover: 2,
            augment_tw: 1,
            family: FamilyChoice::Exhaustive,
            seed: 0,
            reps: None,
            plan: None,
        }
    }
}

fn head_schema(q: &CQ) -> Result<Schema> {
    Schema::new(q.head.iter().cloned())
}

/// Nested-loop evaluation of `q^f` filtered by `I`, projected to the head.
pub fn eval_oracle(q: &CQ, ineqs: &InequalitySet, db: &Database) -> Result<Relation> {
    q.validate()?;
    let vars = q.vars();
    let id: BTreeMap<&str, usize> = vars.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let rels: Vec<&Relation> = q.atoms.iter().map(|a| db.relation(&a.relation)).collect::<Result<_>>()?;
    for (a, r) in q.atoms.iter().zip(&rels) {
        if r.schema().arity() != a.arity() {
            return Err(Error::Schema(format!(
                "relation {} has arity {}, atom uses {}",
                a.relation,
                r.schema().arity(),
                a.arity()
            )));
        }
    }
    let pairs: Vec<(usize, usize)> = ineqs.pairs().map(|(a, b)| (id[a], id[b])).collect();
    let consts: Vec<(usize, &Value)> = ineqs.constants().map(|(a, c)| (id[a], c)).collect();
    let head: Vec<usize> = q.head.iter().map(|h| id[h.as_str()]).collect();
    let mut out = BTreeSet::new();
    let mut binding: Vec<Option<&Value>> = vec![None; vars.len()];
    struct Ctx<'a> {
        q: &'a CQ,
        rels: &'a [&'a Relation],
        id: &'a BTreeMap<&'a str, usize>,
        pairs: &'a [(usize, usize)],
        consts: &'a [(usize, &'a Value)],
        head: &'a [usize],
    }
    fn go<'a>(i: usize, cx: &Ctx<'a>, binding: &mut Vec<Option<&'a Value>>, out: &mut BTreeSet<Tuple>) -> bool {
        if i == cx.q.atoms.len() {
            let val = |v: usize| binding[v].expect("bound");
            if cx.pairs.iter().all(|&(a, b)| val(a) != val(b)) && cx.consts.iter().all(|&(a, c)| val(a) != c) {
                out.insert(Tuple(cx.head.iter().map(|&h| val(h).clone()).collect()));
                return cx.head.is_empty();
            }
            return false;
        }
        let atom = &cx.q.atoms[i];
        'tuples: for t in cx.rels[i].iter() {
            let mut fresh = Vec::new();
            for (term, v) in atom.terms.iter().zip(t.iter()) {
                match term {
                    Term::Const(c) => {
                        if c != v {
                            for f in fresh.drain(..) {
                                binding[f] = None;
                            }
                            continue 'tuples;
                        }
                    }
                    Term::Var(x) => {
                        let k = cx.id[x.as_str()];
                        match binding[k] {
                            Some(b) if b != v => {
                                for f in fresh.drain(..) {
                                    binding[f] = None;
                                }
                                continue 'tuples;
                            }
                            Some(_) => {}
                            None => {
                                binding[k] = Some(v);
                                fresh.push(k);
                            }
                        }
                    }
                }
            }
            let done = go(i + 1, cx, binding, out);
            for f in fresh {
                binding[f] = None;
            }
            if done {
                return true;
            }
        }
        false
    }
    let cx = Ctx {
        q,
        rels: &rels,
        id: &id,
        pairs: &pairs,
        consts: &consts,
        head: &head,
    };
    go(0, &cx, &mut binding, &mut out);
    Relation::new(head_schema(q)?, out)
}

/// Adds one relation `I_ij = {(a, b) ∈ dom² : a ≠ b}` per inequality (and a
/// unary `dom \ {c}` per `x != c`) and evaluates the plain augmented query.
pub fn eval_augment(q: &CQ, ineqs: &InequalitySet, db: &Database) -> Result<Relation> {
    q.validate()?;
    let dom = db.active_domain();
    if dom.len() > MAX_AUGMENT_DOMAIN {
        return Err(Error::Guard(format!(
            "augment materialises |dom|² tuples; domain has {} values (limit {MAX_AUGMENT_DOMAIN})",
            dom.len()
        )));
    }
    let mut aq = q.clone();
    let mut adb = db.clone();
    if !ineqs.is_empty() {
        let schema = Schema::new(["a", "b"])?;
        let mut ne = Vec::with_capacity(dom.len() * dom.len().saturating_sub(1));
        for a in &dom {
            for b in &dom {
                if a != b {
                    ne.push(Tuple(vec![a.clone(), b.clone()]));
                }
            }
        }
        let ne = Relation::new(schema, ne)?;
        for (i, (a, b)) in ineqs.pairs().enumerate() {
            let name = format!("I#{}", i + 1);
            adb.insert(name.clone(), ne.clone());
            aq.atoms.push(Atom::vars(&name, &[a, b]));
        }
    }
    for (i, (x, c)) in ineqs.constants().enumerate() {
        let name = format!("N#{}", i + 1);
        let keep = dom.iter().filter(|v| *v != c).map(|v| Tuple(vec![v.clone()]));
        adb.insert(name.clone(), Relation::new(Schema::new(["a"])?, keep)?);
        aq.atoms.push(Atom::vars(&name, &[x]));
    }
    eval_cq(&aq, &adb)
}

fn satisfies(schema: &Schema, t: &Tuple, ineqs: &InequalitySet) -> bool {
    ineqs.satisfied_by(|v| schema.position(v).map(|p| &t[p]))
}

/// Computes `q^f` with a join plan, checks `|q^f(D)| ≤ N^ρ` for the
/// fractional edge cover number `ρ`, filters by `I` and projects.
pub fn eval_full_then_filter(q: &CQ, ineqs: &InequalitySet, db: &Database, bound: &BigRational) -> Result<Relation> {
    q.validate()?;
    let rho = fractional_edge_cover_min(q).value;
    if &rho > bound {
        return Err(Error::Inapplicable(format!(
            "fractional edge cover {rho} exceeds the bound {bound}"
        )));
    }
    let fq = full_query(q);
    let full = eval_cq(&fq, db)?;
    let n = q
        .atoms
        .iter()
        .map(|a| db.relation(&a.relation).map(Relation::len))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    let rho_f = rho.numer().to_string().parse::<f64>().unwrap_or(f64::MAX)
        / rho.denom().to_string().parse::<f64>().unwrap_or(1.0);
    let agm = (n.max(1) as f64).powf(rho_f);
    if full.len() as f64 > agm * (1.0 + 1e-9) {
        return Err(Error::Contract(format!("|q^f(D)| = {} exceeds the AGM bound {agm}", full.len())));
    }
    let schema = full.schema().clone();
    let filtered = full.filter(|t| satisfies(&schema, t, ineqs));
    let pos: Vec<usize> = q.head.iter().map(|h| schema.index_of(h)).collect::<Result<_>>()?;
    Relation::new(head_schema(q)?, filtered.iter().map(|t| t.pick(&pos)))
}

/// Why `vclc` cannot run on `(q, I)`, if it cannot.
pub fn vclc_inapplicable(q: &CQ, max_cover: usize) -> Option<String> {
    if !q.is_boolean() {
        return Some("query is not Boolean".into());
    }
    if let Some(a) = q.atoms.iter().find(|a| a.arity() > 2) {
        return Some(format!("atom {a} has arity above 2"));
    }
    match vertex_cover_min(q) {
        Ok((c, _)) if c <= max_cover => None,
        Ok((c, _)) => Some(format!("vertex cover {c} exceeds {max_cover}")),
        Err(e) => Some(e.to_string()),
    }
}

/// Instantiates a minimum vertex cover in every possible way; each
/// instantiation leaves unary residues that form a list-coloring
/// instance on `G^I` restricted to the uncovered variables.
pub fn eval_vertex_cover_listcolor(q: &CQ, ineqs: &InequalitySet, db: &Database, max_cover: usize) -> Result<bool> {
    q.validate()?;
    if let Some(why) = vclc_inapplicable(q, max_cover) {
        return Err(Error::Inapplicable(why));
    }
    let pre = preprocess_local_inequalities(q, ineqs, db)?;
    let (q, ineqs, db) = (&pre.query, &pre.ineqs, &pre.db);
    let (_, cover) = vertex_cover_min(q)?;
    let dom = db.active_domain();
    let free: Vec<String> = q.vars().into_iter().filter(|v| !cover.contains(v)).collect();
    let rels: Vec<&Relation> = q.atoms.iter().map(|a| db.relation(&a.relation)).collect::<Result<_>>()?;
    let mut alpha: Vec<usize> = vec![0; cover.len()];
    if !cover.is_empty() && dom.is_empty() {
        return Ok(false);
    }
    loop {
        let val: BTreeMap<&str, &Value> = cover.iter().map(String::as_str).zip(alpha.iter().map(|&i| &dom[i])).collect();
        if instantiation_succeeds(q, ineqs, &rels, &val, &free) {
            return Ok(true);
        }
        let mut k = 0;
        while k < alpha.len() {
            alpha[k] += 1;
            if alpha[k] < dom.len() {
                break;
            }
            alpha[k] = 0;
            k += 1;
        }
        if k == alpha.len() {
            return Ok(false);
        }
    }
}

fn instantiation_succeeds(
    q: &CQ,
    ineqs: &InequalitySet,
    rels: &[&Relation],
    val: &BTreeMap<&str, &Value>,
    free: &[String],
) -> bool {
    if ineqs.pairs().any(|(a, b)| matches!((val.get(a), val.get(b)), (Some(x), Some(y)) if x == y)) {
        return false;
    }
    let mut lists: BTreeMap<&str, BTreeSet<Value>> = BTreeMap::new();
    for (atom, rel) in q.atoms.iter().zip(rels) {
        let fv: Option<&str> = atom.variables().into_iter().find(|v| !val.contains_key(v));
        let mut seen: BTreeSet<Value> = BTreeSet::new();
        let mut any = false;
        'tuples: for t in rel.iter() {
            let mut y: Option<&Value> = None;
            for (term, v) in atom.terms.iter().zip(t.iter()) {
                let ok = match term {
                    Term::Const(c) => c == v,
                    Term::Var(x) => match val.get(x.as_str()) {
                        Some(a) => *a == v,
                        None => match y {
                            Some(prev) => prev == v,
                            None => {
                                y = Some(v);
                                true
                            }
                        },
                    },
                };
                if !ok {
                    continue 'tuples;
                }
            }
            any = true;
            if let Some(y) = y {
                seen.insert(y.clone());
            }
        }
        match fv {
            None if !any => return false,
            None => {}
            Some(x) => {
                let l = lists.entry(x).or_insert_with(|| seen.clone());
                l.retain(|c| seen.contains(c));
            }
        }
    }
    // Inequalities against instantiated variables shrink the lists.
    for (a, b) in ineqs.pairs() {
        for (fixed, other) in [(a, b), (b, a)] {
            if let (Some(c), Some(l)) = (val.get(fixed), lists.get_mut(other)) {
                l.remove(*c);
            }
        }
    }
    let names: Vec<&str> = free.iter().map(String::as_str).collect();
    let mut edges = Vec::new();
    for (a, b) in ineqs.pairs() {
        if let (Some(i), Some(j)) = (names.iter().position(|v| *v == a), names.iter().position(|v| *v == b)) {
            edges.push((i, j));
        }
    }
    let graph = crate::graphs::UGraph::from_edges(&names, &edges);
    let ls = names.iter().map(|v| lists.get(v).cloned().unwrap_or_default()).collect();
    let inst = ListColoringInstance::new(graph, ls).expect("one list per vertex");
    solve_components(&inst).assignment.is_some()
}

/// Rewrites the plan (default left-deep plan when `plan` is `None`) with
/// H-projections and evaluates it.
pub fn eval_transformed_plan(q: &CQ, ineqs: &InequalitySet, db: &Database, plan: Option<&Plan>) -> Result<Relation> {
    q.validate()?;
    let owned;
    let p = match plan {
        Some(p) => p,
        None => {
            owned = default_plan(q)?;
            &owned
        }
    };
    let t = transform(p, q, ineqs)?;
    eval_plan(&t.plan, db)?.renamed(head_schema(q)?)
}

/// Dispatcher decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Choice {
    pub strategy: Strategy,
    pub rationale: String,
}

/// Deterministic choice: cycle specialist on a syntactic `C_{2k}`, then
/// full-then-filter, then vertex cover with list coloring, then augment on
/// low augmented treewidth, else the transformed plan.
pub fn choose_strategy(q: &CQ, ineqs: &InequalitySet, opts: &StrategyOptions) -> Choice {
    let pick = |strategy, rationale: String| Choice { strategy, rationale };
    if !ineqs.has_constants() {
        if let Some((_, k, _)) = match_even_cycle(q) {
            return pick(Strategy::Cycle, format!("query is the even cycle C_{}", 2 * k));
        }
    }
    let rho = fractional_edge_cover_min(q).value;
    if rho <= opts.cover_bound {
        return pick(
            Strategy::Cover,
            format!("fractional edge cover {rho} ≤ {}: |q^f(D)| stays within |D|^{rho}", opts.cover_bound),
        );
    }
    if vclc_inapplicable(q, opts.max_vertex_cover).is_none() {
        let class = classify_graph(&ineq_graph(ineqs));
        if class.is_easy() {
            return pick(
                Strategy::Vclc,
                format!("vertex cover ≤ {} and G^I is {class}", opts.max_vertex_cover),
            );
        }
    }
    let g = augmented_graph(q, ineqs);
    if let Some(tw) = treewidth_if_small(&g) {
        if tw <= opts.augment_tw {
            return pick(Strategy::Augment, format!("tw(G^{{q,I}}) = {tw} ≤ {}", opts.augment_tw));
        }
    }
    pick(Strategy::Plan, "default: H-projection plan rewriting".into())
}

/// Runs `strategy` (resolving `auto` through [`choose_strategy`]).
pub fn run_strategy(
    strategy: Strategy,
    q: &CQ,
    ineqs: &InequalitySet,
    db: &Database,
    opts: &StrategyOptions,
) -> Result<(Relation, Strategy)> {
    let st = match strategy {
        Strategy::Auto => choose_strategy(q, ineqs, opts).strategy,
        s => s,
    };
    let r = match st {
        Strategy::Oracle => eval_oracle(q, ineqs, db)?,
        Strategy::Plan => eval_transformed_plan(q, ineqs, db, opts.plan.as_ref())?,
        Strategy::ColorCode => {
            let pre = preprocess_local_inequalities(q, ineqs, db)?;
            let k = ineq_graph(&pre.ineqs).vertex_count();
            let family = match opts.family {
                FamilyChoice::Exhaustive => None,
                FamilyChoice::Random => {
                    let reps = opts.reps.unwrap_or_else(|| HashFamily::reps_for(k, 1e-3));
                    Some(HashFamily::random(&db.active_domain(), k.max(1), reps, opts.seed))
                }
            };
            eval_colorcoding(q, ineqs, db, family.as_ref(), &eval_cq)?.0
        }
        Strategy::Augment => eval_augment(q, ineqs, db)?,
        Strategy::Cover => eval_full_then_filter(q, ineqs, db, &opts.cover_bound)?,
        Strategy::Vclc => Relation::boolean(eval_vertex_cover_listcolor(q, ineqs, db, opts.max_vertex_cover)?),
        Strategy::Cycle => {
            if ineqs.has_constants() {
                return Err(Error::Inapplicable("cycle strategy takes variable inequalities only".into()));
            }
            let (rel, k, rename) = match_even_cycle(q)
                .ok_or_else(|| Error::Inapplicable("query is not an even directed cycle over one relation".into()))?;
            let r = db.relation(&rel)?;
            let mut mapped = InequalitySet::new();
            for (a, b) in ineqs.pairs() {
                mapped.add(&rename[a], &rename[b]);
            }
            let found = if mapped.is_empty() {
                eval_even_cycle(r, k)?.0
            } else {
                eval_even_cycle_ineq(r, k, &mapped)?.0
            };
            Relation::boolean(found)
        }
        Strategy::Auto => unreachable!("resolved above"),
    };
    Ok((r, st))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::parse_query;

    fn rel(attrs: &[&str], rows: &[&[i64]]) -> Relation {
        Relation::new(Schema::new(attrs.iter().copied()).unwrap(), rows.iter().map(|r| Tuple::ints(r))).unwrap()
    }

    #[test]
    fn oracle_running_example_acceptance() {
        // H0 edges as inequalities between R(x1,x2,y1,y2)... via the projected form.
        let (q, i) = parse_query("q() :- R(x1,x2), S(y1,y2,y3), x1 != y1, x1 != y2, x2 != y2, x2 != y3.").unwrap();
        let r = rel(
            &["a", "b"],
            &[&[1, 1], &[1, 2], &[1, 4], &[1, 8], &[2, 1], &[2, 2], &[2, 3], &[2, 4], &[3, 2], &[5, 2], &[10, 2]],
        );
        let yes = Database::new().with("R", r.clone()).with("S", rel(&["a", "b", "c"], &[&[2, 1, 3]]));
        let no = Database::new().with("R", r).with("S", rel(&["a", "b", "c"], &[&[2, 1, 2]]));
        assert_eq!(eval_oracle(&q, &i, &yes).unwrap(), Relation::boolean(true));
        assert_eq!(eval_oracle(&q, &i, &no).unwrap(), Relation::boolean(false));
    }

    #[test]
    fn augment_small_domain() {
        let (q, i) = parse_query("q() :- R(x), S(y), x != y.").unwrap();
        let db = Database::new().with("R", rel(&["a"], &[&[1]])).with("S", rel(&["a"], &[&[1]]));
        assert_eq!(eval_augment(&q, &i, &db).unwrap(), Relation::boolean(false));
        assert_eq!(eval_augment(&q, &InequalitySet::new(), &db).unwrap(), Relation::boolean(true));
    }

    #[test]
    fn full_then_filter_bounds() {
        let (s, i) = parse_query("s() :- R(a,b,c), a != b.").unwrap();
        let db = Database::new().with("R", rel(&["a", "b", "c"], &[&[1, 1, 2], &[1, 2, 3]]));
        let one = BigRational::from_integer(1.into());
        let two = BigRational::from_integer(2.into());
        assert_eq!(eval_full_then_filter(&s, &i, &db, &one).unwrap(), Relation::boolean(true));
        let (tri, _) = parse_query("t() :- R(x,y), R(y,z), R(z,x).").unwrap();
        let db2 = Database::new().with("R", rel(&["a", "b"], &[&[1, 2], &[2, 3], &[3, 1]]));
        assert!(eval_full_then_filter(&tri, &InequalitySet::new(), &db2, &two).is_ok());
        let (p, _) = parse_query("p() :- R(x,y), R(y,z), R(z,w).").unwrap();
        assert!(matches!(
            eval_full_then_filter(&p, &InequalitySet::new(), &db2, &one),
            Err(Error::Inapplicable(_))
        ));
    }

    #[test]
    fn vclc_star_and_unary() {
        let (z, i) = parse_query("z() :- R(y,a), R(y,b), R(y,c), a != b, b != c, a != c.").unwrap();
        let three = rel(&["a", "b"], &[&[0, 1], &[0, 2], &[0, 3], &[5, 1], &[5, 2]]);
        assert!(eval_vertex_cover_listcolor(&z, &i, &Database::new().with("R", three.clone()), 1).unwrap());
        let two = rel(&["a", "b"], &[&[0, 1], &[0, 2], &[5, 1], &[5, 2]]);
        assert!(!eval_vertex_cover_listcolor(&z, &i, &Database::new().with("R", two), 1).unwrap());
        let (f, fi) = parse_query("f() :- R(a), S(b), a != b.").unwrap();
        let db = Database::new().with("R", rel(&["a"], &[&[1]])).with("S", rel(&["a"], &[&[1], &[2]]));
        assert!(eval_vertex_cover_listcolor(&f, &fi, &db, 2).unwrap());
        let (p, pi) = parse_query("p(x) :- R(x,y), x != y.").unwrap();
        assert!(matches!(
            eval_vertex_cover_listcolor(&p, &pi, &Database::new().with("R", three), 1),
            Err(Error::Inapplicable(_))
        ));
    }

    #[test]
    fn dispatcher_examples() {
        let opts = StrategyOptions::default();
        let (s3, i) = parse_query("s() :- R(a,b,c), a != b.").unwrap();
        assert_eq!(choose_strategy(&s3, &i, &opts).strategy, Strategy::Cover);
        let (z5, zi) = parse_query(
            "z() :- R(y,a), R(y,b), R(y,c), R(y,d), R(y,e), a != b, a != c, a != d, a != e, b != c, b != d, b != e, c != d, c != e, d != e.",
        )
        .unwrap();
        assert_eq!(choose_strategy(&z5, &zi, &opts).strategy, Strategy::Vclc);
        let (p5, pi) = parse_query(
            "p() :- R(x1,x2), R(x2,x3), R(x3,x4), R(x4,x5), R(x5,x6), x1 != x3, x2 != x4, x3 != x5, x4 != x6.",
        )
        .unwrap();
        assert_eq!(choose_strategy(&p5, &pi, &opts).strategy, Strategy::Plan);
        let (c4, ci) = parse_query("c() :- E(a,b), E(b,c), E(c,d), E(d,a), a != c.").unwrap();
        assert_eq!(choose_strategy(&c4, &ci, &opts).strategy, Strategy::Cycle);
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("bogus".parse::<Strategy>().is_err());
    }
}
