//! S-expression plan format.
//!
//! ```text
//! (project (D)
//!   (join ((C C'))
//!     (select ((E = "a")) (project (C E) (join ((B B')) (scan R A=x B=y E) (scan S B'=y C=z))))
//!     (scan T C'=z D=w)))
//! ```
//!
//! H-projections carry their graph:
//! `(hproject (C E) (h (left A B B') (right D) (edges (A D) (B D))) child)`.

use super::Plan;
use crate::error::{Error, Result};
use crate::ineqcore::BipartiteIneqGraph;
use crate::relcore::{Predicate, Value};

#[derive(Clone, Debug, PartialEq)]
enum Sx {
    Sym(String, usize, usize),
    Str(String),
    Int(i64),
    List(Vec<Sx>, usize, usize),
}

fn pos(s: &Sx) -> (usize, usize) {
    match s {
        Sx::Sym(_, l, c) | Sx::List(_, l, c) => (*l, *c),
        _ => (0, 0),
    }
}

fn err(at: (usize, usize), message: impl Into<String>) -> Error {
    Error::Syntax {
        line: at.0,
        column: at.1,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Sx> {
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let mut stack: Vec<(Vec<Sx>, usize, usize)> = Vec::new();
    let mut done: Option<Sx> = None;
    macro_rules! adv {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }
    let push = |stack: &mut Vec<(Vec<Sx>, usize, usize)>, done: &mut Option<Sx>, item: Sx, at: (usize, usize)| -> Result<()> {
        match stack.last_mut() {
            Some(top) => {
                top.0.push(item);
                Ok(())
            }
            None if done.is_none() => {
                *done = Some(item);
                Ok(())
            }
            None => Err(err(at, "trailing input after plan")),
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let at = (line, col);
        match c {
            c if c.is_whitespace() => adv!(),
            ';' => {
                while i < chars.len() && chars[i] != '\n' {
                    adv!();
                }
            }
            '(' => {
                stack.push((Vec::new(), line, col));
                adv!();
            }
            ')' => {
                let (items, l, c) = stack.pop().ok_or_else(|| err(at, "unbalanced ')'"))?;
                adv!();
                push(&mut stack, &mut done, Sx::List(items, l, c), at)?;
            }
            '"' => {
                adv!();
                let mut s = String::new();
                loop {
                    if i >= chars.len() {
                        return Err(err(at, "unterminated string"));
                    }
                    let ch = chars[i];
                    adv!();
                    match ch {
                        '"' => break,
                        '\\' if i < chars.len() => {
                            s.push(chars[i]);
                            adv!();
                        }
                        _ => s.push(ch),
                    }
                }
                push(&mut stack, &mut done, Sx::Str(s), at)?;
            }
            _ => {
                let mut s = String::new();
                while i < chars.len() && !chars[i].is_whitespace() && !"()\";".contains(chars[i]) {
                    s.push(chars[i]);
                    adv!();
                }
                let item = match s.parse::<i64>() {
                    Ok(n) => Sx::Int(n),
                    Err(_) => Sx::Sym(s, at.0, at.1),
                };
                push(&mut stack, &mut done, item, at)?;
            }
        }
    }
    if let Some((_, l, c)) = stack.last() {
        return Err(err((*l, *c), "unclosed '('"));
    }
    done.ok_or_else(|| err((line, col), "empty plan text"))
}

fn sym(s: &Sx) -> Result<&str> {
    match s {
        Sx::Sym(v, _, _) => Ok(v),
        other => Err(err(pos(other), "expected a name")),
    }
}

fn list(s: &Sx) -> Result<&[Sx]> {
    match s {
        Sx::List(v, _, _) => Ok(v),
        other => Err(err(pos(other), "expected a list")),
    }
}

fn names(s: &Sx) -> Result<Vec<String>> {
    list(s)?.iter().map(|x| sym(x).map(str::to_string)).collect()
}

fn value(s: &Sx) -> Option<Value> {
    match s {
        Sx::Int(i) => Some(Value::Int(*i)),
        Sx::Str(t) => Some(Value::text(t)),
        _ => None,
    }
}

fn predicate(s: &Sx) -> Result<Predicate> {
    let items = list(s)?;
    if items.len() != 3 {
        return Err(err(pos(s), "predicate must be (attr op attr-or-constant)"));
    }
    let a = sym(&items[0])?.to_string();
    let op = sym(&items[1])?;
    Ok(match (op, value(&items[2])) {
        ("=", Some(v)) => Predicate::EqConst(a, v),
        ("!=", Some(v)) => Predicate::NeConst(a, v),
        ("=", None) => Predicate::Eq(a, sym(&items[2])?.to_string()),
        ("!=", None) => Predicate::Ne(a, sym(&items[2])?.to_string()),
        _ => return Err(err(pos(&items[1]), format!("unknown operator {op}"))),
    })
}

fn graph(s: &Sx) -> Result<BipartiteIneqGraph> {
    let items = list(s)?;
    if items.len() != 4 || sym(&items[0])? != "h" {
        return Err(err(pos(s), "expected (h (left ..) (right ..) (edges ..))"));
    }
    let section = |x: &Sx, tag: &str| -> Result<Vec<Sx>> {
        let l = list(x)?;
        match l.first() {
            Some(Sx::Sym(t, _, _)) if t == tag => Ok(l[1..].to_vec()),
            _ => Err(err(pos(x), format!("expected ({tag} ...)"))),
        }
    };
    let left: Vec<String> = section(&items[1], "left")?.iter().map(|x| sym(x).map(str::to_string)).collect::<Result<_>>()?;
    let right: Vec<String> = section(&items[2], "right")?.iter().map(|x| sym(x).map(str::to_string)).collect::<Result<_>>()?;
    let mut edges = Vec::new();
    for e in section(&items[3], "edges")? {
        let pair = names(&e)?;
        if pair.len() != 2 {
            return Err(err(pos(&e), "edge must be (left right)"));
        }
        edges.push((pair[0].clone(), pair[1].clone()));
    }
    BipartiteIneqGraph::from_names(&left, &right, &edges).map_err(|e| err(pos(s), e.to_string()))
}

fn node(s: &Sx) -> Result<Plan> {
    let items = list(s)?;
    let head = items.first().ok_or_else(|| err(pos(s), "empty list"))?;
    let op = sym(head)?;
    let arity = |n: usize| -> Result<()> {
        if items.len() == n {
            Ok(())
        } else {
            Err(err(pos(s), format!("{op} takes {} arguments", n - 1)))
        }
    };
    Ok(match op {
        "scan" => {
            if items.len() < 2 {
                return Err(err(pos(s), "scan needs a relation name"));
            }
            let mut attrs = Vec::new();
            let mut vars = Vec::new();
            for a in &items[2..] {
                let a = sym(a)?;
                match a.split_once('=') {
                    Some((name, var)) => {
                        attrs.push(name.to_string());
                        vars.push(Some(var.to_string()));
                    }
                    None => {
                        attrs.push(a.to_string());
                        vars.push(None);
                    }
                }
            }
            Plan::Scan {
                relation: sym(&items[1])?.to_string(),
                attrs,
                vars,
            }
        }
        "select" => {
            arity(3)?;
            Plan::Select {
                preds: list(&items[1])?.iter().map(predicate).collect::<Result<_>>()?,
                child: Box::new(node(&items[2])?),
            }
        }
        "project" => {
            arity(3)?;
            Plan::Project {
                attrs: names(&items[1])?,
                child: Box::new(node(&items[2])?),
            }
        }
        "hproject" => {
            arity(4)?;
            Plan::HProject {
                attrs: names(&items[1])?,
                graph: graph(&items[2])?,
                child: Box::new(node(&items[3])?),
            }
        }
        "join" => {
            arity(4)?;
            let mut on = Vec::new();
            for p in list(&items[1])? {
                let pair = names(p)?;
                if pair.len() != 2 {
                    return Err(err(pos(p), "join condition must be (left right)"));
                }
                on.push((pair[0].clone(), pair[1].clone()));
            }
            Plan::Join {
                on,
                left: Box::new(node(&items[2])?),
                right: Box::new(node(&items[3])?),
            }
        }
        "product" => {
            arity(3)?;
            Plan::Product {
                left: Box::new(node(&items[1])?),
                right: Box::new(node(&items[2])?),
            }
        }
        other => return Err(err(pos(head), format!("unknown operator {other}"))),
    })
}

pub fn parse_plan(text: &str) -> Result<Plan> {
    let plan = node(&lex(text)?)?;
    plan.validate()?;
    Ok(plan)
}

fn print_pred(p: &Predicate) -> String {
    match p {
        Predicate::Eq(a, b) => format!("({a} = {b})"),
        Predicate::Ne(a, b) => format!("({a} != {b})"),
        Predicate::EqConst(a, v) => format!("({a} = {})", v.to_literal()),
        Predicate::NeConst(a, v) => format!("({a} != {})", v.to_literal()),
    }
}

fn print_graph(g: &BipartiteIneqGraph) -> String {
    let edges: Vec<String> = g.named_edges().iter().map(|(a, b)| format!("({a} {b})")).collect();
    let pad = |v: &[String]| if v.is_empty() { String::new() } else { format!(" {}", v.join(" ")) };
    format!(
        "(h (left{}) (right{}) (edges{}))",
        pad(g.left()),
        pad(g.right()),
        pad(&edges)
    )
}

fn print_into(p: &Plan, depth: usize, out: &mut String) {
    let indent = "  ".repeat(depth);
    out.push_str(&indent);
    match p {
        Plan::Scan { relation, attrs, vars } => {
            out.push_str(&format!("(scan {relation}"));
            for (a, v) in attrs.iter().zip(vars) {
                match v {
                    Some(v) => out.push_str(&format!(" {a}={v}")),
                    None => out.push_str(&format!(" {a}")),
                }
            }
            out.push(')');
            return;
        }
        Plan::Select { preds, child } => {
            let ps: Vec<String> = preds.iter().map(print_pred).collect();
            out.push_str(&format!("(select ({})\n", ps.join(" ")));
            print_into(child, depth + 1, out);
        }
        Plan::Project { attrs, child } => {
            out.push_str(&format!("(project ({})\n", attrs.join(" ")));
            print_into(child, depth + 1, out);
        }
        Plan::HProject { attrs, graph, child } => {
            out.push_str(&format!("(hproject ({}) {}\n", attrs.join(" "), print_graph(graph)));
            print_into(child, depth + 1, out);
        }
        Plan::Join { on, left, right } => {
            let cs: Vec<String> = on.iter().map(|(a, b)| format!("({a} {b})")).collect();
            out.push_str(&format!("(join ({})\n", cs.join(" ")));
            print_into(left, depth + 1, out);
            out.push('\n');
            print_into(right, depth + 1, out);
        }
        Plan::Product { left, right } => {
            out.push_str("(product\n");
            print_into(left, depth + 1, out);
            out.push('\n');
            print_into(right, depth + 1, out);
        }
    }
    out.push(')');
}

/// Indented s-expression text; [`parse_plan`] reads it back unchanged.
pub fn print_plan(p: &Plan) -> String {
    let mut s = String::new();
    print_into(p, 0, &mut s);
    s.push('\n');
    s
}
