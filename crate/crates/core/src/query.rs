//! Conjunctive queries with inequalities: AST, parser, and the removal of
//! local inequalities by filtering the database.
//!
//! Grammar (one query per text, `#` starts a comment running to end of line):
//!
//! ```text
//! query := name '(' [var {',' var}] ')' ':-' item {',' item} '.'
//! item  := Rel '(' term {',' term} ')' | var '!=' (var | const)
//! term  := identifier | integer | "string"
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::relcore::{Database, Relation, Value};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(Value),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(name.to_string())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write!(f, "{}", c.to_literal()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub relation: String,
    pub terms: Vec<Term>,
}

impl Atom {
    pub fn new(relation: &str, terms: Vec<Term>) -> Self {
        Atom {
            relation: relation.to_string(),
            terms,
        }
    }

    /// Atom whose terms are all variables.
    pub fn vars(relation: &str, vars: &[&str]) -> Self {
        Atom::new(relation, vars.iter().map(|v| Term::var(v)).collect())
    }

    pub fn arity(&self) -> usize {
        self.terms.len()
    }

    /// Distinct variables in order of first occurrence.
    pub fn variables(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for t in &self.terms {
            if let Some(v) = t.as_var() {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    pub fn contains_var(&self, v: &str) -> bool {
        self.terms.iter().any(|t| t.as_var() == Some(v))
    }

    /// First position holding variable `v`.
    pub fn position_of(&self, v: &str) -> Option<usize> {
        self.terms.iter().position(|t| t.as_var() == Some(v))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.relation)?;
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CQ {
    pub name: String,
    pub head: Vec<String>,
    pub atoms: Vec<Atom>,
}

impl CQ {
    pub fn new(name: &str, head: &[&str], atoms: Vec<Atom>) -> Self {
        CQ {
            name: name.to_string(),
            head: head.iter().map(|s| s.to_string()).collect(),
            atoms,
        }
    }

    /// Distinct body variables in order of first occurrence.
    pub fn vars(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for a in &self.atoms {
            for v in a.variables() {
                if seen.insert(v) {
                    out.push(v.to_string());
                }
            }
        }
        out
    }

    pub fn is_boolean(&self) -> bool {
        self.head.is_empty()
    }

    pub fn is_full(&self) -> bool {
        let vars = self.vars();
        vars.len() == self.head.len() && vars.iter().all(|v| self.head.contains(v))
    }

    /// Checks head scope and per-relation arity consistency.
    pub fn validate(&self) -> Result<()> {
        let vars: BTreeSet<String> = self.vars().into_iter().collect();
        let mut head_seen = BTreeSet::new();
        for h in &self.head {
            if !vars.contains(h) {
                return Err(Error::Scope(format!("head variable {h} does not occur in the body")));
            }
            if !head_seen.insert(h) {
                return Err(Error::Scope(format!("head variable {h} is repeated")));
            }
        }
        let mut arity: BTreeMap<&str, usize> = BTreeMap::new();
        for a in &self.atoms {
            if let Some(&n) = arity.get(a.relation.as_str()) {
                if n != a.arity() {
                    return Err(Error::Schema(format!(
                        "relation {} used with arities {n} and {}",
                        a.relation,
                        a.arity()
                    )));
                }
            } else {
                arity.insert(&a.relation, a.arity());
            }
        }
        Ok(())
    }

    /// Relation names with their arities, in first-use order.
    pub fn relation_arities(&self) -> Vec<(String, usize)> {
        let mut out: Vec<(String, usize)> = Vec::new();
        for a in &self.atoms {
            if !out.iter().any(|(r, _)| r == &a.relation) {
                out.push((a.relation.clone(), a.arity()));
            }
        }
        out
    }
}

impl fmt::Display for CQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}) :- ", self.name, self.head.join(","))?;
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// `q^f`: the same body with every variable in the head.
pub fn full_query(q: &CQ) -> CQ {
    CQ {
        name: q.name.clone(),
        head: q.vars(),
        atoms: q.atoms.clone(),
    }
}

/// Inequalities between variables (stored as ordered pairs `a < b`) and
/// between a variable and a constant.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InequalitySet {
    pairs: BTreeSet<(String, String)>,
    constants: BTreeSet<(String, Value)>,
}

impl InequalitySet {
    pub fn new() -> Self {
        InequalitySet::default()
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        let mut s = InequalitySet::new();
        for (a, b) in pairs {
            s.add(a, b);
        }
        s
    }

    /// Adds `a != b`. Returns false for the degenerate `a != a`.
    pub fn add(&mut self, a: &str, b: &str) -> bool {
        if a == b {
            return false;
        }
        let (x, y) = if a < b { (a, b) } else { (b, a) };
        self.pairs.insert((x.to_string(), y.to_string()));
        true
    }

    pub fn add_const(&mut self, var: &str, c: Value) {
        self.constants.insert((var.to_string(), c));
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.pairs.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    pub fn constants(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.constants.iter().map(|(a, c)| (a.as_str(), c))
    }

    pub fn contains(&self, a: &str, b: &str) -> bool {
        let (x, y) = if a < b { (a, b) } else { (b, a) };
        self.pairs.contains(&(x.to_string(), y.to_string()))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty() && self.constants.is_empty()
    }

    pub fn has_constants(&self) -> bool {
        !self.constants.is_empty()
    }

    /// Variables appearing in some variable inequality, sorted.
    pub fn variables(&self) -> Vec<String> {
        let mut s = BTreeSet::new();
        for (a, b) in &self.pairs {
            s.insert(a.clone());
            s.insert(b.clone());
        }
        s.into_iter().collect()
    }

    /// True when `value(v)` satisfies every inequality. Variables unknown to
    /// `value` are treated as unconstrained.
    pub fn satisfied_by<'v>(&self, value: impl Fn(&str) -> Option<&'v Value>) -> bool {
        self.pairs.iter().all(|(a, b)| match (value(a), value(b)) {
            (Some(x), Some(y)) => x != y,
            _ => true,
        }) && self.constants.iter().all(|(a, c)| value(a) != Some(c))
    }

    /// Inequalities with both endpoints in `keep`.
    pub fn restrict(&self, keep: &BTreeSet<String>) -> InequalitySet {
        InequalitySet {
            pairs: self
                .pairs
                .iter()
                .filter(|(a, b)| keep.contains(a) && keep.contains(b))
                .cloned()
                .collect(),
            constants: self
                .constants
                .iter()
                .filter(|(a, _)| keep.contains(a))
                .cloned()
                .collect(),
        }
    }

    pub fn union(&self, other: &InequalitySet) -> InequalitySet {
        InequalitySet {
            pairs: self.pairs.union(&other.pairs).cloned().collect(),
            constants: self.constants.union(&other.constants).cloned().collect(),
        }
    }

    pub fn difference(&self, other: &InequalitySet) -> InequalitySet {
        InequalitySet {
            pairs: self.pairs.difference(&other.pairs).cloned().collect(),
            constants: self.constants.difference(&other.constants).cloned().collect(),
        }
    }

    fn check_scope(&self, q: &CQ) -> Result<()> {
        let vars: BTreeSet<String> = q.vars().into_iter().collect();
        for v in self.pairs.iter().flat_map(|(a, b)| [a, b]).chain(self.constants.iter().map(|(a, _)| a)) {
            if !vars.contains(v) {
                return Err(Error::Scope(format!("inequality variable {v} does not occur in the body")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for InequalitySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .pairs
            .iter()
            .map(|(a, b)| format!("{a} != {b}"))
            .chain(self.constants.iter().map(|(a, c)| format!("{a} != {}", c.to_literal())))
            .collect();
        write!(f, "{}", items.join(", "))
    }
}

/// Renders `(q, I)` in the grammar accepted by [`parse_query`].
pub fn format_query(q: &CQ, ineqs: &InequalitySet) -> String {
    let mut s = q.to_string();
    if !ineqs.is_empty() {
        s.push_str(", ");
        s.push_str(&ineqs.to_string());
    }
    s.push('.');
    s
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    LParen,
    RParen,
    Comma,
    Turnstile,
    Neq,
    Dot,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>> {
        let mut out = Vec::new();
        while let Some(&c) = self.chars.peek() {
            let (line, col) = (self.line, self.column);
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
                continue;
            }
            let tok = match c {
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '.' => {
                    self.bump();
                    Tok::Dot
                }
                ':' => {
                    self.bump();
                    if self.bump() != Some('-') {
                        return Err(Self::err(line, col, "expected ':-'"));
                    }
                    Tok::Turnstile
                }
                '!' => {
                    self.bump();
                    if self.bump() != Some('=') {
                        return Err(Self::err(line, col, "expected '!='"));
                    }
                    Tok::Neq
                }
                '"' => {
                    self.bump();
                    let mut s = String::new();
                    loop {
                        match self.bump() {
                            None => return Err(Self::err(line, col, "unterminated string")),
                            Some('"') => break,
                            Some('\\') => match self.bump() {
                                Some(e) => s.push(e),
                                None => return Err(Self::err(line, col, "unterminated string")),
                            },
                            Some(ch) => s.push(ch),
                        }
                    }
                    Tok::Str(s)
                }
                c if c == '-' || c.is_ascii_digit() => {
                    let mut s = String::new();
                    s.push(c);
                    self.bump();
                    while let Some(&d) = self.chars.peek() {
                        if d.is_ascii_digit() {
                            s.push(d);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    let n = s
                        .parse::<i64>()
                        .map_err(|_| Self::err(line, col, format!("bad integer {s}")))?;
                    Tok::Int(n)
                }
                c if c.is_alphabetic() || c == '_' => {
                    let mut s = String::new();
                    while let Some(&d) = self.chars.peek() {
                        if d.is_alphanumeric() || d == '_' || d == '\'' {
                            s.push(d);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Tok::Ident(s)
                }
                other => return Err(Self::err(line, col, format!("unexpected character {other:?}"))),
            };
            out.push((tok, line, col));
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|t| (t.1, t.2)).unwrap_or(self.end)
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.here();
        Err(Error::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail(format!("expected {what}")),
        }
    }

    fn term(&mut self) -> Result<Term> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Term::Var(s))
            }
            Some(Tok::Int(i)) => {
                self.pos += 1;
                Ok(Term::Const(Value::Int(i)))
            }
            Some(Tok::Str(s)) => {
                self.pos += 1;
                Ok(Term::Const(Value::text(&s)))
            }
            _ => self.fail("expected a variable or constant"),
        }
    }

    fn query(&mut self) -> Result<(CQ, InequalitySet)> {
        let name = self.ident("query name")?;
        self.expect(Tok::LParen, "'('")?;
        let mut head = Vec::new();
        if self.peek() != Some(&Tok::RParen) {
            loop {
                head.push(self.ident("head variable")?);
                if self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen, "')'")?;
        self.expect(Tok::Turnstile, "':-'")?;

        let mut atoms = Vec::new();
        let mut ineqs = InequalitySet::new();
        loop {
            let at = self.here();
            let first = self.term()?;
            match (self.peek(), first) {
                (Some(Tok::LParen), Term::Var(rel)) => {
                    self.pos += 1;
                    let mut terms = vec![self.term()?];
                    while self.peek() == Some(&Tok::Comma) {
                        self.pos += 1;
                        terms.push(self.term()?);
                    }
                    self.expect(Tok::RParen, "')'")?;
                    atoms.push(Atom { relation: rel, terms });
                }
                (Some(Tok::Neq), lhs) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    match (lhs, rhs) {
                        (Term::Var(a), Term::Var(b)) => {
                            if !ineqs.add(&a, &b) {
                                return Err(Error::Scope(format!(
                                    "inequality {a} != {a} at line {}, column {} can never hold",
                                    at.0, at.1
                                )));
                            }
                        }
                        (Term::Var(a), Term::Const(c)) | (Term::Const(c), Term::Var(a)) => {
                            ineqs.add_const(&a, c)
                        }
                        (Term::Const(_), Term::Const(_)) => {
                            return Err(Error::Syntax {
                                line: at.0,
                                column: at.1,
                                message: "inequality between two constants".into(),
                            })
                        }
                    }
                }
                _ => return self.fail("expected an atom or an inequality"),
            }
            match self.next() {
                Some(Tok::Comma) => continue,
                Some(Tok::Dot) => break,
                _ => {
                    self.pos -= 1;
                    return self.fail("expected ',' or '.'");
                }
            }
        }
        if self.pos < self.toks.len() {
            return self.fail("trailing input after '.'");
        }
        if atoms.is_empty() {
            return self.fail("query has no atoms");
        }
        let q = CQ { name, head, atoms };
        q.validate()?;
        ineqs.check_scope(&q)?;
        Ok((q, ineqs))
    }
}

/// Parses one query in the grammar described in the module docs.
pub fn parse_query(text: &str) -> Result<(CQ, InequalitySet)> {
    let lexer = Lexer {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let toks = lexer.tokens()?;
    let end = toks.last().map(|t| (t.1, t.2 + 1)).unwrap_or((1, 1));
    Parser { toks, pos: 0, end }.query()
}

/// Result of removing local inequalities.
#[derive(Clone, Debug)]
pub struct Preprocessed {
    pub query: CQ,
    pub ineqs: InequalitySet,
    pub db: Database,
}

/// Enforces every inequality whose variables all occur in one atom (and
/// every `x != c`) by deleting violating tuples, and drops it from `I`.
///
/// When a relation is shared by atoms that need different filters, each
/// filtered atom gets its own copy named `{rel}@{index}`.
pub fn preprocess_local_inequalities(
    q: &CQ,
    ineqs: &InequalitySet,
    db: &Database,
) -> Result<Preprocessed> {
    let local_pairs: Vec<(String, String)> = ineqs
        .pairs()
        .filter(|(a, b)| q.atoms.iter().any(|at| at.contains_var(a) && at.contains_var(b)))
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();

    let mut remaining = InequalitySet::new();
    for (a, b) in ineqs.pairs() {
        if !local_pairs.iter().any(|(x, y)| x == a && y == b) {
            remaining.add(a, b);
        }
    }

    let mut query = q.clone();
    let mut out = db.clone();
    let mut uses: BTreeMap<&str, usize> = BTreeMap::new();
    for a in &q.atoms {
        *uses.entry(a.relation.as_str()).or_default() += 1;
    }

    for (i, atom) in q.atoms.iter().enumerate() {
        let mut checks: Vec<(usize, usize)> = Vec::new();
        let mut const_checks: Vec<(usize, &Value)> = Vec::new();
        for (a, b) in &local_pairs {
            if let (Some(pa), Some(pb)) = (atom.position_of(a), atom.position_of(b)) {
                checks.push((pa, pb));
            }
        }
        for (v, c) in ineqs.constants() {
            if let Some(p) = atom.position_of(v) {
                const_checks.push((p, c));
            }
        }
        if checks.is_empty() && const_checks.is_empty() {
            continue;
        }
        let base = db.relation(&atom.relation)?;
        if base.schema().arity() != atom.arity() {
            return Err(Error::Schema(format!(
                "relation {} has arity {}, atom {atom} expects {}",
                atom.relation,
                base.schema().arity(),
                atom.arity()
            )));
        }
        let filtered: Relation = base.filter(|t| {
            checks.iter().all(|&(x, y)| t[x] != t[y]) && const_checks.iter().all(|&(p, c)| &t[p] != c)
        });
        if uses[atom.relation.as_str()] == 1 {
            out.insert(atom.relation.clone(), filtered);
        } else {
            let name = format!("{}@{}", atom.relation, i);
            out.insert(name.clone(), filtered);
            query.atoms[i].relation = name;
        }
    }

    Ok(Preprocessed {
        query,
        ineqs: remaining,
        db: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relcore::{Schema, Tuple};

    #[test]
    fn parses_q0() {
        let (q, i) = parse_query(
            r#"q(w) :- R(x,y,"a"), S(y,z), T(z,w), x != z, y != w, x != w."#,
        )
        .unwrap();
        assert_eq!(q.head, vec!["w"]);
        assert_eq!(q.atoms.len(), 3);
        assert_eq!(q.atoms[0].terms[2], Term::Const(Value::text("a")));
        assert_eq!(i.len(), 3);
        assert!(i.contains("z", "x") && i.contains("y", "w") && i.contains("x", "w"));
    }

    #[test]
    fn parses_boolean_with_comments() {
        let (q, i) = parse_query("# a path\nq() :- R(x1,x2),\n  R2(x2,x3).\n").unwrap();
        assert!(q.is_boolean());
        assert!(i.is_empty());
        assert_eq!(q.vars(), vec!["x1", "x2", "x3"]);
    }

    #[test]
    fn rejects_unbound_inequality_variable() {
        assert!(matches!(parse_query("q(x) :- R(x), x != y."), Err(Error::Scope(_))));
        assert!(matches!(parse_query("q(z) :- R(x)."), Err(Error::Scope(_))));
        assert!(matches!(parse_query("q() :- R(x), R(x,y)."), Err(Error::Schema(_))));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_query("q(x) :- R(x)\n  S(x).") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_query("q(x) :- R(x"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn format_round_trips() {
        let text = r#"q(w) :- R(x,y,"a"), S(y,z), T(z,w), w != x, w != y, x != z, x != 3."#;
        let (q, i) = parse_query(text).unwrap();
        let (q2, i2) = parse_query(&format_query(&q, &i)).unwrap();
        assert_eq!((q, i), (q2, i2));
    }

    #[test]
    fn full_query_heads() {
        let (q, _) = parse_query(r#"q(w) :- R(x,y,"a"), S(y,z), T(z,w)."#).unwrap();
        assert_eq!(full_query(&q).head, vec!["x", "y", "z", "w"]);
        let f = full_query(&q);
        assert_eq!(full_query(&f), f);
    }

    fn ints(attrs: &[&str], rows: &[&[i64]]) -> Relation {
        Relation::new(Schema::new(attrs.iter().copied()).unwrap(), rows.iter().map(|r| Tuple::ints(r))).unwrap()
    }

    #[test]
    fn local_inequalities_are_filtered() {
        let (q, i) = parse_query("q() :- R(x,y), x != y.").unwrap();
        let db = Database::new().with("R", ints(&["a", "b"], &[&[1, 1], &[1, 2]]));
        let p = preprocess_local_inequalities(&q, &i, &db).unwrap();
        assert!(p.ineqs.is_empty());
        assert_eq!(p.db.get("R").unwrap().tuples(), &[Tuple::ints(&[1, 2])]);

        let (q, i) = parse_query("q() :- R(x), S(y), x != y.").unwrap();
        let db = Database::new()
            .with("R", ints(&["a"], &[&[1]]))
            .with("S", ints(&["a"], &[&[1]]));
        let p = preprocess_local_inequalities(&q, &i, &db).unwrap();
        assert_eq!(p.ineqs, i);
        assert_eq!(p.db, db);
    }

    #[test]
    fn shared_relations_are_copied_per_atom() {
        let (q, i) = parse_query("q() :- R(x,y), R(y,z), x != y, x != z.").unwrap();
        let db = Database::new().with("R", ints(&["a", "b"], &[&[1, 1], &[1, 2]]));
        let p = preprocess_local_inequalities(&q, &i, &db).unwrap();
        assert_eq!(p.query.atoms[0].relation, "R@0");
        assert_eq!(p.query.atoms[1].relation, "R");
        assert_eq!(p.db.get("R@0").unwrap().len(), 1);
        assert_eq!(p.db.get("R").unwrap().len(), 2);
        assert_eq!(p.ineqs, InequalitySet::from_pairs([("x", "z")]));
    }
}
