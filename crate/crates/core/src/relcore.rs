//! In-memory relations over positional tuples and the primitive
//! select / project / join / product operators.
//!
//! Relations are immutable once built. Every constructor sorts and
//! deduplicates its tuples, so iteration order is the canonical total order
//! on tuples and output is byte-stable across runs.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::Deref;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A scalar domain value.
///
/// `Bottom` is the reserved "no value" marker used when encoding forbidden
/// tuples; it never appears in loaded data.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Bottom,
    Int(i64),
    Text(Arc<str>),
}

impl Value {
    pub fn text(s: &str) -> Self {
        Value::Text(Arc::from(s))
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Value::Bottom)
    }

    /// Parses a CSV cell: integers when the cell looks numeric, text otherwise.
    pub fn parse_cell(cell: &str) -> Self {
        match cell.parse::<i64>() {
            Ok(i) => Value::Int(i),
            Err(_) => Value::text(cell),
        }
    }

    /// Literal form used in query and plan text (text values are quoted).
    pub fn to_literal(&self) -> String {
        match self {
            Value::Bottom => "_|_".to_string(),
            Value::Int(i) => i.to_string(),
            Value::Text(s) => format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\"")),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bottom => write!(f, "⊥"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Text(s) => write!(f, "{s}"),
        }
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Self {
        Value::Int(i)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::text(s)
    }
}

/// A positional tuple. Its meaning comes from the schema of the relation
/// holding it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Tuple(pub Vec<Value>);

impl Tuple {
    pub fn new(values: Vec<Value>) -> Self {
        Tuple(values)
    }

    pub fn ints(values: &[i64]) -> Self {
        Tuple(values.iter().map(|&v| Value::Int(v)).collect())
    }

    pub fn empty() -> Self {
        Tuple(Vec::new())
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn pick(&self, positions: &[usize]) -> Tuple {
        Tuple(positions.iter().map(|&p| self.0[p].clone()).collect())
    }

    pub fn concat(&self, other: &Tuple) -> Tuple {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Tuple(v)
    }
}

impl Deref for Tuple {
    type Target = [Value];
    fn deref(&self) -> &[Value] {
        &self.0
    }
}

impl From<Vec<Value>> for Tuple {
    fn from(v: Vec<Value>) -> Self {
        Tuple(v)
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Ordered list of distinct attribute names.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Schema {
    attrs: Vec<String>,
}

impl Schema {
    pub fn new<S: Into<String>>(attrs: impl IntoIterator<Item = S>) -> Result<Self> {
        let attrs: Vec<String> = attrs.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for a in &attrs {
            if !seen.insert(a.as_str()) {
                return Err(Error::Schema(format!("duplicate attribute {a}")));
            }
        }
        Ok(Schema { attrs })
    }

    pub fn empty() -> Self {
        Schema::default()
    }

    pub fn attrs(&self) -> &[String] {
        &self.attrs
    }

    pub fn arity(&self) -> usize {
        self.attrs.len()
    }

    pub fn position(&self, attr: &str) -> Option<usize> {
        self.attrs.iter().position(|a| a == attr)
    }

    pub fn index_of(&self, attr: &str) -> Result<usize> {
        self.position(attr)
            .ok_or_else(|| Error::Schema(format!("unknown attribute {attr} in {self}")))
    }

    pub fn contains(&self, attr: &str) -> bool {
        self.position(attr).is_some()
    }

    pub fn concat(&self, other: &Schema) -> Result<Schema> {
        Schema::new(self.attrs.iter().chain(other.attrs.iter()).cloned())
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.attrs.join(","))
    }
}

/// A duplicate-free set of tuples over a schema, kept in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    schema: Schema,
    tuples: Vec<Tuple>,
}

impl Relation {
    pub fn new(schema: Schema, tuples: impl IntoIterator<Item = Tuple>) -> Result<Self> {
        let mut tuples: Vec<Tuple> = tuples.into_iter().collect();
        if let Some(bad) = tuples.iter().find(|t| t.arity() != schema.arity()) {
            return Err(Error::Schema(format!(
                "tuple {bad} does not match schema {schema}"
            )));
        }
        tuples.sort_unstable();
        tuples.dedup();
        Ok(Relation { schema, tuples })
    }

    /// Builds a relation from tuples already known to match the schema.
    pub(crate) fn from_tuples(schema: Schema, mut tuples: Vec<Tuple>) -> Self {
        debug_assert!(tuples.iter().all(|t| t.arity() == schema.arity()));
        tuples.sort_unstable();
        tuples.dedup();
        Relation { schema, tuples }
    }

    pub fn empty(schema: Schema) -> Self {
        Relation {
            schema,
            tuples: Vec::new(),
        }
    }

    /// The Boolean relation: arity 0, holding the empty tuple when `value`.
    pub fn boolean(value: bool) -> Self {
        let tuples = if value { vec![Tuple::empty()] } else { Vec::new() };
        Relation {
            schema: Schema::empty(),
            tuples,
        }
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn tuples(&self) -> &[Tuple] {
        &self.tuples
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Tuple> {
        self.tuples.iter()
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, t: &Tuple) -> bool {
        self.tuples.binary_search(t).is_ok()
    }

    /// Same tuples under a new schema of equal arity.
    pub fn renamed(&self, schema: Schema) -> Result<Relation> {
        if schema.arity() != self.schema.arity() {
            return Err(Error::Schema(format!(
                "cannot rename {} to {}",
                self.schema, schema
            )));
        }
        Ok(Relation {
            schema,
            tuples: self.tuples.clone(),
        })
    }

    /// Keeps exactly the tuples accepted by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Tuple) -> bool) -> Relation {
        Relation {
            schema: self.schema.clone(),
            tuples: self.tuples.iter().filter(|t| keep(t)).cloned().collect(),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{", self.schema)?;
        for (i, t) in self.tuples.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "}}")
    }
}

/// Named relations.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Database {
    relations: BTreeMap<String, Relation>,
}

impl Database {
    pub fn new() -> Self {
        Database::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, rel: Relation) {
        self.relations.insert(name.into(), rel);
    }

    pub fn with(mut self, name: impl Into<String>, rel: Relation) -> Self {
        self.insert(name, rel);
        self
    }

    pub fn get(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    pub fn relation(&self, name: &str) -> Result<&Relation> {
        self.get(name)
            .ok_or_else(|| Error::Plan(format!("relation {name} not in database")))
    }

    pub fn relations(&self) -> impl Iterator<Item = (&String, &Relation)> {
        self.relations.iter()
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.relations.keys()
    }

    /// Total number of tuples over all relations.
    pub fn size(&self) -> usize {
        self.relations.values().map(Relation::len).sum()
    }

    pub fn active_domain(&self) -> Vec<Value> {
        active_domain(self)
    }
}

/// Sorted union of every value in every relation.
pub fn active_domain(db: &Database) -> Vec<Value> {
    let mut dom = BTreeSet::new();
    for rel in db.relations.values() {
        for t in rel.iter() {
            dom.extend(t.iter().cloned());
        }
    }
    dom.into_iter().collect()
}

/// Selection predicate on attribute names. A list of predicates is read as
/// a conjunction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Predicate {
    Eq(String, String),
    EqConst(String, Value),
    Ne(String, String),
    NeConst(String, Value),
}

impl Predicate {
    pub fn attrs(&self) -> Vec<&str> {
        match self {
            Predicate::Eq(a, b) | Predicate::Ne(a, b) => vec![a, b],
            Predicate::EqConst(a, _) | Predicate::NeConst(a, _) => vec![a],
        }
    }

    fn compile(&self, schema: &Schema) -> Result<CompiledPredicate> {
        Ok(match self {
            Predicate::Eq(a, b) => CompiledPredicate::Eq(schema.index_of(a)?, schema.index_of(b)?),
            Predicate::Ne(a, b) => CompiledPredicate::Ne(schema.index_of(a)?, schema.index_of(b)?),
            Predicate::EqConst(a, v) => CompiledPredicate::EqConst(schema.index_of(a)?, v.clone()),
            Predicate::NeConst(a, v) => CompiledPredicate::NeConst(schema.index_of(a)?, v.clone()),
        })
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Eq(a, b) => write!(f, "{a} = {b}"),
            Predicate::Ne(a, b) => write!(f, "{a} != {b}"),
            Predicate::EqConst(a, v) => write!(f, "{a} = {}", v.to_literal()),
            Predicate::NeConst(a, v) => write!(f, "{a} != {}", v.to_literal()),
        }
    }
}

enum CompiledPredicate {
    Eq(usize, usize),
    Ne(usize, usize),
    EqConst(usize, Value),
    NeConst(usize, Value),
}

impl CompiledPredicate {
    fn holds(&self, t: &Tuple) -> bool {
        match self {
            CompiledPredicate::Eq(a, b) => t[*a] == t[*b],
            CompiledPredicate::Ne(a, b) => t[*a] != t[*b],
            CompiledPredicate::EqConst(a, v) => &t[*a] == v,
            CompiledPredicate::NeConst(a, v) => &t[*a] != v,
        }
    }
}

/// σ: tuples of `r` satisfying every predicate.
pub fn select(r: &Relation, preds: &[Predicate]) -> Result<Relation> {
    let compiled = preds
        .iter()
        .map(|p| p.compile(r.schema()))
        .collect::<Result<Vec<_>>>()?;
    Ok(r.filter(|t| compiled.iter().all(|p| p.holds(t))))
}

/// Π: deduplicated restriction of every tuple to `attrs`, in that order.
pub fn project(r: &Relation, attrs: &[String]) -> Result<Relation> {
    let positions = attrs
        .iter()
        .map(|a| r.schema().index_of(a))
        .collect::<Result<Vec<_>>>()?;
    let schema = Schema::new(attrs.iter().cloned())?;
    let tuples = r.iter().map(|t| t.pick(&positions)).collect();
    Ok(Relation::from_tuples(schema, tuples))
}

/// Equi-join on `(left attr, right attr)` pairs, evaluated as a hash join
/// built on the right input. An empty condition is the cartesian product.
pub fn join(r1: &Relation, r2: &Relation, on: &[(String, String)]) -> Result<Relation> {
    let schema = r1.schema().concat(r2.schema()).map_err(|_| {
        Error::Schema(format!(
            "join inputs {} and {} share attributes",
            r1.schema(),
            r2.schema()
        ))
    })?;
    let left_keys = on
        .iter()
        .map(|(a, _)| r1.schema().index_of(a))
        .collect::<Result<Vec<_>>>()?;
    let right_keys = on
        .iter()
        .map(|(_, b)| r2.schema().index_of(b))
        .collect::<Result<Vec<_>>>()?;

    let mut table: HashMap<Tuple, Vec<&Tuple>> = HashMap::new();
    for t in r2.iter() {
        table.entry(t.pick(&right_keys)).or_default().push(t);
    }
    let mut out = Vec::new();
    for t in r1.iter() {
        if let Some(matches) = table.get(&t.pick(&left_keys)) {
            for m in matches {
                out.push(t.concat(m));
            }
        }
    }
    Ok(Relation::from_tuples(schema, out))
}

/// Cartesian product.
pub fn product(r1: &Relation, r2: &Relation) -> Result<Relation> {
    join(r1, r2, &[])
}

/// Loads a header-less CSV file. Numeric-looking cells become integers.
pub fn load_csv(path: impl AsRef<Path>, schema: Schema) -> Result<Relation> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut tuples = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Load {
            path: path.to_path_buf(),
            row,
            message: e.to_string(),
        })?;
        if record.len() != schema.arity() {
            return Err(Error::Load {
                path: path.to_path_buf(),
                row,
                message: format!("expected {} fields, found {}", schema.arity(), record.len()),
            });
        }
        tuples.push(Tuple(record.iter().map(Value::parse_cell).collect()));
    }
    Ok(Relation::from_tuples(schema, tuples))
}

/// Writes a relation as header-less CSV in canonical order.
pub fn write_csv(path: impl AsRef<Path>, rel: &Relation) -> Result<()> {
    let path = path.as_ref();
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| Error::io(path, std::io::Error::other(e)))?;
    for t in rel.iter() {
        writer
            .write_record(t.iter().map(|v| v.to_string()))
            .map_err(|e| Error::io(path, std::io::Error::other(e)))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(attrs: &[&str], rows: &[&[i64]]) -> Relation {
        Relation::new(
            Schema::new(attrs.iter().copied()).unwrap(),
            rows.iter().map(|r| Tuple::ints(r)),
        )
        .unwrap()
    }

    fn running_r() -> Relation {
        rel(
            &["x1", "x2"],
            &[
                &[1, 1], &[1, 2], &[1, 4], &[1, 8], &[2, 1], &[2, 2],
                &[2, 3], &[2, 4], &[3, 2], &[5, 2], &[10, 2],
            ],
        )
    }

    #[test]
    fn bottom_equals_only_itself() {
        assert_eq!(Value::Bottom, Value::Bottom);
        assert_ne!(Value::Bottom, Value::Int(0));
        assert_ne!(Value::Bottom, Value::text(""));
        assert!(Value::Bottom < Value::Int(i64::MIN));
    }

    #[test]
    fn relations_deduplicate() {
        let r = rel(&["x1", "x2"], &[&[1, 1], &[1, 2], &[1, 1]]);
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn active_domain_of_running_instance() {
        let db = Database::new().with("R", running_r());
        let dom: Vec<i64> = db
            .active_domain()
            .into_iter()
            .map(|v| match v {
                Value::Int(i) => i,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(dom, vec![1, 2, 3, 4, 5, 8, 10]);
        assert!(Database::new().active_domain().is_empty());
        let db = Database::new()
            .with("A", rel(&["a"], &[&[1]]))
            .with("B", rel(&["b"], &[&[2]]));
        assert_eq!(db.active_domain(), vec![Value::Int(1), Value::Int(2)]);
    }

    #[test]
    fn select_variants() {
        let r = Relation::new(
            Schema::new(["c", "e"]).unwrap(),
            vec![
                Tuple(vec![Value::Int(7), Value::text("a")]),
                Tuple(vec![Value::Int(7), Value::text("b")]),
            ],
        )
        .unwrap();
        let s = select(&r, &[Predicate::EqConst("e".into(), Value::text("a"))]).unwrap();
        assert_eq!(s.tuples(), &[Tuple(vec![Value::Int(7), Value::text("a")])]);
        assert_eq!(select(&r, &[Predicate::Eq("c".into(), "c".into())]).unwrap(), r);

        let r = rel(&["A", "B"], &[&[1, 1], &[1, 2]]);
        let s = select(&r, &[Predicate::Ne("A".into(), "B".into())]).unwrap();
        assert_eq!(s.tuples(), &[Tuple::ints(&[1, 2])]);
        assert!(matches!(
            select(&r, &[Predicate::Ne("A".into(), "Z".into())]),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn project_variants() {
        let r = running_r();
        let p = project(&r, &["x1".to_string()]).unwrap();
        assert_eq!(
            p.tuples(),
            &[1, 2, 3, 5, 10].map(|v| Tuple::ints(&[v]))[..]
        );
        assert_eq!(project(&r, &["x1".into(), "x2".into()]).unwrap(), r);
        let b = project(&r, &[]).unwrap();
        assert_eq!(b, Relation::boolean(true));
        assert!(project(&r, &["nope".into()]).is_err());
    }

    #[test]
    fn join_variants() {
        let r = rel(&["A", "B"], &[&[1, 2]]);
        let s = rel(&["B'", "C"], &[&[2, 3]]);
        let j = join(&r, &s, &[("B".into(), "B'".into())]).unwrap();
        assert_eq!(j.tuples(), &[Tuple::ints(&[1, 2, 2, 3])]);

        let r2 = rel(&["A", "B"], &[&[1, 2], &[3, 4]]);
        let s3 = rel(&["C"], &[&[1], &[2], &[3]]);
        assert_eq!(join(&r2, &s3, &[]).unwrap().len(), 6);

        let none = rel(&["B'", "C"], &[&[9, 9]]);
        assert!(join(&r, &none, &[("B".into(), "B'".into())]).unwrap().is_empty());
        assert!(matches!(join(&r, &r, &[]), Err(Error::Schema(_))));
    }

    #[test]
    fn csv_loading() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.csv");
        std::fs::write(&p, "1,1\n1,2\n1,1\n").unwrap();
        let r = load_csv(&p, Schema::new(["x1", "x2"]).unwrap()).unwrap();
        assert_eq!(r.len(), 2);

        std::fs::write(&p, "").unwrap();
        assert!(load_csv(&p, Schema::new(["x1", "x2"]).unwrap()).unwrap().is_empty());

        std::fs::write(&p, "1,2\n3\n").unwrap();
        match load_csv(&p, Schema::new(["x1", "x2"]).unwrap()) {
            Err(Error::Load { row, .. }) => assert_eq!(row, 2),
            other => panic!("expected load error, got {other:?}"),
        }
        assert!(matches!(
            load_csv(dir.path().join("missing.csv"), Schema::empty()),
            Err(Error::Io { .. })
        ));

        std::fs::write(&p, "1,a\n").unwrap();
        let r = load_csv(&p, Schema::new(["x", "y"]).unwrap()).unwrap();
        assert_eq!(r.tuples()[0], Tuple(vec![Value::Int(1), Value::text("a")]));
    }

    #[test]
    fn running_example_has_eleven_rows() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("R.csv");
        let rows: Vec<String> = running_r().iter().map(|t| format!("{},{}", t[0], t[1])).collect();
        std::fs::write(&p, rows.join("\n")).unwrap();
        assert_eq!(load_csv(&p, Schema::new(["x1", "x2"]).unwrap()).unwrap().len(), 11);
    }
}
