use std::collections::BTreeSet;
use std::fmt;

use crate::iri::Iri;
use crate::value::Value;
use crate::vocab::{rdf, xsd};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub lexical: String,
    pub datatype: Iri,
    pub language: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Blank(String),
    Literal(Literal),
}

impl Term {
    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Term {
        Term::Literal(Literal { lexical: lexical.into(), datatype, language: None })
    }

    pub fn string(lexical: impl Into<String>) -> Term {
        Term::typed(lexical, xsd::string())
    }

    pub fn integer(n: impl fmt::Display) -> Term {
        Term::typed(n.to_string(), xsd::integer())
    }

    pub fn boolean(b: bool) -> Term {
        Term::typed(b.to_string(), xsd::boolean())
    }

    pub fn date_time(t: &chrono::DateTime<chrono::Utc>) -> Term {
        Term::typed(t.to_rfc3339_opts(chrono::SecondsFormat::AutoSi, true), xsd::date_time())
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(i) => Some(i),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }
}

impl From<Iri> for Term {
    fn from(i: Iri) -> Self {
        Term::Iri(i)
    }
}

impl From<&Iri> for Term {
    fn from(i: &Iri) -> Self {
        Term::Iri(i.clone())
    }
}

impl From<&Value> for Term {
    fn from(v: &Value) -> Self {
        match v {
            Value::Resource { iri, .. } => Term::Iri(iri.clone()),
            Value::Literal { lexical, datatype } => Term::typed(lexical.clone(), datatype.clone()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(i) => write!(f, "<{i}>"),
            Term::Blank(b) => write!(f, "_:{b}"),
            Term::Literal(l) => {
                write!(f, "{}", quote_literal(&l.lexical))?;
                match &l.language {
                    Some(lang) => write!(f, "@{lang}"),
                    None if l.datatype == xsd::string() => Ok(()),
                    None => write!(f, "^^<{}>", l.datatype),
                }
            }
        }
    }
}

pub(crate) fn quote_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// A quad. Field order gives the canonical sort: graph, subject,
/// predicate, object. `graph: None` is the default graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quad {
    pub graph: Option<Iri>,
    pub subject: Term,
    pub predicate: Iri,
    pub object: Term,
}

impl Quad {
    pub fn new(subject: impl Into<Term>, predicate: Iri, object: impl Into<Term>, graph: Option<&Iri>) -> Self {
        Quad { graph: graph.cloned(), subject: subject.into(), predicate, object: object.into() }
    }

    pub fn triple(&self) -> (&Term, &Iri, &Term) {
        (&self.subject, &self.predicate, &self.object)
    }

    pub fn is_type(&self) -> bool {
        self.predicate == rdf::type_()
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <{}> {}", self.subject, self.predicate, self.object)?;
        if let Some(g) = &self.graph {
            write!(f, " <{g}>")?;
        }
        f.write_str(" .")
    }
}

/// A set of quads; duplicates collapse.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QuadGraph {
    quads: BTreeSet<Quad>,
}

impl QuadGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, quad: Quad) -> bool {
        self.quads.insert(quad)
    }

    /// Adds a triple to `graph`.
    pub fn add(&mut self, subject: impl Into<Term>, predicate: Iri, object: impl Into<Term>, graph: Option<&Iri>) {
        self.quads.insert(Quad::new(subject, predicate, object, graph));
    }

    pub fn remove(&mut self, quad: &Quad) -> bool {
        self.quads.remove(quad)
    }

    pub fn extend(&mut self, other: QuadGraph) {
        self.quads.extend(other.quads);
    }

    pub fn len(&self) -> usize {
        self.quads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quads.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Quad> {
        self.quads.iter()
    }

    pub fn contains(&self, quad: &Quad) -> bool {
        self.quads.contains(quad)
    }

    /// Distinct graph names, `None` standing for the default graph.
    pub fn graph_names(&self) -> BTreeSet<Option<Iri>> {
        self.quads.iter().map(|q| q.graph.clone()).collect()
    }

    pub fn graph(&self, name: Option<&Iri>) -> QuadGraph {
        self.quads.iter().filter(|q| q.graph.as_ref() == name).cloned().collect()
    }

    /// Moves every quad into `name`.
    pub fn into_graph(self, name: Option<&Iri>) -> QuadGraph {
        self.quads.into_iter().map(|q| Quad { graph: name.cloned(), ..q }).collect()
    }

    /// Quads whose predicate is not `rdf:type`.
    pub fn linking_triple_count(&self) -> usize {
        self.quads.iter().filter(|q| !q.is_type()).count()
    }

    pub fn objects<'a>(&'a self, subject: &Term, predicate: &Iri) -> impl Iterator<Item = &'a Term> + use<'a> {
        let (subject, predicate) = (subject.clone(), predicate.clone());
        self.quads
            .iter()
            .filter(move |q| q.subject == subject && q.predicate == predicate)
            .map(|q| &q.object)
    }

    pub fn subjects<'a>(&'a self, predicate: &Iri) -> impl Iterator<Item = &'a Term> + use<'a> {
        let predicate = predicate.clone();
        self.quads.iter().filter(move |q| q.predicate == predicate).map(|q| &q.subject)
    }

    pub fn predicates(&self) -> BTreeSet<Iri> {
        self.quads.iter().map(|q| q.predicate.clone()).collect()
    }
}

impl FromIterator<Quad> for QuadGraph {
    fn from_iter<T: IntoIterator<Item = Quad>>(iter: T) -> Self {
        QuadGraph { quads: iter.into_iter().collect() }
    }
}

impl IntoIterator for QuadGraph {
    type Item = Quad;
    type IntoIter = std::collections::btree_set::IntoIter<Quad>;

    fn into_iter(self) -> Self::IntoIter {
        self.quads.into_iter()
    }
}

impl<'a> IntoIterator for &'a QuadGraph {
    type Item = &'a Quad;
    type IntoIter = std::collections::btree_set::Iter<'a, Quad>;

    fn into_iter(self) -> Self::IntoIter {
        self.quads.iter()
    }
}
