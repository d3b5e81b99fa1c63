use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::graph::{quote_literal, Literal, Quad, QuadGraph, Term};
use crate::error::{Error, Result};
use crate::iri::Iri;
use crate::vocab::{self, rdf, xsd};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RdfFormat {
    Turtle,
    NQuads,
    TriG,
}

impl RdfFormat {
    pub fn media_type(self) -> &'static str {
        match self {
            RdfFormat::Turtle => "text/turtle",
            RdfFormat::NQuads => "application/n-quads",
            RdfFormat::TriG => "application/trig",
        }
    }
}

impl FromStr for RdfFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "turtle" | "ttl" => Ok(RdfFormat::Turtle),
            "nquads" | "n-quads" | "nq" => Ok(RdfFormat::NQuads),
            "trig" => Ok(RdfFormat::TriG),
            other => Err(Error::Validation(format!("unknown RDF format {other:?}"))),
        }
    }
}

/// Prefix → namespace pairs used to abbreviate IRIs in Turtle and TriG.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixMap(Vec<(String, String)>);

impl Default for PrefixMap {
    fn default() -> Self {
        PrefixMap(vocab::default_prefixes())
    }
}

impl PrefixMap {
    pub fn empty() -> Self {
        PrefixMap(Vec::new())
    }

    /// Adds or replaces a prefix.
    pub fn insert(&mut self, prefix: impl Into<String>, namespace: impl Into<String>) {
        let prefix = prefix.into();
        let namespace = namespace.into();
        match self.0.iter_mut().find(|(p, _)| *p == prefix) {
            Some(entry) => entry.1 = namespace,
            None => self.0.push((prefix, namespace)),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(p, n)| (p.as_str(), n.as_str()))
    }

    pub fn expand(&self, curie: &str) -> Option<String> {
        let (prefix, local) = curie.split_once(':')?;
        self.0.iter().find(|(p, _)| p == prefix).map(|(_, ns)| format!("{ns}{local}"))
    }

    /// The longest namespace match whose remainder is a safe local name.
    fn abbreviate<'s>(&'s self, iri: &'s str) -> Option<(&'s str, &'s str)> {
        static LOCAL: OnceLock<Regex> = OnceLock::new();
        let local_ok = LOCAL.get_or_init(|| Regex::new(r"^[A-Za-z0-9_]([A-Za-z0-9_-]*)$").expect("static regex"));
        self.0
            .iter()
            .filter(|(_, ns)| !ns.is_empty() && iri.starts_with(ns.as_str()))
            .map(|(p, ns)| (p.as_str(), &iri[ns.len()..]))
            .filter(|(_, local)| local_ok.is_match(local))
            .min_by_key(|(_, local)| local.len())
    }
}

impl FromIterator<(String, String)> for PrefixMap {
    fn from_iter<T: IntoIterator<Item = (String, String)>>(iter: T) -> Self {
        let mut map = PrefixMap::empty();
        for (p, n) in iter {
            map.insert(p, n);
        }
        map
    }
}

pub fn serialize(graph: &QuadGraph, format: RdfFormat) -> Result<String> {
    serialize_with(graph, format, &PrefixMap::default())
}

/// Writes a graph. Output is sorted by graph, subject, predicate and object,
/// so equal graphs give byte-equal documents.
pub fn serialize_with(graph: &QuadGraph, format: RdfFormat, prefixes: &PrefixMap) -> Result<String> {
    match format {
        RdfFormat::NQuads => {
            let mut out = String::new();
            for q in graph {
                writeln!(out, "{q}").expect("write to string");
            }
            Ok(out)
        }
        RdfFormat::Turtle => {
            if graph.iter().any(|q| q.graph.is_some()) {
                return Err(Error::Format("Turtle can only hold the default graph".into()));
            }
            let mut w = TurtleWriter::new(prefixes);
            let body = w.block(graph.iter(), "");
            Ok(w.finish(vec![body]))
        }
        RdfFormat::TriG => {
            let mut w = TurtleWriter::new(prefixes);
            let mut blocks = Vec::new();
            for name in graph.graph_names() {
                let quads = graph.iter().filter(|q| q.graph == name);
                match &name {
                    None => blocks.push(w.block(quads, "")),
                    Some(g) => {
                        let head = w.iri(g);
                        let body = w.block(quads, "    ");
                        blocks.push(format!("{head} {{\n{body}}}\n"));
                    }
                }
            }
            Ok(w.finish(blocks))
        }
    }
}

struct TurtleWriter<'a> {
    prefixes: &'a PrefixMap,
    used: BTreeSet<String>,
}

impl<'a> TurtleWriter<'a> {
    fn new(prefixes: &'a PrefixMap) -> Self {
        TurtleWriter { prefixes, used: BTreeSet::new() }
    }

    fn iri(&mut self, iri: &Iri) -> String {
        match self.prefixes.abbreviate(iri.as_str()) {
            Some((p, local)) => {
                self.used.insert(p.to_string());
                format!("{p}:{local}")
            }
            None => format!("<{iri}>"),
        }
    }

    fn term(&mut self, t: &Term) -> String {
        match t {
            Term::Iri(i) => self.iri(i),
            Term::Blank(b) => format!("_:{b}"),
            Term::Literal(Literal { lexical, datatype, language }) => {
                let q = quote_literal(lexical);
                match language {
                    Some(lang) => format!("{q}@{lang}"),
                    None if *datatype == xsd::string() => q,
                    None => format!("{q}^^{}", self.iri(datatype)),
                }
            }
        }
    }

    fn block<'q>(&mut self, quads: impl Iterator<Item = &'q Quad>, indent: &str) -> String {
        let mut out = String::new();
        let mut subject: Option<&Term> = None;
        let mut predicate: Option<&Iri> = None;
        for q in quads {
            if subject == Some(&q.subject) {
                if predicate == Some(&q.predicate) {
                    out.push_str(" ,\n");
                    out.push_str(&format!("{indent}        {}", self.term(&q.object)));
                    continue;
                }
                out.push_str(" ;\n");
                let p = self.predicate(&q.predicate);
                let o = self.term(&q.object);
                out.push_str(&format!("{indent}    {p} {o}"));
            } else {
                if subject.is_some() {
                    out.push_str(" .\n");
                }
                let s = self.term(&q.subject);
                let p = self.predicate(&q.predicate);
                let o = self.term(&q.object);
                out.push_str(&format!("{indent}{s} {p} {o}"));
            }
            subject = Some(&q.subject);
            predicate = Some(&q.predicate);
        }
        if subject.is_some() {
            out.push_str(" .\n");
        }
        out
    }

    fn predicate(&mut self, p: &Iri) -> String {
        if *p == rdf::type_() {
            "a".to_string()
        } else {
            self.iri(p)
        }
    }

    fn finish(self, blocks: Vec<String>) -> String {
        let blocks: Vec<String> = blocks.into_iter().filter(|b| !b.is_empty()).collect();
        if blocks.is_empty() {
            return String::new();
        }
        let mut out = String::new();
        for (p, ns) in self.prefixes.iter() {
            if self.used.contains(p) {
                writeln!(out, "@prefix {p}: <{ns}> .").expect("write to string");
            }
        }
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str(&blocks.join("\n"));
        out
    }
}

/// Parses a document into quads. Turtle triples land in the default graph.
pub fn parse(text: &str, format: RdfFormat) -> Result<QuadGraph> {
    let mut graph = QuadGraph::new();
    match format {
        RdfFormat::Turtle => {
            for t in oxttl::TurtleParser::new().for_slice(text) {
                let t = t.map_err(syntax_error)?;
                graph.insert(convert(t.subject, t.predicate, t.object, oxrdf::GraphName::DefaultGraph)?);
            }
        }
        RdfFormat::TriG => {
            for q in oxttl::TriGParser::new().for_slice(text) {
                let q = q.map_err(syntax_error)?;
                graph.insert(convert(q.subject, q.predicate, q.object, q.graph_name)?);
            }
        }
        RdfFormat::NQuads => {
            for q in oxttl::NQuadsParser::new().for_slice(text) {
                let q = q.map_err(syntax_error)?;
                graph.insert(convert(q.subject, q.predicate, q.object, q.graph_name)?);
            }
        }
    }
    Ok(graph)
}

fn syntax_error(e: oxttl::TurtleSyntaxError) -> Error {
    let at = e.location().start;
    Error::Syntax { line: at.line + 1, column: at.column + 1, message: e.message().to_string() }
}

fn convert(
    subject: oxrdf::NamedOrBlankNode,
    predicate: oxrdf::NamedNode,
    object: oxrdf::Term,
    graph: oxrdf::GraphName,
) -> Result<Quad> {
    let iri = |n: oxrdf::NamedNode| Iri::new(n.into_string()).map_err(|e| Error::Format(e.to_string()));
    let subject = match subject {
        oxrdf::NamedOrBlankNode::NamedNode(n) => Term::Iri(iri(n)?),
        oxrdf::NamedOrBlankNode::BlankNode(b) => Term::Blank(b.into_string()),
    };
    let object = match object {
        oxrdf::Term::NamedNode(n) => Term::Iri(iri(n)?),
        oxrdf::Term::BlankNode(b) => Term::Blank(b.into_string()),
        oxrdf::Term::Literal(l) => {
            let (lexical, datatype, language) = l.destruct();
            let datatype = match (&language, datatype) {
                (Some(_), _) => rdf::lang_string(),
                (None, Some(dt)) => iri(dt)?,
                (None, None) => xsd::string(),
            };
            Term::Literal(Literal { lexical, datatype, language })
        }
    };
    let graph = match graph {
        oxrdf::GraphName::DefaultGraph => None,
        oxrdf::GraphName::NamedNode(n) => Some(iri(n)?),
        oxrdf::GraphName::BlankNode(b) => {
            return Err(Error::Format(format!("blank graph name _:{b} is not supported")));
        }
    };
    Ok(Quad { graph, subject, predicate: iri(predicate)?, object })
}
