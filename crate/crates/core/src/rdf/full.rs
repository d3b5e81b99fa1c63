use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};

use super::graph::{Literal, QuadGraph, Term};
use crate::error::{Error, Result};
use crate::iri::Iri;
use crate::metamodel::StatementPattern;
use crate::store::{AnchorStatement, PositionInstance, ProvenanceMetadata, StatementVersion};
use crate::value::Value;
use crate::vocab::{dct, pav, rdf, rdfs, rosetta, xsd};

/// Named graph holding an anchor's version-independent data.
pub fn meta_graph_iri(anchor: &Iri) -> Iri {
    anchor.join("meta")
}

/// The full form of an anchor: its metadata graph plus one named graph per
/// version. A soft-deleted anchor yields the metadata graph only.
pub fn to_full_graph(anchor: &AnchorStatement, pattern: &StatementPattern) -> Result<QuadGraph> {
    let mut graph = meta_graph(anchor, pattern);
    if !anchor.is_deleted() {
        for v in &anchor.versions {
            graph.extend(version_graph(anchor, v, pattern)?);
        }
    }
    Ok(graph)
}

/// Like [`to_full_graph`] but keeps the versions of deleted anchors, for
/// backups and store migration.
pub fn to_archival_graph(anchor: &AnchorStatement, pattern: &StatementPattern) -> Result<QuadGraph> {
    let mut graph = meta_graph(anchor, pattern);
    for v in &anchor.versions {
        graph.extend(version_graph(anchor, v, pattern)?);
    }
    Ok(graph)
}

fn meta_graph(anchor: &AnchorStatement, pattern: &StatementPattern) -> QuadGraph {
    let g = meta_graph_iri(&anchor.id);
    let g = Some(&g);
    let a = Term::Iri(anchor.id.clone());
    let m = &anchor.metadata;
    let mut graph = QuadGraph::new();
    graph.add(a.clone(), rdf::type_(), &anchor.statement_type, g);
    if anchor.negated {
        graph.add(a.clone(), rdf::type_(), rosetta::negation(), g);
    }
    graph.add(a.clone(), rosetta::has_data_schema_pattern(), pattern.shape_iri(), g);
    for c in &anchor.context_refs {
        graph.add(a.clone(), rosetta::has_context(), c, g);
    }
    graph.add(a.clone(), dct::creator(), &m.creator, g);
    graph.add(a.clone(), dct::created(), Term::date_time(&m.creation_date), g);
    let optional = [
        (pav::authored_by(), &m.author),
        (pav::curated_by(), &m.curator),
        (pav::imported_from(), &m.imported_from),
        (dct::license(), &m.license),
    ];
    for (p, o) in optional {
        if let Some(o) = o {
            graph.add(a.clone(), p, o, g);
        }
    }
    if let Some(method) = &m.extraction_method {
        graph.add(a.clone(), rosetta::extraction_method(), Term::string(method), g);
    }
    graph.add(a.clone(), rosetta::modifiable(), Term::boolean(anchor.modifiable), g);
    if let Some(c) = anchor.confidence_level {
        graph.add(a.clone(), rosetta::confidence_level(), Term::typed(c.to_string(), xsd::decimal()), g);
    }
    if let Some(at) = &anchor.deleted_at {
        graph.add(a.clone(), rosetta::deleted_at(), Term::date_time(at), g);
    }
    if let Some(by) = &anchor.deleted_by {
        graph.add(a.clone(), rosetta::deleted_by(), by, g);
    }
    for v in &anchor.versions {
        let vt = Term::Iri(v.id.clone());
        graph.add(a.clone(), rosetta::has_version(), vt.clone(), g);
        graph.add(vt.clone(), rosetta::version_number(), Term::integer(v.version_number), g);
        graph.add(vt.clone(), rosetta::created_by(), &v.created_by, g);
        graph.add(vt, rosetta::created_at(), Term::date_time(&v.created_at), g);
    }
    graph
}

/// The statement content of one version in its own named graph, without
/// any provenance metadata.
pub fn version_graph(
    anchor: &AnchorStatement,
    version: &StatementVersion,
    pattern: &StatementPattern,
) -> Result<QuadGraph> {
    let g = Some(&version.id);
    let v = Term::Iri(version.id.clone());
    let mut graph = QuadGraph::new();
    graph.add(v.clone(), rdf::type_(), &anchor.statement_type, g);
    if anchor.negated {
        graph.add(v.clone(), rdf::type_(), rosetta::negation(), g);
    }
    for position in version.positions() {
        let label = &position.thematic_label;
        let spec = pattern
            .position(label)
            .ok_or_else(|| Error::Render(format!("{} has no position {label}", pattern.label)))?;
        let link = if spec.is_subject() {
            rosetta::has_subject_position()
        } else if spec.required {
            rosetta::has_required_object_position()
        } else {
            rosetta::has_optional_object_position()
        };
        let p = Term::Iri(position.id.clone());
        graph.add(v.clone(), link, p.clone(), g);
        graph.add(p.clone(), rdf::type_(), pattern.position_class(label), g);
        graph.add(p.clone(), rosetta::thematic_label(), Term::string(label), g);
        if let Some(t) = position.transitive {
            graph.add(p.clone(), rosetta::transitive(), Term::boolean(t), g);
        }
        for (k, value) in position.order_indices().zip(&position.values) {
            let holder = Term::Iri(position.id.join("value").join(&k.to_string()));
            graph.add(p.clone(), rosetta::has_value(), holder.clone(), g);
            graph.add(holder.clone(), rosetta::order(), Term::integer(k), g);
            graph.add(holder.clone(), rosetta::value(), Term::from(value), g);
            if let Value::Resource { label: Some(l), .. } = value {
                graph.add(holder, rdfs::label(), Term::string(l), g);
            }
        }
    }
    Ok(graph)
}

/// Triple index by subject, ignoring graph names.
struct Index<'a> {
    by_subject: BTreeMap<&'a Term, Vec<(&'a Iri, &'a Term)>>,
    offending: Vec<String>,
}

impl<'a> Index<'a> {
    fn new(graph: &'a QuadGraph) -> Self {
        let mut by_subject: BTreeMap<&Term, Vec<(&Iri, &Term)>> = BTreeMap::new();
        for q in graph {
            by_subject.entry(&q.subject).or_default().push((&q.predicate, &q.object));
        }
        Index { by_subject, offending: Vec::new() }
    }

    fn all(&self, s: &Term, p: &Iri) -> Vec<&'a Term> {
        self.by_subject
            .get(s)
            .map(|po| po.iter().filter(|(pp, _)| *pp == p).map(|(_, o)| *o).collect())
            .unwrap_or_default()
    }

    fn has_subject(&self, s: &Term) -> bool {
        self.by_subject.contains_key(s)
    }

    fn fail(&mut self, node: &Term, msg: impl std::fmt::Display) {
        self.offending.push(format!("{node}: {msg}"));
    }

    fn opt(&mut self, s: &Term, p: &Iri) -> Option<&'a Term> {
        let all = self.all(s, p);
        if all.len() > 1 {
            self.fail(s, format!("more than one <{p}>"));
        }
        all.first().copied()
    }

    fn one(&mut self, s: &Term, p: &Iri) -> Option<&'a Term> {
        let found = self.opt(s, p);
        if found.is_none() {
            self.fail(s, format!("missing <{p}>"));
        }
        found
    }

    fn iri(&mut self, s: &Term, p: &Iri, t: Option<&'a Term>) -> Option<Iri> {
        match t? {
            Term::Iri(i) => Some(i.clone()),
            other => {
                self.fail(s, format!("<{p}> must be an IRI, found {other}"));
                None
            }
        }
    }

    fn literal(&mut self, s: &Term, p: &Iri, t: Option<&'a Term>, datatype: &Iri) -> Option<&'a str> {
        match t? {
            Term::Literal(Literal { lexical, datatype: dt, language: None }) if dt == datatype => Some(lexical),
            other => {
                self.fail(s, format!("<{p}> must be a <{datatype}> literal, found {other}"));
                None
            }
        }
    }

    fn parsed<T: std::str::FromStr>(&mut self, s: &Term, p: &Iri, t: Option<&'a Term>, dt: &Iri) -> Option<T> {
        let lex = self.literal(s, p, t, dt)?;
        match lex.parse() {
            Ok(v) => Some(v),
            Err(_) => {
                self.fail(s, format!("<{p}> has invalid value {lex:?}"));
                None
            }
        }
    }

    fn timestamp(&mut self, s: &Term, p: &Iri, t: Option<&'a Term>) -> Option<DateTime<Utc>> {
        let lex = self.literal(s, p, t, &xsd::date_time())?;
        match DateTime::parse_from_rfc3339(lex) {
            Ok(d) => Some(d.with_timezone(&Utc)),
            Err(_) => {
                self.fail(s, format!("<{p}> has invalid timestamp {lex:?}"));
                None
            }
        }
    }
}

/// Rebuilds an anchor from its full-form graph (the inverse of
/// [`to_full_graph`] / [`to_archival_graph`]). Every problem found is
/// reported in the error, not just the first.
pub fn import_full_graph(graph: &QuadGraph) -> Result<AnchorStatement> {
    let mut ix = Index::new(graph);
    let schema_p = rosetta::has_data_schema_pattern();
    let anchors: BTreeSet<&Term> = graph.subjects(&schema_p).collect();
    let a = match anchors.len() {
        1 => anchors.into_iter().next().expect("one anchor").clone(),
        0 => return Err(Error::Import { offending: vec!["no node with rosetta:hasDataSchemaPattern".into()] }),
        _ => {
            return Err(Error::Import {
                offending: anchors.iter().map(|t| format!("{t}: more than one anchor in graph")).collect(),
            })
        }
    };
    let Term::Iri(anchor_id) = a.clone() else {
        return Err(Error::Import { offending: vec![format!("{a}: anchor must be an IRI")] });
    };

    let types = ix.all(&a, &rdf::type_());
    let negated = types.iter().any(|t| t.as_iri() == Some(&rosetta::negation()));
    let classes: Vec<Iri> =
        types.iter().filter_map(|t| t.as_iri()).filter(|i| **i != rosetta::negation()).cloned().collect();
    if classes.len() != 1 {
        ix.fail(&a, format!("expected one statement class, found {}", classes.len()));
    }
    let schema = ix.opt(&a, &rosetta::has_data_schema_pattern());
    let pattern_ref = ix.iri(&a, &rosetta::has_data_schema_pattern(), schema).and_then(|shape| {
        match shape.as_str().strip_suffix("/shape") {
            Some(p) => Iri::new(p).ok(),
            None => {
                ix.fail(&a, format!("<{shape}> is not a pattern shape IRI"));
                None
            }
        }
    });
    let mut context_refs = Vec::new();
    for c in ix.all(&a, &rosetta::has_context()) {
        if let Some(i) = ix.iri(&a, &rosetta::has_context(), Some(c)) {
            context_refs.push(i);
        }
    }
    context_refs.sort();

    let creator_t = ix.one(&a, &dct::creator());
    let creator = ix.iri(&a, &dct::creator(), creator_t);
    let created_t = ix.one(&a, &dct::created());
    let created = ix.timestamp(&a, &dct::created(), created_t);
    let mut optional_iri = |p: Iri| {
        let t = ix.opt(&a, &p);
        ix.iri(&a, &p, t)
    };
    let author = optional_iri(pav::authored_by());
    let curator = optional_iri(pav::curated_by());
    let imported_from = optional_iri(pav::imported_from());
    let license = optional_iri(dct::license());
    let deleted_by = optional_iri(rosetta::deleted_by());
    let method_t = ix.opt(&a, &rosetta::extraction_method());
    let extraction_method = ix.literal(&a, &rosetta::extraction_method(), method_t, &xsd::string()).map(String::from);
    let modifiable_t = ix.one(&a, &rosetta::modifiable());
    let modifiable = ix.parsed::<bool>(&a, &rosetta::modifiable(), modifiable_t, &xsd::boolean());
    let confidence_t = ix.opt(&a, &rosetta::confidence_level());
    let confidence_level = ix.parsed::<f64>(&a, &rosetta::confidence_level(), confidence_t, &xsd::decimal());
    let deleted_t = ix.opt(&a, &rosetta::deleted_at());
    let deleted_at = ix.timestamp(&a, &rosetta::deleted_at(), deleted_t);
    if deleted_at.is_some() != deleted_by.is_some() {
        ix.fail(&a, "deletedAt and deletedBy must appear together");
    }

    let version_nodes = ix.all(&a, &rosetta::has_version());
    if version_nodes.is_empty() {
        ix.fail(&a, "missing rosetta:hasVersion");
    }
    let mut numbered = Vec::new();
    for vt in version_nodes {
        let n_t = ix.one(vt, &rosetta::version_number());
        if let Some(n) = ix.parsed::<u32>(vt, &rosetta::version_number(), n_t, &xsd::integer()) {
            numbered.push((n, vt));
        }
    }
    numbered.sort();
    let numbers: Vec<u32> = numbered.iter().map(|(n, _)| *n).collect();
    if numbers.iter().enumerate().any(|(i, n)| *n as usize != i + 1) {
        ix.fail(&a, format!("version numbers are not consecutive from 1: {numbers:?}"));
    }

    let deleted = deleted_at.is_some();
    let with_content: Vec<bool> =
        numbered.iter().map(|(_, vt)| !ix.all(vt, &rosetta::has_subject_position()).is_empty()).collect();
    let keep_versions = with_content.iter().any(|c| *c) || !deleted;
    let mut versions = Vec::new();
    if keep_versions {
        for (n, vt) in &numbered {
            if let Some(v) = import_version(&mut ix, vt, *n, classes.first()) {
                versions.push(v);
            }
        }
    }

    if !ix.offending.is_empty() {
        return Err(Error::Import { offending: ix.offending });
    }
    let (Some(statement_type), Some(pattern_ref), Some(creator), Some(created), Some(modifiable)) =
        (classes.into_iter().next(), pattern_ref, creator, created, modifiable)
    else {
        return Err(Error::Import { offending: vec![format!("{a}: incomplete anchor")] });
    };
    Ok(AnchorStatement {
        id: anchor_id,
        statement_type,
        pattern_ref,
        context_refs,
        versions,
        metadata: ProvenanceMetadata {
            creator,
            creation_date: created,
            author,
            curator,
            extraction_method,
            imported_from,
            license,
        },
        deleted_at,
        deleted_by,
        modifiable,
        confidence_level,
        negated,
    })
}

fn import_version(ix: &mut Index<'_>, vt: &Term, number: u32, class: Option<&Iri>) -> Option<StatementVersion> {
    let Term::Iri(id) = vt else {
        ix.fail(vt, "version must be an IRI");
        return None;
    };
    if !ix.has_subject(vt) {
        ix.fail(vt, "version graph is missing");
        return None;
    }
    if let Some(c) = class {
        if !ix.all(vt, &rdf::type_()).iter().any(|t| t.as_iri() == Some(c)) {
            ix.fail(vt, format!("not typed <{c}>"));
        }
    }
    let by_t = ix.one(vt, &rosetta::created_by());
    let created_by = ix.iri(vt, &rosetta::created_by(), by_t);
    let at_t = ix.one(vt, &rosetta::created_at());
    let created_at = ix.timestamp(vt, &rosetta::created_at(), at_t);
    let subject_t = ix.one(vt, &rosetta::has_subject_position());
    let subject = subject_t.and_then(|p| import_position(ix, p));
    let mut objects: Vec<PositionInstance> = Vec::new();
    let mut object_nodes = ix.all(vt, &rosetta::has_required_object_position());
    object_nodes.extend(ix.all(vt, &rosetta::has_optional_object_position()));
    for p in object_nodes {
        if let Some(pos) = import_position(ix, p) {
            objects.push(pos);
        }
    }
    objects.sort_by(|a, b| a.thematic_label.cmp(&b.thematic_label));
    Some(StatementVersion {
        id: id.clone(),
        version_number: number,
        subject_position: subject?,
        object_positions: objects,
        created_by: created_by?,
        created_at: created_at?,
    })
}

fn import_position(ix: &mut Index<'_>, pt: &Term) -> Option<PositionInstance> {
    let Term::Iri(id) = pt else {
        ix.fail(pt, "position instance must be an IRI");
        return None;
    };
    let label_t = ix.one(pt, &rosetta::thematic_label());
    let label = ix.literal(pt, &rosetta::thematic_label(), label_t, &xsd::string())?.to_string();
    let transitive_t = ix.opt(pt, &rosetta::transitive());
    let transitive = ix.parsed::<bool>(pt, &rosetta::transitive(), transitive_t, &xsd::boolean());
    let mut ordered = Vec::new();
    for h in ix.all(pt, &rosetta::has_value()) {
        let order_t = ix.one(h, &rosetta::order());
        let order = ix.parsed::<u32>(h, &rosetta::order(), order_t, &xsd::integer());
        let value_t = ix.one(h, &rosetta::value());
        let label_t = ix.opt(h, &rdfs::label());
        let value_label = ix.literal(h, &rdfs::label(), label_t, &xsd::string()).map(String::from);
        let value = match value_t {
            Some(Term::Iri(iri)) => Some(Value::Resource { iri: iri.clone(), label: value_label }),
            Some(Term::Literal(Literal { lexical, datatype, language: None })) => {
                Some(Value::Literal { lexical: lexical.clone(), datatype: datatype.clone() })
            }
            Some(other) => {
                ix.fail(h, format!("unsupported value {other}"));
                None
            }
            None => None,
        };
        if let (Some(o), Some(v)) = (order, value) {
            ordered.push((o, v));
        }
    }
    ordered.sort_by_key(|(o, _)| *o);
    if ordered.iter().enumerate().any(|(i, (o, _))| *o as usize != i + 1) {
        let orders: Vec<u32> = ordered.iter().map(|(o, _)| *o).collect();
        ix.fail(pt, format!("value orders are not consecutive from 1: {orders:?}"));
    }
    if ordered.is_empty() {
        ix.fail(pt, "position instance has no values");
    }
    Some(PositionInstance {
        id: id.clone(),
        thematic_label: label,
        values: ordered.into_iter().map(|(_, v)| v).collect(),
        transitive,
    })
}
