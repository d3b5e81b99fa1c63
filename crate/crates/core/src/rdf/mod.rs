//! RDF materialization of statements: light and full forms, named-graph
//! packaging, serialization and parsing.

mod full;
mod graph;
mod light;
mod syntax;

pub use full::{import_full_graph, meta_graph_iri, to_archival_graph, to_full_graph, version_graph};
pub use graph::{Literal, Quad, QuadGraph, Term};
pub use light::to_light_graph;
pub use syntax::{parse, serialize, serialize_with, PrefixMap, RdfFormat};

use crate::error::Result;
use crate::iri::Iri;
use crate::store::Store;
use crate::value::Value;
use crate::vocab::{rdfs, rosetta};

/// Graph holding terminology shared between statements: statement classes,
/// position classes and resource labels.
pub fn ontology_graph_iri(base: &Iri) -> Iri {
    base.join("ontology")
}

/// Exports every anchor in full form plus the ontology graph. With
/// `archival`, deleted anchors keep their versions.
pub fn export_store(store: &Store, archival: bool) -> Result<QuadGraph> {
    let onto = ontology_graph_iri(store.base());
    let o = Some(&onto);
    let mut graph = QuadGraph::new();
    for pattern in store.registry().list() {
        let class = Term::Iri(pattern.class_iri.clone());
        graph.add(class.clone(), rdfs::label(), Term::string(&pattern.label), o);
        for p in pattern.positions() {
            let parent = if p.is_subject() { rosetta::subject_position() } else { rosetta::object_position() };
            let pc = pattern.position_class(&p.thematic_label);
            graph.add(pc.clone(), rdfs::sub_class_of(), parent, o);
            graph.add(pc, rdfs::label(), Term::string(&p.thematic_label), o);
        }
    }
    for anchor in store.anchors() {
        let pattern = store.pattern_of(&anchor)?;
        let g = if archival { to_archival_graph(&anchor, &pattern)? } else { to_full_graph(&anchor, &pattern)? };
        graph.extend(g);
        if anchor.is_deleted() {
            continue;
        }
        for v in &anchor.versions {
            for value in v.positions().flat_map(|p| &p.values) {
                if let Value::Resource { iri, label: Some(l) } = value {
                    graph.add(iri, rdfs::label(), Term::string(l), o);
                }
            }
        }
    }
    Ok(graph)
}
