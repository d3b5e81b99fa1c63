use super::graph::{QuadGraph, Term};
use crate::error::{Error, Result};
use crate::metamodel::{StatementPattern, ValueKind};
use crate::renderer;
use crate::store::StatementVersion;
use crate::vocab::{rdf, rosetta};

/// The light form: the statement node links straight to its values, one
/// triple per value, inside a named graph named after the version.
pub fn to_light_graph(version: &StatementVersion, pattern: &StatementPattern) -> Result<QuadGraph> {
    renderer::render(version, pattern)?;
    let node = Term::Iri(version.id.clone());
    let g = Some(&version.id);
    let mut graph = QuadGraph::new();
    graph.add(node.clone(), rdf::type_(), &pattern.class_iri, g);
    for v in &version.subject_position.values {
        graph.add(node.clone(), rosetta::subject(), Term::from(v), g);
    }
    for position in &version.object_positions {
        let spec = pattern
            .position(&position.thematic_label)
            .ok_or_else(|| Error::Render(format!("unknown position {}", position.thematic_label)))?;
        let predicate =
            rosetta::light_object_position(spec.required, spec.value_kind == ValueKind::Literal, spec.index);
        for v in &position.values {
            graph.add(node.clone(), predicate.clone(), Term::from(v), g);
        }
    }
    Ok(graph)
}
