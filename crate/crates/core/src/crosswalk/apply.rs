use std::collections::BTreeMap;

use sha2::{Digest, Sha256};

use super::entity_map::EntityMap;
use super::spec::{CompiledCrosswalk, TemplateTerm};
use crate::error::{Error, Result};
use crate::hierarchy::ClassHierarchy;
use crate::metamodel::{slugify, StatementPattern};
use crate::rdf::{Quad, QuadGraph, Term};
use crate::store::{check_values, StatementVersion};
use crate::value::Value;
use crate::vocab::rdf;

/// Instantiates a crosswalk for one version. The output lives in the named
/// graph of the version. Triples that reference an empty optional slot are
/// left out.
pub fn apply_crosswalk(
    version: &StatementVersion,
    pattern: &StatementPattern,
    crosswalk: &CompiledCrosswalk,
    entity_map: &EntityMap,
) -> Result<QuadGraph> {
    let spec = &crosswalk.spec;
    if pattern.id != crosswalk.source_pattern {
        return Err(Error::Crosswalk(format!(
            "crosswalk {} applies to <{}>, not <{}>",
            spec.id, crosswalk.source_pattern, pattern.id
        )));
    }
    check_values(pattern, &version.value_map(), &ClassHierarchy::default())
        .map_err(|e| Error::Crosswalk(format!("version {} does not conform: {e}", version.id)))?;
    for label in &spec.required_slots {
        if version.values(label).is_empty() {
            return Err(Error::Crosswalk(format!("required slot {label} of {} is empty", version.id)));
        }
    }

    let mut slots: BTreeMap<&str, Vec<Term>> = BTreeMap::new();
    for position in version.positions() {
        let mapped = spec.map_slots.contains(&position.thematic_label);
        let mut terms = Vec::new();
        for v in &position.values {
            terms.push(match v {
                Value::Resource { iri, .. } if mapped => match entity_map.get(iri) {
                    Some(m) => Term::Iri(m.target.clone()),
                    None => return Err(Error::UnmappedEntity(iri.clone())),
                },
                other => Term::from(other),
            });
        }
        slots.insert(position.thematic_label.as_str(), terms);
    }

    let target = slugify(&spec.target_name);
    let digest = hex::encode(Sha256::digest(version.id.as_str().as_bytes()));
    let nodes: BTreeMap<&str, Term> = crosswalk
        .nodes
        .iter()
        .map(|(var, _, blank)| {
            let term = if *blank {
                Term::Blank(format!("{}{}{}", &digest[..12], target.replace('-', "_"), var))
            } else {
                Term::Iri(version.id.join(&target).join(var))
            };
            (var.as_str(), term)
        })
        .collect();
    let statement = Term::Iri(version.id.clone());
    let resolve = |t: &TemplateTerm| -> Vec<Term> {
        match t {
            TemplateTerm::Slot(label) => slots.get(label.as_str()).cloned().unwrap_or_default(),
            TemplateTerm::Statement => vec![statement.clone()],
            TemplateTerm::Node(var) => vec![nodes[var.as_str()].clone()],
            TemplateTerm::Iri(i) => vec![Term::Iri(i.clone())],
            TemplateTerm::Literal { lexical, datatype } => vec![Term::typed(lexical.clone(), datatype.clone())],
        }
    };

    let g = Some(&version.id);
    let mut graph = QuadGraph::new();
    for (var, ty, _) in &crosswalk.nodes {
        if let Some(ty) = ty {
            for class in resolve(ty) {
                graph.insert(Quad::new(nodes[var.as_str()].clone(), rdf::type_(), class, g));
            }
        }
    }
    for [s, p, o] in &crosswalk.triples {
        let TemplateTerm::Iri(p) = p else { unreachable!("compiled predicates are constant IRIs") };
        for subject in resolve(s) {
            if subject.is_literal() {
                return Err(Error::Crosswalk(format!("slot value {subject} cannot be a subject")));
            }
            for object in resolve(o) {
                graph.insert(Quad::new(subject.clone(), p.clone(), object, g));
            }
        }
    }
    Ok(graph)
}
