//! Human-readable output: dynamic labels and mind maps.

mod dot;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use dot::export_mindmap_dot;

use crate::error::{Error, Result};
use crate::hierarchy::ClassHierarchy;
use crate::metamodel::{join_values, SlotSpan, StatementPattern};
use crate::store::{check_values, StatementVersion};

pub const NEGATION_PREFIX: &str = "It is not the case that ";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderedStatement {
    pub text: String,
    pub slot_spans: Vec<SlotSpan>,
}

pub fn render(version: &StatementVersion, pattern: &StatementPattern) -> Result<RenderedStatement> {
    render_statement(version, pattern, false)
}

/// Renders a version, applying the pattern's negation form when `negated`.
pub fn render_statement(
    version: &StatementVersion,
    pattern: &StatementPattern,
    negated: bool,
) -> Result<RenderedStatement> {
    ensure_conforms(version, pattern)?;
    let values = version.value_map();
    let negated_view;
    let p = match pattern.negated_verb_display.as_ref().filter(|_| negated) {
        Some(verb) => {
            negated_view = StatementPattern { verb_display: verb.clone(), ..pattern.clone() };
            &negated_view
        }
        None => pattern,
    };
    let (text, slot_spans) = p.label_template().compose(|_, label| {
        let vals = values.get(label)?;
        let texts: Vec<String> = vals.iter().map(|v| v.display_text()).collect();
        Some(join_values(&texts))
    });
    if negated && pattern.negated_verb_display.is_none() {
        let shift = NEGATION_PREFIX.chars().count();
        return Ok(RenderedStatement {
            text: format!("{NEGATION_PREFIX}{text}"),
            slot_spans: slot_spans
                .into_iter()
                .map(|s| SlotSpan { start: s.start + shift, end: s.end + shift, ..s })
                .collect(),
        });
    }
    Ok(RenderedStatement { text, slot_spans })
}

/// Editor preview of a pattern. Filled positions show the given text, the
/// subject falls back to its placeholder, other empty positions are elided.
pub fn preview(pattern: &StatementPattern, fill: &BTreeMap<String, String>) -> String {
    pattern
        .label_template()
        .compose(|i, label| match fill.get(label) {
            Some(t) if !t.is_empty() => Some(t.clone()),
            _ if i == 0 => {
                let ph = &pattern.subject.placeholder;
                Some(if ph.is_empty() { label.to_string() } else { ph.clone() })
            }
            _ => None,
        })
        .0
}

fn ensure_conforms(version: &StatementVersion, pattern: &StatementPattern) -> Result<()> {
    if version.subject_position.thematic_label != pattern.subject.thematic_label {
        return Err(Error::Render(format!(
            "version {} has subject {}, pattern {} expects {}",
            version.id, version.subject_position.thematic_label, pattern.label, pattern.subject.thematic_label
        )));
    }
    check_values(pattern, &version.value_map(), &ClassHierarchy::default())
        .map_err(|e| Error::Render(format!("version {} does not conform: {e}", version.id)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Subject,
    Object,
    Predicate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MindMapNode {
    pub id: String,
    pub label: String,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MindMapEdge {
    pub from: String,
    pub to: String,
    pub label: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MindMap {
    pub nodes: Vec<MindMapNode>,
    pub edges: Vec<MindMapEdge>,
}

impl MindMap {
    fn add_node(&mut self, node: MindMapNode) {
        if !self.nodes.iter().any(|n| n.id == node.id) {
            self.nodes.push(node);
        }
    }
}

/// Builds the mind map of one version: a predicate node for the statement,
/// subject values pointing at it and object values hanging off it.
/// Resource values use their IRI as node id so maps can be merged.
pub fn render_mindmap(version: &StatementVersion, pattern: &StatementPattern) -> Result<MindMap> {
    ensure_conforms(version, pattern)?;
    let predicate = version.id.to_string();
    let mut map = MindMap::default();
    map.add_node(MindMapNode { id: predicate.clone(), label: pattern.verb_display.clone(), kind: NodeKind::Predicate });
    for position in version.positions() {
        let is_subject = position.thematic_label == pattern.subject.thematic_label;
        for (k, value) in position.values.iter().enumerate() {
            let id = match value.iri() {
                Some(iri) => iri.to_string(),
                None => format!("{}/{}/{}", version.id, position.thematic_label, k + 1),
            };
            let kind = if is_subject { NodeKind::Subject } else { NodeKind::Object };
            map.add_node(MindMapNode { id: id.clone(), label: value.display_text(), kind });
            let label = position.thematic_label.clone();
            map.edges.push(if is_subject {
                MindMapEdge { from: id, to: predicate.clone(), label }
            } else {
                MindMapEdge { from: predicate.clone(), to: id, label }
            });
        }
    }
    Ok(map)
}

/// Unifies nodes with equal ids (the first occurrence wins) and keeps every
/// edge.
pub fn merge_mindmaps(maps: &[MindMap]) -> MindMap {
    let mut merged = MindMap::default();
    for map in maps {
        for n in &map.nodes {
            merged.add_node(n.clone());
        }
        merged.edges.extend(map.edges.iter().cloned());
    }
    merged
}
