use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::iri::Iri;
use crate::value::Value;

/// Who created a statement, when, and from where.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProvenanceMetadata {
    pub creator: Iri,
    pub creation_date: DateTime<Utc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub author: Option<Iri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curator: Option<Iri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extraction_method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imported_from: Option<Iri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub license: Option<Iri>,
}

impl ProvenanceMetadata {
    pub fn new(creator: Iri, creation_date: DateTime<Utc>) -> Self {
        ProvenanceMetadata {
            creator,
            creation_date,
            author: None,
            curator: None,
            extraction_method: None,
            imported_from: None,
            license: None,
        }
    }
}

/// A filled subject or object position. Values are kept in `rosetta:order`
/// order; the order index of `values[i]` is `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionInstance {
    pub id: Iri,
    pub thematic_label: String,
    pub values: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transitive: Option<bool>,
}

impl PositionInstance {
    pub fn order_indices(&self) -> impl Iterator<Item = u32> {
        1..=self.values.len() as u32
    }
}

/// Immutable snapshot of a statement's position values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementVersion {
    pub id: Iri,
    pub version_number: u32,
    pub subject_position: PositionInstance,
    /// Sorted by thematic label.
    pub object_positions: Vec<PositionInstance>,
    pub created_by: Iri,
    pub created_at: DateTime<Utc>,
}

impl StatementVersion {
    pub fn positions(&self) -> impl Iterator<Item = &PositionInstance> {
        std::iter::once(&self.subject_position).chain(self.object_positions.iter())
    }

    pub fn position(&self, thematic_label: &str) -> Option<&PositionInstance> {
        self.positions().find(|p| p.thematic_label == thematic_label)
    }

    pub fn values(&self, thematic_label: &str) -> &[Value] {
        self.position(thematic_label).map_or(&[], |p| p.values.as_slice())
    }

    /// Position values keyed by thematic label, subject included.
    pub fn value_map(&self) -> BTreeMap<String, Vec<Value>> {
        self.positions().map(|p| (p.thematic_label.clone(), p.values.clone())).collect()
    }
}

/// The version-independent statement resource.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnchorStatement {
    pub id: Iri,
    pub statement_type: Iri,
    pub pattern_ref: Iri,
    #[serde(default)]
    pub context_refs: Vec<Iri>,
    pub versions: Vec<StatementVersion>,
    pub metadata: ProvenanceMetadata,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deleted_at: Option<DateTime<Utc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deleted_by: Option<Iri>,
    pub modifiable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence_level: Option<f64>,
    #[serde(default)]
    pub negated: bool,
}

impl AnchorStatement {
    pub fn is_deleted(&self) -> bool {
        self.deleted_at.is_some()
    }

    pub fn latest(&self) -> Option<&StatementVersion> {
        self.versions.iter().max_by_key(|v| v.version_number)
    }

    pub fn version(&self, n: u32) -> Option<&StatementVersion> {
        self.versions.iter().find(|v| v.version_number == n)
    }

    /// Anchor-level information that stays accessible after a soft delete.
    pub fn deleted_marker(&self) -> DeletedMarker {
        DeletedMarker {
            anchor: self.id.clone(),
            statement_type: self.statement_type.clone(),
            pattern_ref: self.pattern_ref.clone(),
            context_refs: self.context_refs.clone(),
            metadata: self.metadata.clone(),
            deleted_at: self.deleted_at.unwrap_or(self.metadata.creation_date),
            deleted_by: self.deleted_by.clone().unwrap_or_else(|| self.metadata.creator.clone()),
            version_count: self.versions.len() as u32,
        }
    }
}

/// What `resolve` returns for a soft-deleted anchor: provenance, no values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeletedMarker {
    pub anchor: Iri,
    pub statement_type: Iri,
    pub pattern_ref: Iri,
    pub context_refs: Vec<Iri>,
    pub metadata: ProvenanceMetadata,
    pub deleted_at: DateTime<Utc>,
    pub deleted_by: Iri,
    pub version_count: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Resolved {
    Current(StatementVersion),
    Deleted(DeletedMarker),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChangeKind {
    Added,
    Removed,
    Modified,
    Reordered,
}

/// Change of one position between two consecutive versions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChangeRecord {
    pub thematic_label: String,
    pub kind: ChangeKind,
    pub before: Vec<Value>,
    pub after: Vec<Value>,
    pub editor: Iri,
    pub timestamp: DateTime<Utc>,
    pub from_version: u32,
    pub to_version: u32,
}

/// Input for `Store::create_statement`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NewStatement {
    /// Pattern IRI, class IRI or statement type label.
    pub statement_type: String,
    pub subject: Vec<Value>,
    #[serde(default)]
    pub objects: BTreeMap<String, Vec<Value>>,
    /// `rosetta:transitive` annotations per position.
    #[serde(default)]
    pub transitive: BTreeMap<String, bool>,
    pub metadata: ProvenanceMetadata,
    #[serde(default)]
    pub context_refs: Vec<Iri>,
    #[serde(default = "default_true")]
    pub modifiable: bool,
    #[serde(default)]
    pub negated: bool,
    #[serde(default)]
    pub confidence_level: Option<f64>,
}

fn default_true() -> bool {
    true
}

impl NewStatement {
    pub fn new(statement_type: impl Into<String>, subject: Vec<Value>, metadata: ProvenanceMetadata) -> Self {
        NewStatement {
            statement_type: statement_type.into(),
            subject,
            objects: BTreeMap::new(),
            transitive: BTreeMap::new(),
            metadata,
            context_refs: Vec::new(),
            modifiable: true,
            negated: false,
            confidence_level: None,
        }
    }

    pub fn with(mut self, thematic_label: &str, values: Vec<Value>) -> Self {
        self.objects.insert(thematic_label.to_string(), values);
        self
    }
}

/// Anchor-level fields changed by `Store::set_statement_metadata`. `None`
/// leaves a field untouched.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MetadataPatch {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub license: Option<Option<Iri>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence_level: Option<Option<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context_refs: Option<Vec<Iri>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modifiable: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub negated: Option<bool>,
}
