//! JSON payloads of the HTTP API.
//!
//! Position values travel as `{label: [value, ...]}` where a value is either
//! `{"iri": ..., "label": ...}` or `{"lexical": ..., "datatype": ...}`. IRIs
//! may be written as CURIEs of the configured prefixes; a literal's datatype
//! may be an input-kind name (`decimal`), a CURIE or an IRI, and defaults to
//! the position's datatype.

use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use rosetta_core::metamodel::{LiteralDatatype, PositionSpec, StatementPattern, TypeDescriptor};
use rosetta_core::rdf::PrefixMap;
use rosetta_core::renderer::RenderedStatement;
use rosetta_core::store::{AnchorStatement, NewStatement, ProvenanceMetadata, StatementVersion};
use rosetta_core::{Iri, Value};
use serde::{Deserialize, Serialize};

use crate::error::ApiError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WireValue {
    Resource {
        iri: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Literal {
        lexical: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        datatype: Option<String>,
    },
}

impl From<&Value> for WireValue {
    fn from(v: &Value) -> Self {
        match v {
            Value::Resource { iri, label } => WireValue::Resource { iri: iri.to_string(), label: label.clone() },
            Value::Literal { lexical, datatype } => {
                WireValue::Literal { lexical: lexical.clone(), datatype: Some(datatype.to_string()) }
            }
        }
    }
}

/// An IRI, or a CURIE over `prefixes`.
pub fn expand_iri(text: &str, prefixes: &PrefixMap) -> Result<Iri, ApiError> {
    let text = text.trim().trim_start_matches('<').trim_end_matches('>');
    match prefixes.expand(text) {
        Some(full) => Ok(Iri::new(full)?),
        None => Ok(Iri::new(text)?),
    }
}

fn datatype_iri(name: &str, prefixes: &PrefixMap) -> Result<Iri, ApiError> {
    match serde_json::from_value::<LiteralDatatype>(serde_json::Value::String(name.to_string())) {
        Ok(dt) => Ok(dt.iri()),
        Err(_) => expand_iri(name, prefixes),
    }
}

impl WireValue {
    pub fn to_value(&self, spec: Option<&PositionSpec>, prefixes: &PrefixMap) -> Result<Value, ApiError> {
        match self {
            WireValue::Resource { iri, label } => Ok(Value::Resource {
                iri: expand_iri(iri, prefixes)?,
                label: label.clone().filter(|l| !l.is_empty()),
            }),
            WireValue::Literal { lexical, datatype } => {
                let datatype = match datatype {
                    Some(name) => datatype_iri(name, prefixes)?,
                    None => spec.and_then(|s| s.literal_datatype).unwrap_or(LiteralDatatype::Text).iri(),
                };
                Ok(Value::Literal { lexical: lexical.clone(), datatype })
            }
        }
    }
}

pub type WireValues = BTreeMap<String, Vec<WireValue>>;

/// Converts wire values position by position. Unknown labels are kept so
/// the store reports them.
pub fn to_values(
    values: &WireValues,
    pattern: &StatementPattern,
    prefixes: &PrefixMap,
) -> Result<BTreeMap<String, Vec<Value>>, ApiError> {
    values
        .iter()
        .map(|(label, vs)| {
            let spec = pattern.position(label);
            let converted = vs.iter().map(|v| v.to_value(spec, prefixes)).collect::<Result<Vec<_>, _>>()?;
            Ok((label.clone(), converted))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetadataInput {
    pub creator: String,
    /// Defaults to the time of the request.
    #[serde(default)]
    pub creation_date: Option<DateTime<Utc>>,
    #[serde(default)]
    pub author: Option<String>,
    #[serde(default)]
    pub curator: Option<String>,
    #[serde(default)]
    pub extraction_method: Option<String>,
    #[serde(default)]
    pub imported_from: Option<String>,
    #[serde(default)]
    pub license: Option<String>,
}

impl MetadataInput {
    pub fn to_metadata(&self, now: DateTime<Utc>, prefixes: &PrefixMap) -> Result<ProvenanceMetadata, ApiError> {
        let opt = |v: &Option<String>| v.as_deref().map(|s| expand_iri(s, prefixes)).transpose();
        Ok(ProvenanceMetadata {
            creator: expand_iri(&self.creator, prefixes)?,
            creation_date: self.creation_date.unwrap_or(now),
            author: opt(&self.author)?,
            curator: opt(&self.curator)?,
            extraction_method: self.extraction_method.clone(),
            imported_from: opt(&self.imported_from)?,
            license: opt(&self.license)?,
        })
    }
}

/// Body of `POST /statements`. `values` holds every position, the subject
/// included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatementInput {
    pub statement_type: String,
    pub values: WireValues,
    #[serde(default)]
    pub transitive: BTreeMap<String, bool>,
    pub metadata: MetadataInput,
    #[serde(default)]
    pub context_refs: Vec<String>,
    #[serde(default)]
    pub modifiable: Option<bool>,
    #[serde(default)]
    pub negated: bool,
    #[serde(default)]
    pub confidence_level: Option<f64>,
}

impl StatementInput {
    pub fn to_new_statement(
        &self,
        pattern: &StatementPattern,
        now: DateTime<Utc>,
        prefixes: &PrefixMap,
    ) -> Result<NewStatement, ApiError> {
        let mut objects = to_values(&self.values, pattern, prefixes)?;
        let subject = objects.remove(&pattern.subject.thematic_label).unwrap_or_default();
        Ok(NewStatement {
            statement_type: pattern.id.to_string(),
            subject,
            objects,
            transitive: self.transitive.clone(),
            metadata: self.metadata.to_metadata(now, prefixes)?,
            context_refs: self.context_refs.iter().map(|c| expand_iri(c, prefixes)).collect::<Result<_, _>>()?,
            modifiable: self.modifiable.unwrap_or(true),
            negated: self.negated,
            confidence_level: self.confidence_level,
        })
    }
}

/// Body of `PUT /statements/{id}`: the changed positions only. An empty
/// list clears an optional position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UpdateInput {
    pub editor: String,
    pub values: WireValues,
}

/// A live statement as returned by the statement endpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatementView {
    pub anchor: Iri,
    pub statement_type: Iri,
    pub type_label: String,
    pub version: StatementVersion,
    pub version_count: u32,
    pub rendered: RenderedStatement,
    pub metadata: ProvenanceMetadata,
    pub context_refs: Vec<Iri>,
    pub modifiable: bool,
    pub negated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confidence_level: Option<f64>,
}

impl StatementView {
    pub fn new(
        anchor: &AnchorStatement,
        version: StatementVersion,
        pattern: &StatementPattern,
        rendered: RenderedStatement,
    ) -> Self {
        StatementView {
            anchor: anchor.id.clone(),
            statement_type: anchor.statement_type.clone(),
            type_label: pattern.label.clone(),
            version,
            version_count: anchor.versions.len() as u32,
            rendered,
            metadata: anchor.metadata.clone(),
            context_refs: anchor.context_refs.clone(),
            modifiable: anchor.modifiable,
            negated: anchor.negated,
            confidence_level: anchor.confidence_level,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeView {
    #[serde(flatten)]
    pub pattern: StatementPattern,
    pub formalized_statement: String,
    pub placeholder_label: String,
    pub descriptor: TypeDescriptor,
}

impl From<StatementPattern> for TypeView {
    fn from(pattern: StatementPattern) -> Self {
        TypeView {
            formalized_statement: pattern.formalized_statement(),
            placeholder_label: pattern.placeholder_label(),
            descriptor: pattern.classify(),
            pattern,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReorderInput {
    /// Object-position indices (1-based) in their new order.
    pub order: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preview {
    pub statement_type: Iri,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrosswalkInput {
    /// Statement id or IRI.
    pub statement: String,
    #[serde(default)]
    pub version: Option<u32>,
    /// `trig` (default), `nquads` or `turtle`.
    #[serde(default)]
    pub format: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrosswalkOutput {
    pub crosswalk: String,
    pub target_name: String,
    pub statement: Iri,
    pub quads: usize,
    pub format: String,
    pub document: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrosswalkInfo {
    pub id: String,
    pub source_pattern: String,
    pub target_name: String,
    pub description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entity_map_ref: Option<String>,
}
