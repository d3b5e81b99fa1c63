//! Pattern definition files (YAML or JSON).
//!
//! ```yaml
//! label: travels
//! description: A person travels to a destination.
//! examples: ["Anna travels by train from Berlin to Paris"]
//! verb: travels
//! negated_verb: does not travel      # optional
//! negatable: true
//! subject: { thematic_label: PERSON, placeholder: person, max: unbounded }
//! objects:
//!   - { thematic_label: TRANSPORTATION, required: false, kind: resource, preposition: by }
//!   - { thematic_label: DATETIME, required: false, kind: literal, datatype: date, preposition: on the }
//! ```
//!
//! `min` defaults to 1 for required and 0 for optional positions, `max`
//! defaults to 1 and accepts a number or `unbounded`. Optional `id` and
//! `version` keys pin an already-minted pattern.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::pattern::{LiteralDatatype, PositionSpec, StatementPattern, ValueKind};
use crate::error::{validation, Error, Result};
use crate::iri::Iri;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<Iri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<Iri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<u32>,
    pub label: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub examples: Vec<String>,
    pub verb: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub negated_verb: Option<String>,
    #[serde(default = "default_true")]
    pub negatable: bool,
    pub subject: SubjectEntry,
    #[serde(default)]
    pub objects: Vec<ObjectEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubjectEntry {
    pub thematic_label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_constraint: Option<Iri>,
    #[serde(default)]
    pub placeholder: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub preposition: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub postposition: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<MaxCount>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectEntry {
    pub thematic_label: String,
    #[serde(default)]
    pub required: bool,
    pub kind: ValueKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub datatype: Option<LiteralDatatype>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_constraint: Option<Iri>,
    #[serde(default)]
    pub placeholder: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub preposition: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub postposition: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<MaxCount>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
}

/// Upper bound on the number of values of a position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxCount {
    Bounded(u32),
    Unbounded,
}

impl MaxCount {
    fn from_option(max: Option<u32>) -> Self {
        max.map_or(MaxCount::Unbounded, MaxCount::Bounded)
    }

    fn into_option(self) -> Option<u32> {
        match self {
            MaxCount::Bounded(n) => Some(n),
            MaxCount::Unbounded => None,
        }
    }
}

impl Serialize for MaxCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MaxCount::Bounded(n) => s.serialize_u32(*n),
            MaxCount::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for MaxCount {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u32),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(MaxCount::Bounded(n)),
            Raw::S(s) if s == "unbounded" || s == "*" => Ok(MaxCount::Unbounded),
            Raw::S(s) => Err(serde::de::Error::custom(format!("invalid max count {s:?}"))),
        }
    }
}

fn default_true() -> bool {
    true
}

impl PatternFile {
    pub fn from_yaml(doc: &str) -> Result<Self> {
        serde_yaml::from_str(doc).map_err(|e| validation(format!("pattern file: {e}")))
    }

    pub fn from_json(doc: &str) -> Result<Self> {
        serde_json::from_str(doc).map_err(|e| validation(format!("pattern file: {e}")))
    }

    /// Accepts either YAML or JSON (JSON is a YAML subset for these files,
    /// but JSON is tried first for precise error positions).
    pub fn parse(doc: &str) -> Result<Self> {
        if doc.trim_start().starts_with('{') {
            Self::from_json(doc)
        } else {
            Self::from_yaml(doc)
        }
    }

    pub fn to_yaml(&self) -> String {
        serde_yaml::to_string(self).expect("pattern file serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("pattern file serializes")
    }

    /// Position specs in index order, subject first.
    pub(crate) fn position_specs(&self) -> Result<(PositionSpec, Vec<PositionSpec>)> {
        let s = &self.subject;
        let subject = PositionSpec {
            index: 0,
            thematic_label: s.thematic_label.clone(),
            required: true,
            value_kind: ValueKind::Resource,
            literal_datatype: None,
            class_constraint: s.class_constraint.clone(),
            placeholder: s.placeholder.clone(),
            preposition: s.preposition.clone(),
            postposition: s.postposition.clone(),
            min_count: s.min.unwrap_or(1),
            max_count: s.max.map_or(Some(1), MaxCount::into_option),
            description: s.description.clone(),
        };
        let objects = self
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| {
                if o.kind == ValueKind::Literal && o.datatype.is_none() {
                    return Err(validation(format!("literal position {} needs a datatype", o.thematic_label)));
                }
                Ok(PositionSpec {
                    index: i + 1,
                    thematic_label: o.thematic_label.clone(),
                    required: o.required,
                    value_kind: o.kind,
                    literal_datatype: o.datatype,
                    class_constraint: o.class_constraint.clone(),
                    placeholder: o.placeholder.clone(),
                    preposition: o.preposition.clone(),
                    postposition: o.postposition.clone(),
                    min_count: o.min.unwrap_or(u32::from(o.required)),
                    max_count: o.max.map_or(Some(1), MaxCount::into_option),
                    description: o.description.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((subject, objects))
    }

    /// Builds a pattern with the given identifiers (used when the file does
    /// not pin them).
    pub fn into_pattern(self, id: Iri, class_iri: Iri) -> Result<StatementPattern> {
        let (subject, object_positions) = self.position_specs()?;
        let pattern = StatementPattern {
            id: self.id.unwrap_or(id),
            class_iri: self.class.unwrap_or(class_iri),
            label: self.label,
            description: self.description,
            example_sentences: self.examples,
            verb_display: self.verb,
            negated_verb_display: self.negated_verb,
            subject,
            object_positions,
            negatable: self.negatable,
            version: self.version.unwrap_or(1),
        };
        pattern.validate()?;
        Ok(pattern)
    }
}

impl From<&StatementPattern> for PatternFile {
    fn from(p: &StatementPattern) -> Self {
        let s = &p.subject;
        PatternFile {
            id: Some(p.id.clone()),
            class: Some(p.class_iri.clone()),
            version: Some(p.version),
            label: p.label.clone(),
            description: p.description.clone(),
            examples: p.example_sentences.clone(),
            verb: p.verb_display.clone(),
            negated_verb: p.negated_verb_display.clone(),
            negatable: p.negatable,
            subject: SubjectEntry {
                thematic_label: s.thematic_label.clone(),
                class_constraint: s.class_constraint.clone(),
                placeholder: s.placeholder.clone(),
                preposition: s.preposition.clone(),
                postposition: s.postposition.clone(),
                min: Some(s.min_count),
                max: Some(MaxCount::from_option(s.max_count)),
                description: s.description.clone(),
            },
            objects: p
                .object_positions
                .iter()
                .map(|o| ObjectEntry {
                    thematic_label: o.thematic_label.clone(),
                    required: o.required,
                    kind: o.value_kind,
                    datatype: o.literal_datatype,
                    class_constraint: o.class_constraint.clone(),
                    placeholder: o.placeholder.clone(),
                    preposition: o.preposition.clone(),
                    postposition: o.postposition.clone(),
                    min: Some(o.min_count),
                    max: Some(MaxCount::from_option(o.max_count)),
                    description: o.description.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<PatternFile> for StatementPattern {
    type Error = Error;

    /// Requires the file to pin `id` and `class`.
    fn try_from(file: PatternFile) -> Result<Self> {
        let id = file.id.clone().ok_or_else(|| validation("pattern file has no id"))?;
        let class = file.class.clone().ok_or_else(|| validation("pattern file has no class"))?;
        file.into_pattern(id, class)
    }
}
