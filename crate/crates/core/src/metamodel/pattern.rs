use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::template::{DynamicLabelTemplate, Segment};
use crate::error::{validation, Result};
use crate::iri::Iri;
use crate::vocab::xsd;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueKind {
    Resource,
    Literal,
}

/// Input kinds offered for literal positions, with their fixed XSD datatypes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LiteralDatatype {
    Text,
    Integer,
    Decimal,
    #[serde(alias = "URL", alias = "uri")]
    Url,
    Boolean,
    Date,
}

impl LiteralDatatype {
    pub const ALL: [LiteralDatatype; 6] = [
        LiteralDatatype::Text,
        LiteralDatatype::Integer,
        LiteralDatatype::Decimal,
        LiteralDatatype::Url,
        LiteralDatatype::Boolean,
        LiteralDatatype::Date,
    ];

    pub fn iri(self) -> Iri {
        match self {
            LiteralDatatype::Text => xsd::string(),
            LiteralDatatype::Integer => xsd::integer(),
            LiteralDatatype::Decimal => xsd::decimal(),
            LiteralDatatype::Url => xsd::any_uri(),
            LiteralDatatype::Boolean => xsd::boolean(),
            LiteralDatatype::Date => xsd::date(),
        }
    }

    pub fn from_iri(iri: &Iri) -> Option<Self> {
        Self::ALL.into_iter().find(|d| &d.iri() == iri)
    }

    /// Whether a range facet can be applied to values of this type.
    pub fn is_ordered(self) -> bool {
        matches!(self, LiteralDatatype::Integer | LiteralDatatype::Decimal | LiteralDatatype::Date)
    }
}

/// One syntactic position of a statement pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionSpec {
    /// 0 for the subject, 1..n for object positions.
    pub index: usize,
    pub thematic_label: String,
    pub required: bool,
    pub value_kind: ValueKind,
    pub literal_datatype: Option<LiteralDatatype>,
    pub class_constraint: Option<Iri>,
    pub placeholder: String,
    pub preposition: String,
    pub postposition: String,
    pub min_count: u32,
    /// `None` means unbounded.
    pub max_count: Option<u32>,
    pub description: String,
}

impl PositionSpec {
    pub fn is_subject(&self) -> bool {
        self.index == 0
    }

    pub fn allows(&self, count: usize) -> bool {
        count >= self.min_count as usize && self.max_count.is_none_or(|m| count <= m as usize)
    }

    fn validate(&self) -> Result<()> {
        let label = &self.thematic_label;
        if label.is_empty() || label.chars().any(|c| c.is_whitespace() || matches!(c, '=' | '$' | '?')) {
            return Err(validation(format!("invalid thematic label {label:?}")));
        }
        if self.required && self.min_count < 1 {
            return Err(validation(format!("required position {label} must have min_count >= 1")));
        }
        if !self.required && self.min_count != 0 {
            return Err(validation(format!("optional position {label} must have min_count = 0")));
        }
        if let Some(max) = self.max_count {
            if max < 1 {
                return Err(validation(format!("position {label} must allow at least one value")));
            }
            if self.min_count > max {
                return Err(validation(format!("position {label} has min_count > max_count")));
            }
        }
        match self.value_kind {
            ValueKind::Literal => {
                if self.literal_datatype.is_none() {
                    return Err(validation(format!("literal position {label} needs a datatype")));
                }
                if self.class_constraint.is_some() {
                    return Err(validation(format!(
                        "literal position {label} cannot carry a class constraint"
                    )));
                }
            }
            ValueKind::Resource => {
                if self.literal_datatype.is_some() {
                    return Err(validation(format!("resource position {label} cannot have a datatype")));
                }
            }
        }
        Ok(())
    }
}

/// A statement-type definition: the class, its verb and its positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementPattern {
    pub id: Iri,
    /// The statement class that statements of this type instantiate.
    pub class_iri: Iri,
    pub label: String,
    pub description: String,
    pub example_sentences: Vec<String>,
    pub verb_display: String,
    /// Verb form used when a statement is negated, e.g. "does not travel".
    pub negated_verb_display: Option<String>,
    pub subject: PositionSpec,
    pub object_positions: Vec<PositionSpec>,
    pub negatable: bool,
    pub version: u32,
}

/// Summary used to group statement types in search and catalogs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeDescriptor {
    pub verb_lemma: String,
    /// Required positions, the subject included.
    pub arity: usize,
    pub adjunct_count: usize,
}

impl StatementPattern {
    pub fn validate(&self) -> Result<()> {
        if self.verb_display.trim().is_empty() {
            return Err(validation("verb must not be empty"));
        }
        if self.label.trim().is_empty() {
            return Err(validation("statement type label must not be empty"));
        }
        if self.version < 1 {
            return Err(validation("pattern version must be >= 1"));
        }
        let s = &self.subject;
        if s.index != 0 || !s.required || s.value_kind != ValueKind::Resource {
            return Err(validation("subject position must be index 0, required and of kind resource"));
        }
        let mut labels = BTreeSet::new();
        for (i, p) in self.positions().enumerate() {
            p.validate()?;
            if i > 0 && p.index != i {
                return Err(validation(format!(
                    "object position {} has index {}, expected {i}",
                    p.thematic_label, p.index
                )));
            }
            if !labels.insert(p.thematic_label.as_str()) {
                return Err(validation(format!("duplicate thematic label {}", p.thematic_label)));
            }
        }
        Ok(())
    }

    /// Subject first, then object positions in index order.
    pub fn positions(&self) -> impl Iterator<Item = &PositionSpec> {
        std::iter::once(&self.subject).chain(self.object_positions.iter())
    }

    pub fn position(&self, thematic_label: &str) -> Option<&PositionSpec> {
        self.positions().find(|p| p.thematic_label == thematic_label)
    }

    pub fn position_class(&self, thematic_label: &str) -> Iri {
        self.class_iri.join(thematic_label)
    }

    pub fn shape_iri(&self) -> Iri {
        self.id.join("shape")
    }

    pub fn label_template(&self) -> DynamicLabelTemplate {
        let slot = |p: &PositionSpec| Segment::Slot {
            index: p.index,
            thematic_label: p.thematic_label.clone(),
            preposition: p.preposition.clone(),
            postposition: p.postposition.clone(),
        };
        let mut segments = vec![slot(&self.subject), Segment::Text { text: self.verb_display.clone() }];
        segments.extend(self.object_positions.iter().map(slot));
        DynamicLabelTemplate { segments }
    }

    /// The formalized statement: every slot shown as its thematic label.
    pub fn formalized_statement(&self) -> String {
        self.label_template().compose(|_, label| Some(label.to_string())).0
    }

    /// The editor overview: every slot shown as its placeholder text.
    pub fn placeholder_label(&self) -> String {
        self.label_template()
            .compose(|i, label| {
                let p = self.positions().nth(i).expect("template index in range");
                Some(if p.placeholder.is_empty() { label.to_string() } else { p.placeholder.clone() })
            })
            .0
    }

    pub fn classify(&self) -> TypeDescriptor {
        let arity = self.positions().filter(|p| p.required).count();
        TypeDescriptor {
            verb_lemma: verb_lemma(&self.verb_display),
            arity,
            adjunct_count: self.positions().count() - arity,
        }
    }

    /// Returns the next pattern version with object positions in a new order.
    /// `new_order[k]` is the current index of the position that moves to
    /// index `k + 1`.
    pub fn reorder(&self, new_order: &[usize]) -> Result<StatementPattern> {
        let n = self.object_positions.len();
        let mut seen = vec![false; n];
        if new_order.len() != n {
            return Err(validation(format!("permutation has length {}, expected {n}", new_order.len())));
        }
        for &old in new_order {
            if old == 0 || old > n || std::mem::replace(&mut seen[old - 1], true) {
                return Err(validation(format!("{new_order:?} is not a permutation of 1..{n}")));
            }
        }
        let mut next = self.clone();
        next.object_positions = new_order
            .iter()
            .enumerate()
            .map(|(k, &old)| PositionSpec { index: k + 1, ..self.object_positions[old - 1].clone() })
            .collect();
        next.version += 1;
        next.validate()?;
        Ok(next)
    }

    /// Returns the next pattern version with an extra optional position
    /// appended. Existing statements stay valid.
    pub fn with_optional_position(&self, mut spec: PositionSpec) -> Result<StatementPattern> {
        if spec.required {
            return Err(validation("only optional positions can be added to an existing statement type"));
        }
        spec.index = self.object_positions.len() + 1;
        let mut next = self.clone();
        next.object_positions.push(spec);
        next.version += 1;
        next.validate()?;
        Ok(next)
    }
}

const IRREGULAR: &[(&str, &str)] = &[
    ("has", "have"),
    ("had", "have"),
    ("is", "be"),
    ("are", "be"),
    ("was", "be"),
    ("were", "be"),
    ("does", "do"),
    ("did", "do"),
    ("goes", "go"),
    ("went", "go"),
    ("met", "meet"),
    ("made", "make"),
    ("took", "take"),
];

/// Rule-based lemma of the first word of a verb phrase.
pub fn verb_lemma(verb_display: &str) -> String {
    let word = verb_display.split_whitespace().next().unwrap_or("").to_lowercase();
    if let Some((_, lemma)) = IRREGULAR.iter().find(|(w, _)| *w == word) {
        return lemma.to_string();
    }
    if let Some(stem) = word.strip_suffix("ies") {
        if !stem.is_empty() {
            return format!("{stem}y");
        }
    }
    for suffix in ["sses", "shes", "ches", "xes", "zes"] {
        if word.ends_with(suffix) {
            return word[..word.len() - 2].to_string();
        }
    }
    if word.len() > 3 && word.ends_with('s') && !word.ends_with("ss") && !word.ends_with("us") {
        return word[..word.len() - 1].to_string();
    }
    word
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemmas() {
        assert_eq!(verb_lemma("travels"), "travel");
        assert_eq!(verb_lemma("has a"), "have");
        assert_eq!(verb_lemma("met"), "meet");
        assert_eq!(verb_lemma("carries"), "carry");
        assert_eq!(verb_lemma("reaches"), "reach");
        assert_eq!(verb_lemma("exists"), "exist");
        assert_eq!(verb_lemma("contradicts"), "contradict");
        assert_eq!(verb_lemma("pass"), "pass");
    }
}
