use serde::{Deserialize, Serialize};

use crate::iri::Iri;

/// A property path: a predicate, its inverse, or a sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Path {
    Predicate(Iri),
    Inverse(Iri),
    Sequence(Vec<Path>),
}

impl Path {
    pub fn seq(predicates: impl IntoIterator<Item = Iri>) -> Path {
        Path::Sequence(predicates.into_iter().map(Path::Predicate).collect())
    }
}

impl std::fmt::Display for Path {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Path::Predicate(p) => write!(f, "<{p}>"),
            Path::Inverse(p) => write!(f, "^<{p}>"),
            Path::Sequence(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("/")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Class(Iri),
    ObjectsOf(Iri),
    SubjectsOf(Iri),
}

/// Counts values of the path that are instances of `class`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QualifiedClass {
    pub class: Iri,
    pub min_count: u32,
    pub max_count: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyConstraint {
    pub path: Path,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub min_count: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_count: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub datatype: Option<Iri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<Iri>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<String>,
    /// Inclusive bounds, compared in the value space of `datatype`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_inclusive: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_inclusive: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qualified: Option<QualifiedClass>,
}

impl PropertyConstraint {
    pub fn new(path: Path, min_count: u32, max_count: Option<u32>) -> Self {
        PropertyConstraint {
            path,
            name: None,
            min_count,
            max_count,
            datatype: None,
            class: None,
            pattern: None,
            min_inclusive: None,
            max_inclusive: None,
            qualified: None,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn datatype(mut self, dt: Iri) -> Self {
        self.datatype = Some(dt);
        self
    }

    pub fn class(mut self, class: Option<Iri>) -> Self {
        self.class = class;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shape {
    pub id: Iri,
    pub targets: Vec<Target>,
    pub property_constraints: Vec<PropertyConstraint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    MinCount,
    MaxCount,
    Datatype,
    Class,
    Pattern,
    Range,
    QualifiedCount,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub focus_node: String,
    pub path: String,
    pub constraint: ConstraintKind,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub conforms: bool,
    pub violations: Vec<Violation>,
}
