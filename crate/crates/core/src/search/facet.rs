use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iri::Iri;
use crate::metamodel::{LiteralDatatype, StatementPattern};
use crate::value::{compare_literal, Value};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FacetFilter {
    /// The position holds one of these resources.
    OneOf { values: Vec<Iri> },
    /// A literal within the inclusive bounds; decimal, integer and date
    /// positions only.
    Range {
        #[serde(default)]
        min: Option<String>,
        #[serde(default)]
        max: Option<String>,
    },
    /// Text equal to (`exact`) or containing (case-insensitive) `value`.
    Text {
        value: String,
        #[serde(default)]
        exact: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetQuery {
    /// Pattern IRI, class IRI or label.
    pub statement_type: String,
    #[serde(default)]
    pub facet_filters: BTreeMap<String, FacetFilter>,
    #[serde(default)]
    pub include_deleted: bool,
}

impl FacetQuery {
    pub fn new(statement_type: impl Into<String>) -> Self {
        FacetQuery { statement_type: statement_type.into(), facet_filters: BTreeMap::new(), include_deleted: false }
    }

    pub fn filter(mut self, label: &str, filter: FacetFilter) -> Self {
        self.facet_filters.insert(label.to_string(), filter);
        self
    }

    /// Checks facet keys and filter kinds against the pattern.
    pub fn validate(&self, pattern: &StatementPattern) -> Result<()> {
        for (label, filter) in &self.facet_filters {
            let spec = pattern
                .position(label)
                .ok_or_else(|| Error::Validation(format!("{} has no position {label}", pattern.label)))?;
            if let FacetFilter::Range { min, max } = filter {
                let dt = spec
                    .literal_datatype
                    .filter(|d| d.is_ordered())
                    .ok_or_else(|| Error::Validation(format!("position {label} does not support ranges")))?;
                for bound in [min, max].into_iter().flatten() {
                    if !crate::value::is_valid_lexical(dt, bound) {
                        return Err(Error::Validation(format!("{bound:?} is not a valid bound for {label}")));
                    }
                }
            }
        }
        Ok(())
    }
}

impl FacetFilter {
    pub fn matches_value(&self, value: &Value) -> bool {
        match (self, value) {
            (FacetFilter::OneOf { values }, Value::Resource { iri, .. }) => values.contains(iri),
            (FacetFilter::OneOf { .. }, Value::Literal { .. }) => false,
            (FacetFilter::Range { min, max }, Value::Literal { lexical, datatype }) => {
                let Some(dt) = LiteralDatatype::from_iri(datatype).filter(|d| d.is_ordered()) else {
                    return false;
                };
                let within = |bound: &Option<String>, want_ge: bool| match bound {
                    None => true,
                    Some(b) => match compare_literal(dt, lexical, b) {
                        Some(o) if want_ge => o.is_ge(),
                        Some(o) => o.is_le(),
                        None => false,
                    },
                };
                within(min, true) && within(max, false)
            }
            (FacetFilter::Range { .. }, Value::Resource { .. }) => false,
            (FacetFilter::Text { value: needle, exact }, v) => {
                let hay = v.search_text();
                if *exact {
                    hay == *needle
                } else {
                    hay.to_lowercase().contains(&needle.to_lowercase())
                }
            }
        }
    }

    /// A position matches if any of its values does.
    pub fn matches(&self, values: &[Value]) -> bool {
        values.iter().any(|v| self.matches_value(v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetCount {
    pub value: Value,
    pub count: usize,
}

/// Distinct values per position over `versions`, counting each statement
/// once per value.
pub fn histogram<'a>(
    pattern: &StatementPattern,
    versions: impl IntoIterator<Item = &'a crate::store::StatementVersion>,
) -> BTreeMap<String, Vec<FacetCount>> {
    let mut counts: BTreeMap<String, BTreeMap<String, FacetCount>> =
        pattern.positions().map(|p| (p.thematic_label.clone(), BTreeMap::new())).collect();
    for v in versions {
        for position in v.positions() {
            let Some(bucket) = counts.get_mut(&position.thematic_label) else {
                continue;
            };
            let distinct: BTreeSet<String> = position.values.iter().map(Value::key).collect();
            for key in distinct {
                let value = position.values.iter().find(|x| x.key() == key).expect("key from values").clone();
                bucket.entry(key).or_insert(FacetCount { value, count: 0 }).count += 1;
            }
        }
    }
    counts.into_iter().map(|(label, m)| (label, m.into_values().collect())).collect()
}
