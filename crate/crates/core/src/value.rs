//! Position values: resources (by IRI) and typed literals.

use std::cmp::Ordering;
use std::sync::OnceLock;

use chrono::{Datelike, NaiveDate};
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::iri::Iri;
use crate::metamodel::LiteralDatatype;

/// A value in a subject or object position.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Resource {
        iri: Iri,
        /// Display label of the resource; the IRI's local name is used when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Literal { lexical: String, datatype: Iri },
}

impl Value {
    pub fn resource(iri: Iri) -> Self {
        Value::Resource { iri, label: None }
    }

    pub fn labelled(iri: Iri, label: impl Into<String>) -> Self {
        Value::Resource { iri, label: Some(label.into()) }
    }

    pub fn literal(lexical: impl Into<String>, datatype: LiteralDatatype) -> Self {
        Value::Literal { lexical: lexical.into(), datatype: datatype.iri() }
    }

    pub fn iri(&self) -> Option<&Iri> {
        match self {
            Value::Resource { iri, .. } => Some(iri),
            Value::Literal { .. } => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Value::Literal { .. })
    }

    /// Human-readable text: the resource label, or the literal's display form.
    pub fn display_text(&self) -> String {
        match self {
            Value::Resource { iri, label } => label.clone().unwrap_or_else(|| iri.local_name().to_string()),
            Value::Literal { lexical, datatype } => match LiteralDatatype::from_iri(datatype) {
                Some(LiteralDatatype::Date) => format_date(lexical).unwrap_or_else(|| lexical.clone()),
                _ => lexical.clone(),
            },
        }
    }

    /// Text the search index tokenizes: labels for resources, lexical forms
    /// for literals.
    pub fn search_text(&self) -> String {
        match self {
            Value::Resource { iri, label } => label.clone().unwrap_or_else(|| iri.local_name().to_string()),
            Value::Literal { lexical, .. } => lexical.clone(),
        }
    }

    /// Identity key ignoring display labels.
    pub fn key(&self) -> String {
        match self {
            Value::Resource { iri, .. } => format!("<{iri}>"),
            Value::Literal { lexical, datatype } => format!("{lexical:?}^^<{datatype}>"),
        }
    }
}

fn regex(cell: &'static OnceLock<Regex>, pattern: &str) -> &'static Regex {
    cell.get_or_init(|| Regex::new(pattern).expect("static regex"))
}

/// Whether `lexical` is in the lexical space of the datatype.
pub fn is_valid_lexical(datatype: LiteralDatatype, lexical: &str) -> bool {
    static INTEGER: OnceLock<Regex> = OnceLock::new();
    static DECIMAL: OnceLock<Regex> = OnceLock::new();
    match datatype {
        LiteralDatatype::Text => true,
        LiteralDatatype::Integer => regex(&INTEGER, r"^[+-]?[0-9]+$").is_match(lexical),
        LiteralDatatype::Decimal => {
            regex(&DECIMAL, r"^[+-]?([0-9]+(\.[0-9]*)?|\.[0-9]+)$").is_match(lexical)
        }
        LiteralDatatype::Boolean => matches!(lexical, "true" | "false" | "1" | "0"),
        LiteralDatatype::Date => parse_date(lexical).is_some(),
        LiteralDatatype::Url => Iri::new(lexical).is_ok(),
    }
}

/// Parses an `xsd:date` lexical form, ignoring an optional timezone.
pub fn parse_date(lexical: &str) -> Option<NaiveDate> {
    static DATE: OnceLock<Regex> = OnceLock::new();
    let caps = regex(&DATE, r"^(-?[0-9]{4,})-([0-9]{2})-([0-9]{2})(Z|[+-][0-9]{2}:[0-9]{2})?$").captures(lexical)?;
    NaiveDate::from_ymd_opt(caps[1].parse().ok()?, caps[2].parse().ok()?, caps[3].parse().ok()?)
}

/// "2021-07-04" → "4th of July 2021".
pub fn format_date(lexical: &str) -> Option<String> {
    let d = parse_date(lexical)?;
    let day = d.day();
    let suffix = match (day % 10, day % 100) {
        (1, n) if n != 11 => "st",
        (2, n) if n != 12 => "nd",
        (3, n) if n != 13 => "rd",
        _ => "th",
    };
    Some(format!("{day}{suffix} of {} {}", d.format("%B"), d.year()))
}

/// Exact comparison of two `xsd:decimal` (or `xsd:integer`) lexical forms.
pub fn compare_decimal(a: &str, b: &str) -> Option<Ordering> {
    let (neg_a, int_a, frac_a) = split_decimal(a)?;
    let (neg_b, int_b, frac_b) = split_decimal(b)?;
    let zero_a = int_a.is_empty() && frac_a.is_empty();
    let zero_b = int_b.is_empty() && frac_b.is_empty();
    let neg_a = neg_a && !zero_a;
    let neg_b = neg_b && !zero_b;
    let magnitude = int_a
        .len()
        .cmp(&int_b.len())
        .then_with(|| int_a.cmp(int_b))
        .then_with(|| frac_a.cmp(frac_b));
    Some(match (neg_a, neg_b) {
        (false, false) => magnitude,
        (true, true) => magnitude.reverse(),
        (false, true) => Ordering::Greater,
        (true, false) => Ordering::Less,
    })
}

fn split_decimal(s: &str) -> Option<(bool, &str, &str)> {
    if !is_valid_lexical(LiteralDatatype::Decimal, s) {
        return None;
    }
    let (neg, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    Some((neg, int.trim_start_matches('0'), frac.trim_end_matches('0')))
}

/// Orders two literals of an ordered datatype.
pub fn compare_literal(datatype: LiteralDatatype, a: &str, b: &str) -> Option<Ordering> {
    match datatype {
        LiteralDatatype::Integer | LiteralDatatype::Decimal => compare_decimal(a, b),
        LiteralDatatype::Date => Some(parse_date(a)?.cmp(&parse_date(b)?)),
        _ => None,
    }
}
