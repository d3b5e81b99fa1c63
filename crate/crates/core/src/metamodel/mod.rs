//! Statement types: patterns, their positions and display templates.

mod file;
mod pattern;
mod template;

use std::collections::BTreeMap;
use std::sync::RwLock;

pub use file::{MaxCount, ObjectEntry, PatternFile, SubjectEntry};
pub use pattern::{verb_lemma, LiteralDatatype, PositionSpec, StatementPattern, TypeDescriptor, ValueKind};
pub use template::{join_values, DynamicLabelTemplate, Segment, SlotSpan};

use crate::error::{Error, Result};
use crate::iri::Iri;

/// Registry of statement types.
///
/// Reads are concurrent; definitions and updates take the write lock.
#[derive(Debug)]
pub struct PatternRegistry {
    base: Iri,
    patterns: RwLock<BTreeMap<Iri, StatementPattern>>,
}

impl PatternRegistry {
    pub fn new(base: Iri) -> Self {
        PatternRegistry { base, patterns: RwLock::new(BTreeMap::new()) }
    }

    pub fn base(&self) -> &Iri {
        &self.base
    }

    /// Validates a draft, mints its pattern and class IRIs (unless the draft
    /// pins them) and registers it as version 1.
    pub fn define_statement_type(&self, draft: PatternFile) -> Result<StatementPattern> {
        let mut patterns = self.patterns.write().expect("registry lock");
        let pinned = draft.id.clone();
        let slug = slugify(&draft.label);
        let mut candidate = slug.clone();
        let mut n = 1;
        while pinned.is_none() && patterns.contains_key(&self.base.join("pattern").join(&candidate)) {
            n += 1;
            candidate = format!("{slug}-{n}");
        }
        let id = self.base.join("pattern").join(&candidate);
        let class = self.base.join("class").join(&candidate);
        let mut draft = draft;
        if pinned.is_none() {
            draft.version = Some(1);
        }
        let pattern = draft.into_pattern(id, class)?;
        if pinned.is_some() && patterns.contains_key(&pattern.id) {
            return Err(Error::Conflict(format!("statement type {} already exists", pattern.id)));
        }
        patterns.insert(pattern.id.clone(), pattern.clone());
        Ok(pattern)
    }

    /// Registers an already-validated pattern version, replacing older ones.
    pub fn insert(&self, pattern: StatementPattern) -> Result<()> {
        pattern.validate()?;
        let mut patterns = self.patterns.write().expect("registry lock");
        if let Some(existing) = patterns.get(&pattern.id) {
            if existing.version >= pattern.version {
                return Err(Error::Conflict(format!(
                    "{} is already at version {}",
                    pattern.id, existing.version
                )));
            }
        }
        patterns.insert(pattern.id.clone(), pattern);
        Ok(())
    }

    pub fn get(&self, id: &Iri) -> Result<StatementPattern> {
        self.patterns
            .read()
            .expect("registry lock")
            .get(id)
            .cloned()
            .ok_or_else(|| Error::NotFound(format!("statement type {id}")))
    }

    /// Looks a type up by pattern IRI, class IRI or label.
    pub fn resolve(&self, key: &str) -> Result<StatementPattern> {
        let patterns = self.patterns.read().expect("registry lock");
        patterns
            .values()
            .find(|p| p.id.as_str() == key || p.class_iri.as_str() == key)
            .or_else(|| patterns.values().find(|p| p.label == key))
            .cloned()
            .ok_or_else(|| Error::NotFound(format!("statement type {key}")))
    }

    pub fn list(&self) -> Vec<StatementPattern> {
        self.patterns.read().expect("registry lock").values().cloned().collect()
    }

    pub fn reorder_object_positions(&self, id: &Iri, new_order: &[usize]) -> Result<StatementPattern> {
        self.update(id, |p| p.reorder(new_order))
    }

    pub fn add_optional_position(&self, id: &Iri, spec: PositionSpec) -> Result<StatementPattern> {
        self.update(id, |p| p.with_optional_position(spec))
    }

    fn update<F>(&self, id: &Iri, f: F) -> Result<StatementPattern>
    where
        F: FnOnce(&StatementPattern) -> Result<StatementPattern>,
    {
        let mut patterns = self.patterns.write().expect("registry lock");
        let current = patterns.get(id).ok_or_else(|| Error::NotFound(format!("statement type {id}")))?;
        let next = f(current)?;
        patterns.insert(id.clone(), next.clone());
        Ok(next)
    }
}

pub(crate) fn slugify(label: &str) -> String {
    let mut out = String::new();
    for c in label.chars().flat_map(char::to_lowercase) {
        if c.is_alphanumeric() {
            out.push(c);
        } else if !out.ends_with('-') {
            out.push('-');
        }
    }
    let out = out.trim_matches('-').to_string();
    if out.is_empty() {
        "statement-type".into()
    } else {
        out
    }
}
