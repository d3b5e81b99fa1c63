//! Class hierarchy used to enforce class constraints.
//!
//! File format, one entry per line (`#` starts a comment, IRIs may be
//! wrapped in `<>`):
//!
//! ```text
//! <http://example.org/Apple> <http://example.org/Fruit>      # subclass pair
//! <http://example.org/apple1> a <http://example.org/Apple>    # instance typing
//! ```

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{validation, Result};
use crate::iri::Iri;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassHierarchy {
    supers: BTreeMap<Iri, BTreeSet<Iri>>,
    types: BTreeMap<Iri, BTreeSet<Iri>>,
}

impl ClassHierarchy {
    pub fn parse(text: &str) -> Result<Self> {
        let mut h = ClassHierarchy::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let iri = |s: &str| {
                Iri::new(s.trim_start_matches('<').trim_end_matches('>'))
                    .map_err(|e| validation(format!("line {}: {e}", n + 1)))
            };
            match parts.as_slice() {
                [sub, sup] => h.add_subclass(iri(sub)?, iri(sup)?),
                [inst, "a", class] => h.add_type(iri(inst)?, iri(class)?),
                _ => return Err(validation(format!("line {}: expected `SUB SUPER` or `X a CLASS`", n + 1))),
            }
        }
        Ok(h)
    }

    pub fn add_subclass(&mut self, sub: Iri, sup: Iri) {
        self.supers.entry(sub).or_default().insert(sup);
    }

    pub fn add_type(&mut self, instance: Iri, class: Iri) {
        self.types.entry(instance).or_default().insert(class);
    }

    pub fn is_empty(&self) -> bool {
        self.supers.is_empty() && self.types.is_empty()
    }

    /// Reflexive-transitive subclass test.
    pub fn is_subclass(&self, sub: &Iri, sup: &Iri) -> bool {
        let mut seen = BTreeSet::new();
        let mut stack = vec![sub];
        while let Some(c) = stack.pop() {
            if c == sup {
                return true;
            }
            if seen.insert(c) {
                if let Some(next) = self.supers.get(c) {
                    stack.extend(next.iter());
                }
            }
        }
        false
    }

    /// Whether the hierarchy says anything about this IRI.
    pub fn knows(&self, iri: &Iri) -> bool {
        self.types.contains_key(iri) || self.supers.contains_key(iri)
    }

    pub fn types_of(&self, instance: &Iri) -> impl Iterator<Item = &Iri> {
        self.types.get(instance).into_iter().flatten()
    }

    /// An instance satisfies `class` through one of its types; a class value
    /// satisfies it by being a subclass.
    pub fn satisfies(&self, value: &Iri, class: &Iri) -> bool {
        self.types_of(value).any(|t| self.is_subclass(t, class))
            || (self.supers.contains_key(value) && self.is_subclass(value, class))
            || value == class
    }

    pub fn merge(&mut self, other: ClassHierarchy) {
        for (k, v) in other.supers {
            self.supers.entry(k).or_default().extend(v);
        }
        for (k, v) in other.types {
            self.types.entry(k).or_default().extend(v);
        }
    }
}
