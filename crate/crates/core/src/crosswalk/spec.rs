use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iri::Iri;
use crate::metamodel::{PatternRegistry, StatementPattern};
use crate::vocab::{self, rdf};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeTemplate {
    pub var: String,
    /// Type of the minted node: a constant term or a slot variable.
    #[serde(default, rename = "type", skip_serializing_if = "Option::is_none")]
    pub type_: Option<String>,
    /// Mint a blank node instead of an IRI.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub blank: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleTemplate {
    pub s: String,
    pub p: String,
    pub o: String,
}

/// A crosswalk document as written.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrosswalkSpec {
    pub id: String,
    /// Pattern IRI, class IRI or label.
    pub source_pattern: String,
    pub target_name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub prefixes: BTreeMap<String, String>,
    #[serde(default)]
    pub node_templates: Vec<NodeTemplate>,
    pub triple_templates: Vec<TripleTemplate>,
    #[serde(default)]
    pub required_slots: Vec<String>,
    /// Slots whose resource values must be translated through the entity map.
    #[serde(default)]
    pub map_slots: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entity_map_ref: Option<String>,
}

/// A parsed template term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemplateTerm {
    Slot(String),
    Statement,
    Node(String),
    Iri(Iri),
    Literal { lexical: String, datatype: Iri },
}

/// A spec resolved against its source pattern, ready to apply.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledCrosswalk {
    pub spec: CrosswalkSpec,
    pub source_pattern: Iri,
    pub nodes: Vec<(String, Option<TemplateTerm>, bool)>,
    pub triples: Vec<[TemplateTerm; 3]>,
}

impl CrosswalkSpec {
    /// Parses YAML or JSON.
    pub fn parse(document: &str) -> Result<Self> {
        let spec: CrosswalkSpec = if document.trim_start().starts_with('{') {
            serde_json::from_str(document).map_err(|e| Error::Spec(e.to_string()))?
        } else {
            serde_yaml::from_str(document).map_err(|e| Error::Spec(e.to_string()))?
        };
        if spec.triple_templates.is_empty() {
            return Err(Error::Spec(format!("crosswalk {} has no triple templates", spec.id)));
        }
        Ok(spec)
    }

    pub fn to_yaml(&self) -> String {
        serde_yaml::to_string(self).expect("spec serializes")
    }

    fn expand(&self, curie: &str) -> Option<String> {
        let (prefix, local) = curie.split_once(':')?;
        if let Some(ns) = self.prefixes.get(prefix) {
            return Some(format!("{ns}{local}"));
        }
        vocab::default_prefixes().into_iter().find(|(p, _)| p == prefix).map(|(_, ns)| format!("{ns}{local}"))
    }

    fn term(&self, text: &str, predicate: bool) -> Result<TemplateTerm> {
        let t = text.trim();
        let bad = || Error::Spec(format!("crosswalk {}: cannot read term {t:?}", self.id));
        if predicate && t == "a" {
            return Ok(TemplateTerm::Iri(rdf::type_()));
        }
        if t == "$STATEMENT" {
            return Ok(TemplateTerm::Statement);
        }
        if let Some(label) = t.strip_prefix('$') {
            return if label.is_empty() { Err(bad()) } else { Ok(TemplateTerm::Slot(label.to_string())) };
        }
        if let Some(var) = t.strip_prefix('?') {
            return if var.is_empty() { Err(bad()) } else { Ok(TemplateTerm::Node(var.to_string())) };
        }
        if let Some(rest) = t.strip_prefix('"') {
            let (lexical, tail) = rest.rsplit_once('"').ok_or_else(bad)?;
            let datatype = match tail.strip_prefix("^^") {
                Some(dt) => self.iri(dt)?,
                None if tail.is_empty() => vocab::xsd::string(),
                None => return Err(bad()),
            };
            return Ok(TemplateTerm::Literal { lexical: lexical.to_string(), datatype });
        }
        Ok(TemplateTerm::Iri(self.iri(t)?))
    }

    fn iri(&self, t: &str) -> Result<Iri> {
        if let Some(inner) = t.strip_prefix('<').and_then(|s| s.strip_suffix('>')) {
            return Iri::new(inner).map_err(|e| Error::Spec(e.to_string()));
        }
        let expanded = self
            .expand(t)
            .ok_or_else(|| Error::Spec(format!("crosswalk {}: unknown prefix in {t:?}", self.id)))?;
        Iri::new(expanded).map_err(|e| Error::Spec(e.to_string()))
    }

    /// Resolves the source pattern and checks every slot and node reference.
    pub fn compile(&self, pattern: &StatementPattern) -> Result<CompiledCrosswalk> {
        let slot_ok = |label: &str| pattern.position(label).is_some();
        let err = |m: String| Error::Spec(format!("crosswalk {}: {m}", self.id));
        for label in self.required_slots.iter().chain(&self.map_slots) {
            if !slot_ok(label) {
                return Err(err(format!("{} has no position {label}", pattern.label)));
            }
        }
        let mut vars = BTreeSet::new();
        let mut nodes = Vec::new();
        for n in &self.node_templates {
            if !vars.insert(n.var.clone()) {
                return Err(err(format!("node variable ?{} defined twice", n.var)));
            }
            let ty = n.type_.as_deref().map(|t| self.term(t, false)).transpose()?;
            if matches!(ty, Some(TemplateTerm::Node(_) | TemplateTerm::Literal { .. })) {
                return Err(err(format!("type of ?{} must be an IRI or slot", n.var)));
            }
            nodes.push((n.var.clone(), ty, n.blank));
        }
        let mut triples = Vec::new();
        for t in &self.triple_templates {
            let triple = [self.term(&t.s, false)?, self.term(&t.p, true)?, self.term(&t.o, false)?];
            if matches!(triple[0], TemplateTerm::Literal { .. }) {
                return Err(err(format!("literal subject in {t:?}")));
            }
            if !matches!(triple[1], TemplateTerm::Iri(_)) {
                return Err(err(format!("predicate must be a constant IRI in {t:?}")));
            }
            triples.push(triple);
        }
        let referenced = triples.iter().flatten().chain(nodes.iter().filter_map(|(_, t, _)| t.as_ref()));
        for term in referenced {
            match term {
                TemplateTerm::Slot(label) if !slot_ok(label) => {
                    return Err(err(format!("unknown slot ${label}")));
                }
                TemplateTerm::Node(var) if !vars.contains(var) => {
                    return Err(err(format!("undefined node ?{var}")));
                }
                _ => {}
            }
        }
        Ok(CompiledCrosswalk { spec: self.clone(), source_pattern: pattern.id.clone(), nodes, triples })
    }
}

/// Parses a crosswalk document and validates it against its source pattern.
pub fn load_crosswalk_spec(document: &str, registry: &PatternRegistry) -> Result<CompiledCrosswalk> {
    let spec = CrosswalkSpec::parse(document)?;
    let pattern = registry
        .resolve(&spec.source_pattern)
        .map_err(|_| Error::Spec(format!("crosswalk {}: unknown source pattern {}", spec.id, spec.source_pattern)))?;
    spec.compile(&pattern)
}
