//! Engine operations behind the HTTP API and the CLI.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::RwLock;

use rosetta_core::crosswalk::{CompiledCrosswalk, CrosswalkSpec, EntityMap};
use rosetta_core::fixtures;
use rosetta_core::hierarchy::ClassHierarchy;
use rosetta_core::metamodel::{PatternFile, StatementPattern};
use rosetta_core::nanopub::{serialize_nanopub, NanopubOptions};
use rosetta_core::rdf::{export_store, serialize_with, QuadGraph, RdfFormat};
use rosetta_core::renderer::{preview, render_statement};
use rosetta_core::store::{ChangeRecord, DeletedMarker, MetadataPatch, StoreOptions};
use rosetta_core::{Engine, Iri};

use crate::config::Config;
use crate::error::ApiError;
use crate::wire::{to_values, CrosswalkInfo, CrosswalkOutput, StatementInput, StatementView, UpdateInput};

pub struct App {
    engine: Engine,
    config: Config,
    /// Crosswalk documents by id; compiled on use so they follow pattern
    /// changes.
    crosswalks: RwLock<BTreeMap<String, String>>,
    entity_maps: RwLock<BTreeMap<String, EntityMap>>,
}

impl App {
    pub fn open(config: Config) -> Result<Self, ApiError> {
        Self::with_options(config, |o| o)
    }

    /// Opens with store options adjusted by `tune` (id source, clock).
    pub fn with_options(config: Config, tune: impl FnOnce(StoreOptions) -> StoreOptions) -> Result<Self, ApiError> {
        let mut options = StoreOptions::new(config.base.clone());
        if let Some(path) = config.log_path() {
            if let Some(dir) = path.parent() {
                std::fs::create_dir_all(dir)
                    .map_err(|e| ApiError::io(format!("cannot create {}: {e}", dir.display())))?;
            }
            options = options.log_path(path);
        }
        if let Some(path) = &config.hierarchy {
            options = options.hierarchy(ClassHierarchy::parse(&read(path)?)?);
        }
        let engine = Engine::open(tune(options))?.with_prefixes(config.prefixes.clone());
        let app = App { engine, config, crosswalks: RwLock::default(), entity_maps: RwLock::default() };
        for doc in [fixtures::OBI_CROSSWALK, fixtures::OBOE_CROSSWALK, fixtures::QUDT_CROSSWALK] {
            app.register_crosswalk(doc)?;
        }
        for (name, tsv) in
            [("obi-units", fixtures::OBI_UNITS), ("oboe-units", fixtures::OBOE_UNITS), ("qudt-units", fixtures::QUDT_UNITS)]
        {
            app.register_entity_map(name, EntityMap::from_tsv(tsv)?);
        }
        if let Some(dir) = app.config.crosswalk_dir.clone() {
            app.load_crosswalk_dir(&dir)?;
        }
        Ok(app)
    }

    pub fn in_memory(base: Iri) -> Self {
        Self::open(Config::in_memory(base)).expect("in-memory app")
    }

    fn load_crosswalk_dir(&self, dir: &Path) -> Result<(), ApiError> {
        let entries = std::fs::read_dir(dir).map_err(|e| ApiError::io(format!("cannot read {}: {e}", dir.display())))?;
        let mut paths: Vec<_> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
        paths.sort();
        for path in paths {
            match path.extension().and_then(|e| e.to_str()) {
                Some("yaml" | "yml" | "json") => {
                    self.register_crosswalk(&read(&path)?)?;
                }
                Some("tsv") => {
                    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().replace('_', "-");
                    self.register_entity_map(&name, EntityMap::from_tsv(&read(&path)?)?);
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    fn now(&self) -> chrono::DateTime<chrono::Utc> {
        self.engine.store().clock().now()
    }

    /// A statement IRI from its IRI or the id minted under the base.
    pub fn anchor_iri(&self, id: &str) -> Result<Iri, ApiError> {
        if id.contains("://") {
            Ok(Iri::new(id)?)
        } else {
            Ok(self.config.base.join("statement").join(id))
        }
    }

    pub fn user_iri(&self, text: &str) -> Result<Iri, ApiError> {
        crate::wire::expand_iri(text, &self.config.prefixes)
    }

    // -- statement types --------------------------------------------------

    /// A type by pattern IRI, class IRI, label or pattern id.
    pub fn statement_type(&self, key: &str) -> Result<StatementPattern, ApiError> {
        let registry = self.engine.store().registry();
        match registry.resolve(key) {
            Ok(p) => Ok(p),
            Err(e) => registry.get(&self.config.base.join("pattern").join(key)).map_err(|_| e.into()),
        }
    }

    pub fn define_type(&self, document: &str) -> Result<StatementPattern, ApiError> {
        Ok(self.engine.store().define_statement_type(PatternFile::parse(document)?)?)
    }

    /// Registers the bundled example types that are not yet defined.
    pub fn define_bundled_types(&self) -> Result<Vec<StatementPattern>, ApiError> {
        let mut out = Vec::new();
        for doc in fixtures::PATTERNS {
            let file = PatternFile::parse(doc)?;
            if self.engine.store().registry().resolve(&file.label).is_err() {
                out.push(self.engine.store().define_statement_type(file)?);
            }
        }
        Ok(out)
    }

    pub fn types(&self) -> Vec<StatementPattern> {
        let mut list = self.engine.store().registry().list();
        list.sort_by(|a, b| a.label.cmp(&b.label).then_with(|| a.id.cmp(&b.id)));
        list
    }

    pub fn reorder_type(&self, key: &str, order: &[usize]) -> Result<StatementPattern, ApiError> {
        let p = self.statement_type(key)?;
        Ok(self.engine.store().reorder_object_positions(&p.id, order)?)
    }

    pub fn preview(&self, key: &str, fill: &BTreeMap<String, String>) -> Result<(StatementPattern, String), ApiError> {
        let p = self.statement_type(key)?;
        if let Some(label) = fill.keys().find(|l| p.position(l).is_none()) {
            return Err(ApiError::validation(format!("{} has no position {label}", p.label)));
        }
        let text = preview(&p, fill);
        Ok((p, text))
    }

    // -- statements -------------------------------------------------------

    pub fn view(&self, anchor: &Iri, version: Option<u32>) -> Result<StatementView, ApiError> {
        let (a, v, p) = self.engine.live(anchor, version)?;
        let rendered = render_statement(&v, &p, a.negated)?;
        Ok(StatementView::new(&a, v, &p, rendered))
    }

    pub fn create(&self, input: &StatementInput) -> Result<StatementView, ApiError> {
        let pattern = self.statement_type(&input.statement_type)?;
        let new = input.to_new_statement(&pattern, self.now(), &self.config.prefixes)?;
        let anchor = self.engine.store().create_statement(new)?;
        self.view(&anchor.id, None)
    }

    pub fn update(&self, anchor: &Iri, input: &UpdateInput) -> Result<StatementView, ApiError> {
        let (a, _, pattern) = self.engine.live(anchor, None)?;
        let changes = to_values(&input.values, &pattern, &self.config.prefixes)?;
        let editor = self.user_iri(&input.editor)?;
        self.engine.store().update_statement(&a.id, &changes, &editor)?;
        self.view(anchor, None)
    }

    pub fn set_metadata(&self, anchor: &Iri, patch: MetadataPatch) -> Result<StatementView, ApiError> {
        self.engine.live(anchor, None)?;
        self.engine.store().set_statement_metadata(anchor, patch)?;
        self.view(anchor, None)
    }

    pub fn delete(&self, anchor: &Iri, by: &str) -> Result<DeletedMarker, ApiError> {
        let by = self.user_iri(by)?;
        Ok(self.engine.store().soft_delete(anchor, &by, self.now())?.deleted_marker())
    }

    pub fn history(&self, anchor: &Iri) -> Result<Vec<ChangeRecord>, ApiError> {
        self.engine.live(anchor, None)?;
        Ok(self.engine.store().edit_history(anchor)?)
    }

    pub fn nanopub(&self, anchor: &Iri, version: Option<u32>, content_hash: bool) -> Result<String, ApiError> {
        let np = self.engine.nanopub(anchor, version, NanopubOptions { content_hash })?;
        Ok(serialize_nanopub(&np))
    }

    pub fn export(&self, format: RdfFormat, archival: bool) -> Result<String, ApiError> {
        if archival {
            Ok(serialize_with(&export_store(self.engine.store(), true)?, format, self.engine.prefixes())?)
        } else {
            Ok(self.engine.export(format)?)
        }
    }

    // -- crosswalks -------------------------------------------------------

    pub fn register_crosswalk(&self, document: &str) -> Result<CrosswalkSpec, ApiError> {
        let spec = CrosswalkSpec::parse(document)?;
        self.crosswalks.write().expect("crosswalk lock").insert(spec.id.clone(), document.to_string());
        Ok(spec)
    }

    pub fn register_entity_map(&self, name: &str, map: EntityMap) {
        self.entity_maps.write().expect("entity map lock").insert(name.to_string(), map);
    }

    pub fn crosswalks(&self) -> Result<Vec<CrosswalkInfo>, ApiError> {
        let docs = self.crosswalks.read().expect("crosswalk lock");
        docs.values()
            .map(|doc| {
                let s = CrosswalkSpec::parse(doc)?;
                Ok(CrosswalkInfo {
                    id: s.id,
                    source_pattern: s.source_pattern,
                    target_name: s.target_name,
                    description: s.description,
                    entity_map_ref: s.entity_map_ref,
                })
            })
            .collect()
    }

    /// Compiles a crosswalk document against the current types.
    pub fn compile_crosswalk(&self, document: &str) -> Result<CompiledCrosswalk, ApiError> {
        Ok(rosetta_core::crosswalk::load_crosswalk_spec(document, self.engine.store().registry())?)
    }

    /// The entity map a crosswalk refers to; empty when it names none.
    pub fn entity_map_for(&self, crosswalk: &CompiledCrosswalk) -> Result<EntityMap, ApiError> {
        match &crosswalk.spec.entity_map_ref {
            None => Ok(EntityMap::new()),
            Some(name) => self.entity_maps.read().expect("entity map lock").get(name).cloned().ok_or_else(|| {
                ApiError::from(rosetta_core::Error::Spec(format!(
                    "crosswalk {}: unknown entity map {name}",
                    crosswalk.spec.id
                )))
            }),
        }
    }

    pub fn named_crosswalk(&self, name: &str) -> Result<CompiledCrosswalk, ApiError> {
        let doc = self
            .crosswalks
            .read()
            .expect("crosswalk lock")
            .get(name)
            .cloned()
            .ok_or_else(|| ApiError::not_found(format!("crosswalk {name}")))?;
        self.compile_crosswalk(&doc)
    }

    pub fn apply_crosswalk(
        &self,
        crosswalk: &CompiledCrosswalk,
        entity_map: &EntityMap,
        anchor: &Iri,
        version: Option<u32>,
        format: RdfFormat,
    ) -> Result<CrosswalkOutput, ApiError> {
        let graph: QuadGraph = self.engine.apply_crosswalk(anchor, version, crosswalk, entity_map)?;
        let (graph, format) = match format {
            RdfFormat::Turtle => (graph.into_graph(None), format),
            _ => (graph, format),
        };
        Ok(CrosswalkOutput {
            crosswalk: crosswalk.spec.id.clone(),
            target_name: crosswalk.spec.target_name.clone(),
            statement: anchor.clone(),
            quads: graph.len(),
            format: format!("{format:?}").to_lowercase(),
            document: serialize_with(&graph, format, self.engine.prefixes())?,
        })
    }
}

fn read(path: &Path) -> Result<String, ApiError> {
    std::fs::read_to_string(path).map_err(|e| ApiError::io(format!("cannot read {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn app() -> App {
        let app = App::in_memory(Iri::new("https://example.org/kg").unwrap());
        app.define_bundled_types().unwrap();
        app
    }

    #[test]
    fn types_resolve_by_slug_and_label() {
        let app = app();
        assert_eq!(app.statement_type("measurement-with-confidence").unwrap().label, "measurement with confidence");
        assert_eq!(app.statement_type("has weight").unwrap().label, "has weight");
        assert_eq!(app.statement_type("nothing").unwrap_err().code, rosetta_core::ErrorCode::NotFound);
        assert!(app.define_bundled_types().unwrap().is_empty());
    }

    #[test]
    fn bundled_crosswalks_are_listed() {
        let app = app();
        let ids: Vec<String> = app.crosswalks().unwrap().into_iter().map(|c| c.id).collect();
        assert_eq!(ids, ["obi-measurement", "oboe-measurement", "qudt-measurement"]);
        let cw = app.named_crosswalk("oboe-measurement").unwrap();
        assert_eq!(app.entity_map_for(&cw).unwrap().len(), fixtures::oboe_units().len());
    }

    #[test]
    fn anchor_ids() {
        let app = app();
        assert_eq!(app.anchor_iri("s1").unwrap().as_str(), "https://example.org/kg/statement/s1");
        assert_eq!(app.anchor_iri("https://x.org/a").unwrap().as_str(), "https://x.org/a");
    }
}
