//! The store with its search index and the derived views wired together.

use std::sync::Arc;

use crate::crosswalk::{apply_crosswalk, CompiledCrosswalk, EntityMap};
use crate::error::Result;
use crate::iri::Iri;
use crate::metamodel::StatementPattern;
use crate::nanopub::{to_nanopub_with, NanopubOptions, Nanopublication};
use crate::rdf::{export_store, serialize_with, to_full_graph, PrefixMap, QuadGraph, RdfFormat};
use crate::renderer::{render_mindmap, render_statement, MindMap, RenderedStatement};
use crate::search::{FacetQuery, FacetResult, IndexStats, SearchIndex, TermGroup};
use crate::store::{gone, AnchorStatement, Resolved, StatementVersion, Store, StoreOptions};

pub struct Engine {
    store: Arc<Store>,
    index: Arc<SearchIndex>,
    prefixes: PrefixMap,
}

impl Engine {
    /// Wraps a store, indexing its current content and subscribing the
    /// index to later changes.
    pub fn new(store: Store) -> Self {
        let index = Arc::new(SearchIndex::new());
        store.subscribe(index.clone());
        index.rebuild(&store);
        Engine { store: Arc::new(store), index, prefixes: PrefixMap::default() }
    }

    pub fn open(options: StoreOptions) -> Result<Self> {
        Ok(Self::new(Store::open(options)?))
    }

    pub fn in_memory(base: Iri) -> Self {
        Self::new(Store::in_memory(base))
    }

    pub fn with_prefixes(mut self, prefixes: PrefixMap) -> Self {
        self.prefixes = prefixes;
        self
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    pub fn index(&self) -> &SearchIndex {
        &self.index
    }

    pub fn prefixes(&self) -> &PrefixMap {
        &self.prefixes
    }

    /// A live anchor with the version to show: `version` or the latest.
    pub fn live(&self, anchor: &Iri, version: Option<u32>) -> Result<(AnchorStatement, StatementVersion, StatementPattern)> {
        let a = self.store.anchor(anchor)?;
        if a.is_deleted() {
            return Err(gone(&a));
        }
        let v = match version {
            Some(n) => self.store.version(anchor, n)?,
            None => match self.store.resolve(anchor)? {
                Resolved::Current(v) => v,
                Resolved::Deleted(_) => return Err(gone(&a)),
            },
        };
        let p = self.store.pattern_of(&a)?;
        Ok((a, v, p))
    }

    pub fn render(&self, anchor: &Iri, version: Option<u32>) -> Result<RenderedStatement> {
        let (a, v, p) = self.live(anchor, version)?;
        render_statement(&v, &p, a.negated)
    }

    pub fn mindmap(&self, anchor: &Iri, version: Option<u32>) -> Result<MindMap> {
        let (_, v, p) = self.live(anchor, version)?;
        render_mindmap(&v, &p)
    }

    pub fn nanopub(&self, anchor: &Iri, version: Option<u32>, options: NanopubOptions) -> Result<Nanopublication> {
        let (a, v, p) = self.live(anchor, version)?;
        to_nanopub_with(&a, v.version_number, &p, options)
    }

    pub fn full_graph(&self, anchor: &Iri) -> Result<QuadGraph> {
        let a = self.store.anchor(anchor)?;
        to_full_graph(&a, &self.store.pattern_of(&a)?)
    }

    pub fn export(&self, format: RdfFormat) -> Result<String> {
        serialize_with(&export_store(&self.store, false)?, format, &self.prefixes)
    }

    pub fn apply_crosswalk(
        &self,
        anchor: &Iri,
        version: Option<u32>,
        crosswalk: &CompiledCrosswalk,
        entity_map: &EntityMap,
    ) -> Result<QuadGraph> {
        let (_, v, p) = self.live(anchor, version)?;
        apply_crosswalk(&v, &p, crosswalk, entity_map)
    }

    /// Term search with groups ordered by statement-type label.
    pub fn search_term(&self, term: &str) -> Vec<TermGroup> {
        let mut groups = self.index.search_term(term);
        for g in &mut groups {
            g.type_label = self
                .store
                .registry()
                .resolve(g.statement_type.as_str())
                .map(|p| p.label)
                .unwrap_or_default();
        }
        groups.sort_by(|a, b| a.type_label.cmp(&b.type_label).then_with(|| a.statement_type.cmp(&b.statement_type)));
        groups
    }

    pub fn search_faceted(&self, query: &FacetQuery) -> Result<FacetResult> {
        let pattern = self.store.registry().resolve(&query.statement_type)?;
        self.index.search_faceted(&pattern, query)
    }

    pub fn rebuild_index(&self) -> IndexStats {
        self.index.rebuild(&self.store)
    }
}
