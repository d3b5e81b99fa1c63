use std::collections::{BTreeMap, BTreeSet};
use std::sync::RwLock;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::facet::{histogram, FacetCount, FacetQuery};
use super::tokenize::tokenize;
use crate::error::Result;
use crate::iri::Iri;
use crate::metamodel::StatementPattern;
use crate::store::{AnchorStatement, StatementVersion, Store, StoreObserver};

/// What the index keeps per anchor: its latest version and sort keys.
#[derive(Debug, Clone, PartialEq)]
struct Entry {
    statement_type: Iri,
    created: DateTime<Utc>,
    latest: StatementVersion,
}

/// One indexed value: anchor, thematic label, value position.
type Posting = (Iri, String, usize);

#[derive(Debug, Default)]
struct State {
    live: BTreeMap<Iri, Entry>,
    deleted: BTreeMap<Iri, Entry>,
    postings: BTreeMap<String, BTreeSet<Posting>>,
}

impl State {
    fn postings_of(entry: &Entry, anchor: &Iri) -> Vec<(String, Posting)> {
        let mut out = Vec::new();
        for position in entry.latest.positions() {
            for (k, value) in position.values.iter().enumerate() {
                for token in tokenize(&value.search_text()) {
                    out.push((token, (anchor.clone(), position.thematic_label.clone(), k)));
                }
            }
        }
        out
    }

    fn remove(&mut self, anchor: &Iri) {
        self.deleted.remove(anchor);
        if let Some(old) = self.live.remove(anchor) {
            for (token, posting) in Self::postings_of(&old, anchor) {
                if let Some(set) = self.postings.get_mut(&token) {
                    set.remove(&posting);
                    if set.is_empty() {
                        self.postings.remove(&token);
                    }
                }
            }
        }
    }

    fn put(&mut self, anchor: &AnchorStatement) {
        self.remove(&anchor.id);
        let Some(latest) = anchor.latest() else {
            return;
        };
        let entry = Entry {
            statement_type: anchor.statement_type.clone(),
            created: anchor.metadata.creation_date,
            latest: latest.clone(),
        };
        if anchor.is_deleted() {
            self.deleted.insert(anchor.id.clone(), entry);
            return;
        }
        for (token, posting) in Self::postings_of(&entry, &anchor.id) {
            self.postings.entry(token).or_default().insert(posting);
        }
        self.live.insert(anchor.id.clone(), entry);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermHit {
    pub anchor: Iri,
    pub version: StatementVersion,
    pub creation_date: DateTime<Utc>,
    /// Positions whose values matched.
    pub matched_positions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermGroup {
    pub statement_type: Iri,
    #[serde(default)]
    pub type_label: String,
    pub hits: Vec<TermHit>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetHit {
    pub anchor: Iri,
    pub version: StatementVersion,
    pub creation_date: DateTime<Utc>,
    pub deleted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetResult {
    pub statement_type: Iri,
    pub statements: Vec<FacetHit>,
    pub histogram: BTreeMap<String, Vec<FacetCount>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexStats {
    pub indexed: usize,
    pub deleted: usize,
    pub tokens: usize,
}

/// Inverted index over the latest versions of live statements. Subscribe it
/// to a store to keep it current.
#[derive(Debug, Default)]
pub struct SearchIndex {
    state: RwLock<State>,
}

impl StoreObserver for SearchIndex {
    fn anchor_changed(&self, anchor: &AnchorStatement) {
        self.state.write().expect("index lock").put(anchor);
    }
}

impl SearchIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rebuild(&self, store: &Store) -> IndexStats {
        let mut state = State::default();
        for a in store.anchors() {
            state.put(&a);
        }
        *self.state.write().expect("index lock") = state;
        self.stats()
    }

    pub fn stats(&self) -> IndexStats {
        let s = self.state.read().expect("index lock");
        IndexStats { indexed: s.live.len(), deleted: s.deleted.len(), tokens: s.postings.len() }
    }

    /// Statements with a subject or object value containing every token of
    /// `term`, grouped by statement type. Groups are ordered by type IRI;
    /// hits by creation date, newest first.
    pub fn search_term(&self, term: &str) -> Vec<TermGroup> {
        let tokens: BTreeSet<String> = tokenize(term).into_iter().collect();
        if tokens.is_empty() {
            return Vec::new();
        }
        let s = self.state.read().expect("index lock");
        let mut matched: Option<BTreeSet<&Posting>> = None;
        for t in &tokens {
            let Some(set) = s.postings.get(t) else {
                return Vec::new();
            };
            matched = Some(match matched {
                None => set.iter().collect(),
                Some(prev) => prev.into_iter().filter(|p| set.contains(*p)).collect(),
            });
        }
        let mut by_anchor: BTreeMap<&Iri, BTreeSet<String>> = BTreeMap::new();
        for (anchor, label, _) in matched.unwrap_or_default() {
            by_anchor.entry(anchor).or_default().insert(label.clone());
        }
        let mut groups: BTreeMap<Iri, Vec<TermHit>> = BTreeMap::new();
        for (anchor, labels) in by_anchor {
            let e = &s.live[anchor];
            groups.entry(e.statement_type.clone()).or_default().push(TermHit {
                anchor: anchor.clone(),
                version: e.latest.clone(),
                creation_date: e.created,
                matched_positions: labels.into_iter().collect(),
            });
        }
        groups
            .into_iter()
            .map(|(statement_type, mut hits)| {
                hits.sort_by(|a, b| b.creation_date.cmp(&a.creation_date).then_with(|| a.anchor.cmp(&b.anchor)));
                TermGroup { statement_type, type_label: String::new(), hits }
            })
            .collect()
    }

    /// Statements of the query's type matching every facet filter, with
    /// value counts per position over the result.
    pub fn search_faceted(&self, pattern: &StatementPattern, query: &FacetQuery) -> Result<FacetResult> {
        query.validate(pattern)?;
        let s = self.state.read().expect("index lock");
        let deleted = s.deleted.iter().filter(|_| query.include_deleted).map(|(a, e)| (a, e, true));
        let mut hits: Vec<FacetHit> = s
            .live
            .iter()
            .map(|(a, e)| (a, e, false))
            .chain(deleted)
            .filter(|(_, e, _)| e.statement_type == pattern.class_iri)
            .filter(|(_, e, _)| query.facet_filters.iter().all(|(label, f)| f.matches(e.latest.values(label))))
            .map(|(a, e, deleted)| FacetHit {
                anchor: a.clone(),
                version: e.latest.clone(),
                creation_date: e.created,
                deleted,
            })
            .collect();
        hits.sort_by(|a, b| b.creation_date.cmp(&a.creation_date).then_with(|| a.anchor.cmp(&b.anchor)));
        let histogram = histogram(pattern, hits.iter().map(|h| &h.version));
        Ok(FacetResult { statement_type: pattern.class_iri.clone(), statements: hits, histogram })
    }

    /// Number of indexed postings that point at `anchor`.
    pub fn postings_for(&self, anchor: &Iri) -> usize {
        let s = self.state.read().expect("index lock");
        s.postings.values().map(|set| set.iter().filter(|(a, _, _)| a == anchor).count()).sum()
    }
}
