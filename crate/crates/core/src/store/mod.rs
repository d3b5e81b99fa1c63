//! Versioned statement storage: anchors, consecutive immutable versions,
//! soft delete and per-position edit history, persisted to an append-only log.

mod history;
mod log;
mod model;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};

use chrono::{DateTime, Utc};

pub use history::{diff_versions, edit_history, replay};
pub use log::{read_log, LogRecord, LogWriter};
pub use model::{
    AnchorStatement, ChangeKind, ChangeRecord, DeletedMarker, MetadataPatch, NewStatement, PositionInstance,
    ProvenanceMetadata, Resolved, StatementVersion,
};

use crate::error::{validation, violation, Error, Result};
use crate::hierarchy::ClassHierarchy;
use crate::iri::{IdSource, Iri, UuidIds};
use crate::metamodel::{PatternFile, PatternRegistry, PositionSpec, StatementPattern, ValueKind};
use crate::value::{is_valid_lexical, Value};

pub trait Clock: Send + Sync {
    fn now(&self) -> DateTime<Utc>;
}

#[derive(Debug, Default)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> DateTime<Utc> {
        Utc::now()
    }
}

/// A clock that only moves when told to.
#[derive(Debug)]
pub struct ManualClock(Mutex<DateTime<Utc>>);

impl ManualClock {
    pub fn new(start: DateTime<Utc>) -> Self {
        ManualClock(Mutex::new(start))
    }

    pub fn set(&self, t: DateTime<Utc>) {
        *self.0.lock().expect("clock lock") = t;
    }

    pub fn advance(&self, d: chrono::Duration) {
        *self.0.lock().expect("clock lock") += d;
    }
}

impl Clock for ManualClock {
    fn now(&self) -> DateTime<Utc> {
        *self.0.lock().expect("clock lock")
    }
}

/// Notified, under the store's write lock, after every change to an anchor.
/// Search indexes and external version registrars (e.g. DOI minting) hook
/// in here.
pub trait StoreObserver: Send + Sync {
    fn anchor_changed(&self, anchor: &AnchorStatement);
}

pub struct StoreOptions {
    pub base: Iri,
    pub log_path: Option<PathBuf>,
    pub ids: Arc<dyn IdSource>,
    pub clock: Arc<dyn Clock>,
    pub hierarchy: ClassHierarchy,
}

impl StoreOptions {
    pub fn new(base: Iri) -> Self {
        StoreOptions {
            base,
            log_path: None,
            ids: Arc::new(UuidIds),
            clock: Arc::new(SystemClock),
            hierarchy: ClassHierarchy::default(),
        }
    }

    pub fn log_path(mut self, path: impl Into<PathBuf>) -> Self {
        self.log_path = Some(path.into());
        self
    }

    pub fn ids(mut self, ids: Arc<dyn IdSource>) -> Self {
        self.ids = ids;
        self
    }

    pub fn clock(mut self, clock: Arc<dyn Clock>) -> Self {
        self.clock = clock;
        self
    }

    pub fn hierarchy(mut self, hierarchy: ClassHierarchy) -> Self {
        self.hierarchy = hierarchy;
        self
    }
}

struct Inner {
    anchors: BTreeMap<Iri, AnchorStatement>,
    log: Option<LogWriter>,
}

/// The statement store. Safe to share across threads: reads run
/// concurrently, writes are serialized (which also serializes writes per
/// anchor, so version numbers never branch).
pub struct Store {
    base: Iri,
    registry: PatternRegistry,
    inner: RwLock<Inner>,
    ids: Arc<dyn IdSource>,
    clock: Arc<dyn Clock>,
    hierarchy: RwLock<ClassHierarchy>,
    observers: RwLock<Vec<Arc<dyn StoreObserver>>>,
}

impl std::fmt::Debug for Store {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Store").field("base", &self.base).field("len", &self.len()).finish()
    }
}

impl Store {
    pub fn in_memory(base: Iri) -> Self {
        Self::open(StoreOptions::new(base)).expect("in-memory store cannot fail to open")
    }

    /// Opens a store, replaying the log if one is configured.
    pub fn open(options: StoreOptions) -> Result<Self> {
        let store = Store {
            registry: PatternRegistry::new(options.base.clone()),
            base: options.base,
            inner: RwLock::new(Inner { anchors: BTreeMap::new(), log: None }),
            ids: options.ids,
            clock: options.clock,
            hierarchy: RwLock::new(options.hierarchy),
            observers: RwLock::new(Vec::new()),
        };
        if let Some(path) = options.log_path {
            let records = read_log(&path)?;
            {
                let mut inner = store.inner.write().expect("store lock");
                for r in records {
                    store.apply_replayed(&mut inner.anchors, r)?;
                }
            }
            store.inner.write().expect("store lock").log = Some(LogWriter::open(&path)?);
        }
        Ok(store)
    }

    fn apply_replayed(&self, anchors: &mut BTreeMap<Iri, AnchorStatement>, r: LogRecord) -> Result<()> {
        let missing = |a: &Iri| Error::Format(format!("log references unknown anchor {a}"));
        match r {
            LogRecord::Type { pattern } => {
                let p = StatementPattern::try_from(pattern)?;
                match self.registry.get(&p.id) {
                    Ok(existing) if existing.version >= p.version => {}
                    _ => self.registry.insert(p)?,
                }
            }
            LogRecord::Anchor { anchor } => {
                anchors.insert(anchor.id.clone(), anchor);
            }
            LogRecord::Version { anchor, version } => {
                let a = anchors.get_mut(&anchor).ok_or_else(|| missing(&anchor))?;
                if version.version_number as usize != a.versions.len() + 1 {
                    return Err(Error::Format(format!(
                        "log has version {} for {anchor} after {} versions",
                        version.version_number,
                        a.versions.len()
                    )));
                }
                a.versions.push(version);
            }
            LogRecord::Delete { anchor, at, by } => {
                let a = anchors.get_mut(&anchor).ok_or_else(|| missing(&anchor))?;
                a.deleted_at = Some(at);
                a.deleted_by = Some(by);
            }
            LogRecord::Meta { anchor, license, confidence_level, context_refs, modifiable, negated } => {
                let a = anchors.get_mut(&anchor).ok_or_else(|| missing(&anchor))?;
                a.metadata.license = license;
                a.confidence_level = confidence_level;
                a.context_refs = context_refs;
                a.modifiable = modifiable;
                a.negated = negated;
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Iri {
        &self.base
    }

    pub fn registry(&self) -> &PatternRegistry {
        &self.registry
    }

    pub fn clock(&self) -> &dyn Clock {
        self.clock.as_ref()
    }

    pub fn subscribe(&self, observer: Arc<dyn StoreObserver>) {
        self.observers.write().expect("observer lock").push(observer);
    }

    pub fn set_hierarchy(&self, hierarchy: ClassHierarchy) {
        *self.hierarchy.write().expect("hierarchy lock") = hierarchy;
    }

    pub fn hierarchy(&self) -> ClassHierarchy {
        self.hierarchy.read().expect("hierarchy lock").clone()
    }

    pub fn len(&self) -> usize {
        self.inner.read().expect("store lock").anchors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    // -- statement types --------------------------------------------------

    pub fn define_statement_type(&self, draft: PatternFile) -> Result<StatementPattern> {
        let mut inner = self.inner.write().expect("store lock");
        let pattern = self.registry.define_statement_type(draft)?;
        self.log(&mut inner, &[LogRecord::Type { pattern: PatternFile::from(&pattern) }])?;
        Ok(pattern)
    }

    pub fn reorder_object_positions(&self, id: &Iri, new_order: &[usize]) -> Result<StatementPattern> {
        let mut inner = self.inner.write().expect("store lock");
        let pattern = self.registry.reorder_object_positions(id, new_order)?;
        self.log(&mut inner, &[LogRecord::Type { pattern: PatternFile::from(&pattern) }])?;
        Ok(pattern)
    }

    pub fn add_optional_position(&self, id: &Iri, spec: PositionSpec) -> Result<StatementPattern> {
        let mut inner = self.inner.write().expect("store lock");
        let pattern = self.registry.add_optional_position(id, spec)?;
        self.log(&mut inner, &[LogRecord::Type { pattern: PatternFile::from(&pattern) }])?;
        Ok(pattern)
    }

    pub fn pattern(&self, id: &Iri) -> Result<StatementPattern> {
        self.registry.get(id)
    }

    /// The pattern governing an anchor.
    pub fn pattern_of(&self, anchor: &AnchorStatement) -> Result<StatementPattern> {
        self.registry.get(&anchor.pattern_ref)
    }

    // -- statements -------------------------------------------------------

    pub fn create_statement(&self, new: NewStatement) -> Result<AnchorStatement> {
        let pattern = self.registry.resolve(&new.statement_type)?;
        if new.negated && !pattern.negatable {
            return Err(validation(format!("statement type {} is not negatable", pattern.label)));
        }
        check_confidence(new.confidence_level)?;
        let mut values = new.objects.clone();
        if values.contains_key(&pattern.subject.thematic_label) {
            return Err(violation(format!(
                "{} is the subject position; pass its values as subject",
                pattern.subject.thematic_label
            )));
        }
        values.insert(pattern.subject.thematic_label.clone(), new.subject.clone());
        values.retain(|_, v| !v.is_empty());
        check_values(&pattern, &values, &self.hierarchy.read().expect("hierarchy lock"))?;
        for label in new.transitive.keys() {
            if !values.contains_key(label) {
                return Err(violation(format!("transitive flag on empty or unknown position {label}")));
            }
        }

        let id = self.base.join("statement").join(&self.ids.next_id());
        let version = build_version(
            &id,
            1,
            &pattern,
            &values,
            &new.transitive,
            new.metadata.creator.clone(),
            new.metadata.creation_date,
        );
        let header = AnchorStatement {
            id: id.clone(),
            statement_type: pattern.class_iri.clone(),
            pattern_ref: pattern.id.clone(),
            context_refs: normalized(new.context_refs),
            versions: Vec::new(),
            metadata: new.metadata,
            deleted_at: None,
            deleted_by: None,
            modifiable: new.modifiable,
            confidence_level: new.confidence_level,
            negated: new.negated,
        };
        let mut anchor = header.clone();
        anchor.versions.push(version.clone());

        let mut inner = self.inner.write().expect("store lock");
        if inner.anchors.contains_key(&id) {
            return Err(Error::Conflict(format!("anchor {id} already exists")));
        }
        self.log(
            &mut inner,
            &[LogRecord::Anchor { anchor: header }, LogRecord::Version { anchor: id.clone(), version }],
        )?;
        inner.anchors.insert(id, anchor.clone());
        self.notify(&anchor);
        Ok(anchor)
    }

    /// Creates the next version. `changes` maps thematic labels to their new
    /// values; an empty list clears an optional position.
    pub fn update_statement(
        &self,
        anchor: &Iri,
        changes: &BTreeMap<String, Vec<Value>>,
        editor: &Iri,
    ) -> Result<StatementVersion> {
        let mut inner = self.inner.write().expect("store lock");
        let current = inner.anchors.get(anchor).ok_or_else(|| not_found(anchor))?;
        if current.is_deleted() {
            return Err(gone(current));
        }
        if !current.modifiable {
            return Err(Error::Forbidden(format!("statement {anchor} is not modifiable")));
        }
        let pattern = self.registry.get(&current.pattern_ref)?;
        let latest = current.latest().ok_or_else(|| Error::Conflict(format!("{anchor} has no version")))?;
        let mut values = latest.value_map();
        for (label, new_values) in changes {
            if pattern.position(label).is_none() {
                return Err(violation(format!("unknown position {label}")));
            }
            if new_values.is_empty() {
                values.remove(label);
            } else {
                values.insert(label.clone(), new_values.clone());
            }
        }
        check_values(&pattern, &values, &self.hierarchy.read().expect("hierarchy lock"))?;
        let transitive: BTreeMap<String, bool> = latest
            .positions()
            .filter(|p| values.contains_key(&p.thematic_label))
            .filter_map(|p| p.transitive.map(|t| (p.thematic_label.clone(), t)))
            .collect();
        let number = latest.version_number + 1;
        let version =
            build_version(anchor, number, &pattern, &values, &transitive, editor.clone(), self.clock.now());
        self.log(&mut inner, &[LogRecord::Version { anchor: anchor.clone(), version: version.clone() }])?;
        let a = inner.anchors.get_mut(anchor).expect("checked above");
        a.versions.push(version.clone());
        let snapshot = a.clone();
        self.notify(&snapshot);
        Ok(version)
    }

    pub fn resolve(&self, anchor: &Iri) -> Result<Resolved> {
        let inner = self.inner.read().expect("store lock");
        let a = inner.anchors.get(anchor).ok_or_else(|| not_found(anchor))?;
        if a.is_deleted() {
            return Ok(Resolved::Deleted(a.deleted_marker()));
        }
        a.latest()
            .cloned()
            .map(Resolved::Current)
            .ok_or_else(|| Error::Conflict(format!("{anchor} has no version")))
    }

    /// A specific version, hidden once the anchor is deleted.
    pub fn version(&self, anchor: &Iri, number: u32) -> Result<StatementVersion> {
        let inner = self.inner.read().expect("store lock");
        let a = inner.anchors.get(anchor).ok_or_else(|| not_found(anchor))?;
        if a.is_deleted() {
            return Err(gone(a));
        }
        a.version(number)
            .cloned()
            .ok_or_else(|| Error::NotFound(format!("version {number} of {anchor}")))
    }

    /// The stored anchor with all versions, regardless of deletion. For
    /// exports and archival; user-facing reads go through `resolve`.
    pub fn anchor(&self, anchor: &Iri) -> Result<AnchorStatement> {
        let inner = self.inner.read().expect("store lock");
        inner.anchors.get(anchor).cloned().ok_or_else(|| not_found(anchor))
    }

    pub fn anchors(&self) -> Vec<AnchorStatement> {
        self.inner.read().expect("store lock").anchors.values().cloned().collect()
    }

    pub fn soft_delete(&self, anchor: &Iri, deleter: &Iri, at: DateTime<Utc>) -> Result<AnchorStatement> {
        let mut inner = self.inner.write().expect("store lock");
        let a = inner.anchors.get(anchor).ok_or_else(|| not_found(anchor))?;
        if a.is_deleted() {
            return Err(Error::Conflict(format!("statement {anchor} is already deleted")));
        }
        self.log(&mut inner, &[LogRecord::Delete { anchor: anchor.clone(), at, by: deleter.clone() }])?;
        let a = inner.anchors.get_mut(anchor).expect("checked above");
        a.deleted_at = Some(at);
        a.deleted_by = Some(deleter.clone());
        let snapshot = a.clone();
        self.notify(&snapshot);
        Ok(snapshot)
    }

    pub fn edit_history(&self, anchor: &Iri) -> Result<Vec<ChangeRecord>> {
        let inner = self.inner.read().expect("store lock");
        let a = inner.anchors.get(anchor).ok_or_else(|| not_found(anchor))?;
        Ok(edit_history(&a.versions))
    }

    /// Changes anchor-level fields. Does not create a version.
    pub fn set_statement_metadata(&self, anchor: &Iri, patch: MetadataPatch) -> Result<AnchorStatement> {
        let mut inner = self.inner.write().expect("store lock");
        let a = inner.anchors.get(anchor).ok_or_else(|| not_found(anchor))?;
        let mut next = a.clone();
        if let Some(license) = patch.license {
            next.metadata.license = license;
        }
        if let Some(c) = patch.confidence_level {
            check_confidence(c)?;
            next.confidence_level = c;
        }
        if let Some(ctx) = patch.context_refs {
            next.context_refs = normalized(ctx);
        }
        if let Some(m) = patch.modifiable {
            next.modifiable = m;
        }
        if let Some(n) = patch.negated {
            if n && !self.registry.get(&next.pattern_ref)?.negatable {
                return Err(validation("statement type is not negatable"));
            }
            next.negated = n;
        }
        self.log(
            &mut inner,
            &[LogRecord::Meta {
                anchor: anchor.clone(),
                license: next.metadata.license.clone(),
                confidence_level: next.confidence_level,
                context_refs: next.context_refs.clone(),
                modifiable: next.modifiable,
                negated: next.negated,
            }],
        )?;
        inner.anchors.insert(anchor.clone(), next.clone());
        self.notify(&next);
        Ok(next)
    }

    /// Inserts a complete anchor (e.g. one reconstructed from RDF). Every
    /// version must conform to the current pattern.
    pub fn import_anchor(&self, mut anchor: AnchorStatement) -> Result<AnchorStatement> {
        anchor.context_refs = normalized(anchor.context_refs);
        let pattern = self.registry.get(&anchor.pattern_ref)?;
        if anchor.statement_type != pattern.class_iri {
            return Err(violation(format!("{} does not instantiate {}", anchor.id, pattern.class_iri)));
        }
        check_confidence(anchor.confidence_level)?;
        if anchor.deleted_at.is_some() != anchor.deleted_by.is_some() {
            return Err(violation("deleted_at and deleted_by must be set together"));
        }
        let hierarchy = self.hierarchy.read().expect("hierarchy lock").clone();
        for (i, v) in anchor.versions.iter().enumerate() {
            if v.version_number as usize != i + 1 {
                return Err(violation(format!("{} has non-consecutive version numbers", anchor.id)));
            }
            check_values(&pattern, &v.value_map(), &hierarchy)?;
        }
        if anchor.versions.is_empty() && !anchor.is_deleted() {
            return Err(violation(format!("{} has no versions", anchor.id)));
        }
        let mut inner = self.inner.write().expect("store lock");
        if inner.anchors.contains_key(&anchor.id) {
            return Err(Error::Conflict(format!("anchor {} already exists", anchor.id)));
        }
        let mut header = anchor.clone();
        header.versions.clear();
        header.deleted_at = None;
        header.deleted_by = None;
        let mut records = vec![LogRecord::Anchor { anchor: header }];
        records.extend(
            anchor
                .versions
                .iter()
                .map(|v| LogRecord::Version { anchor: anchor.id.clone(), version: v.clone() }),
        );
        if let (Some(at), Some(by)) = (anchor.deleted_at, anchor.deleted_by.clone()) {
            records.push(LogRecord::Delete { anchor: anchor.id.clone(), at, by });
        }
        self.log(&mut inner, &records)?;
        inner.anchors.insert(anchor.id.clone(), anchor.clone());
        self.notify(&anchor);
        Ok(anchor)
    }

    fn log(&self, inner: &mut Inner, records: &[LogRecord]) -> Result<()> {
        match inner.log.as_mut() {
            Some(w) => w.append(records),
            None => Ok(()),
        }
    }

    fn notify(&self, anchor: &AnchorStatement) {
        for o in self.observers.read().expect("observer lock").iter() {
            o.anchor_changed(anchor);
        }
    }
}

fn not_found(anchor: &Iri) -> Error {
    Error::NotFound(format!("statement {anchor}"))
}

pub(crate) fn gone(anchor: &AnchorStatement) -> Error {
    let marker = anchor.deleted_marker();
    Error::Gone {
        message: format!("statement {} was deleted", anchor.id),
        metadata: Box::new(serde_json::to_value(&marker).expect("marker serializes")),
    }
}

fn normalized(mut refs: Vec<Iri>) -> Vec<Iri> {
    refs.sort();
    refs.dedup();
    refs
}

fn check_confidence(c: Option<f64>) -> Result<()> {
    match c {
        Some(c) if !(0.0..=1.0).contains(&c) => {
            Err(validation(format!("confidence level {c} is outside [0, 1]")))
        }
        _ => Ok(()),
    }
}

/// Checks position values (keyed by thematic label, subject included)
/// against a pattern.
pub fn check_values(
    pattern: &StatementPattern,
    values: &BTreeMap<String, Vec<Value>>,
    hierarchy: &ClassHierarchy,
) -> Result<()> {
    for label in values.keys() {
        if pattern.position(label).is_none() {
            return Err(violation(format!("{} has no position {label}", pattern.label)));
        }
    }
    for spec in pattern.positions() {
        let vals = values.get(&spec.thematic_label).map_or(&[][..], Vec::as_slice);
        if !spec.allows(vals.len()) {
            let label = &spec.thematic_label;
            return Err(if vals.is_empty() {
                violation(format!("required position {label} is missing"))
            } else {
                violation(format!("position {label} has {} values, allowed {}..{:?}", vals.len(), spec.min_count, spec.max_count))
            });
        }
        for v in vals {
            check_value(spec, v, hierarchy)?;
        }
    }
    Ok(())
}

fn check_value(spec: &PositionSpec, value: &Value, hierarchy: &ClassHierarchy) -> Result<()> {
    let label = &spec.thematic_label;
    match (spec.value_kind, value) {
        (ValueKind::Resource, Value::Resource { iri, .. }) => {
            if let Some(class) = &spec.class_constraint {
                if hierarchy.knows(iri) && !hierarchy.satisfies(iri, class) {
                    return Err(violation(format!("<{iri}> in {label} is not an instance of <{class}>")));
                }
            }
            Ok(())
        }
        (ValueKind::Literal, Value::Literal { lexical, datatype }) => {
            let expected = spec.literal_datatype.expect("validated literal position");
            if *datatype != expected.iri() {
                return Err(violation(format!("{label} expects <{}>, got <{datatype}>", expected.iri())));
            }
            if !is_valid_lexical(expected, lexical) {
                return Err(violation(format!("{lexical:?} is not a valid {expected:?} for {label}")));
            }
            Ok(())
        }
        (ValueKind::Resource, Value::Literal { .. }) => {
            Err(violation(format!("{label} expects a resource, got a literal")))
        }
        (ValueKind::Literal, Value::Resource { .. }) => {
            Err(violation(format!("{label} expects a literal, got a resource")))
        }
    }
}

fn build_version(
    anchor: &Iri,
    number: u32,
    pattern: &StatementPattern,
    values: &BTreeMap<String, Vec<Value>>,
    transitive: &BTreeMap<String, bool>,
    created_by: Iri,
    created_at: DateTime<Utc>,
) -> StatementVersion {
    let id = anchor.join(&format!("v{number}"));
    let position = |label: &str, vals: &[Value]| PositionInstance {
        id: id.join("pos").join(label),
        thematic_label: label.to_string(),
        values: vals.to_vec(),
        transitive: transitive.get(label).copied(),
    };
    let subject_label = &pattern.subject.thematic_label;
    let subject_position = position(subject_label, values.get(subject_label).map_or(&[][..], Vec::as_slice));
    let object_positions = values
        .iter()
        .filter(|(label, _)| *label != subject_label)
        .map(|(label, vals)| position(label, vals))
        .collect();
    StatementVersion { id, version_number: number, subject_position, object_positions, created_by, created_at }
}
