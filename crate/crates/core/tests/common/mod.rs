#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use chrono::{Duration, TimeZone, Utc};
use proptest::prelude::*;

use rosetta_core::fixtures;
use rosetta_core::iri::SequentialIds;
use rosetta_core::metamodel::{LiteralDatatype, PositionSpec, StatementPattern, ValueKind};
use rosetta_core::store::{ManualClock, NewStatement, ProvenanceMetadata, Store, StoreOptions};
use rosetta_core::{Iri, Value};

pub const BASE: &str = "https://example.org/kg";

pub fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

pub fn clock() -> Arc<ManualClock> {
    Arc::new(ManualClock::new(Utc.with_ymd_and_hms(2024, 3, 1, 12, 0, 0).unwrap()))
}

pub fn options() -> StoreOptions {
    StoreOptions::new(iri(BASE)).ids(Arc::new(SequentialIds::default())).clock(clock())
}

/// A store with every bundled pattern defined.
pub fn fixture_store() -> Store {
    let store = Store::open(options()).unwrap();
    fixtures::define_patterns(&store).unwrap();
    store
}

pub fn patterns(store: &Store) -> Vec<StatementPattern> {
    store.registry().list()
}

const NAMES: &[&str] = &[
    "Anna", "Bob", "Sarah", "Christopher", "Berlin", "Paris", "New York City", "gram", "Weight", "apple",
    "orange", "train", "Osnabrück", "Hengelo", "Utrecht", "Rotterdam", "kilogram", "Length", "pear", "bus",
];

pub fn arb_resource() -> impl Strategy<Value = Value> {
    (0..NAMES.len(), 0u8..4).prop_map(|(i, variant)| {
        let name = NAMES[i];
        let slug: String = name.to_lowercase().chars().filter(|c| c.is_alphanumeric()).collect();
        let id = iri(&format!("https://example.org/term/{slug}{variant}"));
        if variant == 3 {
            Value::resource(id)
        } else {
            Value::labelled(id, name)
        }
    })
}

pub fn arb_decimal() -> impl Strategy<Value = String> {
    (any::<bool>(), 0u32..100_000, prop::option::of(0u32..1000)).prop_map(|(neg, int, frac)| {
        let sign = if neg && int > 0 { "-" } else { "" };
        match frac {
            Some(f) => format!("{sign}{int}.{f:03}"),
            None => format!("{sign}{int}"),
        }
    })
}

pub fn arb_date() -> impl Strategy<Value = String> {
    (1900i32..2100, 1u32..=12, 1u32..=28).prop_map(|(y, m, d)| format!("{y:04}-{m:02}-{d:02}"))
}

pub fn arb_literal(dt: LiteralDatatype) -> BoxedStrategy<Value> {
    match dt {
        LiteralDatatype::Decimal => arb_decimal().prop_map(move |s| Value::literal(s, dt)).boxed(),
        LiteralDatatype::Integer => (-5000i64..5000).prop_map(move |n| Value::literal(n.to_string(), dt)).boxed(),
        LiteralDatatype::Date => arb_date().prop_map(move |s| Value::literal(s, dt)).boxed(),
        LiteralDatatype::Boolean => any::<bool>().prop_map(move |b| Value::literal(b.to_string(), dt)).boxed(),
        LiteralDatatype::Url => (0u32..500).prop_map(move |n| Value::literal(format!("https://example.org/doc/{n}"), dt)).boxed(),
        LiteralDatatype::Text => "[a-zA-Z0-9 \"\\\\é\n]{1,12}".prop_map(move |s| Value::literal(s, dt)).boxed(),
    }
}

pub fn arb_value(spec: &PositionSpec) -> BoxedStrategy<Value> {
    match spec.value_kind {
        ValueKind::Resource => arb_resource().boxed(),
        ValueKind::Literal => arb_literal(spec.literal_datatype.unwrap_or(LiteralDatatype::Text)),
    }
}

/// Values for one position; `allow_empty` lets optional positions stay empty.
pub fn arb_values(spec: &PositionSpec, allow_empty: bool) -> BoxedStrategy<Vec<Value>> {
    let lo = if allow_empty { spec.min_count as usize } else { (spec.min_count as usize).max(1) };
    let hi = spec.max_count.map_or(4, |m| m as usize).max(lo);
    prop::collection::vec(arb_value(spec), lo..=hi)
        .prop_map(|mut vs| {
            let mut seen = std::collections::BTreeSet::new();
            vs.retain(|v| seen.insert(v.key()));
            vs
        })
        .boxed()
}

pub fn metadata() -> ProvenanceMetadata {
    let mut m = ProvenanceMetadata::new(iri("https://example.org/user/u1"), Utc.with_ymd_and_hms(2024, 1, 1, 0, 0, 0).unwrap());
    m.extraction_method = Some("manual".into());
    m
}

/// A statement conforming to `pattern`.
pub fn arb_statement(pattern: &StatementPattern) -> BoxedStrategy<NewStatement> {
    let label = pattern.label.clone();
    let subject = arb_values(&pattern.subject, false);
    let objects: Vec<(String, BoxedStrategy<Vec<Value>>)> =
        pattern.object_positions.iter().map(|p| (p.thematic_label.clone(), arb_values(p, true))).collect();
    let labels: Vec<String> = objects.iter().map(|(l, _)| l.clone()).collect();
    let strategies: Vec<BoxedStrategy<Vec<Value>>> = objects.into_iter().map(|(_, s)| s).collect();
    let negatable = pattern.negatable;
    (
        subject,
        strategies,
        any::<bool>(),
        prop::option::of(0u32..=100),
        prop::option::of(prop::sample::select(vec!["https://example.org/publication/1", "https://example.org/publication/2"])),
        0i64..1_000_000,
        any::<bool>(),
    )
        .prop_map(move |(subject, objects, negate, confidence, context, secs, licensed)| {
            let mut m = metadata();
            m.creation_date += Duration::seconds(secs);
            if licensed {
                m.license = Some(iri("https://creativecommons.org/licenses/by/4.0/"));
                m.author = Some(iri("https://example.org/user/author"));
            }
            let mut s = NewStatement::new(label.clone(), subject, m);
            for (l, vs) in labels.iter().zip(objects) {
                if !vs.is_empty() {
                    s.objects.insert(l.clone(), vs);
                }
            }
            s.negated = negate && negatable;
            s.confidence_level = confidence.map(|c| f64::from(c) / 100.0);
            s.context_refs = context.into_iter().map(iri).collect();
            s
        })
        .boxed()
}

/// Picks a bundled pattern and a statement for it.
pub fn arb_fixture_statement() -> impl Strategy<Value = (String, NewStatement)> {
    let store = fixture_store();
    let pats = patterns(&store);
    let choices: Vec<BoxedStrategy<(String, NewStatement)>> = pats
        .into_iter()
        .map(|p| {
            let label = p.label.clone();
            arb_statement(&p).prop_map(move |s| (label.clone(), s)).boxed()
        })
        .collect();
    prop::strategy::Union::new(choices)
}

/// One edit: new values for some positions (empty clears an optional one).
pub fn arb_edit(pattern: &StatementPattern) -> BoxedStrategy<BTreeMap<String, Vec<Value>>> {
    let specs: Vec<PositionSpec> = pattern.positions().cloned().collect();
    let per_position: Vec<BoxedStrategy<Option<Vec<Value>>>> = specs
        .iter()
        .map(|p| prop::option::weighted(0.4, arb_values(p, !p.required && !p.is_subject())).boxed())
        .collect();
    let labels: Vec<String> = specs.iter().map(|p| p.thematic_label.clone()).collect();
    per_position
        .prop_map(move |changes| {
            labels.iter().cloned().zip(changes).filter_map(|(l, c)| c.map(|c| (l, c))).collect()
        })
        .boxed()
}

/// A pattern label, a first statement and a sequence of edits.
pub type EditSequence = (String, NewStatement, Vec<BTreeMap<String, Vec<Value>>>);

pub fn arb_edit_sequence(max_edits: usize) -> impl Strategy<Value = EditSequence> {
    let store = fixture_store();
    let choices: Vec<BoxedStrategy<EditSequence>> = patterns(&store)
        .into_iter()
        .map(|p| {
            let label = p.label.clone();
            (arb_statement(&p), prop::collection::vec(arb_edit(&p), 0..=max_edits))
                .prop_map(move |(s, e)| (label.clone(), s, e))
                .boxed()
        })
        .collect();
    prop::strategy::Union::new(choices)
}

// ---- search oracles: plain scans over the store ---------------------------

use rosetta_core::search::{FacetFilter, FacetQuery};
use rosetta_core::store::{AnchorStatement, StatementVersion};

fn words(text: &str) -> std::collections::BTreeSet<String> {
    text.to_lowercase()
        .split(|c: char| !(c.is_alphanumeric() || c == '.' || c == '-'))
        .map(|t| t.trim_matches(['.', '-']).to_string())
        .filter(|t| !t.is_empty())
        .collect()
}

fn value_text(v: &Value) -> String {
    match v {
        Value::Resource { iri, label } => label.clone().unwrap_or_else(|| iri.local_name().to_string()),
        Value::Literal { lexical, .. } => lexical.clone(),
    }
}

/// (type label, anchor, matched positions), ordered like the engine's output:
/// by type label, then newest first.
pub fn oracle_term(store: &Store, term: &str) -> Vec<(String, Iri, Vec<String>)> {
    let query = words(term);
    if query.is_empty() {
        return Vec::new();
    }
    let mut rows: Vec<(String, chrono::DateTime<Utc>, Iri, Vec<String>)> = Vec::new();
    for a in store.anchors().into_iter().filter(|a| !a.is_deleted()) {
        let v = a.latest().unwrap();
        let mut labels: Vec<String> = v
            .positions()
            .filter(|p| p.values.iter().any(|x| query.is_subset(&words(&value_text(x)))))
            .map(|p| p.thematic_label.clone())
            .collect();
        labels.sort();
        if !labels.is_empty() {
            let label = store.pattern_of(&a).unwrap().label;
            rows.push((label, a.metadata.creation_date, a.id.clone(), labels));
        }
    }
    rows.sort_by(|x, y| x.0.cmp(&y.0).then(y.1.cmp(&x.1)).then(x.2.cmp(&y.2)));
    rows.into_iter().map(|(l, _, a, m)| (l, a, m)).collect()
}

fn number(s: &str) -> f64 {
    s.parse().unwrap()
}

fn oracle_filter(f: &FacetFilter, v: &Value) -> bool {
    match (f, v) {
        (FacetFilter::OneOf { values }, Value::Resource { iri, .. }) => values.contains(iri),
        (FacetFilter::Range { min, max }, Value::Literal { lexical, datatype }) => {
            let dt = LiteralDatatype::from_iri(datatype).unwrap();
            let cmp = |b: &str| match dt {
                LiteralDatatype::Date => lexical.as_str().cmp(b),
                _ => number(lexical).partial_cmp(&number(b)).unwrap(),
            };
            min.as_deref().is_none_or(|m| cmp(m).is_ge()) && max.as_deref().is_none_or(|m| cmp(m).is_le())
        }
        (FacetFilter::Text { value, exact: true }, v) => value_text(v) == *value,
        (FacetFilter::Text { value, exact: false }, v) => value_text(v).to_lowercase().contains(&value.to_lowercase()),
        _ => false,
    }
}

/// Anchors matching a faceted query, newest first, and the value counts
/// per position over them.
pub fn oracle_facet(store: &Store, query: &FacetQuery) -> (Vec<Iri>, BTreeMap<String, BTreeMap<String, usize>>) {
    let pattern = store.registry().resolve(&query.statement_type).unwrap();
    let mut hits: Vec<AnchorStatement> = store
        .anchors()
        .into_iter()
        .filter(|a| a.statement_type == pattern.class_iri && (query.include_deleted || !a.is_deleted()))
        .filter(|a| {
            let v = a.latest().unwrap();
            query.facet_filters.iter().all(|(l, f)| v.values(l).iter().any(|x| oracle_filter(f, x)))
        })
        .collect();
    hits.sort_by(|x, y| y.metadata.creation_date.cmp(&x.metadata.creation_date).then(x.id.cmp(&y.id)));
    let mut hist: BTreeMap<String, BTreeMap<String, usize>> =
        pattern.positions().map(|p| (p.thematic_label.clone(), BTreeMap::new())).collect();
    for a in &hits {
        let v: &StatementVersion = a.latest().unwrap();
        for p in v.positions() {
            let distinct: std::collections::BTreeSet<String> = p.values.iter().map(Value::key).collect();
            for k in distinct {
                *hist.get_mut(&p.thematic_label).unwrap().entry(k).or_default() += 1;
            }
        }
    }
    (hits.into_iter().map(|a| a.id).collect(), hist)
}

pub fn arb_filter(spec: &PositionSpec) -> BoxedStrategy<FacetFilter> {
    let text = prop::sample::select(NAMES.to_vec())
        .prop_flat_map(|n| (0..n.len(), Just(n), any::<bool>()))
        .prop_map(|(cut, n, exact)| {
            let end = n.char_indices().map(|(i, _)| i).find(|i| *i >= cut.max(1)).unwrap_or(n.len());
            let value = if exact { n.to_string() } else { n[..end].to_lowercase() };
            FacetFilter::Text { value, exact }
        })
        .boxed();
    match (spec.value_kind, spec.literal_datatype) {
        (ValueKind::Resource, _) => prop_oneof![
            prop::collection::vec(arb_resource(), 1..4)
                .prop_map(|vs| FacetFilter::OneOf { values: vs.iter().map(|v| v.iri().unwrap().clone()).collect() }),
            text,
        ]
        .boxed(),
        (ValueKind::Literal, Some(dt)) if dt.is_ordered() => {
            let bound = arb_literal(dt).prop_map(|v| match v {
                Value::Literal { lexical, .. } => lexical,
                _ => unreachable!(),
            });
            (prop::option::of(bound.clone()), prop::option::of(bound))
                .prop_map(|(min, max)| FacetFilter::Range { min, max })
                .boxed()
        }
        _ => text,
    }
}

pub fn arb_facet_query(pattern: &StatementPattern) -> BoxedStrategy<FacetQuery> {
    let label = pattern.label.clone();
    let filters: Vec<BoxedStrategy<Option<(String, FacetFilter)>>> = pattern
        .positions()
        .map(|p| {
            let l = p.thematic_label.clone();
            prop::option::weighted(0.3, arb_filter(p).prop_map(move |f| (l.clone(), f))).boxed()
        })
        .collect();
    (filters, any::<bool>())
        .prop_map(move |(fs, include_deleted)| FacetQuery {
            statement_type: label.clone(),
            facet_filters: fs.into_iter().flatten().collect(),
            include_deleted,
        })
        .boxed()
}

/// Creates the statements, soft-deleting every fifth.
pub fn populate(store: &Store, statements: Vec<(String, NewStatement)>) {
    let deleter = iri("https://example.org/user/deleter");
    for (i, (_, s)) in statements.into_iter().enumerate() {
        let a = store.create_statement(s).unwrap();
        if i % 5 == 4 {
            store.soft_delete(&a.id, &deleter, Utc.with_ymd_and_hms(2025, 1, 1, 0, 0, 0).unwrap()).unwrap();
        }
    }
}

// ---- structural checks shared with the acceptance suite -------------------

use rosetta_core::crosswalk::{CompiledCrosswalk, TemplateTerm};
use rosetta_core::nanopub::Nanopublication;
use rosetta_core::rdf::{Quad, QuadGraph, Term};
use rosetta_core::vocab::{np, rdf, rdfs, rosetta};

/// Quads that carry a required position of the latest version: the link
/// from the version, the position instance and its value holders.
pub fn required_position_quads(anchor: &AnchorStatement, full: &QuadGraph, required: &[String]) -> Vec<Quad> {
    let v = anchor.latest().unwrap();
    let mut out = Vec::new();
    for pos in v.positions().filter(|p| required.contains(&p.thematic_label)) {
        let node = Term::Iri(pos.id.clone());
        let holders: Vec<Term> = full.objects(&node, &rosetta::has_value()).cloned().collect();
        for q in full.iter() {
            let owned = q.object == node || q.subject == node || holders.contains(&q.subject);
            let optional = q.predicate == rosetta::transitive() || q.predicate == rdfs::label();
            if owned && !optional {
                out.push(q.clone());
            }
        }
    }
    out
}

/// Four named graphs, the head linking the other three, and no predicate
/// shared between the assertion and the metadata graphs.
pub fn check_nanopub_structure(n: &Nanopublication) {
    let ds = n.dataset();
    let names: BTreeSet<_> = ds.graph_names();
    let expected: BTreeSet<_> =
        [n.head_iri(), n.assertion_iri(), n.provenance_iri(), n.pubinfo_iri()].into_iter().map(Some).collect();
    assert_eq!(names, expected);
    let id = Term::Iri(n.id.clone());
    let one = |g: &QuadGraph, p| g.objects(&id, &p).cloned().collect::<Vec<_>>();
    assert_eq!(one(&n.head, np::has_assertion()), [Term::Iri(n.assertion_iri())]);
    assert_eq!(one(&n.head, np::has_provenance()), [Term::Iri(n.provenance_iri())]);
    assert_eq!(one(&n.head, np::has_publication_info()), [Term::Iri(n.pubinfo_iri())]);
    assert_eq!(one(&n.head, rdf::type_()), [Term::Iri(np::nanopublication())]);
    assert!(!n.assertion.is_empty() && !n.provenance.is_empty() && !n.pubinfo.is_empty());

    let assertion = n.assertion.predicates();
    let mut metadata = n.provenance.predicates();
    metadata.extend(n.pubinfo.predicates());
    assert!(assertion.is_disjoint(&metadata), "{:?}", assertion.intersection(&metadata).collect::<Vec<_>>());
}

pub fn literal_keys_in_output(g: &QuadGraph) -> Vec<String> {
    let mut out: Vec<String> = g
        .iter()
        .filter_map(|q| q.object.as_literal())
        .map(|l| format!("{:?}^^<{}>", l.lexical, l.datatype))
        .collect();
    out.sort();
    out
}

/// Literal values of the slots the crosswalk's triples mention.
pub fn literal_keys_in_source(v: &StatementVersion, cw: &CompiledCrosswalk) -> Vec<String> {
    let mut slots: Vec<&str> = cw
        .triples
        .iter()
        .flatten()
        .filter_map(|t| match t {
            TemplateTerm::Slot(l) => Some(l.as_str()),
            _ => None,
        })
        .collect();
    slots.sort();
    slots.dedup();
    let mut out: Vec<String> =
        slots.iter().flat_map(|l| v.values(l)).filter(|x| x.is_literal()).map(Value::key).collect();
    out.sort();
    out
}

/// Statement-owned graphs are disjoint, named, and together make up the
/// export minus the ontology graph.
pub fn check_partition(g: &QuadGraph, store: &Store) {
    let onto = rosetta_core::rdf::ontology_graph_iri(store.base());
    let mut owner: BTreeMap<Option<Iri>, Iri> = BTreeMap::new();
    let mut union = QuadGraph::new();
    for a in store.anchors() {
        let own = rosetta_core::rdf::to_full_graph(&a, &store.pattern_of(&a).unwrap()).unwrap();
        for name in own.graph_names() {
            assert!(name.is_some(), "statement quad in the default graph");
            assert!(owner.insert(name.clone(), a.id.clone()).is_none(), "graph {name:?} owned twice");
        }
        let before = union.len();
        let n = own.len();
        union.extend(own);
        assert_eq!(union.len(), before + n, "statement graphs overlap");
    }
    let statement_part: QuadGraph = g.iter().filter(|q| q.graph.as_ref() != Some(&onto)).cloned().collect();
    assert_eq!(statement_part, union);
}
