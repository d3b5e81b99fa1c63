mod common;

use std::collections::{BTreeMap, BTreeSet};

use chrono::{TimeZone, Utc};
use proptest::prelude::*;

use common::{fixture_store, iri};
use rosetta_core::fixtures;
use rosetta_core::rdf::{
    export_store, import_full_graph, meta_graph_iri, parse, serialize, to_archival_graph,
    to_full_graph, to_light_graph, Quad, QuadGraph, RdfFormat, Term,
};
use rosetta_core::vocab::rosetta;
use rosetta_core::ErrorCode;

#[test]
fn light_graph_of_value_and_unit_has_three_linking_triples() {
    let store = fixture_store();
    let a = store.create_statement(fixtures::apple_weight()).unwrap();
    let g = to_light_graph(a.latest().unwrap(), &store.pattern_of(&a).unwrap()).unwrap();
    assert_eq!(g.linking_triple_count(), 3);
    assert_eq!(g.len(), 4);
    assert_eq!(g.graph_names(), BTreeSet::from([Some(a.latest().unwrap().id.clone())]));
    let predicates: BTreeSet<String> = g.predicates().iter().map(|p| p.local_name().to_string()).collect();
    assert_eq!(
        predicates,
        BTreeSet::from(["type".into(), "subject".into(), "requiredLiteralObjectPosition1".into(), "requiredObjectPosition2".into()])
    );
}

#[test]
fn light_graph_has_one_triple_per_value() {
    let store = fixture_store();
    let a = store.create_statement(fixtures::meeting()).unwrap();
    let v = a.latest().unwrap();
    let g = to_light_graph(v, &store.pattern_of(&a).unwrap()).unwrap();
    let values: usize = v.positions().map(|p| p.values.len()).sum();
    assert_eq!(g.linking_triple_count(), values);
}

#[test]
fn full_graph_layout() {
    let store = fixture_store();
    let a = store.create_statement(fixtures::apple_measurement()).unwrap();
    let pattern = store.pattern_of(&a).unwrap();
    let g = to_full_graph(&a, &pattern).unwrap();
    let v = a.latest().unwrap();
    assert_eq!(g.graph_names(), BTreeSet::from([Some(meta_graph_iri(&a.id)), Some(v.id.clone())]));
    let vt = Term::Iri(v.id.clone());
    let (req, opt) = (rosetta::has_required_object_position(), rosetta::has_optional_object_position());
    let objects: Vec<&Term> = g.objects(&vt, &req).collect();
    assert_eq!(objects.len(), 3);
    let optional: Vec<&Term> = g.objects(&vt, &opt).collect();
    assert_eq!(optional.len(), 4);
    let meta = g.graph(Some(&meta_graph_iri(&a.id)));
    assert!(meta.iter().all(|q| !q.predicate.as_str().ends_with("hasValue")));
    let content = g.graph(Some(&v.id));
    assert!(content.iter().all(|q| q.predicate != rosetta::extraction_method()));
}

#[test]
fn deleted_anchor_exports_metadata_only() {
    let store = fixture_store();
    let a = store.create_statement(fixtures::orange_measurement()).unwrap();
    let at = Utc.with_ymd_and_hms(2024, 6, 1, 0, 0, 0).unwrap();
    let deleted = store.soft_delete(&a.id, &iri("https://example.org/user/x"), at).unwrap();
    let pattern = store.pattern_of(&deleted).unwrap();
    let g = to_full_graph(&deleted, &pattern).unwrap();
    assert_eq!(g.graph_names(), BTreeSet::from([Some(meta_graph_iri(&a.id))]));
    assert!(g.iter().all(|q| !q.object.is_literal() || q.object.as_literal().unwrap().lexical != "153.6"));
    let back = import_full_graph(&g).unwrap();
    assert!(back.versions.is_empty());
    assert_eq!(back.deleted_at, Some(at));

    let archival = to_archival_graph(&deleted, &pattern).unwrap();
    assert_eq!(import_full_graph(&archival).unwrap(), deleted);
}

#[test]
fn import_reports_every_offending_node() {
    let store = fixture_store();
    let a = store.create_statement(fixtures::orange_measurement()).unwrap();
    let mut g = to_full_graph(&a, &store.pattern_of(&a).unwrap()).unwrap();
    let broken: Vec<Quad> = g
        .iter()
        .filter(|q| q.predicate == rosetta::order() || q.predicate.as_str().ends_with("/created"))
        .cloned()
        .collect();
    assert!(broken.len() >= 3);
    for q in &broken {
        g.remove(q);
    }
    match import_full_graph(&g).unwrap_err() {
        rosetta_core::Error::Import { offending } => assert!(offending.len() >= 3, "{offending:?}"),
        other => panic!("{other:?}"),
    }
    assert_eq!(import_full_graph(&QuadGraph::new()).unwrap_err().code(), ErrorCode::ImportError);
}

#[test]
fn serialization_is_deterministic_and_parses_back() {
    let store = fixture_store();
    for s in [fixtures::apple_measurement(), fixtures::meeting(), fixtures::journey()] {
        store.create_statement(s).unwrap();
    }
    let g = export_store(&store, false).unwrap();
    for format in [RdfFormat::NQuads, RdfFormat::TriG] {
        let text = serialize(&g, format).unwrap();
        assert_eq!(text, serialize(&g.clone(), format).unwrap());
        assert_eq!(parse(&text, format).unwrap(), g);
    }
    let flat = g.clone().into_graph(None);
    let ttl = serialize(&flat, RdfFormat::Turtle).unwrap();
    assert_eq!(parse(&ttl, RdfFormat::Turtle).unwrap(), flat);
    assert_eq!(serialize(&g, RdfFormat::Turtle).unwrap_err().code(), ErrorCode::FormatError);
}

#[test]
fn syntax_errors_carry_a_position() {
    let err = parse("<http://a> <http://b> .\n", RdfFormat::NQuads).unwrap_err();
    assert_eq!(err.code(), ErrorCode::FormatError);
    assert!(err.to_string().contains("line 1"), "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn full_graph_import_is_identity((_, s) in common::arb_fixture_statement(), edits in 0usize..3) {
        let store = fixture_store();
        let a = store.create_statement(s).unwrap();
        for i in 0..edits {
            let latest = store.anchor(&a.id).unwrap().latest().unwrap().value_map();
            let (label, values) = latest.into_iter().next().unwrap();
            let mut reversed = values.clone();
            reversed.reverse();
            let change = BTreeMap::from([(label, if i % 2 == 0 { reversed } else { values })]);
            store.update_statement(&a.id, &change, &iri("https://example.org/user/e")).unwrap();
        }
        let a = store.anchor(&a.id).unwrap();
        let g = to_full_graph(&a, &store.pattern_of(&a).unwrap()).unwrap();
        prop_assert_eq!(import_full_graph(&g).unwrap(), a);
        for format in [RdfFormat::NQuads, RdfFormat::TriG] {
            let text = serialize(&g, format).unwrap();
            prop_assert_eq!(&parse(&text, format).unwrap(), &g);
        }
    }

    #[test]
    fn export_partitions_by_statement(statements in prop::collection::vec(common::arb_fixture_statement(), 1..12)) {
        let store = fixture_store();
        for (i, (_, s)) in statements.into_iter().enumerate() {
            let a = store.create_statement(s).unwrap();
            if i % 4 == 3 {
                store.soft_delete(&a.id, &iri("https://example.org/user/d"), Utc::now()).unwrap();
            }
        }
        common::check_partition(&export_store(&store, false).unwrap(), &store);
    }
}
