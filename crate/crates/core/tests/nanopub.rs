mod common;


use chrono::Utc;
use proptest::prelude::*;

use common::{fixture_store, iri};
use rosetta_core::fixtures::{self, decimal};
use rosetta_core::nanopub::{parse_nanopub, serialize_nanopub, to_nanopub, to_nanopub_with, NanopubOptions};
use rosetta_core::rdf::Term;
use rosetta_core::vocab::prov;
use rosetta_core::ErrorCode;

#[test]
fn four_graphs_with_disjoint_vocabularies() {
    let store = fixture_store();
    for s in [fixtures::apple_with_confidence(), fixtures::meeting(), fixtures::journey(), fixtures::apple_weight()] {
        let a = store.create_statement(s).unwrap();
        let n = to_nanopub(&a, 1, &store.pattern_of(&a).unwrap()).unwrap();
        common::check_nanopub_structure(&n);
        assert_eq!(n.id.as_str(), format!("{}/np", a.latest().unwrap().id));
    }
}

#[test]
fn provenance_describes_the_assertion() {
    let store = fixture_store();
    let mut s = fixtures::orange_measurement();
    s.context_refs = vec![iri("https://example.org/publication/1")];
    let a = store.create_statement(s).unwrap();
    let n = to_nanopub(&a, 1, &store.pattern_of(&a).unwrap()).unwrap();
    let assertion = Term::Iri(n.assertion_iri());
    let attributed: Vec<_> = n.provenance.objects(&assertion, &prov::was_attributed_to()).collect();
    assert_eq!(attributed, [&Term::Iri(fixtures::curator())]);
    let sources: Vec<_> = n.provenance.objects(&assertion, &prov::had_primary_source()).collect();
    assert_eq!(sources, [&Term::Iri(iri("https://example.org/publication/1"))]);
    assert!(n.provenance.iter().any(|q| q.object.as_literal().is_some_and(|l| l.lexical == "manual")));
    assert!(n.assertion.iter().all(|q| q.graph.as_ref() == Some(&n.assertion_iri())));
}

#[test]
fn versions_get_distinct_identifiers() {
    let store = fixture_store();
    let a = store.create_statement(fixtures::orange_measurement()).unwrap();
    let change = [("MAIN_VALUE".to_string(), vec![decimal("154")])].into();
    store.update_statement(&a.id, &change, &iri("https://example.org/user/e")).unwrap();
    let a = store.anchor(&a.id).unwrap();
    let p = store.pattern_of(&a).unwrap();
    let n1 = to_nanopub(&a, 1, &p).unwrap();
    let n2 = to_nanopub(&a, 2, &p).unwrap();
    assert_ne!(n1.id, n2.id);
    assert_ne!(n1.assertion, n2.assertion.clone());
    assert_eq!(to_nanopub(&a, 3, &p).unwrap_err().code(), ErrorCode::NotFound);
}

#[test]
fn deleted_statements_are_gone() {
    let store = fixture_store();
    let a = store.create_statement(fixtures::orange_measurement()).unwrap();
    let deleted = store.soft_delete(&a.id, &iri("https://example.org/user/e"), Utc::now()).unwrap();
    let err = to_nanopub(&deleted, 1, &store.pattern_of(&deleted).unwrap()).unwrap_err();
    assert_eq!(err.code(), ErrorCode::Gone);
}

#[test]
fn content_hash_identifiers_verify() {
    let store = fixture_store();
    let a = store.create_statement(fixtures::apple_measurement()).unwrap();
    let p = store.pattern_of(&a).unwrap();
    let n = to_nanopub_with(&a, 1, &p, NanopubOptions { content_hash: true }).unwrap();
    let suffix = n.id.as_str().rsplit('/').next().unwrap();
    assert_eq!(suffix.len(), 32);
    assert!(suffix.chars().all(|c| c.is_ascii_hexdigit()));
    assert!(n.verify_content_hash());
    common::check_nanopub_structure(&n);
    assert_eq!(n, to_nanopub_with(&a, 1, &p, NanopubOptions { content_hash: true }).unwrap());

    let mut tampered = n.clone();
    let q = tampered.assertion.iter().find(|q| q.object.is_literal()).unwrap().clone();
    tampered.assertion.remove(&q);
    assert!(!tampered.verify_content_hash());
    assert!(!to_nanopub(&a, 1, &p).unwrap().verify_content_hash());
}

#[test]
fn rejects_malformed_documents() {
    assert_eq!(parse_nanopub("").unwrap_err().code(), ErrorCode::FormatError);
    let store = fixture_store();
    let a = store.create_statement(fixtures::orange_measurement()).unwrap();
    let n = to_nanopub(&a, 1, &store.pattern_of(&a).unwrap()).unwrap();
    let extra = format!("{}\n<https://x.org/g> {{ <https://x.org/a> <https://x.org/b> <https://x.org/c> . }}\n", serialize_nanopub(&n));
    assert_eq!(parse_nanopub(&extra).unwrap_err().code(), ErrorCode::FormatError);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trig_round_trip((_, s) in common::arb_fixture_statement(), hashed in any::<bool>()) {
        let store = fixture_store();
        let a = store.create_statement(s).unwrap();
        let n = to_nanopub_with(&a, 1, &store.pattern_of(&a).unwrap(), NanopubOptions { content_hash: hashed }).unwrap();
        common::check_nanopub_structure(&n);
        let text = serialize_nanopub(&n);
        let back = parse_nanopub(&text).unwrap();
        prop_assert_eq!(&back, &n);
        prop_assert_eq!(serialize_nanopub(&back), text);
        prop_assert_eq!(back.verify_content_hash(), hashed);
    }
}
