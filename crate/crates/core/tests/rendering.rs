mod common;

use rosetta_core::fixtures::{self, *};
use rosetta_core::iri::SequentialIds;
use rosetta_core::renderer::{export_mindmap_dot, merge_mindmaps, render, render_mindmap, render_statement, NodeKind};
use rosetta_core::store::{Store, StoreOptions};
use rosetta_core::Iri;
use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;

fn store() -> Store {
    let s = Store::open(
        StoreOptions::new(Iri::new("https://example.org/kg").unwrap()).ids(Arc::new(SequentialIds::default())),
    )
    .unwrap();
    fixtures::define_patterns(&s).unwrap();
    s
}

fn text_of(store: &Store, new: rosetta_core::store::NewStatement) -> String {
    let a = store.create_statement(new).unwrap();
    let p = store.pattern_of(&a).unwrap();
    render(a.latest().unwrap(), &p).unwrap().text
}

#[test]
fn reproduces_the_example_sentences() {
    let s = store();
    assert_eq!(text_of(&s, orange_measurement()), "orange has a Weight of 153.6 gram");
    assert_eq!(
        text_of(&s, apple_measurement()),
        "Apple has a Weight of 212.45 gram (95 % Conf. Int.: 212.44 - 212.47 gram)"
    );
    assert_eq!(
        text_of(&s, apple_with_confidence()),
        "This apple has a weight of 241.68 grams (95% conf. interval: 241.31-242.05 grams)"
    );
    assert_eq!(
        text_of(&s, meeting()),
        "Sarah and Anna met Bob and Christopher on 4th of July 2021 in New York City"
    );
    assert_eq!(text_of(&s, journey()), "Anna travels by train from Berlin to Paris on the 21st of April 2023");
}

#[test]
fn spans_cover_the_values() {
    let s = store();
    let a = s.create_statement(meeting()).unwrap();
    let r = render(a.latest().unwrap(), &s.pattern_of(&a).unwrap()).unwrap();
    let chars: Vec<char> = r.text.chars().collect();
    let piece = |label: &str| {
        let span = r.slot_spans.iter().find(|sp| sp.thematic_label == label).unwrap();
        chars[span.start..span.end].iter().collect::<String>()
    };
    assert_eq!(piece("PERSON"), "Sarah and Anna");
    assert_eq!(piece("MET_PERSON"), "Bob and Christopher");
    assert_eq!(piece("DATE"), "4th of July 2021");
    assert_eq!(piece("LOCATION"), "New York City");
    assert_eq!(r.slot_spans.len(), 4);
}

#[test]
fn negation_forms() {
    let s = store();
    let a = s.create_statement(journey()).unwrap();
    let p = s.pattern_of(&a).unwrap();
    let r = render_statement(a.latest().unwrap(), &p, true).unwrap();
    assert_eq!(r.text, "Anna does not travel by train from Berlin to Paris on the 21st of April 2023");

    let w = s.create_statement(apple_weight()).unwrap();
    let p = s.pattern_of(&w).unwrap();
    let r = render_statement(w.latest().unwrap(), &p, true).unwrap();
    assert_eq!(r.text, "It is not the case that apple has a weight of 241.68 gram");
    let span = &r.slot_spans[0];
    assert_eq!(r.text.chars().skip(span.start).take(span.end - span.start).collect::<String>(), "apple");
}

#[test]
fn mind_maps() {
    let s = store();
    let travel = s.create_statement(journey()).unwrap();
    let tp = s.pattern_of(&travel).unwrap();
    let map = render_mindmap(travel.latest().unwrap(), &tp).unwrap();
    assert_eq!(map.nodes.len(), 6);
    assert_eq!(map.edges.len(), 5);
    assert_eq!(map.nodes.iter().filter(|n| n.kind == NodeKind::Predicate).count(), 1);

    let exists = s
        .create_statement(rosetta_core::store::NewStatement::new("exists", vec![person("Anna")], metadata()))
        .unwrap();
    let ep = s.pattern_of(&exists).unwrap();
    let single = render_mindmap(exists.latest().unwrap(), &ep).unwrap();
    assert_eq!((single.nodes.len(), single.edges.len()), (2, 1));

    let merged = merge_mindmaps(&[map.clone(), single.clone()]);
    assert_eq!(merged.nodes.len(), map.nodes.len() + single.nodes.len() - 1);
    assert_eq!(merged.edges.len(), map.edges.len() + single.edges.len());
    assert_eq!(merged.nodes.iter().filter(|n| n.label == "Anna").count(), 1);

    let dot = export_mindmap_dot(&merged);
    assert_eq!(dot, export_mindmap_dot(&merge_mindmaps(&[map, single])));
    assert!(dot.starts_with("digraph mindmap {\n"));
}

#[test]
fn nonconforming_version_is_a_render_error() {
    let s = store();
    let a = s.create_statement(journey()).unwrap();
    let wrong = s.registry().resolve("measurement").unwrap();
    let err = render(a.latest().unwrap(), &wrong).unwrap_err();
    assert_eq!(err.code(), rosetta_core::ErrorCode::RenderError);
}

/// Node ids and edges read back from DOT text.
fn parse_dot(dot: &str) -> (BTreeSet<String>, Vec<(String, String)>) {
    let quoted = r#""((?:[^"\\]|\\.)*)""#;
    let node = regex::Regex::new(&format!(r"^  {quoted} \[label={quoted}, shape=(box|ellipse|diamond)\];$")).unwrap();
    let edge = regex::Regex::new(&format!(r"^  {quoted} -> {quoted} \[label={quoted}\];$")).unwrap();
    let unescape = |s: &str| s.replace("\\n", "\n").replace("\\\"", "\"").replace("\\\\", "\\");
    let mut nodes = BTreeSet::new();
    let mut edges = Vec::new();
    let lines: Vec<&str> = dot.lines().collect();
    assert_eq!(lines.first(), Some(&"digraph mindmap {"));
    assert_eq!(lines.last(), Some(&"}"));
    for line in &lines[1..lines.len() - 1] {
        if let Some(c) = node.captures(line) {
            nodes.insert(unescape(&c[1]));
        } else if let Some(c) = edge.captures(line) {
            edges.push((unescape(&c[1]), unescape(&c[2])));
        } else {
            panic!("unexpected DOT line {line:?}");
        }
    }
    (nodes, edges)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rendering_invariants((_, st) in common::arb_fixture_statement()) {
        let s = store();
        let a = s.create_statement(st).unwrap();
        let p = s.pattern_of(&a).unwrap();
        let v = a.latest().unwrap();
        let r = render(v, &p).unwrap();
        prop_assert!(r.text.contains(p.verb_display.trim()));
        prop_assert_eq!(r.slot_spans.len(), v.positions().count());
        for span in &r.slot_spans {
            let shown: String = r.text.chars().skip(span.start).take(span.end - span.start).collect();
            let texts: Vec<String> = v.values(&span.thematic_label).iter().map(|x| x.display_text()).collect();
            prop_assert_eq!(shown, rosetta_core::metamodel::join_values(&texts));
        }

        let map = render_mindmap(v, &p).unwrap();
        let values: Vec<&rosetta_core::Value> = v.positions().flat_map(|x| &x.values).collect();
        let resources: BTreeSet<String> = values.iter().filter_map(|x| x.iri()).map(|i| i.to_string()).collect();
        let literals = values.iter().filter(|x| x.is_literal()).count();
        prop_assert_eq!(map.edges.len(), values.len());
        prop_assert_eq!(map.nodes.len(), 1 + resources.len() + literals);

        let (nodes, edges) = parse_dot(&export_mindmap_dot(&map));
        let ids: BTreeSet<String> = map.nodes.iter().map(|n| n.id.clone()).collect();
        prop_assert_eq!(nodes, ids);
        prop_assert_eq!(edges.len(), map.edges.len());
    }
}
