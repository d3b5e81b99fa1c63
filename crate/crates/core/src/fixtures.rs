//! Bundled example patterns, crosswalks, entity maps and statements.

use chrono::{DateTime, TimeZone, Utc};

use crate::crosswalk::{load_crosswalk_spec, CompiledCrosswalk, EntityMap, TableSpec};
use crate::error::Result;
use crate::iri::Iri;
use crate::metamodel::{LiteralDatatype, PatternFile, StatementPattern};
use crate::store::{NewStatement, ProvenanceMetadata, Store};
use crate::value::Value;

pub const MEASUREMENT: &str = include_str!("../fixtures/patterns/measurement.yaml");
pub const MEASUREMENT_WITH_CONFIDENCE: &str = include_str!("../fixtures/patterns/measurement_with_confidence.yaml");
pub const WEIGHT: &str = include_str!("../fixtures/patterns/weight.yaml");
pub const TRAVELS: &str = include_str!("../fixtures/patterns/travels.yaml");
pub const MEET: &str = include_str!("../fixtures/patterns/meet.yaml");
pub const EXISTS: &str = include_str!("../fixtures/patterns/exists.yaml");

pub const PATTERNS: &[&str] = &[MEASUREMENT, MEASUREMENT_WITH_CONFIDENCE, WEIGHT, TRAVELS, MEET, EXISTS];

pub const OBI_CROSSWALK: &str = include_str!("../fixtures/crosswalks/obi_measurement.yaml");
pub const OBOE_CROSSWALK: &str = include_str!("../fixtures/crosswalks/oboe_measurement.yaml");
pub const QUDT_CROSSWALK: &str = include_str!("../fixtures/crosswalks/qudt_measurement.yaml");
pub const RELATIONAL_TABLE: &str = include_str!("../fixtures/crosswalks/relational_measurement.yaml");
pub const OBI_UNITS: &str = include_str!("../fixtures/entity_maps/obi_units.tsv");
pub const OBOE_UNITS: &str = include_str!("../fixtures/entity_maps/oboe_units.tsv");
pub const QUDT_UNITS: &str = include_str!("../fixtures/entity_maps/qudt_units.tsv");

/// Registers every bundled pattern, in the order of [`PATTERNS`].
pub fn define_patterns(store: &Store) -> Result<Vec<StatementPattern>> {
    PATTERNS.iter().map(|text| store.define_statement_type(PatternFile::parse(text)?)).collect()
}

pub fn obi_crosswalk(store: &Store) -> Result<CompiledCrosswalk> {
    load_crosswalk_spec(OBI_CROSSWALK, store.registry())
}

pub fn oboe_crosswalk(store: &Store) -> Result<CompiledCrosswalk> {
    load_crosswalk_spec(OBOE_CROSSWALK, store.registry())
}

pub fn obi_units() -> EntityMap {
    EntityMap::from_tsv(OBI_UNITS).expect("bundled entity map")
}

pub fn oboe_units() -> EntityMap {
    EntityMap::from_tsv(OBOE_UNITS).expect("bundled entity map")
}

pub fn relational_table() -> TableSpec {
    TableSpec::parse(RELATIONAL_TABLE).expect("bundled table spec")
}

fn iri(s: &str) -> Iri {
    Iri::new(s).expect("fixture IRI")
}

pub fn wikidata(q: &str, label: &str) -> Value {
    Value::labelled(iri(&format!("http://www.wikidata.org/entity/{q}")), label)
}

pub fn person(name: &str) -> Value {
    Value::labelled(iri(&format!("https://example.org/person/{}", name.to_lowercase())), name)
}

pub fn decimal(lexical: &str) -> Value {
    Value::literal(lexical, LiteralDatatype::Decimal)
}

pub fn date(lexical: &str) -> Value {
    Value::literal(lexical, LiteralDatatype::Date)
}

pub fn curator() -> Iri {
    iri("https://example.org/user/curator")
}

pub fn fixed_time() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2024, 1, 15, 9, 30, 0).single().expect("valid date")
}

pub fn metadata() -> ProvenanceMetadata {
    let mut m = ProvenanceMetadata::new(curator(), fixed_time());
    m.extraction_method = Some("manual".into());
    m
}

pub fn gram() -> Value {
    wikidata("Q41803", "gram")
}

pub fn weight() -> Value {
    wikidata("Q25288", "Weight")
}

/// "orange has a Weight of 153.6 gram"
pub fn orange_measurement() -> NewStatement {
    NewStatement::new("measurement", vec![wikidata("Q13191", "orange")], metadata())
        .with("QUALITY", vec![weight()])
        .with("MAIN_VALUE", vec![decimal("153.6")])
        .with("UNIT", vec![gram()])
}

/// "Apple has a Weight of 212.45 gram (95 % Conf. Int.: 212.44 - 212.47 gram)"
pub fn apple_measurement() -> NewStatement {
    NewStatement::new("measurement", vec![wikidata("Q89", "Apple")], metadata())
        .with("QUALITY", vec![weight()])
        .with("MAIN_VALUE", vec![decimal("212.45")])
        .with("UNIT", vec![gram()])
        .with("INTERVAL_VALUE", vec![decimal("95")])
        .with("LOWER_VALUE", vec![decimal("212.44")])
        .with("UPPER_VALUE", vec![decimal("212.47")])
        .with("CONF-UNIT", vec![gram()])
}

/// The third weighed apple, as a plain measurement (value 241.68 gram).
pub fn apple_241_measurement() -> NewStatement {
    NewStatement::new("measurement", vec![wikidata("Q89", "apple")], metadata())
        .with("QUALITY", vec![weight()])
        .with("MAIN_VALUE", vec![decimal("241.68")])
        .with("UNIT", vec![gram()])
}

/// "This apple has a weight of 241.68 grams (95% conf. interval: 241.31-242.05 grams)"
pub fn apple_with_confidence() -> NewStatement {
    let grams = wikidata("Q41803", "grams");
    NewStatement::new("measurement with confidence", vec![wikidata("Q89", "apple")], metadata())
        .with("QUALITY", vec![wikidata("Q25288", "weight")])
        .with("MAIN_VALUE", vec![decimal("241.68")])
        .with("UNIT", vec![grams.clone()])
        .with("INTERVAL_VALUE", vec![decimal("95")])
        .with("LOWER_VALUE", vec![decimal("241.31")])
        .with("UPPER_VALUE", vec![decimal("242.05")])
        .with("CONF-UNIT", vec![grams])
}

/// Value and unit only: "apple has a weight of 241.68 gram"
pub fn apple_weight() -> NewStatement {
    NewStatement::new("has weight", vec![wikidata("Q89", "apple")], metadata())
        .with("VALUE", vec![decimal("241.68")])
        .with("UNIT", vec![gram()])
}

/// "Sarah and Anna met Bob and Christopher on 4th of July 2021 in New York City"
pub fn meeting() -> NewStatement {
    NewStatement::new("met", vec![person("Sarah"), person("Anna")], metadata())
        .with("MET_PERSON", vec![person("Bob"), person("Christopher")])
        .with("DATE", vec![date("2021-07-04")])
        .with("LOCATION", vec![wikidata("Q60", "New York City")])
}

/// "Anna travels by train from Berlin to Paris on the 21st of April 2023"
pub fn journey() -> NewStatement {
    NewStatement::new("travels", vec![person("Anna")], metadata())
        .with("TRANSPORTATION", vec![wikidata("Q870", "train")])
        .with("DEPARTURE_LOCATION", vec![wikidata("Q64", "Berlin")])
        .with("DESTINATION_LOCATION", vec![wikidata("Q90", "Paris")])
        .with("DATETIME", vec![date("2023-04-21")])
}
