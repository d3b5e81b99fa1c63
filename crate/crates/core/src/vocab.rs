//! IRI constants for the vocabularies the engine emits.

use crate::iri::Iri;

pub const ROSETTA: &str = "https://w3id.org/rosetta/";
pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const SH: &str = "http://www.w3.org/ns/shacl#";
pub const NP: &str = "http://www.nanopub.org/nschema#";
pub const PROV: &str = "http://www.w3.org/ns/prov#";
pub const DCT: &str = "http://purl.org/dc/terms/";
pub const PAV: &str = "http://purl.org/pav/";
pub const SKOS: &str = "http://www.w3.org/2004/02/skos/core#";

pub(crate) fn ns(namespace: &str, local: &str) -> Iri {
    Iri::new_unchecked(format!("{namespace}{local}"))
}

pub mod rdf {
    use super::*;

    pub fn type_() -> Iri {
        ns(RDF, "type")
    }
    pub fn lang_string() -> Iri {
        ns(RDF, "langString")
    }
}

pub mod rdfs {
    use super::*;

    pub fn label() -> Iri {
        ns(RDFS, "label")
    }
    pub fn sub_class_of() -> Iri {
        ns(RDFS, "subClassOf")
    }
}

pub mod xsd {
    use super::*;

    pub fn string() -> Iri {
        ns(XSD, "string")
    }
    pub fn integer() -> Iri {
        ns(XSD, "integer")
    }
    pub fn decimal() -> Iri {
        ns(XSD, "decimal")
    }
    pub fn any_uri() -> Iri {
        ns(XSD, "anyURI")
    }
    pub fn boolean() -> Iri {
        ns(XSD, "boolean")
    }
    pub fn date() -> Iri {
        ns(XSD, "date")
    }
    pub fn date_time() -> Iri {
        ns(XSD, "dateTime")
    }
}

/// The engine's own metamodel vocabulary.
pub mod rosetta {
    use super::*;

    fn r(local: &str) -> Iri {
        ns(ROSETTA, local)
    }

    pub fn subject() -> Iri {
        r("subject")
    }
    /// `rosetta:required object position {i}` and its three siblings.
    pub fn light_object_position(required: bool, literal: bool, index: usize) -> Iri {
        let req = if required { "required" } else { "optional" };
        let lit = if literal { "LiteralObjectPosition" } else { "ObjectPosition" };
        r(&format!("{req}{lit}{index}"))
    }
    pub fn has_version() -> Iri {
        r("hasVersion")
    }
    pub fn has_data_schema_pattern() -> Iri {
        r("hasDataSchemaPattern")
    }
    pub fn has_context() -> Iri {
        r("hasContext")
    }
    pub fn deleted_at() -> Iri {
        r("deletedAt")
    }
    pub fn deleted_by() -> Iri {
        r("deletedBy")
    }
    pub fn version_number() -> Iri {
        r("versionNumber")
    }
    pub fn order() -> Iri {
        r("order")
    }
    pub fn transitive() -> Iri {
        r("transitive")
    }
    pub fn negation() -> Iri {
        r("Negation")
    }
    pub fn subject_position() -> Iri {
        r("SubjectPosition")
    }
    pub fn object_position() -> Iri {
        r("ObjectPosition")
    }
    pub fn has_subject_position() -> Iri {
        r("hasSubjectPosition")
    }
    pub fn has_required_object_position() -> Iri {
        r("hasRequiredObjectPosition")
    }
    pub fn has_optional_object_position() -> Iri {
        r("hasOptionalObjectPosition")
    }
    pub fn has_value() -> Iri {
        r("hasValue")
    }
    pub fn value() -> Iri {
        r("value")
    }
    pub fn thematic_label() -> Iri {
        r("thematicLabel")
    }
    pub fn modifiable() -> Iri {
        r("modifiable")
    }
    pub fn confidence_level() -> Iri {
        r("confidenceLevel")
    }
    pub fn extraction_method() -> Iri {
        r("extractionMethod")
    }
    pub fn created_by() -> Iri {
        r("createdBy")
    }
    pub fn created_at() -> Iri {
        r("createdAt")
    }
}

pub mod dct {
    use super::*;

    pub fn creator() -> Iri {
        ns(DCT, "creator")
    }
    pub fn created() -> Iri {
        ns(DCT, "created")
    }
    pub fn license() -> Iri {
        ns(DCT, "license")
    }
}

pub mod pav {
    use super::*;

    pub fn authored_by() -> Iri {
        ns(PAV, "authoredBy")
    }
    pub fn curated_by() -> Iri {
        ns(PAV, "curatedBy")
    }
    pub fn imported_from() -> Iri {
        ns(PAV, "importedFrom")
    }
}

pub mod prov {
    use super::*;

    pub fn was_attributed_to() -> Iri {
        ns(PROV, "wasAttributedTo")
    }
    pub fn generated_at_time() -> Iri {
        ns(PROV, "generatedAtTime")
    }
    pub fn was_derived_from() -> Iri {
        ns(PROV, "wasDerivedFrom")
    }
    pub fn had_primary_source() -> Iri {
        ns(PROV, "hadPrimarySource")
    }
}

pub mod np {
    use super::*;

    pub fn nanopublication() -> Iri {
        ns(NP, "Nanopublication")
    }
    pub fn has_assertion() -> Iri {
        ns(NP, "hasAssertion")
    }
    pub fn has_provenance() -> Iri {
        ns(NP, "hasProvenance")
    }
    pub fn has_publication_info() -> Iri {
        ns(NP, "hasPublicationInfo")
    }
}

/// Default prefix map used by the Turtle and TriG writers.
pub fn default_prefixes() -> Vec<(String, String)> {
    [
        ("rosetta", ROSETTA),
        ("rdf", RDF),
        ("rdfs", RDFS),
        ("xsd", XSD),
        ("sh", SH),
        ("np", NP),
        ("prov", PROV),
        ("dct", DCT),
        ("pav", PAV),
    ]
    .iter()
    .map(|(p, n)| (p.to_string(), n.to_string()))
    .collect()
}
