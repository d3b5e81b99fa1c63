//! Statement-level knowledge graph engine.
//!
//! Natural-language-like statements are typed by statement patterns, stored
//! as versioned anchors, and rendered back to text, mind maps, RDF (light
//! and full forms), nanopublications and crosswalked target schemas.

pub mod crosswalk;
pub mod engine;
pub mod error;
pub mod fixtures;
pub mod hierarchy;
pub mod iri;
pub mod metamodel;
pub mod nanopub;
pub mod rdf;
pub mod renderer;
pub mod search;
pub mod shapes;
pub mod store;
pub mod value;
pub mod vocab;

pub use engine::Engine;
pub use error::{Error, ErrorCode, Result};
pub use iri::Iri;
pub use value::Value;
