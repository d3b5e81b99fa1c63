//! Declarative schema crosswalks from statements to other data schemas.

mod apply;
mod entity_map;
mod spec;
mod table;

pub use apply::apply_crosswalk;
pub use entity_map::{EntityMap, Mapping, MatchRelation};
pub use spec::{load_crosswalk_spec, CompiledCrosswalk, CrosswalkSpec, NodeTemplate, TemplateTerm, TripleTemplate};
pub use table::{emit_csv, TableColumn, TableSpec};
