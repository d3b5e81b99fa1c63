//! Constraint shapes generated from statement patterns, and a native
//! validator for the subset of SHACL they use.

mod generate;
mod model;
mod turtle;
mod validate;

pub use generate::{generate_full_shapes, generate_shape};
pub use model::{
    ConstraintKind, Path, PropertyConstraint, QualifiedClass, Shape, Target, ValidationReport, Violation,
};
pub use turtle::{shapes_to_graph, shapes_to_turtle};
pub use validate::{validate, validate_all, validate_with};
