use super::model::{Path, PropertyConstraint, QualifiedClass, Shape, Target};
use crate::metamodel::{LiteralDatatype, PositionSpec, StatementPattern, ValueKind};
use crate::vocab::{dct, rdfs, rosetta, xsd};

fn value_constraint(c: PropertyConstraint, spec: &PositionSpec) -> PropertyConstraint {
    match spec.value_kind {
        ValueKind::Literal => {
            c.datatype(spec.literal_datatype.map_or_else(|| LiteralDatatype::Text.iri(), LiteralDatatype::iri))
        }
        ValueKind::Resource => c.class(spec.class_constraint.clone()),
    }
}

/// Shape of the light form: one constraint for the subject and one per
/// object position, targeting the statement class.
pub fn generate_shape(pattern: &StatementPattern) -> Shape {
    let subject = &pattern.subject;
    let mut constraints = vec![value_constraint(
        PropertyConstraint::new(Path::Predicate(rosetta::subject()), subject.min_count, subject.max_count)
            .named(&subject.thematic_label),
        subject,
    )];
    for spec in &pattern.object_positions {
        let predicate =
            rosetta::light_object_position(spec.required, spec.value_kind == ValueKind::Literal, spec.index);
        constraints.push(value_constraint(
            PropertyConstraint::new(Path::Predicate(predicate), spec.min_count, spec.max_count)
                .named(&spec.thematic_label),
            spec,
        ));
    }
    Shape { id: pattern.shape_iri(), targets: vec![Target::Class(pattern.class_iri.clone())], property_constraints: constraints }
}

/// Shapes of the full form: the anchor, each version, each position
/// instance and the value holders.
pub fn generate_full_shapes(pattern: &StatementPattern) -> Vec<Shape> {
    let base = pattern.shape_iri();
    let mut shapes = Vec::new();

    let mut anchor = vec![
        PropertyConstraint::new(Path::Predicate(rosetta::has_data_schema_pattern()), 1, Some(1)),
        PropertyConstraint::new(Path::Predicate(rosetta::has_version()), 1, None),
        PropertyConstraint::new(Path::Predicate(dct::creator()), 1, Some(1)),
        PropertyConstraint::new(Path::Predicate(dct::created()), 1, Some(1)).datatype(xsd::date_time()),
        PropertyConstraint::new(Path::Predicate(rosetta::modifiable()), 1, Some(1)).datatype(xsd::boolean()),
        PropertyConstraint::new(Path::Predicate(rosetta::deleted_at()), 0, Some(1)).datatype(xsd::date_time()),
        PropertyConstraint::new(Path::Predicate(rosetta::deleted_by()), 0, Some(1)),
    ];
    let mut confidence =
        PropertyConstraint::new(Path::Predicate(rosetta::confidence_level()), 0, Some(1)).datatype(xsd::decimal());
    confidence.min_inclusive = Some("0".into());
    confidence.max_inclusive = Some("1".into());
    anchor.push(confidence);
    shapes.push(Shape {
        id: base.join("anchor"),
        targets: vec![Target::SubjectsOf(rosetta::has_data_schema_pattern())],
        property_constraints: anchor,
    });

    let qualified = |link, spec: &PositionSpec| {
        let required = spec.is_subject() || spec.required;
        let mut c = PropertyConstraint::new(Path::Predicate(link), u32::from(required), None).named(&spec.thematic_label);
        c.qualified = Some(QualifiedClass {
            class: pattern.position_class(&spec.thematic_label),
            min_count: u32::from(required),
            max_count: Some(1),
        });
        c
    };
    let mut version = vec![
        PropertyConstraint::new(Path::Predicate(rosetta::version_number()), 1, Some(1)).datatype(xsd::integer()),
        PropertyConstraint::new(Path::Predicate(rosetta::created_by()), 1, Some(1)),
        PropertyConstraint::new(Path::Predicate(rosetta::created_at()), 1, Some(1)).datatype(xsd::date_time()),
    ];
    version.push(qualified(rosetta::has_subject_position(), &pattern.subject));
    for spec in &pattern.object_positions {
        let link = if spec.required {
            rosetta::has_required_object_position()
        } else {
            rosetta::has_optional_object_position()
        };
        version.push(qualified(link, spec));
    }
    shapes.push(Shape {
        id: base.join("version"),
        targets: vec![Target::ObjectsOf(rosetta::has_version())],
        property_constraints: version,
    });

    for spec in pattern.positions() {
        let label = &spec.thematic_label;
        let mut label_c =
            PropertyConstraint::new(Path::Predicate(rosetta::thematic_label()), 1, Some(1)).datatype(xsd::string());
        label_c.pattern = Some(format!("^{}$", regex::escape(label)));
        let values = value_constraint(
            PropertyConstraint::new(
                Path::seq([rosetta::has_value(), rosetta::value()]),
                spec.min_count.max(1),
                spec.max_count,
            )
            .named(label),
            spec,
        );
        shapes.push(Shape {
            id: base.join("position").join(label),
            targets: vec![Target::Class(pattern.position_class(label))],
            property_constraints: vec![
                label_c,
                PropertyConstraint::new(Path::Predicate(rosetta::transitive()), 0, Some(1)).datatype(xsd::boolean()),
                PropertyConstraint::new(Path::Predicate(rosetta::has_value()), spec.min_count.max(1), spec.max_count),
                values,
            ],
        });
    }

    let mut order = PropertyConstraint::new(Path::Predicate(rosetta::order()), 1, Some(1)).datatype(xsd::integer());
    order.min_inclusive = Some("1".into());
    shapes.push(Shape {
        id: base.join("value"),
        targets: vec![Target::ObjectsOf(rosetta::has_value()), Target::SubjectsOf(rosetta::order())],
        property_constraints: vec![
            PropertyConstraint::new(Path::Inverse(rosetta::has_value()), 1, Some(1)),
            order,
            PropertyConstraint::new(Path::Predicate(rosetta::value()), 1, Some(1)),
            PropertyConstraint::new(Path::Predicate(rdfs::label()), 0, Some(1)).datatype(xsd::string()),
        ],
    });
    shapes
}
