use super::model::{Path, Shape, Target};
use crate::error::Result;
use crate::iri::Iri;
use crate::rdf::{serialize, QuadGraph, RdfFormat, Term};
use crate::vocab::{ns, rdf, xsd, SH};

fn sh(local: &str) -> Iri {
    ns(SH, local)
}

fn path_term(graph: &mut QuadGraph, path: &Path, label: &str) -> Term {
    match path {
        Path::Predicate(p) => Term::Iri(p.clone()),
        Path::Inverse(p) => {
            let node = Term::Blank(format!("{label}i"));
            graph.add(node.clone(), sh("inversePath"), p, None);
            node
        }
        Path::Sequence(parts) => {
            let rdf_ns = |l: &str| ns(crate::vocab::RDF, l);
            let mut rest = Term::Iri(rdf_ns("nil"));
            for (k, part) in parts.iter().enumerate().rev() {
                let cell = Term::Blank(format!("{label}l{k}"));
                let first = path_term(graph, part, &format!("{label}l{k}"));
                graph.add(cell.clone(), rdf_ns("first"), first, None);
                graph.add(cell.clone(), rdf_ns("rest"), rest, None);
                rest = cell;
            }
            rest
        }
    }
}

/// SHACL triples for a list of shapes. Blank node labels are derived from
/// positions in the list, so output is stable.
pub fn shapes_to_graph(shapes: &[Shape]) -> QuadGraph {
    let mut g = QuadGraph::new();
    for (i, shape) in shapes.iter().enumerate() {
        let s = Term::Iri(shape.id.clone());
        g.add(s.clone(), rdf::type_(), sh("NodeShape"), None);
        for t in &shape.targets {
            match t {
                Target::Class(c) => g.add(s.clone(), sh("targetClass"), c, None),
                Target::ObjectsOf(p) => g.add(s.clone(), sh("targetObjectsOf"), p, None),
                Target::SubjectsOf(p) => g.add(s.clone(), sh("targetSubjectsOf"), p, None),
            }
        }
        for (j, c) in shape.property_constraints.iter().enumerate() {
            let label = format!("s{i}p{j}");
            let p = Term::Blank(label.clone());
            g.add(s.clone(), sh("property"), p.clone(), None);
            let path = path_term(&mut g, &c.path, &label);
            g.add(p.clone(), sh("path"), path, None);
            if let Some(name) = &c.name {
                g.add(p.clone(), sh("name"), Term::string(name), None);
            }
            if c.min_count > 0 {
                g.add(p.clone(), sh("minCount"), Term::integer(c.min_count), None);
            }
            if let Some(m) = c.max_count {
                g.add(p.clone(), sh("maxCount"), Term::integer(m), None);
            }
            if let Some(dt) = &c.datatype {
                g.add(p.clone(), sh("datatype"), dt, None);
            }
            if let Some(class) = &c.class {
                g.add(p.clone(), sh("class"), class, None);
            }
            if let Some(pattern) = &c.pattern {
                g.add(p.clone(), sh("pattern"), Term::string(pattern), None);
            }
            let bound_dt = c.datatype.clone().unwrap_or_else(xsd::decimal);
            if let Some(min) = &c.min_inclusive {
                g.add(p.clone(), sh("minInclusive"), Term::typed(min, bound_dt.clone()), None);
            }
            if let Some(max) = &c.max_inclusive {
                g.add(p.clone(), sh("maxInclusive"), Term::typed(max, bound_dt), None);
            }
            if let Some(q) = &c.qualified {
                let qs = Term::Blank(format!("{label}q"));
                g.add(p.clone(), sh("qualifiedValueShape"), qs.clone(), None);
                g.add(qs, sh("class"), &q.class, None);
                g.add(p.clone(), sh("qualifiedMinCount"), Term::integer(q.min_count), None);
                if let Some(m) = q.max_count {
                    g.add(p.clone(), sh("qualifiedMaxCount"), Term::integer(m), None);
                }
            }
        }
    }
    g
}

pub fn shapes_to_turtle(shapes: &[Shape]) -> Result<String> {
    serialize(&shapes_to_graph(shapes), RdfFormat::Turtle)
}
