use std::collections::{BTreeMap, BTreeSet};

use regex::Regex;

use super::model::{ConstraintKind, Path, PropertyConstraint, Shape, Target, ValidationReport, Violation};
use crate::hierarchy::ClassHierarchy;
use crate::iri::Iri;
use crate::metamodel::LiteralDatatype;
use crate::rdf::{QuadGraph, Term};
use crate::value::{compare_literal, is_valid_lexical};
use crate::vocab::rdf;

struct View<'a> {
    out: BTreeMap<&'a Term, Vec<(&'a Iri, &'a Term)>>,
    inc: BTreeMap<&'a Term, Vec<(&'a Iri, &'a Term)>>,
    hierarchy: &'a ClassHierarchy,
}

impl<'a> View<'a> {
    fn new(graph: &'a QuadGraph, hierarchy: &'a ClassHierarchy) -> Self {
        let mut out: BTreeMap<&Term, Vec<(&Iri, &Term)>> = BTreeMap::new();
        let mut inc: BTreeMap<&Term, Vec<(&Iri, &Term)>> = BTreeMap::new();
        for q in graph {
            out.entry(&q.subject).or_default().push((&q.predicate, &q.object));
            inc.entry(&q.object).or_default().push((&q.predicate, &q.subject));
        }
        View { out, inc, hierarchy }
    }

    fn step(&self, node: &Term, p: &Iri, inverse: bool) -> Vec<&'a Term> {
        let map = if inverse { &self.inc } else { &self.out };
        map.get(node).map(|v| v.iter().filter(|(pp, _)| *pp == p).map(|(_, o)| *o).collect()).unwrap_or_default()
    }

    fn eval(&self, node: &'a Term, path: &Path) -> BTreeSet<&'a Term> {
        match path {
            Path::Predicate(p) => self.step(node, p, false).into_iter().collect(),
            Path::Inverse(p) => self.step(node, p, true).into_iter().collect(),
            Path::Sequence(parts) => {
                let mut current: BTreeSet<&Term> = BTreeSet::from([node]);
                for part in parts {
                    current = current.into_iter().flat_map(|n| self.eval(n, part)).collect();
                }
                current
            }
        }
    }

    fn types(&self, node: &Term) -> Vec<Iri> {
        let mut types: Vec<Iri> =
            self.step(node, &rdf::type_(), false).into_iter().filter_map(|t| t.as_iri().cloned()).collect();
        if let Term::Iri(i) = node {
            types.extend(self.hierarchy.types_of(i).cloned());
        }
        types
    }

    /// `None` when the node's type is unknown.
    fn instance_of(&self, node: &Term, class: &Iri) -> Option<bool> {
        let types = self.types(node);
        if types.is_empty() {
            return None;
        }
        Some(types.iter().any(|t| self.hierarchy.is_subclass(t, class)))
    }

    fn focus_nodes(&self, targets: &[Target]) -> BTreeSet<&'a Term> {
        let mut nodes = BTreeSet::new();
        for t in targets {
            match t {
                Target::Class(c) => {
                    for (s, edges) in &self.out {
                        let typed = edges.iter().any(|(p, o)| {
                            **p == rdf::type_() && o.as_iri().is_some_and(|t| self.hierarchy.is_subclass(t, c))
                        });
                        if typed {
                            nodes.insert(*s);
                        }
                    }
                }
                Target::ObjectsOf(p) => {
                    for edges in self.out.values() {
                        nodes.extend(edges.iter().filter(|(pp, o)| *pp == p && !o.is_literal()).map(|(_, o)| *o));
                    }
                }
                Target::SubjectsOf(p) => {
                    for (s, edges) in &self.out {
                        if edges.iter().any(|(pp, _)| *pp == p) {
                            nodes.insert(*s);
                        }
                    }
                }
            }
        }
        nodes
    }
}

pub fn validate(graph: &QuadGraph, shape: &Shape) -> ValidationReport {
    validate_with(graph, shape, &ClassHierarchy::default())
}

/// Validates a graph, reading class membership through `hierarchy`.
pub fn validate_with(graph: &QuadGraph, shape: &Shape, hierarchy: &ClassHierarchy) -> ValidationReport {
    validate_all(graph, std::slice::from_ref(shape), hierarchy)
}

pub fn validate_all(graph: &QuadGraph, shapes: &[Shape], hierarchy: &ClassHierarchy) -> ValidationReport {
    let view = View::new(graph, hierarchy);
    let mut violations = Vec::new();
    for shape in shapes {
        for focus in view.focus_nodes(&shape.targets) {
            for c in &shape.property_constraints {
                check(&view, focus, c, &mut violations);
            }
        }
    }
    ValidationReport { conforms: violations.is_empty(), violations }
}

fn check(view: &View<'_>, focus: &Term, c: &PropertyConstraint, out: &mut Vec<Violation>) {
    let values = view.eval(focus, &c.path);
    let mut fail = |constraint, message: String| {
        out.push(Violation { focus_node: focus.to_string(), path: c.path.to_string(), constraint, message })
    };
    let n = values.len() as u32;
    if n < c.min_count {
        fail(ConstraintKind::MinCount, format!("{n} values, at least {} required", c.min_count));
    }
    if let Some(max) = c.max_count {
        if n > max {
            fail(ConstraintKind::MaxCount, format!("{n} values, at most {max} allowed"));
        }
    }
    let known = c.datatype.as_ref().and_then(LiteralDatatype::from_iri);
    for v in &values {
        if let Some(dt) = &c.datatype {
            match v.as_literal() {
                Some(l) if l.datatype == *dt && known.is_none_or(|k| is_valid_lexical(k, &l.lexical)) => {}
                Some(l) if l.datatype == *dt => {
                    fail(ConstraintKind::Datatype, format!("{:?} is not a valid <{dt}>", l.lexical))
                }
                _ => fail(ConstraintKind::Datatype, format!("{v} is not a <{dt}> literal")),
            }
        }
        if let Some(class) = &c.class {
            match v {
                Term::Literal(_) => fail(ConstraintKind::Class, format!("{v} is a literal, expected <{class}>")),
                _ => {
                    if view.instance_of(v, class) == Some(false) {
                        fail(ConstraintKind::Class, format!("{v} is not an instance of <{class}>"));
                    }
                }
            }
        }
        if let Some(pattern) = &c.pattern {
            let text = match v {
                Term::Iri(i) => i.as_str(),
                Term::Literal(l) => l.lexical.as_str(),
                Term::Blank(_) => "",
            };
            match Regex::new(pattern) {
                Ok(re) if re.is_match(text) => {}
                Ok(_) => fail(ConstraintKind::Pattern, format!("{text:?} does not match {pattern:?}")),
                Err(e) => fail(ConstraintKind::Pattern, format!("invalid pattern {pattern:?}: {e}")),
            }
        }
        if c.min_inclusive.is_some() || c.max_inclusive.is_some() {
            let in_range = v.as_literal().and_then(|l| {
                let dt = LiteralDatatype::from_iri(&l.datatype)?;
                let lo = match &c.min_inclusive {
                    Some(min) => compare_literal(dt, &l.lexical, min)?.is_ge(),
                    None => true,
                };
                let hi = match &c.max_inclusive {
                    Some(max) => compare_literal(dt, &l.lexical, max)?.is_le(),
                    None => true,
                };
                Some(lo && hi)
            });
            if in_range != Some(true) {
                fail(ConstraintKind::Range, format!("{v} is outside the allowed range"));
            }
        }
    }
    if let Some(q) = &c.qualified {
        let count = values.iter().filter(|v| view.instance_of(v, &q.class) == Some(true)).count() as u32;
        if count < q.min_count || q.max_count.is_some_and(|m| count > m) {
            fail(
                ConstraintKind::QualifiedCount,
                format!("{count} values of class <{}>, allowed {}..{:?}", q.class, q.min_count, q.max_count),
            );
        }
    }
}
