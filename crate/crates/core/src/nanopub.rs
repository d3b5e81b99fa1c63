//! Each statement version packaged as a nanopublication: head, assertion,
//! provenance and publication-info graphs.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::iri::Iri;
use crate::metamodel::StatementPattern;
use crate::rdf::{parse, serialize, version_graph, Quad, QuadGraph, RdfFormat, Term};
use crate::store::{gone, AnchorStatement};
use crate::vocab::{dct, np, ns, pav, prov, rdf, rosetta, xsd, DCT};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nanopublication {
    pub id: Iri,
    pub head: QuadGraph,
    pub assertion: QuadGraph,
    pub provenance: QuadGraph,
    pub pubinfo: QuadGraph,
}

impl Nanopublication {
    pub fn head_iri(&self) -> Iri {
        self.id.with_fragment("head")
    }

    pub fn assertion_iri(&self) -> Iri {
        self.id.with_fragment("assertion")
    }

    pub fn provenance_iri(&self) -> Iri {
        self.id.with_fragment("provenance")
    }

    pub fn pubinfo_iri(&self) -> Iri {
        self.id.with_fragment("pubinfo")
    }

    /// All four graphs as one dataset.
    pub fn dataset(&self) -> QuadGraph {
        let mut all = self.head.clone();
        all.extend(self.assertion.clone());
        all.extend(self.provenance.clone());
        all.extend(self.pubinfo.clone());
        all
    }

    /// Checks a content-hashed identifier against the content.
    pub fn verify_content_hash(&self) -> bool {
        let Some((base, hash)) = self.id.as_str().rsplit_once('/') else {
            return false;
        };
        let Ok(placeholder) = Iri::new(base) else {
            return false;
        };
        let renamed: QuadGraph = self.dataset().into_iter().map(|q| rename(q, &self.id, &placeholder)).collect();
        content_hash(&renamed) == hash
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NanopubOptions {
    /// Suffix the identifier with a hash of the content.
    pub content_hash: bool,
}

pub fn to_nanopub(anchor: &AnchorStatement, version_number: u32, pattern: &StatementPattern) -> Result<Nanopublication> {
    to_nanopub_with(anchor, version_number, pattern, NanopubOptions::default())
}

pub fn to_nanopub_with(
    anchor: &AnchorStatement,
    version_number: u32,
    pattern: &StatementPattern,
    options: NanopubOptions,
) -> Result<Nanopublication> {
    if anchor.is_deleted() {
        return Err(gone(anchor));
    }
    let version = anchor
        .version(version_number)
        .ok_or_else(|| Error::NotFound(format!("version {version_number} of {}", anchor.id)))?;
    let id = version.id.join("np");
    let mut nanopub = Nanopublication {
        id: id.clone(),
        head: QuadGraph::new(),
        assertion: QuadGraph::new(),
        provenance: QuadGraph::new(),
        pubinfo: QuadGraph::new(),
    };
    let (h, a, p, i) = (nanopub.head_iri(), nanopub.assertion_iri(), nanopub.provenance_iri(), nanopub.pubinfo_iri());
    let npt = Term::Iri(id.clone());
    nanopub.head.add(npt.clone(), rdf::type_(), np::nanopublication(), Some(&h));
    nanopub.head.add(npt.clone(), np::has_assertion(), &a, Some(&h));
    nanopub.head.add(npt.clone(), np::has_provenance(), &p, Some(&h));
    nanopub.head.add(npt.clone(), np::has_publication_info(), &i, Some(&h));

    nanopub.assertion = version_graph(anchor, version, pattern)?.into_graph(Some(&a));

    let m = &anchor.metadata;
    let at = Term::Iri(a.clone());
    let pg = Some(&p);
    nanopub.provenance.add(at.clone(), prov::was_attributed_to(), &version.created_by, pg);
    nanopub.provenance.add(at.clone(), prov::generated_at_time(), Term::date_time(&version.created_at), pg);
    if let Some(method) = &m.extraction_method {
        nanopub.provenance.add(at.clone(), rosetta::extraction_method(), Term::string(method), pg);
    }
    if let Some(author) = &m.author {
        nanopub.provenance.add(at.clone(), pav::authored_by(), author, pg);
    }
    if let Some(source) = &m.imported_from {
        nanopub.provenance.add(at.clone(), pav::imported_from(), source, pg);
    }
    for c in &anchor.context_refs {
        nanopub.provenance.add(at.clone(), prov::had_primary_source(), c, pg);
    }
    if let Some(c) = anchor.confidence_level {
        nanopub.provenance.add(at.clone(), rosetta::confidence_level(), Term::typed(c.to_string(), xsd::decimal()), pg);
    }

    let ig = Some(&i);
    nanopub.pubinfo.add(npt.clone(), dct::creator(), &m.creator, ig);
    nanopub.pubinfo.add(npt.clone(), dct::created(), Term::date_time(&m.creation_date), ig);
    nanopub.pubinfo.add(npt.clone(), ns(DCT, "isVersionOf"), &anchor.id, ig);
    if let Some(license) = &m.license {
        nanopub.pubinfo.add(npt.clone(), dct::license(), license, ig);
    }
    if let Some(curator) = &m.curator {
        nanopub.pubinfo.add(npt, pav::curated_by(), curator, ig);
    }

    if options.content_hash {
        let hash = content_hash(&nanopub.dataset());
        let hashed = id.join(&hash);
        let mut out = Nanopublication {
            id: hashed.clone(),
            head: QuadGraph::new(),
            assertion: QuadGraph::new(),
            provenance: QuadGraph::new(),
            pubinfo: QuadGraph::new(),
        };
        for (src, dst) in [
            (nanopub.head, &mut out.head),
            (nanopub.assertion, &mut out.assertion),
            (nanopub.provenance, &mut out.provenance),
            (nanopub.pubinfo, &mut out.pubinfo),
        ] {
            *dst = src.into_iter().map(|q| rename(q, &id, &hashed)).collect();
        }
        return Ok(out);
    }
    Ok(nanopub)
}

fn content_hash(graph: &QuadGraph) -> String {
    let text = serialize(graph, RdfFormat::NQuads).expect("N-Quads never fails");
    hex::encode(Sha256::digest(text.as_bytes()))[..32].to_string()
}

fn rename_iri(iri: &Iri, from: &Iri, to: &Iri) -> Iri {
    match iri.as_str().strip_prefix(from.as_str()) {
        Some(rest) if rest.is_empty() || rest.starts_with('#') => Iri::new(format!("{to}{rest}")).expect("renamed IRI"),
        _ => iri.clone(),
    }
}

fn rename(q: Quad, from: &Iri, to: &Iri) -> Quad {
    let term = |t: Term| match t {
        Term::Iri(i) => Term::Iri(rename_iri(&i, from, to)),
        other => other,
    };
    Quad {
        graph: q.graph.map(|g| rename_iri(&g, from, to)),
        subject: term(q.subject),
        predicate: q.predicate,
        object: term(q.object),
    }
}

pub fn serialize_nanopub(nanopub: &Nanopublication) -> String {
    serialize(&nanopub.dataset(), RdfFormat::TriG).expect("TriG never fails")
}

/// Reads a TriG nanopublication back, locating the head through
/// `np:hasAssertion`.
pub fn parse_nanopub(text: &str) -> Result<Nanopublication> {
    let dataset = parse(text, RdfFormat::TriG)?;
    let heads: Vec<&Quad> = dataset.iter().filter(|q| q.predicate == np::has_assertion()).collect();
    let [head] = heads.as_slice() else {
        return Err(Error::Format(format!("expected one np:hasAssertion triple, found {}", heads.len())));
    };
    let id = head.subject.as_iri().cloned().ok_or_else(|| Error::Format("nanopub id must be an IRI".into()))?;
    let link = |p: Iri| -> Result<Iri> {
        dataset
            .iter()
            .find(|q| q.subject == head.subject && q.predicate == p)
            .and_then(|q| q.object.as_iri().cloned())
            .ok_or_else(|| Error::Format(format!("nanopub head lacks <{p}>")))
    };
    let (a, p, i) = (link(np::has_assertion())?, link(np::has_provenance())?, link(np::has_publication_info())?);
    let h = head.graph.clone().ok_or_else(|| Error::Format("nanopub head must be a named graph".into()))?;
    let extra: Vec<_> = dataset.graph_names().into_iter().filter(|g| ![&h, &a, &p, &i].map(Some).contains(&g.as_ref())).collect();
    if !extra.is_empty() {
        return Err(Error::Format(format!("unexpected graphs in nanopub: {extra:?}")));
    }
    Ok(Nanopublication {
        id,
        head: dataset.graph(Some(&h)),
        assertion: dataset.graph(Some(&a)),
        provenance: dataset.graph(Some(&p)),
        pubinfo: dataset.graph(Some(&i)),
    })
}
