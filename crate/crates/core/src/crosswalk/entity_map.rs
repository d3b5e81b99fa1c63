use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iri::Iri;
use crate::vocab::SKOS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchRelation {
    Exact,
    Close,
}

impl MatchRelation {
    pub fn predicate(self) -> &'static str {
        match self {
            MatchRelation::Exact => "skos:exactMatch",
            MatchRelation::Close => "skos:closeMatch",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        let local = s.strip_prefix("skos:").or_else(|| s.strip_prefix(SKOS))?;
        match local {
            "exactMatch" => Some(MatchRelation::Exact),
            "closeMatch" => Some(MatchRelation::Close),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mapping {
    pub target: Iri,
    pub relation: MatchRelation,
}

/// Source IRI → target IRI correspondences. Each source maps to one target.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityMap {
    pairs: BTreeMap<Iri, Mapping>,
}

impl EntityMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, source: Iri, target: Iri, relation: MatchRelation) -> Result<()> {
        if self.pairs.contains_key(&source) {
            return Err(Error::Spec(format!("duplicate mapping for <{source}>")));
        }
        self.pairs.insert(source, Mapping { target, relation });
        Ok(())
    }

    pub fn remove(&mut self, source: &Iri) -> Option<Mapping> {
        self.pairs.remove(source)
    }

    pub fn get(&self, source: &Iri) -> Option<&Mapping> {
        self.pairs.get(source)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Iri, &Mapping)> {
        self.pairs.iter()
    }

    /// Reads a tab-separated table with the columns `subject_id`,
    /// `predicate_id` and `object_id`. Lines starting with `#` are comments.
    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .delimiter(b'\t')
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = reader.headers().map_err(|e| Error::Spec(format!("entity map: {e}")))?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Spec(format!("entity map lacks a {name} column")))
        };
        let (s, p, o) = (col("subject_id")?, col("predicate_id")?, col("object_id")?);
        let mut map = EntityMap::new();
        for (i, row) in reader.records().enumerate() {
            let row = row.map_err(|e| Error::Spec(format!("entity map: {e}")))?;
            let line = i + 2;
            let field = |k: usize| row.get(k).unwrap_or("");
            let relation = MatchRelation::parse(field(p))
                .ok_or_else(|| Error::Spec(format!("entity map row {line}: unsupported predicate {:?}", field(p))))?;
            let iri = |v: &str| {
                Iri::new(v.trim_start_matches('<').trim_end_matches('>'))
                    .map_err(|_| Error::Spec(format!("entity map row {line}: {v:?} is not an IRI")))
            };
            map.insert(iri(field(s))?, iri(field(o))?, relation)?;
        }
        Ok(map)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("subject_id\tpredicate_id\tobject_id\n");
        for (s, m) in &self.pairs {
            out.push_str(&format!("{s}\t{}\t{}\n", m.relation.predicate(), m.target));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let text = "# units\nsubject_id\tpredicate_id\tobject_id\n\
                    http://www.wikidata.org/entity/Q41803\tskos:exactMatch\thttp://purl.obolibrary.org/obo/UO_0000021\n";
        let map = EntityMap::from_tsv(text).unwrap();
        assert_eq!(map.len(), 1);
        assert_eq!(EntityMap::from_tsv(&map.to_tsv()).unwrap(), map);
    }

    #[test]
    fn duplicate_sources_are_rejected() {
        let text = "subject_id\tpredicate_id\tobject_id\n\
                    https://a.org/x\tskos:exactMatch\thttps://b.org/1\n\
                    https://a.org/x\tskos:closeMatch\thttps://b.org/2\n";
        assert!(matches!(EntityMap::from_tsv(text), Err(Error::Spec(_))));
    }

    #[test]
    fn unknown_predicate_is_rejected() {
        let text = "subject_id\tpredicate_id\tobject_id\nhttps://a.org/x\towl:sameAs\thttps://b.org/1\n";
        assert!(EntityMap::from_tsv(text).is_err());
    }
}
