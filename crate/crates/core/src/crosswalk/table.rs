use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metamodel::StatementPattern;
use crate::store::StatementVersion;
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableColumn {
    pub name: String,
    /// `$LABEL` for a slot or `$STATEMENT` for the statement IRI.
    pub source: String,
}

/// Flattens statements of one pattern into a relational table, one row per
/// version.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    pub id: String,
    pub source_pattern: String,
    pub columns: Vec<TableColumn>,
}

impl TableSpec {
    pub fn parse(document: &str) -> Result<Self> {
        let spec: TableSpec = serde_yaml::from_str(document).map_err(|e| Error::Spec(e.to_string()))?;
        if spec.columns.is_empty() {
            return Err(Error::Spec(format!("table {} has no columns", spec.id)));
        }
        Ok(spec)
    }

    pub fn check(&self, pattern: &StatementPattern) -> Result<()> {
        for c in &self.columns {
            match c.source.strip_prefix('$') {
                Some("STATEMENT") => {}
                Some(label) if pattern.position(label).is_some() => {}
                _ => return Err(Error::Spec(format!("table {}: unknown source {}", self.id, c.source))),
            }
        }
        Ok(())
    }
}

/// Writes CSV. Resources appear as IRIs, literals as lexical forms;
/// multiple values in one slot are separated by `|`.
pub fn emit_csv(table: &TableSpec, versions: &[StatementVersion]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Format(e.to_string());
    w.write_record(table.columns.iter().map(|c| c.name.as_str())).map_err(csv_err)?;
    for v in versions {
        let row: Vec<String> = table
            .columns
            .iter()
            .map(|c| match c.source.strip_prefix('$') {
                Some("STATEMENT") => v.id.to_string(),
                Some(label) => v
                    .values(label)
                    .iter()
                    .map(|value| match value {
                        Value::Resource { iri, .. } => iri.to_string(),
                        Value::Literal { lexical, .. } => lexical.clone(),
                    })
                    .collect::<Vec<_>>()
                    .join("|"),
                None => String::new(),
            })
            .collect();
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
}
