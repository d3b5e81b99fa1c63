//! Append-only statement log.
//!
//! One JSON object per line, tagged by `record`:
//!
//! | record    | payload                                                         |
//! |-----------|-----------------------------------------------------------------|
//! | `TYPE`    | `pattern`: a pattern definition with pinned `id`/`class`/`version` |
//! | `ANCHOR`  | `anchor`: the new anchor without versions                        |
//! | `VERSION` | `anchor` IRI and the full `version`                              |
//! | `DELETE`  | `anchor` IRI, `at` timestamp, `by` IRI                           |
//! | `META`    | `anchor` IRI and the anchor-level fields after the change        |
//!
//! Replaying the records in order reproduces the store. A trailing line
//! without a newline (an interrupted append) is ignored.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::model::{AnchorStatement, StatementVersion};
use crate::error::{Error, Result};
use crate::iri::Iri;
use crate::metamodel::PatternFile;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record")]
pub enum LogRecord {
    #[serde(rename = "TYPE")]
    Type { pattern: PatternFile },
    #[serde(rename = "ANCHOR")]
    Anchor { anchor: AnchorStatement },
    #[serde(rename = "VERSION")]
    Version { anchor: Iri, version: StatementVersion },
    #[serde(rename = "DELETE")]
    Delete { anchor: Iri, at: DateTime<Utc>, by: Iri },
    #[serde(rename = "META")]
    Meta {
        anchor: Iri,
        license: Option<Iri>,
        confidence_level: Option<f64>,
        context_refs: Vec<Iri>,
        modifiable: bool,
        negated: bool,
    },
}

impl LogRecord {
    pub fn to_line(&self) -> String {
        let mut line = serde_json::to_string(self).expect("log record serializes");
        line.push('\n');
        line
    }
}

#[derive(Debug)]
pub struct LogWriter {
    file: File,
}

impl LogWriter {
    pub fn open(path: &Path) -> Result<Self> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(LogWriter { file })
    }

    pub fn append(&mut self, records: &[LogRecord]) -> Result<()> {
        let mut buf = String::new();
        for r in records {
            buf.push_str(&r.to_line());
        }
        self.file.write_all(buf.as_bytes())?;
        self.file.flush()?;
        Ok(())
    }
}

pub fn read_log(path: &Path) -> Result<Vec<LogRecord>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let reader = BufReader::new(File::open(path)?);
    let mut records = Vec::new();
    let mut lines = reader.split(b'\n').peekable();
    let ends_with_newline = std::fs::read(path)?.last().is_none_or(|b| *b == b'\n');
    let mut n = 0;
    while let Some(line) = lines.next() {
        n += 1;
        let line = line?;
        if line.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        match serde_json::from_slice::<LogRecord>(&line) {
            Ok(r) => records.push(r),
            Err(_) if lines.peek().is_none() && !ends_with_newline => break,
            Err(e) => {
                return Err(Error::Format(format!("{}: line {n}: {e}", path.display())));
            }
        }
    }
    Ok(records)
}
