use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{validation, Result};

/// An absolute IRI.
///
/// Only the syntactic checks needed to keep serializations well formed are
/// applied: a scheme followed by `:`, and none of the characters that are
/// illegal inside `<...>` in N-Quads and Turtle.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Iri(String);

impl Iri {
    pub fn new(s: impl Into<String>) -> Result<Self> {
        let s = s.into();
        if !is_absolute_iri(&s) {
            return Err(validation(format!("not an absolute IRI: {s:?}")));
        }
        Ok(Iri(s))
    }

    /// Constructs an IRI from a string known to be valid (vocabulary
    /// constants and strings built from an existing IRI).
    pub(crate) fn new_unchecked(s: impl Into<String>) -> Self {
        let s = s.into();
        debug_assert!(is_absolute_iri(&s), "invalid IRI {s:?}");
        Iri(s)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    /// Appends a path segment, separated by `/`.
    pub fn join(&self, segment: &str) -> Iri {
        let seg = encode_segment(segment);
        if self.0.ends_with('/') {
            Iri(format!("{}{}", self.0, seg))
        } else {
            Iri(format!("{}/{}", self.0, seg))
        }
    }

    /// Appends a fragment identifier.
    pub fn with_fragment(&self, fragment: &str) -> Iri {
        Iri(format!("{}#{}", self.0, encode_segment(fragment)))
    }

    /// The part after the last `#` or `/`, used as a fallback display label.
    pub fn local_name(&self) -> &str {
        let s = self.0.trim_end_matches(['/', '#']);
        match s.rfind(['#', '/', ':']) {
            Some(i) => &s[i + 1..],
            None => s,
        }
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl std::str::FromStr for Iri {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Iri::new(s)
    }
}

impl<'de> Deserialize<'de> for Iri {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Iri::new(s).map_err(serde::de::Error::custom)
    }
}

fn is_absolute_iri(s: &str) -> bool {
    let Some(colon) = s.find(':') else {
        return false;
    };
    let scheme = &s[..colon];
    let mut chars = scheme.chars();
    let scheme_ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'));
    scheme_ok
        && s.chars().all(|c| {
            !c.is_whitespace()
                && !c.is_control()
                && !matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
        })
}

/// Percent-encodes the characters that may not appear in an IRI path segment.
pub(crate) fn encode_segment(segment: &str) -> String {
    let mut out = String::with_capacity(segment.len());
    for c in segment.chars() {
        if c.is_alphanumeric() || matches!(c, '-' | '_' | '.' | '~') {
            out.push(c);
        } else {
            let mut buf = [0u8; 4];
            for b in c.encode_utf8(&mut buf).bytes() {
                out.push_str(&format!("%{b:02X}"));
            }
        }
    }
    out
}

/// Source of fresh identifiers for minted IRIs.
pub trait IdSource: Send + Sync {
    fn next_id(&self) -> String;
}

/// Random UUIDv4 identifiers.
#[derive(Debug, Default)]
pub struct UuidIds;

impl IdSource for UuidIds {
    fn next_id(&self) -> String {
        uuid::Uuid::new_v4().to_string()
    }
}

/// Counter-based identifiers (`s1`, `s2`, ...). Reproducible across runs.
#[derive(Debug, Default)]
pub struct SequentialIds(AtomicU64);

impl IdSource for SequentialIds {
    fn next_id(&self) -> String {
        format!("s{}", self.0.fetch_add(1, Ordering::Relaxed) + 1)
    }
}
