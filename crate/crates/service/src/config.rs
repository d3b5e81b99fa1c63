//! Service configuration: an optional TOML file, overridden by environment
//! variables and command-line flags.
//!
//! ```toml
//! base_iri = "https://example.org/kg"
//! data_dir = "data"
//! addr = "127.0.0.1:8080"
//! cors_origins = ["http://localhost:4200"]
//! crosswalk_dir = "crosswalks"
//! hierarchy = "classes.txt"
//! nanopub_server = "https://np.example.org/"
//!
//! [prefixes]
//! wd = "http://www.wikidata.org/entity/"
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rosetta_core::rdf::PrefixMap;
use rosetta_core::Iri;
use serde::Deserialize;

use crate::error::ApiError;

pub const DEFAULT_BASE_IRI: &str = "https://example.org/rosetta";
pub const DEFAULT_ADDR: &str = "127.0.0.1:8080";

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub base_iri: Option<String>,
    pub data_dir: Option<PathBuf>,
    pub addr: Option<String>,
    #[serde(default)]
    pub prefixes: BTreeMap<String, String>,
    #[serde(default)]
    pub cors_origins: Vec<String>,
    pub crosswalk_dir: Option<PathBuf>,
    pub hierarchy: Option<PathBuf>,
    pub nanopub_server: Option<String>,
}

impl FileConfig {
    /// Reads a config file. Relative paths inside it are taken relative to
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self, ApiError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ApiError::io(format!("cannot read config {}: {e}", path.display())))?;
        let mut file: FileConfig = toml::from_str(&text)
            .map_err(|e| ApiError::validation(format!("invalid config {}: {e}", path.display())))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        for p in [&mut file.data_dir, &mut file.crosswalk_dir, &mut file.hierarchy].into_iter().flatten() {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        }
        Ok(file)
    }
}

/// Values given on the command line or through the environment; these win
/// over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub base_iri: Option<String>,
    pub data_dir: Option<PathBuf>,
    pub addr: Option<String>,
    pub nanopub_server: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Config {
    pub base: Iri,
    /// `None` keeps everything in memory.
    pub data_dir: Option<PathBuf>,
    pub addr: String,
    pub prefixes: PrefixMap,
    /// Empty allows any origin.
    pub cors_origins: Vec<String>,
    pub crosswalk_dir: Option<PathBuf>,
    pub hierarchy: Option<PathBuf>,
    pub nanopub_server: Option<String>,
}

impl Config {
    pub fn in_memory(base: Iri) -> Self {
        Config {
            base,
            data_dir: None,
            addr: DEFAULT_ADDR.to_string(),
            prefixes: PrefixMap::default(),
            cors_origins: Vec::new(),
            crosswalk_dir: None,
            hierarchy: None,
            nanopub_server: None,
        }
    }

    pub fn resolve(file: FileConfig, overrides: Overrides) -> Result<Self, ApiError> {
        let base = overrides.base_iri.or(file.base_iri).unwrap_or_else(|| DEFAULT_BASE_IRI.to_string());
        let base = Iri::new(base.trim_end_matches('/')).map_err(ApiError::from)?;
        let mut prefixes = PrefixMap::default();
        for (prefix, namespace) in file.prefixes {
            Iri::new(&namespace).map_err(ApiError::from)?;
            prefixes.insert(prefix, namespace);
        }
        Ok(Config {
            base,
            data_dir: overrides.data_dir.or(file.data_dir),
            addr: overrides.addr.or(file.addr).unwrap_or_else(|| DEFAULT_ADDR.to_string()),
            prefixes,
            cors_origins: file.cors_origins,
            crosswalk_dir: file.crosswalk_dir,
            hierarchy: file.hierarchy,
            nanopub_server: overrides.nanopub_server.or(file.nanopub_server).filter(|s| !s.is_empty()),
        })
    }

    pub fn log_path(&self) -> Option<PathBuf> {
        self.data_dir.as_ref().map(|d| d.join("statements.log"))
    }
}
