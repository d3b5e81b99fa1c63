//! The `rosetta` command line.
//!
//! Values given with `--subject` and `--set LABEL=VALUE` are read by the
//! kind of their position: resource positions take `IRI` or `IRI|label`
//! (CURIEs of the configured prefixes work), literal positions take the
//! lexical form. Repeat `--set` for several values of one position.
//!
//! Failures print `error: CODE: message` on standard error and exit with
//! the code's status (see [`crate::error::exit_code`]); usage errors exit
//! with 2.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rosetta_core::crosswalk::EntityMap;
use rosetta_core::metamodel::{PositionSpec, StatementPattern, ValueKind};
use rosetta_core::rdf::{PrefixMap, RdfFormat};
use rosetta_core::renderer::export_mindmap_dot;
use rosetta_core::search::{FacetFilter, FacetQuery};

use crate::app::App;
use crate::config::{Config, FileConfig, Overrides};
use crate::error::ApiError;
use crate::wire::{expand_iri, MetadataInput, StatementInput, UpdateInput, WireValue};

pub const DEFAULT_DATA_DIR: &str = "rosetta-data";

#[derive(Debug, Parser)]
#[command(name = "rosetta", version, about = "Statement-level knowledge graph store")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML config file.
    #[arg(long, global = true, env = "ROSETTA_CONFIG")]
    pub config: Option<PathBuf>,
    /// Data directory holding the statement log.
    #[arg(long, global = true, env = "ROSETTA_DATA")]
    pub data: Option<PathBuf>,
    /// Base IRI for minted statement, type and version IRIs.
    #[arg(long, global = true, env = "ROSETTA_BASE_IRI")]
    pub base_iri: Option<String>,
    /// IRI recorded as creator, editor or deleter.
    #[arg(long, global = true, env = "ROSETTA_USER")]
    pub user: Option<String>,
    /// Nanopublication server URL; publishing is disabled without it.
    #[arg(long, global = true, env = "ROSETTA_NANOPUB_SERVER")]
    pub nanopub_server: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Statement types.
    #[command(subcommand)]
    Type(TypeCommand),
    /// Statements.
    #[command(subcommand)]
    Stmt(StmtCommand),
    /// Write the whole store as RDF.
    Export {
        #[arg(long, default_value = "trig")]
        format: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Keep the versions of deleted statements.
        #[arg(long)]
        archival: bool,
    },
    /// Print a statement version as a nanopublication.
    Nanopub {
        id: String,
        #[arg(long)]
        version: Option<u32>,
        /// Content-hashed identifier.
        #[arg(long)]
        hash: bool,
        /// Post it to the configured nanopublication server.
        #[arg(long)]
        publish: bool,
    },
    /// Statements whose values contain every word of TERM.
    Search {
        #[arg(required = true, num_args = 1..)]
        term: Vec<String>,
    },
    /// Faceted search over one statement type.
    Facet {
        #[arg(long = "type")]
        statement_type: String,
        /// `LABEL=MIN..MAX`, `LABEL=IRI[,IRI...]`, `LABEL=text` or `LABEL==exact text`.
        #[arg(long = "filter")]
        filters: Vec<String>,
        #[arg(long)]
        include_deleted: bool,
    },
    /// Crosswalks to other schemas.
    #[command(subcommand)]
    Crosswalk(CrosswalkCommand),
    /// Run the HTTP API.
    Serve {
        #[arg(long, env = "ROSETTA_ADDR")]
        addr: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum TypeCommand {
    /// Define a type from a pattern file (YAML or JSON).
    Create {
        #[arg(short = 'f', long, required_unless_present = "bundled")]
        file: Option<PathBuf>,
        /// Define the bundled example types instead.
        #[arg(long, conflicts_with = "file")]
        bundled: bool,
    },
    List,
    Show {
        id: String,
    },
    /// Reorder object positions by their current 1-based indices.
    Reorder {
        id: String,
        #[arg(required = true, num_args = 1..)]
        order: Vec<usize>,
    },
    /// The editor preview for partially filled positions.
    Preview {
        id: String,
        #[arg(long = "set")]
        set: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum StmtCommand {
    Add {
        /// Type label or IRI.
        #[arg(long = "type")]
        statement_type: String,
        /// Subject value, repeatable. Resources are `IRI|label`.
        #[arg(long)]
        subject: Vec<String>,
        /// `LABEL=VALUE`, repeatable for multi-valued positions.
        #[arg(long = "set")]
        set: Vec<String>,
        #[arg(long)]
        negated: bool,
        /// Between 0 and 1.
        #[arg(long)]
        confidence: Option<f64>,
        /// Source the statement was taken from, repeatable.
        #[arg(long = "context")]
        context: Vec<String>,
        #[arg(long)]
        author: Option<String>,
        #[arg(long)]
        license: Option<String>,
        #[arg(long)]
        extraction_method: Option<String>,
        /// Refuse later edits.
        #[arg(long)]
        locked: bool,
    },
    Update {
        id: String,
        /// `LABEL=VALUE`; repeating a label replaces all its values.
        #[arg(long = "set")]
        set: Vec<String>,
        /// Empty an optional position.
        #[arg(long = "clear")]
        clear: Vec<String>,
    },
    Delete {
        id: String,
    },
    Show {
        id: String,
        #[arg(long)]
        version: Option<u32>,
    },
    Render {
        id: String,
        #[arg(long)]
        version: Option<u32>,
    },
    History {
        id: String,
    },
    Mindmap {
        id: String,
        #[arg(long)]
        version: Option<u32>,
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum CrosswalkCommand {
    /// Apply a crosswalk to one statement.
    Apply {
        /// Crosswalk document.
        #[arg(long, required_unless_present = "name")]
        spec: Option<PathBuf>,
        /// A registered crosswalk instead of a file.
        #[arg(long, conflicts_with = "spec")]
        name: Option<String>,
        /// Entity map (SSSOM-style TSV); defaults to the one the crosswalk names.
        #[arg(long)]
        map: Option<PathBuf>,
        id: String,
        #[arg(long)]
        version: Option<u32>,
        #[arg(long, default_value = "trig")]
        format: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    List,
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(details) = &e.details {
                eprintln!("{}", serde_json::to_string_pretty(details).unwrap_or_default());
            }
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn config(global: &GlobalArgs) -> Result<Config, ApiError> {
    let file = match &global.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let mut config = Config::resolve(
        file,
        Overrides {
            base_iri: global.base_iri.clone(),
            data_dir: global.data.clone(),
            addr: None,
            nanopub_server: global.nanopub_server.clone(),
        },
    )?;
    config.data_dir.get_or_insert_with(|| PathBuf::from(DEFAULT_DATA_DIR));
    Ok(config)
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), ApiError> {
    let mut config = config(&cli.global)?;
    if let Command::Serve { addr: Some(addr) } = &cli.command {
        config.addr = addr.clone();
    }
    let app = Arc::new(App::open(config)?);
    let user = match &cli.global.user {
        Some(u) => u.clone(),
        None => {
            let name = std::env::var("USER").ok().filter(|u| !u.is_empty()).unwrap_or_else(|| "anonymous".into());
            app.config().base.join("user").join(&name).to_string()
        }
    };
    execute(&app, cli.command, &user, out)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), ApiError> {
    writeln!(out, "{text}").map_err(|e| ApiError::io(e.to_string()))
}

fn emit_json<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> Result<(), ApiError> {
    emit(out, &serde_json::to_string_pretty(value).map_err(|e| ApiError::io(e.to_string()))?)
}

fn write_or_emit(out: &mut dyn Write, path: Option<&PathBuf>, text: &str) -> Result<(), ApiError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| ApiError::io(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| ApiError::io(e.to_string())),
    }
}

fn read(path: &PathBuf) -> Result<String, ApiError> {
    std::fs::read_to_string(path).map_err(|e| ApiError::io(format!("cannot read {}: {e}", path.display())))
}

pub fn execute(app: &Arc<App>, command: Command, user: &str, out: &mut dyn Write) -> Result<(), ApiError> {
    match command {
        Command::Type(cmd) => types(app, cmd, out),
        Command::Stmt(cmd) => statements(app, cmd, user, out),
        Command::Export { format, output, archival } => {
            let format: RdfFormat = format.parse()?;
            if format == RdfFormat::Turtle {
                return Err(ApiError::validation("the export is a dataset; use trig or nquads"));
            }
            write_or_emit(out, output.as_ref(), &app.export(format, archival)?)
        }
        Command::Nanopub { id, version, hash, publish } => {
            let trig = app.nanopub(&app.anchor_iri(&id)?, version, hash)?;
            if publish {
                emit(out, &crate::publish::publish(app.config().nanopub_server.as_deref(), &trig)?)
            } else {
                write_or_emit(out, None, &trig)
            }
        }
        Command::Search { term } => emit_json(out, &app.engine().search_term(&term.join(" "))),
        Command::Facet { statement_type, filters, include_deleted } => {
            let pattern = app.statement_type(&statement_type)?;
            let mut query = FacetQuery::new(pattern.id.to_string());
            query.include_deleted = include_deleted;
            for f in &filters {
                let (label, filter) = parse_filter(f, &pattern, &app.config().prefixes)?;
                query.facet_filters.insert(label, filter);
            }
            emit_json(out, &app.engine().search_faceted(&query)?)
        }
        Command::Crosswalk(CrosswalkCommand::List) => emit_json(out, &app.crosswalks()?),
        Command::Crosswalk(CrosswalkCommand::Apply { spec, name, map, id, version, format, output }) => {
            let crosswalk = match (spec, name) {
                (Some(path), _) => app.compile_crosswalk(&read(&path)?)?,
                (None, Some(name)) => app.named_crosswalk(&name)?,
                (None, None) => return Err(ApiError::validation("give --spec FILE or --name NAME")),
            };
            let entity_map = match map {
                Some(path) => EntityMap::from_tsv(&read(&path)?)?,
                None => app.entity_map_for(&crosswalk)?,
            };
            let result =
                app.apply_crosswalk(&crosswalk, &entity_map, &app.anchor_iri(&id)?, version, format.parse()?)?;
            write_or_emit(out, output.as_ref(), &result.document)
        }
        Command::Serve { .. } => serve(app.clone()),
    }
}

fn serve(app: Arc<App>) -> Result<(), ApiError> {
    let _ = tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .with_writer(std::io::stderr)
        .try_init();
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| ApiError::io(e.to_string()))?;
    runtime.block_on(crate::api::serve(app))
}

fn types(app: &App, cmd: TypeCommand, out: &mut dyn Write) -> Result<(), ApiError> {
    match cmd {
        TypeCommand::Create { file: Some(path), .. } => {
            let p = app.define_type(&read(&path)?)?;
            emit(out, &format!("{}\t{}", p.id, p.label))
        }
        TypeCommand::Create { file: None, .. } => {
            for p in app.define_bundled_types()? {
                emit(out, &format!("{}\t{}", p.id, p.label))?;
            }
            Ok(())
        }
        TypeCommand::List => {
            for p in app.types() {
                emit(out, &format!("{}\t{}\t{}", p.id, p.label, p.formalized_statement()))?;
            }
            Ok(())
        }
        TypeCommand::Show { id } => emit_json(out, &crate::wire::TypeView::from(app.statement_type(&id)?)),
        TypeCommand::Reorder { id, order } => {
            let p = app.reorder_type(&id, &order)?;
            emit(out, &p.formalized_statement())
        }
        TypeCommand::Preview { id, set } => {
            let fill = set.iter().map(|s| split_assignment(s)).collect::<Result<BTreeMap<_, _>, _>>()?;
            emit(out, &app.preview(&id, &fill)?.1)
        }
    }
}

fn statements(app: &App, cmd: StmtCommand, user: &str, out: &mut dyn Write) -> Result<(), ApiError> {
    match cmd {
        StmtCommand::Add {
            statement_type,
            subject,
            set,
            negated,
            confidence,
            context,
            author,
            license,
            extraction_method,
            locked,
        } => {
            let pattern = app.statement_type(&statement_type)?;
            let mut values = assignments(&set, &pattern)?;
            let subject_label = pattern.subject.thematic_label.clone();
            if values.contains_key(&subject_label) && !subject.is_empty() {
                return Err(ApiError::validation(format!("{subject_label} given by both --subject and --set")));
            }
            if !subject.is_empty() {
                let parsed = subject.iter().map(|s| wire_value(s, Some(&pattern.subject))).collect();
                values.insert(subject_label, parsed);
            }
            let input = StatementInput {
                statement_type: pattern.id.to_string(),
                values,
                transitive: BTreeMap::new(),
                metadata: MetadataInput {
                    creator: user.to_string(),
                    creation_date: None,
                    author,
                    curator: None,
                    extraction_method,
                    imported_from: None,
                    license,
                },
                context_refs: context,
                modifiable: Some(!locked),
                negated,
                confidence_level: confidence,
            };
            let view = app.create(&input)?;
            emit(out, view.anchor.as_str())?;
            emit(out, &view.rendered.text)
        }
        StmtCommand::Update { id, set, clear } => {
            let anchor = app.anchor_iri(&id)?;
            let (_, _, pattern) = app.engine().live(&anchor, None)?;
            let mut values = assignments(&set, &pattern)?;
            for label in clear {
                if values.insert(label.clone(), Vec::new()).is_some_and(|v| !v.is_empty()) {
                    return Err(ApiError::validation(format!("{label} is both set and cleared")));
                }
            }
            let view = app.update(&anchor, &UpdateInput { editor: user.to_string(), values })?;
            emit(out, &format!("version {}", view.version.version_number))?;
            emit(out, &view.rendered.text)
        }
        StmtCommand::Delete { id } => {
            let marker = app.delete(&app.anchor_iri(&id)?, user)?;
            emit(out, &format!("deleted {} at {}", marker.anchor, marker.deleted_at.to_rfc3339()))
        }
        StmtCommand::Show { id, version } => emit_json(out, &app.view(&app.anchor_iri(&id)?, version)?),
        StmtCommand::Render { id, version } => {
            emit(out, &app.engine().render(&app.anchor_iri(&id)?, version)?.text)
        }
        StmtCommand::History { id } => emit_json(out, &app.history(&app.anchor_iri(&id)?)?),
        StmtCommand::Mindmap { id, version, dot } => {
            let map = app.engine().mindmap(&app.anchor_iri(&id)?, version)?;
            if dot {
                write_or_emit(out, None, &export_mindmap_dot(&map))
            } else {
                emit_json(out, &map)
            }
        }
    }
}

fn split_assignment(s: &str) -> Result<(String, String), ApiError> {
    let (label, value) =
        s.split_once('=').ok_or_else(|| ApiError::validation(format!("expected LABEL=VALUE, got {s:?}")))?;
    Ok((label.trim().to_string(), value.to_string()))
}

/// Reads one command-line value for a position.
pub fn wire_value(text: &str, spec: Option<&PositionSpec>) -> WireValue {
    match spec.map(|s| s.value_kind) {
        Some(ValueKind::Resource) => {
            let (iri, label) = match text.split_once('|') {
                Some((iri, label)) => (iri.trim(), Some(label.trim().to_string())),
                None => (text.trim(), None),
            };
            WireValue::Resource { iri: iri.to_string(), label }
        }
        _ => WireValue::Literal { lexical: text.to_string(), datatype: None },
    }
}

fn assignments(set: &[String], pattern: &StatementPattern) -> Result<BTreeMap<String, Vec<WireValue>>, ApiError> {
    let mut values: BTreeMap<String, Vec<WireValue>> = BTreeMap::new();
    for s in set {
        let (label, value) = split_assignment(s)?;
        let wire = wire_value(&value, pattern.position(&label));
        values.entry(label).or_default().push(wire);
    }
    Ok(values)
}

/// `LABEL=MIN..MAX` (either bound may be empty), `LABEL=IRI[,IRI...]` on
/// resource positions, `LABEL==text` for an exact match and `LABEL=text`
/// for a substring match.
pub fn parse_filter(
    s: &str,
    pattern: &StatementPattern,
    prefixes: &PrefixMap,
) -> Result<(String, FacetFilter), ApiError> {
    let (label, value) = split_assignment(s)?;
    let spec = pattern
        .position(&label)
        .ok_or_else(|| ApiError::validation(format!("{} has no position {label}", pattern.label)))?;
    let ordered = spec.literal_datatype.is_some_and(|d| d.is_ordered());
    let filter = if spec.value_kind == ValueKind::Resource {
        let values = value.split(',').map(|v| expand_iri(v, prefixes)).collect::<Result<_, _>>()?;
        FacetFilter::OneOf { values }
    } else if let Some((min, max)) = value.split_once("..").filter(|_| ordered) {
        let bound = |b: &str| Some(b.trim().to_string()).filter(|b| !b.is_empty());
        FacetFilter::Range { min: bound(min), max: bound(max) }
    } else if let Some(exact) = value.strip_prefix('=') {
        FacetFilter::Text { value: exact.to_string(), exact: true }
    } else {
        FacetFilter::Text { value, exact: false }
    };
    Ok((label, filter))
}
