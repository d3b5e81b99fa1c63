//! HTTP JSON API.
//!
//! | method | path | body | response |
//! |---|---|---|---|
//! | POST | `/types` | pattern file (JSON or YAML) | 201 type |
//! | GET | `/types` | | types |
//! | GET | `/types/{id}` | | type |
//! | POST | `/types/{id}/reorder` | `{"order": [..]}` | type |
//! | GET | `/types/{id}/preview?fill={json}` | | `{statement_type, text}` |
//! | POST | `/statements` | statement input | 201 statement |
//! | GET | `/statements/{id}?version=n` | | statement, 410 once deleted |
//! | PUT | `/statements/{id}` | `{editor, values}` | statement |
//! | DELETE | `/statements/{id}?by=IRI` | | deletion marker |
//! | PATCH | `/statements/{id}/metadata` | metadata patch | statement |
//! | GET | `/statements/{id}/history` | | change records |
//! | GET | `/statements/{id}/render?version=n` | | rendered text and spans |
//! | GET | `/statements/{id}/mindmap?version=n&format=json\|dot` | | mind map |
//! | GET | `/statements/{id}/nanopub?version=n&hash=bool` | | TriG |
//! | GET | `/export?format=trig\|nquads&archival=bool` | | RDF |
//! | GET | `/search?term=..` | | term groups |
//! | POST | `/search/faceted` | facet query | facet result |
//! | GET | `/crosswalks` | | crosswalks |
//! | POST | `/crosswalks/{name}/apply` | `{statement, version, format}` | crosswalk output |
//!
//! Errors use the [`ApiError`] envelope.

use std::collections::BTreeMap;
use std::sync::Arc;

use axum::extract::{FromRequest, FromRequestParts, Path, Query, Request, State};
use axum::http::request::Parts;
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use rosetta_core::rdf::RdfFormat;
use rosetta_core::renderer::export_mindmap_dot;
use rosetta_core::search::FacetQuery;
use rosetta_core::store::MetadataPatch;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use tower_http::cors::{AllowOrigin, Any, CorsLayer};

use crate::app::App;
use crate::error::ApiError;
use crate::wire::{CrosswalkInput, Preview, ReorderInput, StatementInput, TypeView, UpdateInput};

type Shared = State<Arc<App>>;
type ApiResult<T> = Result<T, ApiError>;

/// JSON body whose rejections use the error envelope.
pub struct Body<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequest<S> for Body<T> {
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, ApiError> {
        Json::<T>::from_request(req, state)
            .await
            .map(|Json(v)| Body(v))
            .map_err(|e| ApiError::validation(e.body_text()))
    }
}

/// Query string whose rejections use the error envelope.
pub struct Params<T>(pub T);

impl<S: Send + Sync, T: DeserializeOwned> FromRequestParts<S> for Params<T> {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, ApiError> {
        Query::<T>::from_request_parts(parts, state)
            .await
            .map(|Query(v)| Params(v))
            .map_err(|e| ApiError::validation(e.body_text()))
    }
}

pub fn router(app: Arc<App>) -> Router {
    let cors = cors(&app.config().cors_origins);
    Router::new()
        .route("/types", get(list_types).post(create_type))
        .route("/types/{id}", get(get_type))
        .route("/types/{id}/reorder", post(reorder_type))
        .route("/types/{id}/preview", get(preview_type))
        .route("/statements", post(create_statement))
        .route("/statements/{id}", get(get_statement).put(update_statement).delete(delete_statement))
        .route("/statements/{id}/metadata", axum::routing::patch(patch_metadata))
        .route("/statements/{id}/history", get(history))
        .route("/statements/{id}/render", get(render))
        .route("/statements/{id}/mindmap", get(mindmap))
        .route("/statements/{id}/nanopub", get(nanopub))
        .route("/export", get(export))
        .route("/search", get(search))
        .route("/search/faceted", post(faceted))
        .route("/crosswalks", get(list_crosswalks))
        .route("/crosswalks/{name}/apply", post(apply_crosswalk))
        .fallback(|| async { ApiError::not_found("no such endpoint") })
        .layer(cors)
        .with_state(app)
}

fn cors(origins: &[String]) -> CorsLayer {
    let layer = CorsLayer::new()
        .allow_methods([Method::GET, Method::POST, Method::PUT, Method::PATCH, Method::DELETE])
        .allow_headers(Any);
    let parsed: Vec<HeaderValue> = origins.iter().filter_map(|o| HeaderValue::from_str(o).ok()).collect();
    if parsed.is_empty() {
        layer.allow_origin(Any)
    } else {
        layer.allow_origin(AllowOrigin::list(parsed))
    }
}

fn text(media_type: &'static str, body: String) -> Response {
    ([(header::CONTENT_TYPE, media_type)], body).into_response()
}

fn format_param(format: Option<&str>) -> ApiResult<RdfFormat> {
    Ok(format.unwrap_or("trig").parse::<RdfFormat>()?)
}

// -- types ----------------------------------------------------------------

async fn list_types(State(app): Shared) -> Json<Vec<TypeView>> {
    Json(app.types().into_iter().map(TypeView::from).collect())
}

async fn create_type(State(app): Shared, body: String) -> ApiResult<(StatusCode, Json<TypeView>)> {
    let pattern = app.define_type(&body)?;
    Ok((StatusCode::CREATED, Json(pattern.into())))
}

async fn get_type(State(app): Shared, Path(id): Path<String>) -> ApiResult<Json<TypeView>> {
    Ok(Json(app.statement_type(&id)?.into()))
}

async fn reorder_type(
    State(app): Shared,
    Path(id): Path<String>,
    Body(input): Body<ReorderInput>,
) -> ApiResult<Json<TypeView>> {
    Ok(Json(app.reorder_type(&id, &input.order)?.into()))
}

#[derive(Deserialize)]
struct PreviewParams {
    /// JSON object of thematic label to text.
    fill: Option<String>,
}

async fn preview_type(
    State(app): Shared,
    Path(id): Path<String>,
    Params(q): Params<PreviewParams>,
) -> ApiResult<Json<Preview>> {
    let fill: BTreeMap<String, String> = match q.fill.as_deref().map(str::trim).filter(|s| !s.is_empty()) {
        Some(json) => serde_json::from_str(json).map_err(|e| ApiError::validation(format!("fill: {e}")))?,
        None => BTreeMap::new(),
    };
    let (pattern, text) = app.preview(&id, &fill)?;
    Ok(Json(Preview { statement_type: pattern.id, text }))
}

// -- statements -----------------------------------------------------------

#[derive(Deserialize)]
struct VersionParams {
    version: Option<u32>,
}

async fn create_statement(State(app): Shared, Body(input): Body<StatementInput>) -> ApiResult<Response> {
    let view = app.create(&input)?;
    let location = HeaderValue::from_str(view.anchor.as_str()).map_err(|e| ApiError::validation(e.to_string()))?;
    Ok((StatusCode::CREATED, [(header::LOCATION, location)], Json(view)).into_response())
}

async fn get_statement(
    State(app): Shared,
    Path(id): Path<String>,
    Params(q): Params<VersionParams>,
) -> ApiResult<Response> {
    Ok(Json(app.view(&app.anchor_iri(&id)?, q.version)?).into_response())
}

async fn update_statement(
    State(app): Shared,
    Path(id): Path<String>,
    Body(input): Body<UpdateInput>,
) -> ApiResult<Response> {
    Ok(Json(app.update(&app.anchor_iri(&id)?, &input)?).into_response())
}

#[derive(Deserialize)]
struct DeleteParams {
    by: Option<String>,
}

async fn delete_statement(
    State(app): Shared,
    Path(id): Path<String>,
    Params(q): Params<DeleteParams>,
) -> ApiResult<Response> {
    let by = q.by.ok_or_else(|| ApiError::validation("query parameter `by` (deleting user IRI) is required"))?;
    Ok(Json(app.delete(&app.anchor_iri(&id)?, &by)?).into_response())
}

async fn patch_metadata(
    State(app): Shared,
    Path(id): Path<String>,
    Body(patch): Body<MetadataPatch>,
) -> ApiResult<Response> {
    Ok(Json(app.set_metadata(&app.anchor_iri(&id)?, patch)?).into_response())
}

async fn history(State(app): Shared, Path(id): Path<String>) -> ApiResult<Response> {
    Ok(Json(app.history(&app.anchor_iri(&id)?)?).into_response())
}

async fn render(State(app): Shared, Path(id): Path<String>, Params(q): Params<VersionParams>) -> ApiResult<Response> {
    Ok(Json(app.engine().render(&app.anchor_iri(&id)?, q.version)?).into_response())
}

#[derive(Deserialize)]
struct MindmapParams {
    version: Option<u32>,
    format: Option<String>,
}

async fn mindmap(State(app): Shared, Path(id): Path<String>, Params(q): Params<MindmapParams>) -> ApiResult<Response> {
    let map = app.engine().mindmap(&app.anchor_iri(&id)?, q.version)?;
    match q.format.as_deref() {
        None | Some("json") => Ok(Json(map).into_response()),
        Some("dot") => Ok(text("text/vnd.graphviz", export_mindmap_dot(&map))),
        Some(other) => Err(ApiError::validation(format!("unknown mind map format {other:?}"))),
    }
}

#[derive(Deserialize)]
struct NanopubParams {
    version: Option<u32>,
    #[serde(default)]
    hash: bool,
}

async fn nanopub(State(app): Shared, Path(id): Path<String>, Params(q): Params<NanopubParams>) -> ApiResult<Response> {
    let trig = app.nanopub(&app.anchor_iri(&id)?, q.version, q.hash)?;
    Ok(text(RdfFormat::TriG.media_type(), trig))
}

// -- export, search, crosswalks ------------------------------------------

#[derive(Deserialize)]
struct ExportParams {
    format: Option<String>,
    #[serde(default)]
    archival: bool,
}

async fn export(State(app): Shared, Params(q): Params<ExportParams>) -> ApiResult<Response> {
    let format = format_param(q.format.as_deref())?;
    if format == RdfFormat::Turtle {
        return Err(ApiError::validation("the export is a dataset; use trig or nquads"));
    }
    Ok(text(format.media_type(), app.export(format, q.archival)?))
}

#[derive(Deserialize)]
struct SearchParams {
    term: String,
}

async fn search(State(app): Shared, Params(q): Params<SearchParams>) -> Response {
    Json(app.engine().search_term(&q.term)).into_response()
}

async fn faceted(State(app): Shared, Body(query): Body<FacetQuery>) -> ApiResult<Response> {
    Ok(Json(app.engine().search_faceted(&query)?).into_response())
}

async fn list_crosswalks(State(app): Shared) -> ApiResult<Response> {
    Ok(Json(app.crosswalks()?).into_response())
}

async fn apply_crosswalk(
    State(app): Shared,
    Path(name): Path<String>,
    Body(input): Body<CrosswalkInput>,
) -> ApiResult<Response> {
    let crosswalk = app.named_crosswalk(&name)?;
    let entity_map = app.entity_map_for(&crosswalk)?;
    let anchor = app.anchor_iri(&input.statement)?;
    let format = format_param(input.format.as_deref())?;
    Ok(Json(app.apply_crosswalk(&crosswalk, &entity_map, &anchor, input.version, format)?).into_response())
}

/// Serves the API until ctrl-c.
pub async fn serve(app: Arc<App>) -> Result<(), ApiError> {
    let addr = app.config().addr.clone();
    let listener = tokio::net::TcpListener::bind(&addr)
        .await
        .map_err(|e| ApiError::io(format!("cannot listen on {addr}: {e}")))?;
    tracing::info!("listening on http://{}", listener.local_addr().map_err(|e| ApiError::io(e.to_string()))?);
    axum::serve(listener, router(app))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| ApiError::io(e.to_string()))
}
