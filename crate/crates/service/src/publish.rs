//! Minimal client for pushing nanopublications to a server that accepts
//! TriG by POST. Publishing is off unless a server URL is configured.

use crate::error::ApiError;

/// Posts `trig` to `server` and returns the published location: the
/// `Location` header when present, otherwise the response body.
pub fn publish(server: Option<&str>, trig: &str) -> Result<String, ApiError> {
    let server = server.ok_or_else(|| {
        ApiError::validation("nanopub publishing is disabled; set ROSETTA_NANOPUB_SERVER or nanopub_server")
    })?;
    let fail = |e: ureq::Error| ApiError::io(format!("publishing to {server} failed: {e}"));
    let response = ureq::post(server).header("Content-Type", "application/trig").send(trig).map_err(fail)?;
    let location = response.headers().get("location").and_then(|v| v.to_str().ok()).map(str::to_string);
    let body = response.into_body().read_to_string().map_err(fail)?;
    Ok(location.unwrap_or_else(|| body.trim().to_string()))
}
