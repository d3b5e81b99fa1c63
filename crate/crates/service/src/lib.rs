//! HTTP JSON API and command-line interface over the statement engine.

pub mod api;
pub mod app;
pub mod cli;
pub mod config;
pub mod error;
pub mod publish;
pub mod wire;

pub use app::App;
pub use error::ApiError;
