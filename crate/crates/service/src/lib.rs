//! CLI and HTTP front ends for the `snacs-hi` toolkit.

pub mod api;
pub mod cli;

pub use api::{router, ApiCode, ApiError, AppState, SharedState};
pub use cli::run;
