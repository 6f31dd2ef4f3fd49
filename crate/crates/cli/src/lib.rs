//! Library half of the `parares` driver: run configuration (defaults,
//! presets, flat key=value files), file emission (CSV, SVG, pencil dumps),
//! and the error-to-exit-code taxonomy.  The binary in `main.rs` is a thin
//! clap layer over these modules, and the integration suite drives them
//! directly where spawning a process would only obscure a check.

pub mod config;
pub mod emit;
pub mod error;

pub use config::RunConfig;
pub use error::CliError;
