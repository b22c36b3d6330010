//! File formats, resumable sessions and the end-to-end driver for
//! `picard-core`: from a double sextic `w^2 = f(x, y, z)` to a sublattice of
//! its geometric Picard lattice and a verdict on whether it is all of it.

pub mod codec;
pub mod count;
pub mod input;
pub mod pipeline;
pub mod report;
pub mod session;

pub use pipeline::{run_pipeline, run_pipeline_with, Outcome};
pub use report::Report;
pub use session::{load_session, save_session, Options, Session, SESSION_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum KitError {
    #[error(transparent)]
    Core(#[from] picard_core::Error),
    #[error("{0}")]
    Format(String),
    #[error("{0}: {1}")]
    Io(String, String),
    #[error("session format {found:?} is not supported (expected {expected:?}); recreate the session")]
    Version { found: String, expected: String },
    #[error("{0}")]
    Rejected(String),
    #[error("integer {0} does not fit in 64 bits")]
    Overflow(String),
}
