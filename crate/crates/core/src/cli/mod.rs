//! Input documents, check orchestration and deterministic reports for the
//! `algpat` binary.

pub mod doc;
pub mod fixtures;
pub mod report;
pub mod run;

pub use doc::{load, Document, InputError};
pub use report::{Report, EXIT_INPUT, EXIT_IO};
pub use run::{run, Command, Flags};
