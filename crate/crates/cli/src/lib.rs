//! File formats and report building for the `unpol` command-line tool.
//!
//! Serialization is canonical: fixed key order, floats printed with 17
//! significant digits (exact for f64), zero blocks omitted. Saving a loaded
//! document therefore reproduces it byte for byte, and reports diff cleanly.

pub mod canon;
pub mod report;
pub mod statefile;

pub use report::ReportFile;
pub use statefile::{Metadata, StateFile, StateFileError};
