//! Spin^c spinor-calculus engine.
//!
//! Exact-arithmetic Clifford representations in arbitrary signature, spinor
//! bilinears, pointwise twistor and curvature residuals, hard-coded
//! low-dimensional orbit data, and a numerical chart pipeline that verifies
//! the CR/Fefferman construction. The `ccks` binary drives the whole thing
//! and emits deterministic reports.

pub mod bilinear;
pub mod clifford;
pub mod error;
pub mod forms;
pub mod io;
pub mod lowdim;
pub mod matrix;
pub mod numgeo;
pub mod pointwise;
pub mod report;
pub mod scalar;

pub use error::CcksError;

/// Version stamp embedded in reports.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
