//! Deterministic verification reports (filled in with the CLI).
