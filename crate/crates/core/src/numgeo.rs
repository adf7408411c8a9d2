//! Chart-based numerical differential geometry (under construction).
