//! Plain-text serialization of frame-point data (filled in with the CLI).
