//! Paths (placeholder while the foundation builds).
