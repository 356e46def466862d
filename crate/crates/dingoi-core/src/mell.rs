//! Promotion extension (placeholder while the foundation builds).
