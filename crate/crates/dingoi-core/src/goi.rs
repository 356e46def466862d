//! GoI execution (placeholder while the foundation builds).
