//! Acceptance gate only; see `tests/acceptance.rs`.
