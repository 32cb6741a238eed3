//! Acceptance checks for `relaycap`. The checks live in `tests/acceptance.rs`
//! and run with `cargo test -p relaycap-validation`.
