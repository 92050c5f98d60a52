// SPDX-License-Identifier: MIT OR Apache-2.0

//! Acceptance studies live in `tests/acceptance.rs`; run them with
//! `cargo test -p nmcd-validation`.
