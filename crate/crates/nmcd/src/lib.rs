// SPDX-License-Identifier: MIT OR Apache-2.0

//! Command-line front end and file formats for `nmcd-core`.

pub mod bench;
pub mod cli;
pub mod input;
pub mod report;

/// Version tag written into every JSON and CSV output.
pub const SCHEMA_VERSION: u32 = 1;
