// SPDX-License-Identifier: MIT OR Apache-2.0

use alloc::string::String;

/// Errors raised by the detection core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NmcdError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("value outside domain: {0}")]
    Domain(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
}

pub type Result<T> = core::result::Result<T, NmcdError>;

impl NmcdError {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Self::InvalidInput(msg.into())
    }

    pub(crate) fn index(msg: impl Into<String>) -> Self {
        Self::IndexOutOfRange(msg.into())
    }
}
