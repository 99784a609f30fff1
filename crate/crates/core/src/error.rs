// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

use crate::unicast::IterationTrace;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Out-of-range port/class, mismatched dimensions, bad parameters.
    #[error("configuration error: {0}")]
    Config(String),

    /// A scheduler produced a match that the queues cannot honor.
    #[error("contract violation at slot {slot}: {detail}")]
    ContractViolation {
        slot: u64,
        detail: String,
        trace: Option<Box<IterationTrace>>,
    },

    /// An oracle was asked to enumerate an instance beyond its limit.
    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn violation(slot: u64, detail: impl Into<String>) -> Self {
        Error::ContractViolation {
            slot,
            detail: detail.into(),
            trace: None,
        }
    }
}
