use thiserror::Error;

/// Errors produced while loading inputs or evaluating metrics.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed line in an edge list, partition or rank-series file.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// I/O failure while reading an input stream.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// Operation called outside its domain (invalid vertex, empty set, bad sizes).
    #[error("{0}")]
    Domain(String),

    /// Partition inconsistent with the graph it is applied to.
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    /// Graph exceeds the hard limit of the exhaustive partition search.
    #[error("graph has {vertices} vertices, exhaustive search is limited to {limit}")]
    TooLarge { vertices: usize, limit: usize },

    /// Not enough records remain after filtering to build the requested report.
    #[error("need at least {needed} records after filtering, got {got}; pool more partitions or skip the report")]
    InsufficientRecords { needed: usize, got: usize },
}

impl Error {
    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Renders an offender list for validation messages, truncating long tails.
pub(crate) fn offender_list(items: &[String]) -> String {
    const SHOWN: usize = 8;
    if items.len() <= SHOWN {
        items.join(", ")
    } else {
        format!(
            "{}, ... ({} more)",
            items[..SHOWN].join(", "),
            items.len() - SHOWN
        )
    }
}
