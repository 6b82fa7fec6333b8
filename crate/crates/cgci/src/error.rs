use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by parsing, model fitting, and simulation.
#[derive(Debug, Error)]
pub enum Error {
    /// Structurally invalid caller input: bad dimensions, out-of-range
    /// indices, duplicate lagged terms, malformed arguments.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The sample cannot support the requested model or test
    /// (for example a full VAR with more coefficients than equations,
    /// or an F test with a non-positive denominator degree of freedom).
    #[error("infeasible model: {0}")]
    Infeasible(String),

    /// A design column is numerically constant or an exact linear
    /// combination of the columns already in the model.
    #[error("degenerate design column: {0}")]
    DegenerateColumn(String),

    /// A proposed VAR system fails the stationarity requirement.
    #[error("unstable system: companion spectral radius {rho:.6} is not below 1")]
    NonStationary { rho: f64 },

    /// Map simulation kept diverging after the allowed number of restarts.
    #[error("generation failed: {0}")]
    GenerationFailure(String),

    /// Malformed table or config text, with a 1-based location.
    #[error("parse error at line {line}{}: {message}", .column.map(|c| format!(", column {c}")).unwrap_or_default())]
    Parse {
        line: usize,
        column: Option<usize>,
        message: String,
    },

    /// Underlying I/O failure, annotated with the path involved.
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column: None,
            message: message.into(),
        }
    }

    pub(crate) fn parse_at(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column: Some(column),
            message: message.into(),
        }
    }

    /// True for conditions where the requested model cannot be estimated on
    /// the given sample, as opposed to malformed input.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::Infeasible(_)
                | Error::DegenerateColumn(_)
                | Error::NonStationary { .. }
                | Error::GenerationFailure(_)
        )
    }
}
