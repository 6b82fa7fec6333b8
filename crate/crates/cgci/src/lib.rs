//! Direct Granger causality for multivariate time series via restricted
//! vector autoregressive models.
//!
//! For every response variable the crate fits either the full VAR of order
//! `pmax` or a sparse explanatory vector chosen by a sequential strategy
//! (backward-in-time selection, top-down pruning, bottom-up growth, or
//! LARS/lasso), then derives the conditional Granger causality index for
//! each ordered pair of variables together with an F test and an
//! FDR-corrected causality graph.  Companion modules simulate benchmark
//! systems, score detected graphs against ground truth, run Monte Carlo
//! comparisons, and provide sliding-window connectivity analysis plus the
//! text formats used by the `cgci` command-line tool.

mod error;

pub mod benchmark;
pub mod causality;
pub mod io;
pub mod regression;
pub mod selection;
pub mod series;
pub mod simulate;
pub mod special;
pub mod window;

pub use causality::{analyze, causality_matrix, CausalityMatrix, TestMode};
pub use error::{Error, Result};
pub use selection::{select_model, Method, SelectionConfig};
pub use series::{ExplanatoryVector, LaggedTerm, TimeSeriesSet};
