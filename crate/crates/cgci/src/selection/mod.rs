//! Strategies for choosing a restricted explanatory vector per response.
//!
//! Every strategy evaluates candidate models with the BIC on the common
//! sample that excludes the first `pmax` time points, so criterion values
//! are comparable across candidates of different maximum lag.

mod lars;
mod mbts;
mod stepwise;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::regression::stepfit::StepFit;
use crate::series::{ExplanatoryVector, LaggedTerm, TimeSeriesSet};

pub use lars::{lars_path, lasso_select, LarsPath, LarsStep};
pub use mbts::{mbts_select, mbts_select_with_trace, MbtsTrace};
pub use stepwise::{bottomup_select, topdown_select, PruneOrder};

/// The model selection strategies, plus the unrestricted baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Modified backward-in-time selection.
    Bts,
    /// Top-down pruning, visiting terms lag-by-lag.
    TdLag,
    /// Top-down pruning, visiting terms variable-by-variable.
    TdVar,
    /// Bottom-up growth followed by the lag-major pruning pass.
    BuLag,
    /// Bottom-up growth followed by the variable-major pruning pass.
    BuVar,
    /// LARS path with a BIC stopping rule.
    Lasso,
    /// The unrestricted VAR with every lag of every variable.
    Full,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Bts,
        Method::TdLag,
        Method::TdVar,
        Method::BuLag,
        Method::BuVar,
        Method::Lasso,
        Method::Full,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Method::Bts => "BTS",
            Method::TdLag => "TDlag",
            Method::TdVar => "TDvar",
            Method::BuLag => "BUlag",
            Method::BuVar => "BUvar",
            Method::Lasso => "LASSO",
            Method::Full => "Full",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bts" | "mbts" => Ok(Method::Bts),
            "tdlag" => Ok(Method::TdLag),
            "tdvar" => Ok(Method::TdVar),
            "bulag" => Ok(Method::BuLag),
            "buvar" => Ok(Method::BuVar),
            "lasso" | "lars" => Ok(Method::Lasso),
            "full" | "var" => Ok(Method::Full),
            other => Err(Error::InvalidInput(format!(
                "unknown method '{other}' (expected one of bts, tdlag, tdvar, bulag, buvar, lasso, full)"
            ))),
        }
    }
}

/// Parameters shared by all selection strategies.
#[derive(Debug, Clone)]
pub struct SelectionConfig {
    pub method: Method,
    /// Maximum lag considered for any term.
    pub pmax: usize,
    /// Enables the lasso drop step on the LARS path (default: pure LARS).
    pub lasso_drop: bool,
    /// Reserved for a coefficient-significance stopping rule on the LARS
    /// path; the default BIC rule ignores it.
    pub lasso_alpha: Option<f64>,
}

impl SelectionConfig {
    pub fn new(method: Method, pmax: usize) -> Self {
        SelectionConfig {
            method,
            pmax,
            lasso_drop: false,
            lasso_alpha: None,
        }
    }
}

/// Runs the configured strategy for one response variable.
pub fn select_model(
    ts: &TimeSeriesSet,
    response: usize,
    cfg: &SelectionConfig,
) -> Result<ExplanatoryVector> {
    match cfg.method {
        Method::Bts => mbts_select(ts, response, cfg.pmax),
        Method::TdLag => topdown_select(ts, response, cfg.pmax, PruneOrder::LagMajor),
        Method::TdVar => topdown_select(ts, response, cfg.pmax, PruneOrder::VariableMajor),
        Method::BuLag => bottomup_select(ts, response, cfg.pmax, PruneOrder::LagMajor),
        Method::BuVar => bottomup_select(ts, response, cfg.pmax, PruneOrder::VariableMajor),
        Method::Lasso => lasso_select(ts, response, cfg.pmax, cfg.lasso_drop),
        Method::Full => {
            LagPool::new(ts, response, cfg.pmax).map(|_| full_model(response, ts.k(), cfg.pmax))
        }
    }
}

/// The unrestricted explanatory vector used by [`Method::Full`].
pub fn full_model(response: usize, k: usize, pmax: usize) -> ExplanatoryVector {
    ExplanatoryVector::full(response, k, pmax)
}

/// Lagged regressor columns on the common selection sample
/// `t = pmax..N`, indexed by `(variable, lag)`.
pub(crate) struct LagPool {
    k: usize,
    pmax: usize,
    n_eff: usize,
    response: Vec<f64>,
    cols: Vec<Vec<f64>>,
}

impl LagPool {
    pub fn new(ts: &TimeSeriesSet, response: usize, pmax: usize) -> Result<Self> {
        let n = ts.len();
        let k = ts.k();
        if response >= k {
            return Err(Error::InvalidInput(format!(
                "response index {} out of range for {k} variables",
                response + 1
            )));
        }
        if pmax == 0 {
            return Err(Error::InvalidInput("pmax must be at least 1".into()));
        }
        if n < pmax + 2 {
            return Err(Error::Infeasible(format!(
                "series of length {n} cannot support maximum lag {pmax}"
            )));
        }
        let n_eff = n - pmax;
        let values = ts.values();
        let mut cols = Vec::with_capacity(k * pmax);
        for variable in 0..k {
            for lag in 1..=pmax {
                let col: Vec<f64> = (0..n_eff)
                    .map(|r| values[[pmax + r - lag, variable]])
                    .collect();
                cols.push(col);
            }
        }
        let response_col: Vec<f64> = (0..n_eff).map(|r| values[[pmax + r, response]]).collect();
        Ok(LagPool {
            k,
            pmax,
            n_eff,
            response: response_col,
            cols,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn pmax(&self) -> usize {
        self.pmax
    }

    /// Rows in the common sample, `N - pmax`.
    pub fn n_eff(&self) -> usize {
        self.n_eff
    }

    pub fn col(&self, term: LaggedTerm) -> &[f64] {
        debug_assert!(term.variable < self.k && (1..=self.pmax).contains(&term.lag));
        &self.cols[term.variable * self.pmax + term.lag - 1]
    }

    /// A fresh zero-column fit of the response on the common sample.
    pub fn empty_fit(&self) -> StepFit {
        StepFit::new(self.response.clone())
    }

    pub fn response_col(&self) -> &[f64] {
        &self.response
    }
}
