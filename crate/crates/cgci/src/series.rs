//! Multivariate time series container and lagged-term bookkeeping.

use std::fmt;

use ndarray::{Array2, ArrayView1};

use crate::error::{Error, Result};

/// A set of `K` simultaneously sampled series of common length `N`.
///
/// Values are stored time-major: row `t` holds the sample of every variable
/// at time `t`.  All values must be finite and `N >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesSet {
    names: Vec<String>,
    values: Array2<f64>,
}

impl TimeSeriesSet {
    /// Builds a series set from named columns; `values` has shape `(N, K)`.
    pub fn new(names: Vec<String>, values: Array2<f64>) -> Result<Self> {
        let (n, k) = values.dim();
        if k == 0 {
            return Err(Error::InvalidInput("at least one variable required".into()));
        }
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "at least 2 time points required, got {n}"
            )));
        }
        if names.len() != k {
            return Err(Error::InvalidInput(format!(
                "{} names for {k} variables",
                names.len()
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            let (row, col) = (bad / k, bad % k);
            return Err(Error::InvalidInput(format!(
                "non-finite value for variable {} at time {row}",
                names[col]
            )));
        }
        Ok(TimeSeriesSet { names, values })
    }

    /// Builds a series set with default names `X1..XK`.
    pub fn with_default_names(values: Array2<f64>) -> Result<Self> {
        let names = (1..=values.ncols()).map(|i| format!("X{i}")).collect();
        TimeSeriesSet::new(names, values)
    }

    /// Number of variables `K`.
    pub fn k(&self) -> usize {
        self.values.ncols()
    }

    /// Number of time points `N`.
    pub fn len(&self) -> usize {
        self.values.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.values.nrows() == 0
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Time-major value matrix of shape `(N, K)`.
    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// The full sample of one variable.
    pub fn variable(&self, k: usize) -> ArrayView1<'_, f64> {
        self.values.column(k)
    }

    /// Returns a copy with every variable shifted to zero sample mean.
    ///
    /// Idempotent up to floating-point roundoff: applying it twice moves
    /// values by at most a few ulps.
    pub fn demean(&self) -> TimeSeriesSet {
        let n = self.len() as f64;
        let mut values = self.values.clone();
        for mut col in values.columns_mut() {
            let mean = col.sum() / n;
            col.mapv_inplace(|v| v - mean);
        }
        TimeSeriesSet {
            names: self.names.clone(),
            values,
        }
    }

    /// The contiguous sub-series of `length` points starting at `start`.
    pub fn window(&self, start: usize, length: usize) -> Result<TimeSeriesSet> {
        if length < 2 {
            return Err(Error::InvalidInput(format!(
                "window of {length} points is too short"
            )));
        }
        let end = start.checked_add(length).filter(|&e| e <= self.len());
        let Some(end) = end else {
            return Err(Error::InvalidInput(format!(
                "window {start}..{} exceeds series length {}",
                start + length,
                self.len()
            )));
        };
        Ok(TimeSeriesSet {
            names: self.names.clone(),
            values: self.values.slice(ndarray::s![start..end, ..]).to_owned(),
        })
    }
}

/// One lagged regressor `X_{variable, t-lag}`.
///
/// `variable` is a 0-based column index; `lag` is at least 1.  The derived
/// ordering (variable first, then lag) is the tie-break order used by the
/// selection strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaggedTerm {
    pub variable: usize,
    pub lag: usize,
}

impl LaggedTerm {
    pub fn new(variable: usize, lag: usize) -> Self {
        LaggedTerm { variable, lag }
    }
}

impl fmt::Display for LaggedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}@{}", self.variable + 1, self.lag)
    }
}

/// An ordered set of lagged regressors explaining one response variable.
///
/// Terms are kept in the order they were added; duplicates are rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplanatoryVector {
    response: usize,
    terms: Vec<LaggedTerm>,
}

impl ExplanatoryVector {
    /// An empty explanatory vector for the given 0-based response variable.
    pub fn new(response: usize) -> Self {
        ExplanatoryVector {
            response,
            terms: Vec::new(),
        }
    }

    /// Builds a vector from explicit terms, validating lags and uniqueness.
    pub fn with_terms(response: usize, terms: Vec<LaggedTerm>) -> Result<Self> {
        let mut ev = ExplanatoryVector::new(response);
        for term in terms {
            ev.push(term)?;
        }
        Ok(ev)
    }

    /// The unrestricted model: every variable in `0..k` at every lag in
    /// `1..=pmax`, variable-major.
    pub fn full(response: usize, k: usize, pmax: usize) -> Self {
        let mut terms = Vec::with_capacity(k * pmax);
        for variable in 0..k {
            for lag in 1..=pmax {
                terms.push(LaggedTerm { variable, lag });
            }
        }
        ExplanatoryVector { response, terms }
    }

    pub fn response(&self) -> usize {
        self.response
    }

    pub fn terms(&self) -> &[LaggedTerm] {
        &self.terms
    }

    /// Number of terms `P_j`.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest lag present, or 0 for the empty vector.
    pub fn max_lag(&self) -> usize {
        self.terms.iter().map(|t| t.lag).max().unwrap_or(0)
    }

    pub fn contains(&self, term: LaggedTerm) -> bool {
        self.terms.contains(&term)
    }

    /// Appends a term; duplicates are an error.
    pub fn push(&mut self, term: LaggedTerm) -> Result<()> {
        if term.lag == 0 {
            return Err(Error::InvalidInput(format!(
                "lag must be at least 1 for variable {}",
                term.variable + 1
            )));
        }
        if self.contains(term) {
            return Err(Error::InvalidInput(format!("duplicate term {term}")));
        }
        self.terms.push(term);
        Ok(())
    }

    /// Number of terms involving `variable` (the pair count `p_i`).
    pub fn count_variable(&self, variable: usize) -> usize {
        self.terms.iter().filter(|t| t.variable == variable).count()
    }

    /// Copy with every term of `variable` deleted; term order is preserved.
    pub fn without_variable(&self, variable: usize) -> ExplanatoryVector {
        ExplanatoryVector {
            response: self.response,
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|t| t.variable != variable)
                .collect(),
        }
    }

    /// Terms in canonical (variable, lag) order, for set-wise comparisons.
    pub fn sorted_terms(&self) -> Vec<LaggedTerm> {
        let mut terms = self.terms.clone();
        terms.sort();
        terms
    }
}

impl fmt::Display for ExplanatoryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{} ~", self.response + 1)?;
        if self.terms.is_empty() {
            return write!(f, " -");
        }
        for term in &self.terms {
            write!(f, " {term}")?;
        }
        Ok(())
    }
}
