//! Design construction, ordinary least squares, and the BIC.
//!
//! Every model in this crate is an intercept-free regression of a response
//! sample on lagged columns of the same series set; series are expected to
//! have been de-meaned once at ingestion.

pub(crate) mod stepfit;
mod svd;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};

use crate::error::{Error, Result};
use crate::series::{ExplanatoryVector, TimeSeriesSet};

/// Outcome of one least-squares fit.
#[derive(Debug, Clone)]
pub struct FitResult {
    /// Coefficients aligned with the design columns.
    pub coefficients: Vec<f64>,
    /// Response minus fitted values.
    pub residuals: Vec<f64>,
    /// Residual sum of squares.
    pub sse: f64,
    /// Maximum-likelihood residual variance `SSE / n_eff`.
    pub sigma2: f64,
    /// Number of equations (rows) in the fit.
    pub n_eff: usize,
    /// `bic(self, coefficients.len())`, cached at fit time.
    pub bic: f64,
    /// Set when the design was rank deficient; the coefficients are then the
    /// minimum-norm solution and downstream tests treat the fit as failed.
    pub condition_flag: bool,
}

/// Materializes the design matrix and response for `ev` with the first
/// `offset` time points excluded; row `r` regresses time `offset + r`.
///
/// `offset` must be at least the largest lag in `ev` and leave at least one
/// row.
pub fn build_design(
    ts: &TimeSeriesSet,
    ev: &ExplanatoryVector,
    offset: usize,
) -> Result<(Array2<f64>, Array1<f64>)> {
    let n = ts.len();
    let k = ts.k();
    if ev.response() >= k {
        return Err(Error::InvalidInput(format!(
            "response index {} out of range for {k} variables",
            ev.response() + 1
        )));
    }
    if let Some(term) = ev.terms().iter().find(|t| t.variable >= k) {
        return Err(Error::InvalidInput(format!(
            "term {term} out of range for {k} variables"
        )));
    }
    if offset < ev.max_lag() {
        return Err(Error::InvalidInput(format!(
            "sample offset {offset} is smaller than the maximum lag {}",
            ev.max_lag()
        )));
    }
    if offset >= n {
        return Err(Error::InvalidInput(format!(
            "sample offset {offset} leaves no rows in a series of length {n}"
        )));
    }
    let rows = n - offset;
    let values = ts.values();
    let mut design = Array2::zeros((rows, ev.len()));
    for (m, term) in ev.terms().iter().enumerate() {
        for r in 0..rows {
            design[[r, m]] = values[[offset + r - term.lag, term.variable]];
        }
    }
    let response = Array1::from_iter((0..rows).map(|r| values[[offset + r, ev.response()]]));
    Ok((design, response))
}

/// Intercept-free ordinary least squares.
///
/// Rank-deficient designs are solved for the minimum-norm solution with
/// `condition_flag` set instead of failing.
pub fn ols_fit(design: ArrayView2<'_, f64>, response: ArrayView1<'_, f64>) -> Result<FitResult> {
    let (rows, cols) = design.dim();
    if rows == 0 || response.is_empty() {
        return Err(Error::InvalidInput("empty regression sample".into()));
    }
    if rows != response.len() {
        return Err(Error::InvalidInput(format!(
            "{rows} design rows for {} response values",
            response.len()
        )));
    }

    let y: Vec<f64> = response.to_vec();
    let mut fit = stepfit::StepFit::new(y);
    let mut degenerate = false;
    for col in design.columns() {
        let col: Vec<f64> = col.to_vec();
        if fit.push_column(&col).is_none() {
            degenerate = true;
            break;
        }
    }

    let (coefficients, condition_flag) = if degenerate {
        let (beta, _rank) = svd::min_norm_lstsq(design, response);
        (beta, true)
    } else {
        (fit.coefficients(), false)
    };

    let mut residuals = response.to_vec();
    for (m, beta) in coefficients.iter().enumerate() {
        if *beta != 0.0 {
            for (r, res) in residuals.iter_mut().enumerate() {
                *res -= beta * design[[r, m]];
            }
        }
    }
    let sse: f64 = residuals.iter().map(|v| v * v).sum();
    let n_eff = rows;
    let sigma2 = sse / n_eff as f64;
    let bic = bic_value(sse, n_eff, cols);
    Ok(FitResult {
        coefficients,
        residuals,
        sse,
        sigma2,
        n_eff,
        bic,
        condition_flag,
    })
}

/// Fits `ev` on the sample starting at `offset` in one call.
pub fn fit_model(ts: &TimeSeriesSet, ev: &ExplanatoryVector, offset: usize) -> Result<FitResult> {
    let (design, response) = build_design(ts, ev, offset)?;
    ols_fit(design.view(), response.view())
}

/// Bayesian information criterion of a fit under an alternative parameter
/// count: `n_eff ln(SSE / n_eff) + m ln(n_eff)`.
///
/// A perfect fit (`SSE = 0`) yields negative infinity, which orders below
/// every attainable criterion value and marks the fit as degenerate.
pub fn bic(fit: &FitResult, n_params: usize) -> f64 {
    bic_value(fit.sse, fit.n_eff, n_params)
}

pub(crate) fn bic_value(sse: f64, n_eff: usize, n_params: usize) -> f64 {
    let n = n_eff as f64;
    let sigma2 = sse / n;
    if sigma2 <= 0.0 {
        return f64::NEG_INFINITY;
    }
    n * sigma2.ln() + n_params as f64 * n.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::LaggedTerm;
    use ndarray::array;

    fn series(cols: Vec<Vec<f64>>) -> TimeSeriesSet {
        let n = cols[0].len();
        let k = cols.len();
        let values = Array2::from_shape_fn((n, k), |(t, j)| cols[j][t]);
        TimeSeriesSet::with_default_names(values).unwrap()
    }

    #[test]
    fn design_single_lag_hand_indexed() {
        let ts = series(vec![vec![1.0, 2.0, 3.0, 4.0]]);
        let ev =
            ExplanatoryVector::with_terms(0, vec![LaggedTerm::new(0, 1)]).unwrap();
        let (design, response) = build_design(&ts, &ev, 1).unwrap();
        assert_eq!(design.column(0).to_vec(), vec![1.0, 2.0, 3.0]);
        assert_eq!(response.to_vec(), vec![2.0, 3.0, 4.0]);
    }

    #[test]
    fn design_two_variables_hand_indexed() {
        let ts = series(vec![
            vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
            vec![10.0, 20.0, 30.0, 40.0, 50.0, 60.0],
        ]);
        let ev = ExplanatoryVector::with_terms(
            1,
            vec![LaggedTerm::new(0, 1), LaggedTerm::new(1, 2)],
        )
        .unwrap();
        let (design, response) = build_design(&ts, &ev, 2).unwrap();
        // Rows regress times 2..5 (0-based).
        assert_eq!(design.column(0).to_vec(), vec![2.0, 3.0, 4.0, 5.0]);
        assert_eq!(design.column(1).to_vec(), vec![10.0, 20.0, 30.0, 40.0]);
        assert_eq!(response.to_vec(), vec![30.0, 40.0, 50.0, 60.0]);
    }

    #[test]
    fn design_rejects_offset_below_max_lag() {
        let ts = series(vec![vec![1.0, 2.0, 3.0, 4.0]]);
        let ev =
            ExplanatoryVector::with_terms(0, vec![LaggedTerm::new(0, 3)]).unwrap();
        assert!(build_design(&ts, &ev, 2).is_err());
        assert!(build_design(&ts, &ev, 4).is_err());
        assert!(build_design(&ts, &ev, 3).is_ok());
    }

    #[test]
    fn empty_design_keeps_response_as_residual() {
        let ts = series(vec![vec![1.0, -1.0, 2.0, -2.0]]);
        let ev = ExplanatoryVector::new(0);
        let fit = fit_model(&ts, &ev, 0).unwrap();
        assert!(fit.coefficients.is_empty());
        assert_eq!(fit.sse, 1.0 + 1.0 + 4.0 + 4.0);
        assert_eq!(fit.n_eff, 4);
        assert!(!fit.condition_flag);
    }

    #[test]
    fn exact_relation_has_zero_sse() {
        let design = array![[1.0], [2.0], [-1.0], [0.5]];
        let response = array![3.0, 6.0, -3.0, 1.5];
        let fit = ols_fit(design.view(), response.view()).unwrap();
        assert!((fit.coefficients[0] - 3.0).abs() < 1e-12);
        assert!(fit.sse < 1e-20);
        // Near-perfect fits order far below any noisy alternative.
        assert!(fit.bic < bic_value(1e-6, 4, 1));
    }

    #[test]
    fn rank_deficient_design_is_flagged_min_norm() {
        let design = array![[1.0, 1.0], [2.0, 2.0], [-1.0, -1.0], [0.5, 0.5]];
        let response = array![2.0, 4.0, -2.0, 1.0];
        let fit = ols_fit(design.view(), response.view()).unwrap();
        assert!(fit.condition_flag);
        assert!((fit.coefficients[0] - 1.0).abs() < 1e-8);
        assert!((fit.coefficients[1] - 1.0).abs() < 1e-8);
        assert!(fit.sse < 1e-16);
    }

    #[test]
    fn bic_formula_fixed_points() {
        assert_eq!(bic_value(100.0, 100, 0), 0.0);
        let expected = 2.0 * (100.0f64).ln();
        assert!((bic_value(100.0, 100, 2) - expected).abs() < 1e-12);
        assert_eq!(bic_value(0.0, 50, 3), f64::NEG_INFINITY);
    }

    #[test]
    fn residuals_orthogonal_to_design() {
        let design = array![
            [1.0, 0.3],
            [2.0, -1.0],
            [-1.0, 0.7],
            [0.5, 2.0],
            [1.5, -0.4]
        ];
        let response = array![1.0, 0.0, 2.0, -1.0, 0.5];
        let fit = ols_fit(design.view(), response.view()).unwrap();
        for col in design.columns() {
            let ip: f64 = col.iter().zip(&fit.residuals).map(|(a, b)| a * b).sum();
            assert!(ip.abs() < 1e-10, "residual correlation {ip}");
        }
    }
}
