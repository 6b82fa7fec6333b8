//! Conditional Granger causality from fitted dynamic regression models.
//!
//! For an ordered pair `i -> j` the unrestricted model is the explanatory
//! vector selected for response `j`; the restricted model removes every
//! lagged term of `i` without re-running selection.  The index is
//! `CGCI = ln(sse_r / sse_u)` on variance scale, tested with an F statistic
//! whose denominator degrees of freedom account for the common estimation
//! sample of the unrestricted model.

use crate::error::{Error, Result};
use crate::regression::stepfit::StepFit;
use crate::regression::{build_design, fit_model, FitResult};
use crate::selection::{full_model, select_model, Method, SelectionConfig};
use crate::series::{ExplanatoryVector, TimeSeriesSet};
use crate::special::f_survival;

/// How pairwise significance turns into the adjacency matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestMode {
    /// Benjamini-Hochberg FDR correction over all ordered pairs.
    Fdr,
    /// Uncorrected per-pair comparison of the p-value with `alpha`.
    Raw,
    /// No test: an edge is present whenever the index is positive.
    NoTest,
}

/// Outcome classification for one ordered pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairStatus {
    /// Both models fitted and the F test ran.
    Tested,
    /// The unrestricted model contains no lags of the driver, so the index
    /// is exactly zero and no test is needed.
    NoDriverTerms,
    /// The pair could not be evaluated (rank deficiency or no residual
    /// degrees of freedom); treated as no detected edge.
    Infeasible,
    /// The unrestricted model fits perfectly, leaving no variance scale.
    PerfectFit,
}

/// One evaluated ordered pair.
#[derive(Debug, Clone, Copy)]
pub struct PairResult {
    pub cgci: f64,
    pub fstat: f64,
    pub pvalue: f64,
    pub status: PairStatus,
}

/// Causality analysis over all ordered pairs of one series set.
#[derive(Debug, Clone)]
pub struct CausalityMatrix {
    k: usize,
    /// `cgci[i][j]` is the index for `i -> j` (row drives column).
    pub cgci: Vec<Vec<f64>>,
    pub fstat: Vec<Vec<f64>>,
    pub pvalue: Vec<Vec<f64>>,
    pub adjacency: Vec<Vec<bool>>,
    pub status: Vec<Vec<PairStatus>>,
    /// Explanatory vector selected for each response.
    pub models: Vec<ExplanatoryVector>,
    pub alpha: f64,
    pub mode: TestMode,
}

impl CausalityMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Detected edges as ordered `(driver, responder)` pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.k {
            for j in 0..self.k {
                if i != j && self.adjacency[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// True when any pair of this matrix was infeasible.
    pub fn any_infeasible(&self) -> bool {
        self.status
            .iter()
            .flatten()
            .any(|s| *s == PairStatus::Infeasible)
    }
}

/// Evaluates `driver -> response` given the already selected unrestricted
/// model for the response.  Refits both models on the common sample that
/// discards `max_lag(unrestricted)` initial values.
pub fn cgci_pair(
    ts: &TimeSeriesSet,
    unrestricted: &ExplanatoryVector,
    driver: usize,
) -> Result<PairResult> {
    if driver >= ts.k() {
        return Err(Error::InvalidInput(format!(
            "driver index {driver} out of range for {} variables",
            ts.k()
        )));
    }
    let p_i = unrestricted.count_variable(driver);
    if p_i == 0 {
        return Ok(PairResult {
            cgci: 0.0,
            fstat: 0.0,
            pvalue: 1.0,
            status: PairStatus::NoDriverTerms,
        });
    }
    let c = unrestricted.max_lag();
    let restricted = unrestricted.without_variable(driver);
    let fit_u = fit_model(ts, unrestricted, c)?;
    let fit_r = fit_model(ts, &restricted, c)?;
    if fit_u.condition_flag || fit_r.condition_flag {
        return Err(Error::Infeasible(format!(
            "rank-deficient fit for pair X{} -> X{}",
            driver + 1,
            unrestricted.response() + 1
        )));
    }
    pair_from_fits(&fit_u, &fit_r, p_i, unrestricted.len())
}

fn pair_from_fits(
    fit_u: &FitResult,
    fit_r: &FitResult,
    p_i: usize,
    total_terms: usize,
) -> Result<PairResult> {
    let n_eff = fit_u.n_eff;
    if n_eff <= total_terms {
        return Err(Error::Infeasible(format!(
            "no residual degrees of freedom: {n_eff} observations for {total_terms} terms"
        )));
    }
    let dof2 = (n_eff - total_terms) as f64;
    Ok(pair_from_sse(fit_u.sse, fit_r.sse, p_i, dof2))
}

fn pair_from_sse(sse_u: f64, sse_r: f64, p_i: usize, dof2: f64) -> PairResult {
    if sse_u <= 0.0 {
        // Perfect unrestricted fit: no noise scale to test against.
        return if sse_r <= 0.0 {
            PairResult {
                cgci: 0.0,
                fstat: 0.0,
                pvalue: 1.0,
                status: PairStatus::PerfectFit,
            }
        } else {
            PairResult {
                cgci: f64::INFINITY,
                fstat: f64::INFINITY,
                pvalue: 0.0,
                status: PairStatus::PerfectFit,
            }
        };
    }
    let cgci = (sse_r / sse_u).ln().max(0.0);
    let fstat = (((sse_r - sse_u) / p_i as f64) / (sse_u / dof2)).max(0.0);
    let pvalue = f_survival(fstat, p_i as f64, dof2);
    PairResult {
        cgci,
        fstat,
        pvalue,
        status: PairStatus::Tested,
    }
}

/// F statistic and p-value from raw error sums, for the unrestricted and
/// restricted model of one pair.
pub fn f_test_from_sse(
    sse_r: f64,
    sse_u: f64,
    removed_terms: usize,
    dof2: f64,
) -> (f64, f64) {
    let f = (((sse_r - sse_u) / removed_terms as f64) / (sse_u / dof2)).max(0.0);
    (f, f_survival(f, removed_terms as f64, dof2))
}

/// Evaluates `driver -> response` under the full VAR of order `pmax`.
pub fn cgci_full_pair(
    ts: &TimeSeriesSet,
    response: usize,
    driver: usize,
    pmax: usize,
) -> Result<PairResult> {
    let unrestricted = full_model(response, ts.k(), pmax);
    cgci_pair(ts, &unrestricted, driver)
}

/// Benjamini-Hochberg step-up over a flat p-value slice: `true` marks a
/// rejected (significant) hypothesis at FDR level `alpha`.
pub fn fdr_reject(pvalues: &[f64], alpha: f64) -> Vec<bool> {
    let m = pvalues.len();
    if m == 0 {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| pvalues[a].total_cmp(&pvalues[b]));
    let mut threshold = None;
    for (rank, &idx) in order.iter().enumerate() {
        let bound = (rank + 1) as f64 * alpha / m as f64;
        if pvalues[idx] <= bound {
            threshold = Some(pvalues[idx]);
        }
    }
    match threshold {
        Some(t) => pvalues.iter().map(|&p| p <= t).collect(),
        None => vec![false; m],
    }
}

/// Runs model selection per response and evaluates every ordered pair.
///
/// The series is demeaned internally.  Pairs whose selection or fit is
/// infeasible are reported with [`PairStatus::Infeasible`] and never become
/// edges; other responses are unaffected.
pub fn causality_matrix(
    ts: &TimeSeriesSet,
    config: &SelectionConfig,
    alpha: f64,
    mode: TestMode,
) -> Result<CausalityMatrix> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidInput(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let ts = ts.demean();
    let k = ts.k();
    let mut models = Vec::with_capacity(k);
    let mut selection_failed = vec![false; k];
    for j in 0..k {
        match select_model(&ts, j, config) {
            Ok(ev) => models.push(ev),
            Err(e) if e.is_infeasible() => {
                selection_failed[j] = true;
                models.push(ExplanatoryVector::new(j));
            }
            Err(e) => return Err(e),
        }
    }

    let mut cgci = vec![vec![0.0; k]; k];
    let mut fstat = vec![vec![0.0; k]; k];
    let mut pvalue = vec![vec![1.0; k]; k];
    let mut status = vec![vec![PairStatus::NoDriverTerms; k]; k];
    for j in 0..k {
        if selection_failed[j] {
            for i in 0..k {
                if i != j {
                    status[i][j] = PairStatus::Infeasible;
                }
            }
            continue;
        }
        let model = &models[j];
        if model.is_empty() {
            // Every driver keeps the exact-zero default.
            continue;
        }
        let c = model.max_lag();
        let n_eff = ts.len().saturating_sub(c);
        // Factorize the unrestricted model once per response; each driver
        // then pays only for the partial deletion identity.  `None` marks
        // the whole response as untestable (no residual degrees of freedom
        // or a rank-deficient selected design).
        let fit = if n_eff > model.len() {
            let (design, response) = build_design(&ts, model, c)?;
            let mut fit = StepFit::new(response.to_vec());
            let full_rank = design
                .columns()
                .into_iter()
                .all(|col| fit.push_column(&col.to_vec()).is_some());
            full_rank.then_some(fit)
        } else {
            None
        };
        let dof2 = n_eff.saturating_sub(model.len()) as f64;
        for i in 0..k {
            if i == j {
                continue;
            }
            let positions: Vec<usize> = model
                .terms()
                .iter()
                .enumerate()
                .filter(|(_, t)| t.variable == i)
                .map(|(m, _)| m)
                .collect();
            if positions.is_empty() {
                continue;
            }
            let pair = fit
                .as_ref()
                .and_then(|f| f.sse_without_set(&positions).map(|sse_r| (f.sse(), sse_r)));
            match pair {
                Some((sse_u, sse_r)) => {
                    let pair = pair_from_sse(sse_u, sse_r, positions.len(), dof2);
                    cgci[i][j] = pair.cgci;
                    fstat[i][j] = pair.fstat;
                    pvalue[i][j] = pair.pvalue;
                    status[i][j] = pair.status;
                }
                None => status[i][j] = PairStatus::Infeasible,
            }
        }
    }

    let mut adjacency = vec![vec![false; k]; k];
    match mode {
        TestMode::NoTest => {
            for i in 0..k {
                for j in 0..k {
                    adjacency[i][j] = i != j
                        && status[i][j] != PairStatus::Infeasible
                        && cgci[i][j] > 0.0;
                }
            }
        }
        TestMode::Raw => {
            for i in 0..k {
                for j in 0..k {
                    adjacency[i][j] = i != j
                        && status[i][j] != PairStatus::Infeasible
                        && pvalue[i][j] <= alpha;
                }
            }
        }
        TestMode::Fdr => {
            let mut flat = Vec::with_capacity(k * (k - 1));
            let mut coords = Vec::with_capacity(k * (k - 1));
            for i in 0..k {
                for j in 0..k {
                    if i != j {
                        flat.push(pvalue[i][j]);
                        coords.push((i, j));
                    }
                }
            }
            for (reject, (i, j)) in fdr_reject(&flat, alpha).into_iter().zip(coords) {
                adjacency[i][j] = reject && status[i][j] != PairStatus::Infeasible;
            }
        }
    }

    Ok(CausalityMatrix {
        k,
        cgci,
        fstat,
        pvalue,
        adjacency,
        status,
        models,
        alpha,
        mode,
    })
}

/// Convenience wrapper building the configuration from a method and order.
pub fn analyze(
    ts: &TimeSeriesSet,
    method: Method,
    pmax: usize,
    alpha: f64,
    mode: TestMode,
) -> Result<CausalityMatrix> {
    causality_matrix(ts, &SelectionConfig::new(method, pmax), alpha, mode)
}
