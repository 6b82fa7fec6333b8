//! Least angle regression over the lagged-term pool, and the lasso-style
//! selection that stops the path with the BIC.
//!
//! Columns are standardized to unit Euclidean norm internally; reported
//! coefficient profiles are de-standardized back to the original scale.

use crate::error::{Error, Result};
use crate::regression::bic_value;
use crate::selection::LagPool;
use crate::series::{ExplanatoryVector, LaggedTerm, TimeSeriesSet};

/// One entry event on the path, recorded after the subsequent advance.
#[derive(Debug, Clone)]
pub struct LarsStep {
    /// The term that joined the active set at this step.
    pub entered: LaggedTerm,
    /// Terms that crossed zero and left the active set during this step's
    /// advance (only with the lasso drop step enabled).
    pub dropped: Vec<LaggedTerm>,
    /// Active terms after the step, in entry order.
    pub active: Vec<LaggedTerm>,
    /// De-standardized coefficients aligned with `active`.
    pub coefficients: Vec<f64>,
    /// L1 norm of the standardized coefficients after the step; the lasso
    /// constraint value, nondecreasing along the path.
    pub s: f64,
}

/// The forward path of entry (and drop) events.
#[derive(Debug, Clone)]
pub struct LarsPath {
    pub steps: Vec<LarsStep>,
}

impl LarsPath {
    /// Active sets of every prefix of the path, shortest first, starting
    /// with the empty set.
    pub fn prefixes(&self) -> impl Iterator<Item = &[LaggedTerm]> {
        std::iter::once(&[] as &[LaggedTerm]).chain(self.steps.iter().map(|s| s.active.as_slice()))
    }
}

/// Runs least angle regression for one response over all `K * pmax` lagged
/// terms.  With `lasso_drop` the path follows the lasso modification:
/// a coefficient that crosses zero leaves the active set.
pub fn lars_path(
    ts: &TimeSeriesSet,
    response: usize,
    pmax: usize,
    lasso_drop: bool,
) -> Result<LarsPath> {
    let pool = LagPool::new(ts, response, pmax)?;
    let (cols, terms) = pool_columns(&pool);
    lars_path_cols(&cols, &terms, pool.response_col(), lasso_drop)
}

/// Chooses the explanatory vector as the BIC-minimizing prefix of the LARS
/// path, each prefix refitted by ordinary least squares.
pub fn lasso_select(
    ts: &TimeSeriesSet,
    response: usize,
    pmax: usize,
    lasso_drop: bool,
) -> Result<ExplanatoryVector> {
    let pool = LagPool::new(ts, response, pmax)?;
    let (cols, terms) = pool_columns(&pool);
    let path = lars_path_cols(&cols, &terms, pool.response_col(), lasso_drop)?;
    let n_eff = pool.n_eff();

    let mut best_bic = f64::INFINITY;
    let mut best: Vec<LaggedTerm> = Vec::new();
    for prefix in path.prefixes() {
        if prefix.len() >= n_eff {
            break;
        }
        let mut fit = pool.empty_fit();
        let mut estimable = true;
        for term in prefix {
            if fit.push_column(pool.col(*term)).is_none() {
                estimable = false;
                break;
            }
        }
        if !estimable {
            continue;
        }
        let b = bic_value(fit.sse(), n_eff, prefix.len());
        if b < best_bic {
            best_bic = b;
            best = prefix.to_vec();
        }
    }
    ExplanatoryVector::with_terms(response, best)
}

fn pool_columns(pool: &LagPool) -> (Vec<Vec<f64>>, Vec<LaggedTerm>) {
    let mut cols = Vec::with_capacity(pool.k() * pool.pmax());
    let mut terms = Vec::with_capacity(pool.k() * pool.pmax());
    for variable in 0..pool.k() {
        for lag in 1..=pool.pmax() {
            let term = LaggedTerm::new(variable, lag);
            cols.push(pool.col(term).to_vec());
            terms.push(term);
        }
    }
    (cols, terms)
}

/// Core path computation over explicit columns (exposed for tests).
pub(crate) fn lars_path_cols(
    cols: &[Vec<f64>],
    terms: &[LaggedTerm],
    y: &[f64],
    lasso_drop: bool,
) -> Result<LarsPath> {
    let p = cols.len();
    assert_eq!(terms.len(), p);
    let n = y.len();

    // Standardize.
    let mut norms = Vec::with_capacity(p);
    let mut xs: Vec<Vec<f64>> = Vec::with_capacity(p);
    for (col, term) in cols.iter().zip(terms) {
        assert_eq!(col.len(), n);
        let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= 1e-150 {
            return Err(Error::DegenerateColumn(format!(
                "column {term} is numerically constant"
            )));
        }
        xs.push(col.iter().map(|v| v / norm).collect());
        norms.push(norm);
    }

    // Gram matrix of the standardized columns and initial correlations.
    let mut gram = vec![vec![0.0; p]; p];
    for i in 0..p {
        gram[i][i] = 1.0;
        for j in 0..i {
            let g = dot(&xs[i], &xs[j]);
            gram[i][j] = g;
            gram[j][i] = g;
        }
    }
    let c0: Vec<f64> = xs.iter().map(|x| dot(x, y)).collect();
    let c_scale = c0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-9 * c_scale;

    let mut beta = vec![0.0; p];
    let mut active: Vec<usize> = Vec::new();
    let mut in_active = vec![false; p];
    let mut steps = Vec::new();
    if c_scale == 0.0 {
        return Ok(LarsPath { steps });
    }

    let correlations = |beta: &[f64], active: &[usize]| -> Vec<f64> {
        (0..p)
            .map(|j| {
                let mut c = c0[j];
                for &a in active {
                    c -= gram[j][a] * beta[a];
                }
                c
            })
            .collect()
    };

    let mut segments_left = 50 * (p + 1);
    while active.len() < p {
        let c = correlations(&beta, &active);
        let mut enter = None;
        for j in 0..p {
            if in_active[j] {
                continue;
            }
            if enter.map_or(true, |(_, best): (usize, f64)| c[j].abs() > best) {
                enter = Some((j, c[j].abs()));
            }
        }
        let Some((enter, cmax_in)) = enter else { break };
        if cmax_in <= tol {
            break;
        }
        active.push(enter);
        in_active[enter] = true;
        let mut dropped = Vec::new();

        // Advance until the next variable is ready to enter (or the path
        // reaches the least-squares endpoint).
        loop {
            segments_left -= 1;
            if segments_left == 0 {
                return Err(Error::Infeasible("LARS path failed to converge".into()));
            }
            let c = correlations(&beta, &active);
            let cmax = active.iter().fold(0.0f64, |m, &a| m.max(c[a].abs()));
            if cmax <= tol {
                break;
            }
            let signs: Vec<f64> = active.iter().map(|&a| c[a].signum()).collect();
            let sub = submatrix(&gram, &active);
            let Some(w) = cholesky_solve(sub, &signs) else {
                return Err(Error::DegenerateColumn(
                    "collinear columns in the LARS active set".into(),
                ));
            };
            let denom: f64 = signs.iter().zip(&w).map(|(s, w)| s * w).sum();
            let aa = 1.0 / denom.sqrt();
            let dir: Vec<f64> = w.iter().map(|w| aa * w).collect();
            // Correlation speed of every column under the equiangular move.
            let speed: Vec<f64> = (0..p)
                .map(|j| {
                    active
                        .iter()
                        .zip(&dir)
                        .map(|(&a, d)| gram[j][a] * d)
                        .sum::<f64>()
                })
                .collect();

            let mut gamma = cmax / aa;
            for j in 0..p {
                if in_active[j] {
                    continue;
                }
                for cand in [
                    (cmax - c[j]) / (aa - speed[j]),
                    (cmax + c[j]) / (aa + speed[j]),
                ] {
                    if cand.is_finite() && cand > 0.0 && cand < gamma {
                        gamma = cand;
                    }
                }
            }

            let mut crossing: Option<(f64, usize)> = None;
            if lasso_drop {
                for (pos, (&a, d)) in active.iter().zip(&dir).enumerate() {
                    if *d != 0.0 {
                        let g = -beta[a] / d;
                        if g > 1e-12 * gamma.max(1.0)
                            && g < gamma
                            && crossing.map_or(true, |(best, _)| g < best)
                        {
                            crossing = Some((g, pos));
                        }
                    }
                }
            }

            if let Some((g, pos)) = crossing {
                for (&a, d) in active.iter().zip(&dir) {
                    beta[a] += g * d;
                }
                let out = active.remove(pos);
                beta[out] = 0.0;
                in_active[out] = false;
                dropped.push(terms[out]);
                continue;
            }
            for (&a, d) in active.iter().zip(&dir) {
                beta[a] += gamma * d;
            }
            break;
        }

        steps.push(LarsStep {
            entered: terms[enter],
            dropped,
            active: active.iter().map(|&a| terms[a]).collect(),
            coefficients: active.iter().map(|&a| beta[a] / norms[a]).collect(),
            s: active.iter().map(|&a| beta[a].abs()).sum(),
        });
    }
    Ok(LarsPath { steps })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn submatrix(gram: &[Vec<f64>], active: &[usize]) -> Vec<Vec<f64>> {
    active
        .iter()
        .map(|&i| active.iter().map(|&j| gram[i][j]).collect())
        .collect()
}

/// Solves the symmetric positive-definite system `G x = rhs`, returning
/// `None` when a pivot collapses (collinear columns).
fn cholesky_solve(mut g: Vec<Vec<f64>>, rhs: &[f64]) -> Option<Vec<f64>> {
    let m = rhs.len();
    for i in 0..m {
        for j in 0..i {
            let mut acc = g[i][j];
            for t in 0..j {
                acc -= g[i][t] * g[j][t];
            }
            g[i][j] = acc / g[j][j];
        }
        let mut d = g[i][i];
        for t in 0..i {
            d -= g[i][t] * g[i][t];
        }
        if d <= 1e-10 {
            return None;
        }
        g[i][i] = d.sqrt();
    }
    let mut x = rhs.to_vec();
    for i in 0..m {
        for t in 0..i {
            x[i] -= g[i][t] * x[t];
        }
        x[i] /= g[i][i];
    }
    for i in (0..m).rev() {
        for t in (i + 1)..m {
            x[i] -= g[t][i] * x[t];
        }
        x[i] /= g[i][i];
    }
    Some(x)
}
