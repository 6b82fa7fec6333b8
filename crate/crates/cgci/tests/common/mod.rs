//! Independent reference implementations used to cross-check the library.
//!
//! Everything here deliberately avoids the code paths under test: least
//! squares goes through the normal equations instead of orthogonal
//! factorizations, tail probabilities come from adaptive quadrature of the
//! density instead of incomplete beta functions, and subset search is
//! exhaustive enumeration.

#![allow(dead_code)]

use ndarray::{Array2, ArrayView1, ArrayView2};
use ndarray::s;

/// Ordinary least squares through the normal equations `X^T X b = X^T y`,
/// solved by Gaussian elimination with partial pivoting.
pub fn normal_equations_ols(design: ArrayView2<'_, f64>, y: ArrayView1<'_, f64>) -> Vec<f64> {
    let (n, p) = design.dim();
    assert_eq!(n, y.len());
    let mut gram = vec![vec![0.0; p + 1]; p];
    for a in 0..p {
        for b in 0..p {
            let mut acc = 0.0;
            for r in 0..n {
                acc += design[[r, a]] * design[[r, b]];
            }
            gram[a][b] = acc;
        }
        let mut acc = 0.0;
        for r in 0..n {
            acc += design[[r, a]] * y[r];
        }
        gram[a][p] = acc;
    }
    solve_augmented(&mut gram)
}

/// Residual sum of squares of `y` against `design * beta`.
pub fn residual_sse(design: ArrayView2<'_, f64>, y: ArrayView1<'_, f64>, beta: &[f64]) -> f64 {
    let (n, p) = design.dim();
    let mut sse = 0.0;
    for r in 0..n {
        let mut fitted = 0.0;
        for c in 0..p {
            fitted += design[[r, c]] * beta[c];
        }
        sse += (y[r] - fitted) * (y[r] - fitted);
    }
    sse
}

/// Gaussian elimination with partial pivoting on an augmented system; each
/// row is `p` matrix entries followed by the right-hand side.
fn solve_augmented(rows: &mut [Vec<f64>]) -> Vec<f64> {
    let p = rows.len();
    for col in 0..p {
        let pivot = (col..p)
            .max_by(|&a, &b| rows[a][col].abs().total_cmp(&rows[b][col].abs()))
            .unwrap();
        rows.swap(col, pivot);
        assert!(
            rows[col][col].abs() > 1e-12,
            "oracle system is numerically singular at column {col}"
        );
        for r in 0..p {
            if r == col {
                continue;
            }
            let factor = rows[r][col] / rows[col][col];
            for c in col..=p {
                let t = factor * rows[col][c];
                rows[r][c] -= t;
            }
        }
    }
    (0..p).map(|r| rows[r][p] / rows[r][r]).collect()
}

/// Log gamma by the Stirling asymptotic series after shifting the argument
/// above 12 with the recurrence `Gamma(x + 1) = x Gamma(x)`.
pub fn stirling_ln_gamma(mut x: f64) -> f64 {
    assert!(x > 0.0);
    let mut shift = 0.0;
    while x < 12.0 {
        shift -= x.ln();
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            + inv2 * (-1.0 / 360.0 + inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0))));
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series + shift
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance
/// `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(a, fa, m, fm, flm);
        let right = simpson(m, fm, b, fb, frm);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, fa, b, fb, fm);
    recurse(f, a, fa, b, fb, fm, whole, tol, 40)
}

/// Survival function of the F distribution by integrating the density on
/// `[0, x]` under the substitution `u = v^2`, which removes the endpoint
/// singularity for one numerator degree of freedom.
pub fn f_survival_by_quadrature(x: f64, d1: f64, d2: f64) -> f64 {
    assert!(d1 > 0.0 && d2 > 0.0);
    if x <= 0.0 {
        return 1.0;
    }
    let ln_beta = stirling_ln_gamma(0.5 * d1) + stirling_ln_gamma(0.5 * d2)
        - stirling_ln_gamma(0.5 * (d1 + d2));
    let ln_c = 0.5 * d1 * (d1 / d2).ln() - ln_beta;
    let density_sq = move |v: f64| {
        if v <= 0.0 {
            return 0.0;
        }
        let u = v * v;
        let ln_f = ln_c + (0.5 * d1 - 1.0) * u.ln() - 0.5 * (d1 + d2) * (1.0 + d1 * u / d2).ln();
        2.0 * v * ln_f.exp()
    };
    let cdf = adaptive_simpson(&density_sq, 0.0, x.sqrt(), 1e-10);
    (1.0 - cdf).clamp(0.0, 1.0)
}

/// Two-sided tail probability of the t distribution by integrating the
/// density on `[0, |t|]`.
pub fn t_two_sided_by_quadrature(t: f64, dof: f64) -> f64 {
    assert!(dof > 0.0);
    let a = t.abs();
    if a == 0.0 {
        return 1.0;
    }
    let ln_c = stirling_ln_gamma(0.5 * (dof + 1.0))
        - stirling_ln_gamma(0.5 * dof)
        - 0.5 * (dof * std::f64::consts::PI).ln();
    let density = move |s: f64| (ln_c - 0.5 * (dof + 1.0) * (1.0 + s * s / dof).ln()).exp();
    let half = adaptive_simpson(&density, 0.0, a, 1e-10);
    (1.0 - 2.0 * half).clamp(0.0, 1.0)
}

/// Textbook Benjamini-Hochberg step-up: sort the p-values, find the largest
/// rank `r` with `p_(r) <= r a / m`, and reject the first `r` sorted
/// hypotheses.
pub fn naive_benjamini_hochberg(pvalues: &[f64], alpha: f64) -> Vec<bool> {
    let m = pvalues.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| pvalues[a].total_cmp(&pvalues[b]));
    let mut r_star = 0;
    for r in 1..=m {
        if pvalues[order[r - 1]] <= r as f64 * alpha / m as f64 {
            r_star = r;
        }
    }
    let mut reject = vec![false; m];
    for &idx in order.iter().take(r_star) {
        reject[idx] = true;
    }
    reject
}

/// The best model for `response` over every subset of the `K * pmax`
/// candidate lagged terms, by exhaustive enumeration on the sample that
/// skips the first `pmax` points.  Returns the winning subset as
/// `(variable, lag)` pairs together with its criterion value.
pub fn exhaustive_best_subset(
    values: &Array2<f64>,
    response: usize,
    pmax: usize,
) -> (Vec<(usize, usize)>, f64) {
    let (n, k) = values.dim();
    let total = k * pmax;
    assert!(total <= 20, "enumeration over 2^{total} subsets is too large");
    let rows = n - pmax;
    let y = values.slice(s![pmax.., response]);
    let terms: Vec<(usize, usize)> = (0..k)
        .flat_map(|v| (1..=pmax).map(move |l| (v, l)))
        .collect();
    let mut best: Option<(Vec<(usize, usize)>, f64)> = None;
    for mask in 0u32..(1 << total) {
        let chosen: Vec<(usize, usize)> = terms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, t)| *t)
            .collect();
        if chosen.len() >= rows {
            continue;
        }
        let mut design = Array2::zeros((rows, chosen.len()));
        for (c, &(variable, lag)) in chosen.iter().enumerate() {
            for r in 0..rows {
                design[[r, c]] = values[[pmax + r - lag, variable]];
            }
        }
        let sse = if chosen.is_empty() {
            y.iter().map(|v| v * v).sum()
        } else {
            let beta = normal_equations_ols(design.view(), y);
            residual_sse(design.view(), y, &beta)
        };
        let n_eff = rows as f64;
        let bic = if sse <= 0.0 {
            f64::NEG_INFINITY
        } else {
            n_eff * (sse / n_eff).ln() + chosen.len() as f64 * n_eff.ln()
        };
        // Strict improvement keeps the earliest (smallest) subset on ties.
        if best.as_ref().map_or(true, |(_, b)| bic < *b) {
            best = Some((chosen, bic));
        }
    }
    best.unwrap()
}

/// BIC of one fixed subset of lagged terms, via the normal equations.
pub fn subset_bic(
    values: &Array2<f64>,
    response: usize,
    pmax: usize,
    chosen: &[(usize, usize)],
) -> f64 {
    let n = values.nrows();
    let rows = n - pmax;
    let y = values.slice(s![pmax.., response]);
    let mut design = Array2::zeros((rows, chosen.len()));
    for (c, &(variable, lag)) in chosen.iter().enumerate() {
        for r in 0..rows {
            design[[r, c]] = values[[pmax + r - lag, variable]];
        }
    }
    let sse = if chosen.is_empty() {
        y.iter().map(|v| v * v).sum()
    } else {
        let beta = normal_equations_ols(design.view(), y);
        residual_sse(design.view(), y, &beta)
    };
    let n_eff = rows as f64;
    if sse <= 0.0 {
        f64::NEG_INFINITY
    } else {
        n_eff * (sse / n_eff).ln() + chosen.len() as f64 * n_eff.ln()
    }
}
