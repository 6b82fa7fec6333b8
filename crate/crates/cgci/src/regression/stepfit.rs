//! Incremental least squares for stepwise model search.
//!
//! `StepFit` maintains a modified Gram-Schmidt QR factorization of the
//! active design together with `Q^T y`, so that evaluating a candidate
//! column costs `O(n k)` and evaluating a candidate deletion costs
//! `O(k^2)`.  Additions use a second orthogonalization pass, which keeps
//! the basis orthonormal to near machine precision; deletions re-triangulate
//! with Givens rotations.

/// Relative threshold below which a candidate column counts as linearly
/// dependent on the columns already in the model.
const DEPENDENCE_TOL: f64 = 1e-10;

/// Outcome of evaluating one candidate column against the current fit.
pub(crate) struct Candidate {
    proj: Vec<f64>,
    rkk: f64,
    qcol: Vec<f64>,
    qty_k: f64,
    /// Residual sum of squares the model would have after adding the column.
    pub sse: f64,
    /// True when the column adds no new direction; committing it is refused.
    pub dependent: bool,
}

pub(crate) struct StepFit {
    n: usize,
    y: Vec<f64>,
    yty: f64,
    /// Orthonormal basis columns, one `Vec<f64>` of length `n` each.
    q: Vec<Vec<f64>>,
    /// Upper-triangular factor, stored by column; `r[j]` has `j + 1` rows.
    r: Vec<Vec<f64>>,
    /// First `k` entries of `Q^T y`.
    qty: Vec<f64>,
}

impl StepFit {
    pub fn new(y: Vec<f64>) -> Self {
        let yty = y.iter().map(|v| v * v).sum();
        StepFit {
            n: y.len(),
            y,
            yty,
            q: Vec::new(),
            r: Vec::new(),
            qty: Vec::new(),
        }
    }

    /// Number of columns currently in the model.
    pub fn k(&self) -> usize {
        self.q.len()
    }

    /// Residual sum of squares of the current model.
    pub fn sse(&self) -> f64 {
        let explained: f64 = self.qty.iter().map(|v| v * v).sum();
        (self.yty - explained).max(0.0)
    }

    /// Projects a candidate column against the current basis without
    /// mutating the fit.
    pub fn evaluate(&self, col: &[f64]) -> Candidate {
        assert_eq!(col.len(), self.n, "candidate column length mismatch");
        let col_norm = norm(col);
        let mut perp = col.to_vec();
        let mut proj = vec![0.0; self.k()];
        for pass in 0..2 {
            for (j, q) in self.q.iter().enumerate() {
                let t = dot(q, &perp);
                proj[j] += t;
                axpy(-t, q, &mut perp);
            }
            if pass == 0 && self.q.is_empty() {
                break;
            }
        }
        let rkk = norm(&perp);
        if col_norm == 0.0 || rkk <= DEPENDENCE_TOL * col_norm {
            return Candidate {
                proj,
                rkk: 0.0,
                qcol: Vec::new(),
                qty_k: 0.0,
                sse: self.sse(),
                dependent: true,
            };
        }
        let inv = 1.0 / rkk;
        let qcol: Vec<f64> = perp.iter().map(|v| v * inv).collect();
        let qty_k = dot(&qcol, &self.y);
        let sse = (self.sse() - qty_k * qty_k).max(0.0);
        Candidate {
            proj,
            rkk,
            qcol,
            qty_k,
            sse,
            dependent: false,
        }
    }

    /// Commits a previously evaluated candidate as the next column.
    pub fn commit(&mut self, cand: Candidate) {
        assert!(!cand.dependent, "cannot commit a dependent column");
        assert_eq!(cand.proj.len(), self.k(), "stale candidate");
        let mut rcol = cand.proj;
        rcol.push(cand.rkk);
        self.r.push(rcol);
        self.q.push(cand.qcol);
        self.qty.push(cand.qty_k);
    }

    /// Convenience: evaluate and commit, reporting the new SSE.
    /// Returns `None` when the column is dependent.
    pub fn push_column(&mut self, col: &[f64]) -> Option<f64> {
        let cand = self.evaluate(col);
        if cand.dependent {
            return None;
        }
        let sse = cand.sse;
        self.commit(cand);
        Some(sse)
    }

    /// Rolls the model back to its first `k` columns.
    pub fn truncate(&mut self, k: usize) {
        self.q.truncate(k);
        self.r.truncate(k);
        self.qty.truncate(k);
    }

    /// Coefficients of the current model via back substitution.
    pub fn coefficients(&self) -> Vec<f64> {
        let k = self.k();
        let mut beta = vec![0.0; k];
        for i in (0..k).rev() {
            let mut acc = self.qty[i];
            for c in (i + 1)..k {
                acc -= self.r[c][i] * beta[c];
            }
            beta[i] = acc / self.r[i][i];
        }
        beta
    }

    /// SSE the model would have if column `j` were deleted and the rest
    /// refitted: `SSE + beta_j^2 / [(X^T X)^{-1}]_{jj}`.
    pub fn sse_without(&self, j: usize) -> f64 {
        let k = self.k();
        assert!(j < k);
        let beta_j = self.coefficients()[j];
        // Solve R^T z = e_j; then [(X^T X)^{-1}]_{jj} = ||z||^2.
        let mut z = vec![0.0; k];
        z[j] = 1.0 / self.r[j][j];
        for i in (j + 1)..k {
            let mut acc = 0.0;
            for m in j..i {
                acc += self.r[i][m] * z[m];
            }
            z[i] = -acc / self.r[i][i];
        }
        let var_jj: f64 = z.iter().map(|v| v * v).sum();
        self.sse() + beta_j * beta_j / var_jj
    }

    /// SSE the model would have if every column in `idxs` were deleted and
    /// the rest refitted: `SSE + beta_S^T G^{-1} beta_S` with
    /// `G = [(X^T X)^{-1}]_{SS}`.  Returns `None` when the reduced system is
    /// numerically singular.
    pub fn sse_without_set(&self, idxs: &[usize]) -> Option<f64> {
        let k = self.k();
        if idxs.is_empty() {
            return Some(self.sse());
        }
        let beta = self.coefficients();
        // One row of R^{-T} per selected column: solve R^T z = e_j.
        let mut zs = Vec::with_capacity(idxs.len());
        for &j in idxs {
            assert!(j < k);
            let mut z = vec![0.0; k];
            z[j] = 1.0 / self.r[j][j];
            for i in (j + 1)..k {
                let mut acc = 0.0;
                for m in j..i {
                    acc += self.r[i][m] * z[m];
                }
                z[i] = -acc / self.r[i][i];
            }
            zs.push(z);
        }
        let p = idxs.len();
        let mut g = vec![vec![0.0; p]; p];
        for a in 0..p {
            for b in a..p {
                let v = dot(&zs[a], &zs[b]);
                g[a][b] = v;
                g[b][a] = v;
            }
        }
        let beta_s: Vec<f64> = idxs.iter().map(|&j| beta[j]).collect();
        let w = solve_spd(&mut g, &beta_s)?;
        let delta: f64 = beta_s.iter().zip(&w).map(|(b, w)| b * w).sum();
        Some(self.sse() + delta.max(0.0))
    }

    /// Deletes column `j`, restoring triangular form with Givens rotations.
    pub fn remove(&mut self, j: usize) {
        let k = self.k();
        assert!(j < k);
        self.r.remove(j);
        // Column c (new indexing) now reaches row c + 1; chase the
        // subdiagonal down with rotations on row pairs (c, c + 1).
        for c in j..self.r.len() {
            let (a, b) = (self.r[c][c], self.r[c][c + 1]);
            let (cos, sin) = givens(a, b);
            let rr = cos * a + sin * b;
            self.r[c][c] = rr;
            self.r[c].truncate(c + 1);
            for c2 in (c + 1)..self.r.len() {
                let col = &mut self.r[c2];
                let (x, v) = (col[c], col[c + 1]);
                col[c] = cos * x + sin * v;
                col[c + 1] = -sin * x + cos * v;
            }
            let (x, v) = (self.qty[c], self.qty[c + 1]);
            self.qty[c] = cos * x + sin * v;
            self.qty[c + 1] = -sin * x + cos * v;
            // Q picks up the transposed rotation on columns (c, c + 1).
            let (qa, qb) = {
                let (left, right) = self.q.split_at_mut(c + 1);
                (&mut left[c], &mut right[0])
            };
            for i in 0..self.n {
                let (x, v) = (qa[i], qb[i]);
                qa[i] = cos * x + sin * v;
                qb[i] = -sin * x + cos * v;
            }
        }
        // The last basis vector no longer spans the design; its share of
        // Q^T y returns to the residual through the SSE formula.
        self.q.pop();
        self.qty.pop();
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Solves `G w = rhs` for a small symmetric positive definite `G` by
/// Cholesky factorization in place; `None` when a pivot is not positive.
fn solve_spd(g: &mut [Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let p = rhs.len();
    for a in 0..p {
        for b in 0..=a {
            let mut acc = g[a][b];
            for m in 0..b {
                acc -= g[a][m] * g[b][m];
            }
            if a == b {
                if acc <= 0.0 {
                    return None;
                }
                g[a][a] = acc.sqrt();
            } else {
                g[a][b] = acc / g[b][b];
            }
        }
    }
    let mut w = rhs.to_vec();
    for a in 0..p {
        for m in 0..a {
            w[a] -= g[a][m] * w[m];
        }
        w[a] /= g[a][a];
    }
    for a in (0..p).rev() {
        for m in (a + 1)..p {
            w[a] -= g[m][a] * w[m];
        }
        w[a] /= g[a][a];
    }
    Some(w)
}

fn givens(a: f64, b: f64) -> (f64, f64) {
    let r = a.hypot(b);
    if r == 0.0 {
        (1.0, 0.0)
    } else {
        (a / r, b / r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn recovers_exact_coefficients() {
        // y = 2 a - 3 b on an orthogonal-ish design.
        let a = vec![1.0, 2.0, 0.0, -1.0, 3.0];
        let b = vec![0.5, -1.0, 2.0, 1.0, 0.0];
        let y: Vec<f64> = a.iter().zip(&b).map(|(x, z)| 2.0 * x - 3.0 * z).collect();
        let mut fit = StepFit::new(y);
        fit.push_column(&a).unwrap();
        fit.push_column(&b).unwrap();
        let beta = fit.coefficients();
        assert_close(beta[0], 2.0, 1e-12);
        assert_close(beta[1], -3.0, 1e-12);
        assert_close(fit.sse(), 0.0, 1e-12);
    }

    #[test]
    fn rejects_dependent_columns() {
        let a = vec![1.0, 2.0, 3.0, 4.0];
        let mut fit = StepFit::new(vec![1.0, 0.0, 1.0, 0.0]);
        fit.push_column(&a).unwrap();
        let doubled: Vec<f64> = a.iter().map(|v| 2.0 * v).collect();
        assert!(fit.push_column(&doubled).is_none());
        assert!(fit.push_column(&[0.0, 0.0, 0.0, 0.0]).is_none());
        assert_eq!(fit.k(), 1);
    }

    #[test]
    fn sse_without_matches_refit() {
        let cols = [
            vec![1.0, 2.0, -1.0, 0.5, 1.5, -2.0],
            vec![0.0, 1.0, 1.0, -1.0, 2.0, 0.3],
            vec![2.0, -1.0, 0.4, 1.2, 0.0, 1.0],
        ];
        let y = vec![1.0, -2.0, 0.5, 3.0, -1.0, 0.25];
        let mut fit = StepFit::new(y.clone());
        for c in &cols {
            fit.push_column(c).unwrap();
        }
        for drop in 0..3 {
            let mut refit = StepFit::new(y.clone());
            for (i, c) in cols.iter().enumerate() {
                if i != drop {
                    refit.push_column(c).unwrap();
                }
            }
            assert_close(fit.sse_without(drop), refit.sse(), 1e-10);
        }
    }

    #[test]
    fn sse_without_set_matches_refit() {
        let cols = [
            vec![1.0, 2.0, -1.0, 0.5, 1.5, -2.0, 0.1],
            vec![0.0, 1.0, 1.0, -1.0, 2.0, 0.3, -0.4],
            vec![2.0, -1.0, 0.4, 1.2, 0.0, 1.0, 0.9],
            vec![-1.0, 0.7, 2.2, 0.1, -0.8, 0.6, 1.3],
        ];
        let y = vec![1.0, -2.0, 0.5, 3.0, -1.0, 0.25, 2.0];
        let mut fit = StepFit::new(y.clone());
        for c in &cols {
            fit.push_column(c).unwrap();
        }
        let sets: [&[usize]; 5] = [&[0, 2], &[1, 3], &[0, 1, 2], &[3], &[0, 1, 2, 3]];
        for set in sets {
            let mut refit = StepFit::new(y.clone());
            for (i, c) in cols.iter().enumerate() {
                if !set.contains(&i) {
                    refit.push_column(c).unwrap();
                }
            }
            assert_close(fit.sse_without_set(set).unwrap(), refit.sse(), 1e-9);
        }
        assert_close(fit.sse_without_set(&[]).unwrap(), fit.sse(), 0.0);
        assert_close(fit.sse_without_set(&[2]).unwrap(), fit.sse_without(2), 1e-12);
    }

    #[test]
    fn remove_matches_rebuild() {
        let cols = [
            vec![1.0, 2.0, -1.0, 0.5, 1.5, -2.0, 0.1],
            vec![0.0, 1.0, 1.0, -1.0, 2.0, 0.3, -0.4],
            vec![2.0, -1.0, 0.4, 1.2, 0.0, 1.0, 0.9],
            vec![-1.0, 0.7, 2.2, 0.1, -0.8, 0.6, 1.3],
        ];
        let y = vec![1.0, -2.0, 0.5, 3.0, -1.0, 0.25, 2.0];
        let mut fit = StepFit::new(y.clone());
        for c in &cols {
            fit.push_column(c).unwrap();
        }
        fit.remove(1);
        let mut rebuilt = StepFit::new(y.clone());
        for (i, c) in cols.iter().enumerate() {
            if i != 1 {
                rebuilt.push_column(c).unwrap();
            }
        }
        assert_close(fit.sse(), rebuilt.sse(), 1e-10);
        let a = fit.coefficients();
        let b = rebuilt.coefficients();
        for (x, y) in a.iter().zip(&b) {
            assert_close(*x, *y, 1e-10);
        }
        // Adding a column after a removal still works.
        let extra = vec![0.3, 0.3, -1.0, 2.0, 1.1, -0.2, 0.0];
        fit.push_column(&extra).unwrap();
        rebuilt.push_column(&extra).unwrap();
        assert_close(fit.sse(), rebuilt.sse(), 1e-10);
    }

    #[test]
    fn truncate_rolls_back() {
        let y = vec![1.0, 2.0, 3.0, 4.0];
        let mut fit = StepFit::new(y);
        let sse0 = fit.sse();
        fit.push_column(&[1.0, 0.0, 1.0, 0.0]).unwrap();
        fit.push_column(&[0.0, 1.0, 0.0, 1.0]).unwrap();
        fit.truncate(0);
        assert_eq!(fit.k(), 0);
        assert_close(fit.sse(), sse0, 1e-12);
    }
}
