//! Minimum-norm least squares via one-sided Jacobi orthogonalization.
//!
//! Slow path used only when the design is rank deficient.  The one-sided
//! Jacobi iteration rotates column pairs until all columns are mutually
//! orthogonal, yielding `A V = U S` without ever forming normal equations.

use ndarray::{Array2, ArrayView1, ArrayView2};

/// Returns the minimum-norm least-squares solution and the numerical rank.
pub(crate) fn min_norm_lstsq(a: ArrayView2<'_, f64>, y: ArrayView1<'_, f64>) -> (Vec<f64>, usize) {
    let (n, k) = a.dim();
    if k == 0 {
        return (Vec::new(), 0);
    }
    let mut b = a.to_owned();
    let mut v = Array2::<f64>::eye(k);

    const MAX_SWEEPS: usize = 60;
    let eps = f64::EPSILON;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in (p + 1)..k {
                let (mut app, mut aqq, mut apq) = (0.0, 0.0, 0.0);
                for i in 0..n {
                    let (x, z) = (b[[i, p]], b[[i, q]]);
                    app += x * x;
                    aqq += z * z;
                    apq += x * z;
                }
                if apq.abs() <= 1e-30 || apq.abs() <= eps * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let cos = 1.0 / (1.0 + t * t).sqrt();
                let sin = t * cos;
                for i in 0..n {
                    let (x, z) = (b[[i, p]], b[[i, q]]);
                    b[[i, p]] = cos * x - sin * z;
                    b[[i, q]] = sin * x + cos * z;
                }
                for i in 0..k {
                    let (x, z) = (v[[i, p]], v[[i, q]]);
                    v[[i, p]] = cos * x - sin * z;
                    v[[i, q]] = sin * x + cos * z;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let singular: Vec<f64> = (0..k)
        .map(|j| b.column(j).iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    let smax = singular.iter().cloned().fold(0.0, f64::max);
    let tol = smax * eps * (n.max(k) as f64);
    let mut rank = 0;
    let mut beta = vec![0.0; k];
    for j in 0..k {
        if singular[j] <= tol || singular[j] == 0.0 {
            continue;
        }
        rank += 1;
        // Contribution v_j * (u_j . y) / s_j with u_j = b_j / s_j.
        let uy: f64 = b.column(j).iter().zip(y.iter()).map(|(u, yv)| u * yv).sum();
        let scale = uy / (singular[j] * singular[j]);
        for i in 0..k {
            beta[i] += v[[i, j]] * scale;
        }
    }
    (beta, rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array1};

    #[test]
    fn full_rank_matches_exact_solution() {
        let a = array![[1.0, 0.0], [1.0, 1.0], [1.0, 2.0], [1.0, 3.0]];
        // y = 1 + 2 x exactly.
        let y = Array1::from(vec![1.0, 3.0, 5.0, 7.0]);
        let (beta, rank) = min_norm_lstsq(a.view(), y.view());
        assert_eq!(rank, 2);
        assert!((beta[0] - 1.0).abs() < 1e-10);
        assert!((beta[1] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn duplicated_column_splits_weight_evenly() {
        // Design [c, c] with y = 2 c: basic solutions include (2, 0), but the
        // minimum-norm solution is (1, 1).
        let c = [1.0, -2.0, 0.5, 3.0];
        let a = Array2::from_shape_fn((4, 2), |(i, _)| c[i]);
        let y = Array1::from(c.iter().map(|v| 2.0 * v).collect::<Vec<_>>());
        let (beta, rank) = min_norm_lstsq(a.view(), y.view());
        assert_eq!(rank, 1);
        assert!((beta[0] - 1.0).abs() < 1e-10);
        assert!((beta[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let a = Array2::<f64>::zeros((3, 2));
        let y = Array1::from(vec![1.0, 2.0, 3.0]);
        let (beta, rank) = min_norm_lstsq(a.view(), y.view());
        assert_eq!(rank, 0);
        assert_eq!(beta, vec![0.0, 0.0]);
    }
}
