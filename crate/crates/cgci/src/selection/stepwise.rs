//! Top-down pruning and bottom-up growth strategies.
//!
//! Both share a single pruning pass that visits each present term once, in
//! a fixed global order, and deletes it when the deletion lowers the BIC.

use crate::error::{Error, Result};
use crate::regression::bic_value;
use crate::regression::stepfit::StepFit;
use crate::selection::LagPool;
use crate::series::{ExplanatoryVector, LaggedTerm, TimeSeriesSet};

/// Global visitation order of the pruning pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneOrder {
    /// Lags from `pmax` down to 1; within a lag, variables from `K` down
    /// to 1 (the TDlag order).
    LagMajor,
    /// Variables from `K` down to 1; within a variable, lags from `pmax`
    /// down to 1 (the TDvar order).
    VariableMajor,
}

impl PruneOrder {
    fn sequence(self, k: usize, pmax: usize) -> Vec<LaggedTerm> {
        let mut seq = Vec::with_capacity(k * pmax);
        match self {
            PruneOrder::LagMajor => {
                for lag in (1..=pmax).rev() {
                    for variable in (0..k).rev() {
                        seq.push(LaggedTerm::new(variable, lag));
                    }
                }
            }
            PruneOrder::VariableMajor => {
                for variable in (0..k).rev() {
                    for lag in (1..=pmax).rev() {
                        seq.push(LaggedTerm::new(variable, lag));
                    }
                }
            }
        }
        seq
    }
}

/// Starts from the full model and prunes a single pass in the given order.
///
/// Requires the full model to be estimable: more equations than the
/// `K * pmax` coefficients, and a full-rank design.
pub fn topdown_select(
    ts: &TimeSeriesSet,
    response: usize,
    pmax: usize,
    order: PruneOrder,
) -> Result<ExplanatoryVector> {
    let pool = LagPool::new(ts, response, pmax)?;
    let k = pool.k();
    let n_eff = pool.n_eff();
    let total = k * pmax;
    if n_eff <= total {
        return Err(Error::Infeasible(format!(
            "full model with {total} terms needs more than {total} equations, got {n_eff}"
        )));
    }
    let mut fit = pool.empty_fit();
    let mut present = Vec::with_capacity(total);
    for variable in 0..k {
        for lag in 1..=pmax {
            let term = LaggedTerm::new(variable, lag);
            if fit.push_column(pool.col(term)).is_none() {
                return Err(Error::Infeasible(format!(
                    "full design is rank deficient at column {term}"
                )));
            }
            present.push(term);
        }
    }
    prune_pass(&mut fit, &mut present, order, k, pmax, n_eff);
    ExplanatoryVector::with_terms(response, present)
}

/// Grows the model variable by variable, choosing each variable's lag depth
/// by BIC, then applies the pruning pass in the given order.
pub fn bottomup_select(
    ts: &TimeSeriesSet,
    response: usize,
    pmax: usize,
    order: PruneOrder,
) -> Result<ExplanatoryVector> {
    let pool = LagPool::new(ts, response, pmax)?;
    let k = pool.k();
    let n_eff = pool.n_eff();
    let mut fit = pool.empty_fit();
    let mut present: Vec<LaggedTerm> = Vec::new();

    for variable in 0..k {
        let base = fit.k();
        // Depth 0 keeps only what previous variables contributed.
        let mut best_bic = bic_value(fit.sse(), n_eff, base);
        let mut best_depth = 0;
        for lag in 1..=pmax {
            if fit.k() + 1 >= n_eff {
                break;
            }
            let cand = fit.evaluate(pool.col(LaggedTerm::new(variable, lag)));
            if cand.dependent {
                // Deeper blocks would carry a redundant column.
                break;
            }
            let sse = cand.sse;
            fit.commit(cand);
            let cand_bic = bic_value(sse, n_eff, base + lag);
            // Strict improvement keeps the smallest depth on ties.
            if cand_bic < best_bic {
                best_bic = cand_bic;
                best_depth = lag;
            }
        }
        fit.truncate(base);
        for lag in 1..=best_depth {
            let cand = fit.evaluate(pool.col(LaggedTerm::new(variable, lag)));
            debug_assert!(!cand.dependent);
            fit.commit(cand);
            present.push(LaggedTerm::new(variable, lag));
        }
    }

    prune_pass(&mut fit, &mut present, order, k, pmax, n_eff);
    ExplanatoryVector::with_terms(response, present)
}

/// One pass over the global term order; each present term is deleted when
/// deleting it lowers the BIC of the current model.
fn prune_pass(
    fit: &mut StepFit,
    present: &mut Vec<LaggedTerm>,
    order: PruneOrder,
    k: usize,
    pmax: usize,
    n_eff: usize,
) {
    for term in order.sequence(k, pmax) {
        let Some(pos) = present.iter().position(|t| *t == term) else {
            continue;
        };
        let m = present.len();
        let with_term = bic_value(fit.sse(), n_eff, m);
        let without = bic_value(fit.sse_without(pos), n_eff, m - 1);
        if without < with_term {
            fit.remove(pos);
            present.remove(pos);
        }
    }
}
