//! Modified backward-in-time selection.
//!
//! The strategy grows the explanatory vector one lagged term at a time.
//! A frontier records, per variable, the largest lag examined so far; each
//! cycle proposes the next unexamined lag of every variable and accepts the
//! BIC-minimizing proposal only if it improves on the current model.  When
//! no proposal improves, every frontier advances by one lag, so the search
//! moves backward in time without revisiting rejected terms.

use crate::error::Result;
use crate::regression::bic_value;
use crate::regression::stepfit::Candidate;
use crate::selection::LagPool;
use crate::series::{ExplanatoryVector, LaggedTerm, TimeSeriesSet};

/// Progress record of one selection run.
#[derive(Debug, Clone)]
pub struct MbtsTrace {
    /// Number of candidate cycles executed; bounded by `K * pmax`.
    pub cycles: usize,
    /// Accepted terms with the criterion value after each acceptance,
    /// a strictly decreasing sequence.
    pub accepted: Vec<(LaggedTerm, f64)>,
}

/// Selects an explanatory vector for `response` with maximum lag `pmax`.
pub fn mbts_select(
    ts: &TimeSeriesSet,
    response: usize,
    pmax: usize,
) -> Result<ExplanatoryVector> {
    mbts_select_with_trace(ts, response, pmax).map(|(ev, _)| ev)
}

/// As [`mbts_select`], also returning the search trace.
pub fn mbts_select_with_trace(
    ts: &TimeSeriesSet,
    response: usize,
    pmax: usize,
) -> Result<(ExplanatoryVector, MbtsTrace)> {
    let pool = LagPool::new(ts, response, pmax)?;
    let k = pool.k();
    let n_eff = pool.n_eff();
    let mut fit = pool.empty_fit();
    // The reference criterion starts at the zero-parameter model.
    let mut bic_old = bic_value(fit.sse(), n_eff, 0);
    let mut frontier = vec![0usize; k];
    let mut ev = ExplanatoryVector::new(response);
    let mut trace = MbtsTrace {
        cycles: 0,
        accepted: Vec::new(),
    };

    while frontier.iter().sum::<usize>() < k * pmax {
        trace.cycles += 1;
        let mut best: Option<(f64, usize, Candidate)> = None;
        for variable in 0..k {
            if frontier[variable] >= pmax {
                continue;
            }
            let term = LaggedTerm::new(variable, frontier[variable] + 1);
            let cand = fit.evaluate(pool.col(term));
            // A dependent column cannot lower the SSE, and a model with as
            // many parameters as equations is no longer a regression; both
            // are unacceptable candidates.
            let cand_bic = if cand.dependent || fit.k() + 1 >= n_eff {
                f64::INFINITY
            } else {
                bic_value(cand.sse, n_eff, fit.k() + 1)
            };
            // Strict comparison keeps the smallest variable index on ties.
            if best.as_ref().map_or(true, |(b, _, _)| cand_bic < *b) {
                best = Some((cand_bic, variable, cand));
            }
        }
        match best {
            Some((bic_new, variable, cand)) if bic_new < bic_old => {
                let term = LaggedTerm::new(variable, frontier[variable] + 1);
                fit.commit(cand);
                ev.push(term).expect("frontier terms are unique");
                frontier[variable] += 1;
                bic_old = bic_new;
                trace.accepted.push((term, bic_new));
            }
            _ => {
                for f in frontier.iter_mut() {
                    *f = (*f + 1).min(pmax);
                }
            }
        }
    }
    Ok((ev, trace))
}
