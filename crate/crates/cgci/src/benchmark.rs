//! Monte Carlo evaluation harness: scores detected graphs against ground
//! truth and compares selection methods over repeated realizations of a
//! benchmark system.

use std::collections::HashMap;

use crate::causality::{causality_matrix, CausalityMatrix, TestMode};
use crate::error::{Error, Result};
use crate::selection::{Method, SelectionConfig};
use crate::series::LaggedTerm;
use crate::simulate::{BuiltSystem, TrueGraph};
use crate::special::t_two_sided;

/// Confusion counts and derived indices for one detected graph, over the
/// `K(K-1)` ordered pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerformanceIndices {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
    /// `TP / (TP + FN)`; absent when the truth has no edges.
    pub sensitivity: Option<f64>,
    /// `TN / (TN + FP)`; absent when the truth is complete.
    pub specificity: Option<f64>,
    /// `TP / (TP + FP)`; absent when nothing was detected.
    pub precision: Option<f64>,
    /// Matthews correlation coefficient; zero when any marginal is empty.
    pub mcc: f64,
    /// `2 TP / (2 TP + FN + FP)`; one when both graphs are empty.
    pub f_measure: f64,
    /// Hamming distance `FP + FN`.
    pub hamming: usize,
}

/// Scores a detected adjacency matrix against the true graph.
pub fn score(detected: &[Vec<bool>], truth: &TrueGraph) -> Result<PerformanceIndices> {
    let k = truth.k();
    if detected.len() != k || detected.iter().any(|row| row.len() != k) {
        return Err(Error::InvalidInput(format!(
            "detected adjacency must be {k} x {k}"
        )));
    }
    let (mut tp, mut fp, mut tn, mut fn_) = (0usize, 0usize, 0usize, 0usize);
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            match (truth.has_edge(i, j), detected[i][j]) {
                (true, true) => tp += 1,
                (false, true) => fp += 1,
                (false, false) => tn += 1,
                (true, false) => fn_ += 1,
            }
        }
    }
    let ratio = |num: usize, den: usize| (den > 0).then(|| num as f64 / den as f64);
    let mcc_den = ((tp + fp) * (tp + fn_) * (tn + fp) * (tn + fn_)) as f64;
    let mcc = if mcc_den > 0.0 {
        (tp as f64 * tn as f64 - fp as f64 * fn_ as f64) / mcc_den.sqrt()
    } else {
        0.0
    };
    let f_measure = if 2 * tp + fn_ + fp == 0 {
        1.0
    } else {
        2.0 * tp as f64 / (2 * tp + fn_ + fp) as f64
    };
    Ok(PerformanceIndices {
        tp,
        fp,
        tn,
        fn_,
        sensitivity: ratio(tp, tp + fn_),
        specificity: ratio(tn, tn + fp),
        precision: ratio(tp, tp + fp),
        mcc,
        f_measure,
        hamming: fp + fn_,
    })
}

/// Which performance index to aggregate or compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexKind {
    Sensitivity,
    Specificity,
    Precision,
    Mcc,
    FMeasure,
    Hamming,
}

impl IndexKind {
    pub const ALL: [IndexKind; 6] = [
        IndexKind::Sensitivity,
        IndexKind::Specificity,
        IndexKind::Precision,
        IndexKind::Mcc,
        IndexKind::FMeasure,
        IndexKind::Hamming,
    ];

    pub fn label(self) -> &'static str {
        match self {
            IndexKind::Sensitivity => "SENS",
            IndexKind::Specificity => "SPEC",
            IndexKind::Precision => "PREC",
            IndexKind::Mcc => "MCC",
            IndexKind::FMeasure => "F1",
            IndexKind::Hamming => "HD",
        }
    }

    /// Extracts the index value; `None` when undefined for this graph.
    pub fn value(self, p: &PerformanceIndices) -> Option<f64> {
        match self {
            IndexKind::Sensitivity => p.sensitivity,
            IndexKind::Specificity => p.specificity,
            IndexKind::Precision => p.precision,
            IndexKind::Mcc => Some(p.mcc),
            IndexKind::FMeasure => Some(p.f_measure),
            IndexKind::Hamming => Some(p.hamming as f64),
        }
    }
}

/// Mean and sample standard deviation over the defined values; undefined
/// entries are excluded, and fewer than two values give deviation zero.
pub fn mean_sd(values: impl IntoIterator<Item = Option<f64>>) -> Option<(f64, f64)> {
    let present: Vec<f64> = values.into_iter().flatten().collect();
    if present.is_empty() {
        return None;
    }
    let n = present.len() as f64;
    let mean = present.iter().sum::<f64>() / n;
    let sd = if present.len() < 2 {
        0.0
    } else {
        (present.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    Some((mean, sd))
}

/// Per-method results over all realizations.
#[derive(Debug, Clone)]
pub struct MethodSummary {
    pub method: Method,
    /// One entry per realization, aligned across methods; failed runs are
    /// scored as empty detections.
    pub indices: Vec<PerformanceIndices>,
    /// Fraction of realizations detecting each ordered pair (row drives
    /// column).
    pub detection_freq: Vec<Vec<f64>>,
    /// Per response, how often each lagged term entered the selected model
    /// (fraction of all realizations).
    pub term_freq: Vec<HashMap<LaggedTerm, f64>>,
    /// Realizations where selection or testing was infeasible.
    pub failures: usize,
}

impl MethodSummary {
    /// Mean and standard deviation of one index over realizations.
    pub fn mean_sd(&self, kind: IndexKind) -> Option<(f64, f64)> {
        mean_sd(self.indices.iter().map(|p| kind.value(p)))
    }

    /// Inclusion frequency of a lagged term in the model for `response`.
    pub fn term_frequency(&self, response: usize, term: LaggedTerm) -> f64 {
        self.term_freq[response].get(&term).copied().unwrap_or(0.0)
    }
}

/// Benchmark parameters shared by every method.
#[derive(Debug, Clone)]
pub struct BenchmarkConfig {
    pub methods: Vec<Method>,
    pub n: usize,
    pub pmax: usize,
    pub alpha: f64,
    pub mode: TestMode,
    pub realizations: usize,
    pub seed: u64,
    pub lasso_drop: bool,
}

impl BenchmarkConfig {
    pub fn new(methods: Vec<Method>, n: usize, pmax: usize, realizations: usize) -> Self {
        BenchmarkConfig {
            methods,
            n,
            pmax,
            alpha: 0.05,
            mode: TestMode::Fdr,
            realizations,
            seed: 1,
            lasso_drop: false,
        }
    }

    fn selection(&self, method: Method) -> SelectionConfig {
        let mut cfg = SelectionConfig::new(method, self.pmax);
        cfg.lasso_drop = self.lasso_drop;
        cfg
    }
}

/// Full benchmark output.
#[derive(Debug, Clone)]
pub struct BenchmarkResult {
    pub system: String,
    pub truth: TrueGraph,
    pub config: BenchmarkConfig,
    pub methods: Vec<MethodSummary>,
}

/// Runs every method on the same `realizations` data sets of the system
/// (realization `r` uses data seed `seed + r`).  A realization on which a
/// method is infeasible counts as a failure for that method and scores as
/// an empty detection, keeping realization alignment across methods.
pub fn run_benchmark(system: &BuiltSystem, config: &BenchmarkConfig) -> Result<BenchmarkResult> {
    if config.methods.is_empty() {
        return Err(Error::InvalidInput("no methods to benchmark".into()));
    }
    if config.realizations == 0 {
        return Err(Error::InvalidInput("realizations must be positive".into()));
    }
    let k = system.k();
    let r_total = config.realizations;
    let mut per_method: Vec<MethodState> = config
        .methods
        .iter()
        .map(|&m| MethodState::new(m, k))
        .collect();

    for r in 0..r_total {
        let ts = system.generate(config.n, config.seed + r as u64)?;
        for state in per_method.iter_mut() {
            let cfg = config.selection(state.method);
            match causality_matrix(&ts, &cfg, config.alpha, config.mode) {
                Ok(matrix) => state.record(&matrix, system.truth())?,
                Err(e) if e.is_infeasible() => state.record_failure(system.truth())?,
                Err(e) => return Err(e),
            }
        }
    }

    let methods = per_method
        .into_iter()
        .map(|s| s.finish(r_total))
        .collect();
    Ok(BenchmarkResult {
        system: system.name().to_string(),
        truth: system.truth().clone(),
        config: config.clone(),
        methods,
    })
}

struct MethodState {
    method: Method,
    indices: Vec<PerformanceIndices>,
    detections: Vec<Vec<usize>>,
    term_counts: Vec<HashMap<LaggedTerm, usize>>,
    failures: usize,
}

impl MethodState {
    fn new(method: Method, k: usize) -> Self {
        MethodState {
            method,
            indices: Vec::new(),
            detections: vec![vec![0; k]; k],
            term_counts: vec![HashMap::new(); k],
            failures: 0,
        }
    }

    fn record(&mut self, matrix: &CausalityMatrix, truth: &TrueGraph) -> Result<()> {
        if matrix.any_infeasible() {
            self.failures += 1;
        }
        self.indices.push(score(&matrix.adjacency, truth)?);
        for i in 0..truth.k() {
            for j in 0..truth.k() {
                if matrix.adjacency[i][j] {
                    self.detections[i][j] += 1;
                }
            }
        }
        for (j, model) in matrix.models.iter().enumerate() {
            for term in model.terms() {
                *self.term_counts[j].entry(*term).or_insert(0) += 1;
            }
        }
        Ok(())
    }

    fn record_failure(&mut self, truth: &TrueGraph) -> Result<()> {
        self.failures += 1;
        let empty = vec![vec![false; truth.k()]; truth.k()];
        self.indices.push(score(&empty, truth)?);
        Ok(())
    }

    fn finish(self, r_total: usize) -> MethodSummary {
        let denom = r_total as f64;
        MethodSummary {
            method: self.method,
            indices: self.indices,
            detection_freq: self
                .detections
                .into_iter()
                .map(|row| row.into_iter().map(|c| c as f64 / denom).collect())
                .collect(),
            term_freq: self
                .term_counts
                .into_iter()
                .map(|m| m.into_iter().map(|(t, c)| (t, c as f64 / denom)).collect())
                .collect(),
            failures: self.failures,
        }
    }
}

/// Paired comparison of one index between the baseline method and another.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub baseline: Method,
    pub other: Method,
    pub index: IndexKind,
    /// Mean of baseline minus other over the paired realizations.
    pub mean_diff: f64,
    pub t_stat: f64,
    /// Two-sided p-value after Bonferroni correction, capped at one.
    pub pvalue: f64,
    /// Realizations where the index was defined for both methods.
    pub pairs_used: usize,
}

/// Paired t test on aligned samples with a Bonferroni factor `m_tests`;
/// returns `(t, corrected p)`.  A zero-variance difference gives p = 1
/// when the mean difference is zero and p = 0 otherwise.
pub fn paired_compare(a: &[f64], b: &[f64], m_tests: usize) -> (f64, f64) {
    assert_eq!(a.len(), b.len(), "paired samples must align");
    let n = a.len();
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let mean = diffs.iter().sum::<f64>() / n.max(1) as f64;
    if n < 2 {
        let p = if mean == 0.0 { 1.0 } else { 0.0 };
        return (0.0, p);
    }
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    if var == 0.0 {
        let p = if mean == 0.0 { 1.0 } else { 0.0 };
        let t = if mean == 0.0 {
            0.0
        } else {
            mean.signum() * f64::INFINITY
        };
        return (t, p);
    }
    let t = mean / (var / n as f64).sqrt();
    let p = t_two_sided(t, (n - 1) as f64);
    (t, (p * m_tests as f64).min(1.0))
}

impl BenchmarkResult {
    /// Compares the first configured method against every other, for one
    /// index, Bonferroni-corrected over the `methods - 1` comparisons.
    pub fn compare(&self, index: IndexKind) -> Vec<Comparison> {
        let mut out = Vec::new();
        if self.methods.len() < 2 {
            return out;
        }
        let m_tests = self.methods.len() - 1;
        let baseline = &self.methods[0];
        for other in &self.methods[1..] {
            let mut a = Vec::new();
            let mut b = Vec::new();
            for (pa, pb) in baseline.indices.iter().zip(&other.indices) {
                if let (Some(va), Some(vb)) = (index.value(pa), index.value(pb)) {
                    a.push(va);
                    b.push(vb);
                }
            }
            let mean_diff = if a.is_empty() {
                0.0
            } else {
                a.iter().zip(&b).map(|(x, y)| x - y).sum::<f64>() / a.len() as f64
            };
            let (t_stat, pvalue) = paired_compare(&a, &b, m_tests);
            out.push(Comparison {
                baseline: baseline.method,
                other: other.method,
                index,
                mean_diff,
                t_stat,
                pvalue,
                pairs_used: a.len(),
            });
        }
        out
    }
}
