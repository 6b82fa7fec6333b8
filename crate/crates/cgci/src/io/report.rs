//! Structured-text reports: diffable, language-neutral output for the
//! command-line tool.  Reals carry six significant digits.

use std::fmt::Write as _;

use crate::benchmark::{BenchmarkResult, IndexKind};
use crate::causality::{CausalityMatrix, PairStatus, TestMode};
use crate::selection::SelectionConfig;
use crate::window::WindowAnalysis;

fn real(v: f64) -> String {
    format!("{v:.5e}")
}

fn test_label(mode: TestMode) -> &'static str {
    match mode {
        TestMode::Fdr => "fdr",
        TestMode::Raw => "raw",
        TestMode::NoTest => "none",
    }
}

fn status_code(status: PairStatus) -> char {
    match status {
        PairStatus::Tested => 'T',
        PairStatus::NoDriverTerms => 'U',
        PairStatus::Infeasible => 'I',
        PairStatus::PerfectFit => 'P',
    }
}

fn matrix_block(out: &mut String, title: &str, rows: impl Iterator<Item = String>) {
    out.push_str(title);
    out.push_str(":\n");
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out.push('\n');
}

/// Renders one causality analysis.
pub fn format_analysis(
    matrix: &CausalityMatrix,
    config: &SelectionConfig,
    names: &[String],
) -> String {
    let k = matrix.k();
    let mut out = String::new();
    out.push_str("# cgci analysis\n");
    let _ = writeln!(out, "method: {}", config.method.label());
    let _ = writeln!(out, "pmax: {}", config.pmax);
    let _ = writeln!(out, "alpha: {}", real(matrix.alpha));
    let _ = writeln!(out, "test: {}", test_label(matrix.mode));
    let _ = writeln!(out, "variables: {}", names.join(" "));
    out.push_str("orientation: entry [i][j] is row variable i driving column variable j\n\n");

    matrix_block(
        &mut out,
        "cgci",
        matrix.cgci.iter().map(|row| {
            row.iter().map(|v| real(*v)).collect::<Vec<_>>().join(" ")
        }),
    );
    matrix_block(
        &mut out,
        "pvalue",
        matrix.pvalue.iter().map(|row| {
            row.iter().map(|v| real(*v)).collect::<Vec<_>>().join(" ")
        }),
    );
    matrix_block(
        &mut out,
        "adjacency",
        matrix.adjacency.iter().map(|row| {
            row.iter()
                .map(|b| if *b { "1" } else { "0" })
                .collect::<Vec<_>>()
                .join(" ")
        }),
    );
    out.push_str("status codes: . self, T tested, U untested zero, I infeasible, P perfect fit\n");
    matrix_block(
        &mut out,
        "status",
        (0..k).map(|i| {
            (0..k)
                .map(|j| {
                    if i == j {
                        ".".to_string()
                    } else {
                        status_code(matrix.status[i][j]).to_string()
                    }
                })
                .collect::<Vec<_>>()
                .join(" ")
        }),
    );

    out.push_str("models:\n");
    for model in &matrix.models {
        let terms = if model.is_empty() {
            "-".to_string()
        } else {
            model
                .terms()
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(" + ")
        };
        let _ = writeln!(out, "{} ~ {}", names[model.response()], terms);
    }
    out.push('\n');

    out.push_str("edges:\n");
    for (i, j) in matrix.edges() {
        let _ = writeln!(out, "{} -> {}", names[i], names[j]);
    }
    out
}

/// Renders a Monte Carlo benchmark report.
pub fn format_benchmark(result: &BenchmarkResult) -> String {
    let mut out = String::new();
    out.push_str("# cgci benchmark\n");
    let _ = writeln!(out, "system: {}", result.system);
    let _ = writeln!(
        out,
        "methods: {}",
        result
            .config
            .methods
            .iter()
            .map(|m| m.label())
            .collect::<Vec<_>>()
            .join(" ")
    );
    let _ = writeln!(out, "n: {}", result.config.n);
    let _ = writeln!(out, "pmax: {}", result.config.pmax);
    let _ = writeln!(out, "alpha: {}", real(result.config.alpha));
    let _ = writeln!(out, "test: {}", test_label(result.config.mode));
    let _ = writeln!(out, "realizations: {}", result.config.realizations);
    let _ = writeln!(out, "seed: {}", result.config.seed);
    let _ = writeln!(out, "true edges: {}", result.truth.edge_count());
    out.push('\n');

    for summary in &result.methods {
        let _ = writeln!(out, "method: {}", summary.method.label());
        let _ = writeln!(out, "failures: {}", summary.failures);
        for kind in IndexKind::ALL {
            match summary.mean_sd(kind) {
                Some((mean, sd)) => {
                    let n = summary
                        .indices
                        .iter()
                        .filter(|p| kind.value(p).is_some())
                        .count();
                    let _ = writeln!(
                        out,
                        "{}: mean {} sd {} (n={})",
                        kind.label(),
                        real(mean),
                        real(sd),
                        n
                    );
                }
                None => {
                    let _ = writeln!(out, "{}: undefined", kind.label());
                }
            }
        }
        matrix_block(
            &mut out,
            "detection_freq",
            summary.detection_freq.iter().map(|row| {
                row.iter().map(|v| real(*v)).collect::<Vec<_>>().join(" ")
            }),
        );
    }

    if result.config.methods.len() > 1 {
        let _ = writeln!(
            out,
            "comparisons (baseline {}, Bonferroni x{}):",
            result.config.methods[0].label(),
            result.config.methods.len() - 1
        );
        for kind in IndexKind::ALL {
            for cmp in result.compare(kind) {
                let _ = writeln!(
                    out,
                    "{} {} vs {}: diff {} t {} p {} (n={})",
                    kind.label(),
                    cmp.baseline.label(),
                    cmp.other.label(),
                    real(cmp.mean_diff),
                    real(cmp.t_stat),
                    real(cmp.pvalue),
                    cmp.pairs_used
                );
            }
        }
    }
    out
}

/// Renders a sliding-window scan.
pub fn format_window(analysis: &WindowAnalysis, names: &[String]) -> String {
    let mut out = String::new();
    out.push_str("# cgci window scan\n");
    let _ = writeln!(out, "window: {}", analysis.window_length);
    let _ = writeln!(out, "step: {}", analysis.step);
    let _ = writeln!(out, "windows: {}", analysis.windows.len());
    let _ = writeln!(out, "variables: {}", names.join(" "));
    out.push('\n');
    out.push_str("columns: window start S s_1..s_K edges\n");
    for (w, win) in analysis.windows.iter().enumerate() {
        let strengths = win
            .strengths
            .iter()
            .map(|v| real(*v))
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(
            out,
            "{} {} {} {} {}",
            w + 1,
            win.start,
            real(win.avg_strength),
            strengths,
            win.matrix.edges().len()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causality::analyze;
    use crate::selection::Method;
    use crate::series::TimeSeriesSet;
    use ndarray::Array2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn analysis_report_contains_the_schema_sections() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let values = Array2::from_shape_fn((80, 2), |_| rng.sample::<f64, _>(StandardNormal));
        let ts = TimeSeriesSet::with_default_names(values).unwrap();
        let cfg = SelectionConfig::new(Method::Full, 2);
        let m = analyze(&ts, Method::Full, 2, 0.05, crate::causality::TestMode::Fdr).unwrap();
        let text = format_analysis(&m, &cfg, ts.names());
        for section in [
            "method: Full",
            "pmax: 2",
            "alpha: 5.00000e-2",
            "test: fdr",
            "variables: X1 X2",
            "cgci:",
            "pvalue:",
            "adjacency:",
            "status:",
            "models:",
            "edges:",
        ] {
            assert!(text.contains(section), "missing '{section}' in:\n{text}");
        }
        // Determinism: identical invocation renders identical bytes.
        let m2 = analyze(&ts, Method::Full, 2, 0.05, crate::causality::TestMode::Fdr).unwrap();
        assert_eq!(text, format_analysis(&m2, &cfg, ts.names()));
    }

    #[test]
    fn reals_use_six_significant_digits() {
        assert_eq!(real(0.05), "5.00000e-2");
        assert_eq!(real(0.0), "0.00000e0");
        assert_eq!(real(-1.25e10), "-1.25000e10");
    }
}
