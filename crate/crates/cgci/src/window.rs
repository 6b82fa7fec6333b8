//! Sliding-window connectivity analysis and episode-state comparison.
//!
//! Each window gets a full causality analysis; connectivity is summarized
//! by the out-strength of every node, `s_i = mean of CGCI(i -> j) over
//! j != i`, and the network strength `S = mean of s_i`.

use crate::causality::{causality_matrix, CausalityMatrix, TestMode};
use crate::error::{Error, Result};
use crate::selection::SelectionConfig;
use crate::series::TimeSeriesSet;
use crate::special::t_two_sided;

/// Analysis of one window.
#[derive(Debug, Clone)]
pub struct WindowResult {
    /// Offset of the window's first sample in the full recording.
    pub start: usize,
    pub matrix: CausalityMatrix,
    /// Out-strength per node.
    pub strengths: Vec<f64>,
    /// Mean out-strength over nodes.
    pub avg_strength: f64,
}

/// All windows of a scan.
#[derive(Debug, Clone)]
pub struct WindowAnalysis {
    pub window_length: usize,
    pub step: usize,
    pub windows: Vec<WindowResult>,
}

impl WindowAnalysis {
    /// The network strength series, one value per window.
    pub fn strength_series(&self) -> Vec<f64> {
        self.windows.iter().map(|w| w.avg_strength).collect()
    }
}

/// Out-strengths `s_i` of a causality matrix.
pub fn node_strengths(matrix: &CausalityMatrix) -> Vec<f64> {
    let k = matrix.k();
    (0..k)
        .map(|i| {
            let sum: f64 = (0..k).filter(|&j| j != i).map(|j| matrix.cgci[i][j]).sum();
            sum / (k - 1) as f64
        })
        .collect()
}

/// Number of full windows of `length` advancing by `step` over `n` samples.
pub fn window_count(n: usize, length: usize, step: usize) -> usize {
    if length > n || step == 0 {
        return 0;
    }
    (n - length) / step + 1
}

/// Runs the causality analysis on every full window at offsets
/// `0, step, 2 step, ...`.  Each window is demeaned independently.
pub fn window_scan(
    ts: &TimeSeriesSet,
    config: &SelectionConfig,
    alpha: f64,
    mode: TestMode,
    window_length: usize,
    step: usize,
) -> Result<WindowAnalysis> {
    if step == 0 {
        return Err(Error::InvalidInput("step must be at least 1".into()));
    }
    if window_length > ts.len() {
        return Err(Error::InvalidInput(format!(
            "window length {window_length} exceeds the series length {}",
            ts.len()
        )));
    }
    if window_length < config.pmax + 2 {
        return Err(Error::Infeasible(format!(
            "window length {window_length} cannot support pmax = {}",
            config.pmax
        )));
    }
    let count = window_count(ts.len(), window_length, step);
    let mut windows = Vec::with_capacity(count);
    for w in 0..count {
        let start = w * step;
        let slice = ts.window(start, window_length)?;
        let matrix = causality_matrix(&slice, config, alpha, mode)?;
        let strengths = node_strengths(&matrix);
        let avg_strength = strengths.iter().sum::<f64>() / strengths.len() as f64;
        windows.push(WindowResult {
            start,
            matrix,
            strengths,
            avg_strength,
        });
    }
    Ok(WindowAnalysis {
        window_length,
        step,
        windows,
    })
}

/// Recording state of a window within an episode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EpisodeState {
    PreEd,
    Ed,
    PostEd,
}

impl EpisodeState {
    pub const ALL: [EpisodeState; 3] = [EpisodeState::PreEd, EpisodeState::Ed, EpisodeState::PostEd];

    pub fn label(self) -> &'static str {
        match self {
            EpisodeState::PreEd => "preED",
            EpisodeState::Ed => "ED",
            EpisodeState::PostEd => "postED",
        }
    }
}

/// Paired-difference tests of per-episode mean strength between states.
#[derive(Debug, Clone)]
pub struct StateComparison {
    /// Mean strength per episode, ordered `[preED, ED, postED]`.
    pub episode_means: Vec<[f64; 3]>,
    /// `(t, p)` for preED minus ED.
    pub pre_vs_ed: (f64, f64),
    /// `(t, p)` for postED minus ED.
    pub post_vs_ed: (f64, f64),
    /// `(t, p)` for preED minus postED.
    pub pre_vs_post: (f64, f64),
}

/// Compares the labeled strength values across `episodes`.  Every episode
/// must contain at least one window of every state; at least two episodes
/// are required for the paired tests.
pub fn state_compare(episodes: &[Vec<(EpisodeState, f64)>]) -> Result<StateComparison> {
    if episodes.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 episodes for a paired test, got {}",
            episodes.len()
        )));
    }
    let mut episode_means = Vec::with_capacity(episodes.len());
    for (e, windows) in episodes.iter().enumerate() {
        let mut means = [0.0; 3];
        for (slot, state) in EpisodeState::ALL.into_iter().enumerate() {
            let values: Vec<f64> = windows
                .iter()
                .filter(|(s, _)| *s == state)
                .map(|(_, v)| *v)
                .collect();
            if values.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "episode {} has no {} windows",
                    e + 1,
                    state.label()
                )));
            }
            means[slot] = values.iter().sum::<f64>() / values.len() as f64;
        }
        episode_means.push(means);
    }

    let diff_test = |a: usize, b: usize| -> (f64, f64) {
        let diffs: Vec<f64> = episode_means.iter().map(|m| m[a] - m[b]).collect();
        paired_t(&diffs)
    };
    Ok(StateComparison {
        pre_vs_ed: diff_test(0, 1),
        post_vs_ed: diff_test(2, 1),
        pre_vs_post: diff_test(0, 2),
        episode_means,
    })
}

/// Two-sided one-sample t test of the differences against zero.
fn paired_t(diffs: &[f64]) -> (f64, f64) {
    let n = diffs.len();
    let mean = diffs.iter().sum::<f64>() / n as f64;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    if var == 0.0 {
        return if mean == 0.0 {
            (0.0, 1.0)
        } else {
            (mean.signum() * f64::INFINITY, 0.0)
        };
    }
    let t = mean / (var / n as f64).sqrt();
    (t, t_two_sided(t, (n - 1) as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selection::Method;
    use crate::series::TimeSeriesSet;
    use ndarray::Array2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn noise(n: usize, k: usize, seed: u64) -> TimeSeriesSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = Array2::from_shape_fn((n, k), |_| rng.sample::<f64, _>(StandardNormal));
        TimeSeriesSet::with_default_names(values).unwrap()
    }

    #[test]
    fn window_count_formula() {
        assert_eq!(window_count(400, 400, 1), 1);
        assert_eq!(window_count(4600, 400, 200), 22);
        assert_eq!(window_count(10, 4, 3), 3);
        assert_eq!(window_count(10, 11, 1), 0);
    }

    #[test]
    fn scan_produces_expected_windows_and_identities() {
        let ts = noise(120, 3, 5);
        let cfg = SelectionConfig::new(Method::Full, 2);
        let scan = window_scan(&ts, &cfg, 0.05, TestMode::Fdr, 60, 30).unwrap();
        assert_eq!(scan.windows.len(), 3);
        assert_eq!(
            scan.windows.iter().map(|w| w.start).collect::<Vec<_>>(),
            vec![0, 30, 60]
        );
        for w in &scan.windows {
            // s_i is the row mean of the CGCI matrix off the diagonal.
            for i in 0..3 {
                let manual: f64 = (0..3)
                    .filter(|&j| j != i)
                    .map(|j| w.matrix.cgci[i][j])
                    .sum::<f64>()
                    / 2.0;
                assert!((w.strengths[i] - manual).abs() < 1e-15);
                assert!(w.strengths[i] >= 0.0);
            }
            let mean = w.strengths.iter().sum::<f64>() / 3.0;
            assert!((w.avg_strength - mean).abs() < 1e-15);
        }
    }

    #[test]
    fn scan_validates_window_geometry() {
        let ts = noise(50, 2, 1);
        let cfg = SelectionConfig::new(Method::Full, 3);
        assert!(window_scan(&ts, &cfg, 0.05, TestMode::Fdr, 60, 10).is_err());
        assert!(window_scan(&ts, &cfg, 0.05, TestMode::Fdr, 20, 0).is_err());
        match window_scan(&ts, &cfg, 0.05, TestMode::Fdr, 4, 2) {
            Err(Error::Infeasible(_)) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn state_compare_identical_states_give_p_one() {
        let episode = vec![
            (EpisodeState::PreEd, 1.0),
            (EpisodeState::Ed, 1.0),
            (EpisodeState::PostEd, 1.0),
        ];
        let episodes = vec![episode.clone(), episode.clone(), episode];
        let cmp = state_compare(&episodes).unwrap();
        assert_eq!(cmp.pre_vs_ed.1, 1.0);
        assert_eq!(cmp.post_vs_ed.1, 1.0);
        assert_eq!(cmp.pre_vs_post.1, 1.0);
    }

    #[test]
    fn state_compare_validates_input() {
        let one = vec![vec![
            (EpisodeState::PreEd, 1.0),
            (EpisodeState::Ed, 2.0),
            (EpisodeState::PostEd, 1.0),
        ]];
        assert!(state_compare(&one).is_err());
        let missing = vec![
            vec![(EpisodeState::PreEd, 1.0), (EpisodeState::Ed, 2.0)],
            vec![
                (EpisodeState::PreEd, 1.0),
                (EpisodeState::Ed, 2.0),
                (EpisodeState::PostEd, 1.0),
            ],
        ];
        match state_compare(&missing) {
            Err(Error::InvalidInput(msg)) => assert!(msg.contains("postED"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }
}
