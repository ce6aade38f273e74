//! Diversity plotted against best fitness reached, averaged over runs.

use serde::{Deserialize, Serialize};

use crate::metrics::trace::{DiversitySample, RunTrace};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiversityKind {
    Total,
    TopBand,
}

impl DiversityKind {
    fn of<S>(self, s: &DiversitySample<S>) -> Option<f64> {
        match self {
            DiversityKind::Total => s.total,
            DiversityKind::TopBand => s.top_band,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint<S> {
    pub best: S,
    pub mean_diversity: f64,
    /// Runs contributing to the mean.
    pub runs: usize,
}

/// Total-diversity curve; see [`diversity_curve`].
pub fn diversity_vs_best_curve<S: Scalar>(traces: &[RunTrace<S>]) -> Vec<CurvePoint<S>> {
    diversity_curve(traces, DiversityKind::Total)
}

/// Mean diversity at every best-fitness checkpoint.
///
/// Checkpoints are the distinct best-fitness values seen in any run's
/// samples. A run's value at checkpoint `b` is the diversity of its first
/// sample whose best fitness is at least `b`; a run that never got there
/// does not count. The curve stops at the last checkpoint reached by more
/// than half of the runs.
pub fn diversity_curve<S: Scalar>(traces: &[RunTrace<S>], kind: DiversityKind) -> Vec<CurvePoint<S>> {
    let mut checkpoints: Vec<S> = traces
        .iter()
        .flat_map(|t| t.diversity.iter().map(|s| s.best))
        .filter(|b| !b.is_nan())
        .collect();
    checkpoints.sort_by(|a, b| a.partial_cmp(b).expect("NaN filtered"));
    checkpoints.dedup();

    let with_samples: Vec<&RunTrace<S>> =
        traces.iter().filter(|t| !t.diversity.is_empty()).collect();
    let total_runs = with_samples.len();

    let mut curve = Vec::new();
    for b in checkpoints {
        let mut reached = 0usize;
        let mut sum = 0.0;
        let mut runs = 0usize;
        for t in &with_samples {
            // samples are in cycle order and best is non-decreasing
            let idx = t.diversity.partition_point(|s| s.best < b);
            if let Some(sample) = t.diversity.get(idx) {
                reached += 1;
                if let Some(d) = kind.of(sample) {
                    sum += d;
                    runs += 1;
                }
            }
        }
        if 2 * reached <= total_runs {
            break;
        }
        if runs > 0 {
            curve.push(CurvePoint {
                best: b,
                mean_diversity: sum / runs as f64,
                runs,
            });
        }
    }
    curve
}
