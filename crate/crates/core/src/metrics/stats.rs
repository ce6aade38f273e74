use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::StatsError;

/// Normal-approximation multiplier for a two-sided 95% interval.
pub const Z95: f64 = 1.96;

/// Summary of repeated runs: mean with a 95% confidence half-width.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateStats<S> {
    pub n_runs: usize,
    pub mean: S,
    /// Sample standard deviation (n - 1 denominator).
    pub stddev: S,
    pub stderr: S,
    pub ci95: S,
}

impl<S: Scalar> AggregateStats<S> {
    pub fn lower(&self) -> S {
        self.mean - self.ci95
    }

    pub fn upper(&self) -> S {
        self.mean + self.ci95
    }

    /// The two 95% intervals share no point.
    pub fn separated_from(&self, other: &Self) -> bool {
        self.upper() < other.lower() || other.upper() < self.lower()
    }
}

/// Mean, sample deviation, standard error and CI half-width of `samples`.
pub fn aggregate<S: Scalar>(samples: &[S]) -> Result<AggregateStats<S>, StatsError> {
    if samples.len() < 2 {
        return Err(StatsError::TooFewSamples(samples.len()));
    }
    if let Some(bad) = samples.iter().find(|s| !s.is_finite()) {
        return Err(StatsError::NonFinite(bad.to_f64_lossy()));
    }
    // Welford
    let mut mean = S::zero();
    let mut m2 = S::zero();
    for (i, &x) in samples.iter().enumerate() {
        let delta = x - mean;
        mean = mean + delta / S::of_count(i + 1);
        m2 = m2 + delta * (x - mean);
    }
    let n = samples.len();
    let stddev = (m2 / S::of_count(n - 1)).sqrt();
    let stderr = stddev / S::of_count(n).sqrt();
    Ok(AggregateStats {
        n_runs: n,
        mean,
        stddev,
        stderr,
        ci95: stderr * S::of(Z95),
    })
}
