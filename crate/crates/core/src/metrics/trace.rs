use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::schemes::SchemeConfig;
use crate::metrics::histogram::Histogram;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StopReason {
    TargetReached,
    Stalled,
    GenerationLimit,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StopReason::TargetReached => "target",
            StopReason::Stalled => "stall",
            StopReason::GenerationLimit => "max-generations",
        })
    }
}

/// A change of the best-ever fitness.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BestPoint<S> {
    pub cycle: u64,
    pub fitness: S,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiversitySample<S> {
    pub cycle: u64,
    /// Best-ever fitness at sampling time.
    pub best: S,
    pub total: Option<f64>,
    pub top_band: Option<f64>,
}

/// Everything recorded about one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunTrace<S> {
    pub seed: u64,
    pub scheme: SchemeConfig,
    pub capacity: usize,
    pub initial_size: usize,
    pub level_count: usize,
    pub diversity_every: Option<u64>,
    /// Best-ever fitness change points, starting at cycle 0.
    pub best: Vec<BestPoint<S>>,
    pub diversity: Vec<DiversitySample<S>>,
    /// Final population over fitness levels.
    pub histogram: Histogram<S>,
    pub cycles: u64,
    pub out_of_bounds: u64,
    pub stop_reason: StopReason,
}

impl<S: Scalar> RunTrace<S> {
    pub fn best_fitness(&self) -> S {
        self.best.last().expect("trace starts with the initial best").fitness
    }

    /// Cycle at which the final best was first reached.
    pub fn best_cycle(&self) -> u64 {
        self.best.last().map_or(0, |p| p.cycle)
    }

    pub fn generations(&self) -> f64 {
        self.cycles as f64 / self.capacity as f64
    }

    /// Best-ever fitness after `cycle` cycles.
    pub fn best_at(&self, cycle: u64) -> S {
        let idx = self.best.partition_point(|p| p.cycle <= cycle);
        self.best[idx.saturating_sub(1)].fitness
    }

    /// Change points strictly increase in both cycle and fitness.
    pub fn is_monotone(&self) -> bool {
        self.best
            .windows(2)
            .all(|w| w[0].cycle < w[1].cycle && w[0].fitness < w[1].fitness)
    }
}
