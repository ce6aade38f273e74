//! Steady-state evolutionary optimisation with fitness uniform deletion.
//!
//! The engine keeps a bounded population indexed by fitness level. Under
//! fitness uniform deletion (FUDS) the member removed to make room for a
//! child is drawn from the most crowded level, so rare fitness values
//! survive and no level can take over the population. Random deletion is
//! provided as the baseline.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! `*F64` aliases below fix the common case.
//!
//! ```
//! use fuds::{run, Deceptive2D, Deletion, RunSettings, SchemeConfig, StopRule};
//!
//! let problem = Deceptive2D::<f64>::centered(0.1).unwrap();
//! let scheme = SchemeConfig::tournament(2, Deletion::Fuds);
//! let settings = RunSettings::new(200, StopRule::max_generations(50.0).with_target(4.0));
//! let trace = run(&problem, scheme, settings, 7).unwrap();
//! assert!(trace.best_fitness() >= 3.0);
//! ```

use thiserror::Error;

pub mod engine;
pub mod io;
pub mod metrics;
pub mod problems;
pub mod scalar;

pub use engine::level_table::{default_level_count, level_index, LevelHit, LevelTable};
pub use engine::population::Population;
pub use engine::problem::{Individual, Problem};
pub use engine::run::{
    generations_of, run, steady_state_step, Deleted, DiversitySettings, Engine, RunSettings,
    StepRecord, StopRule,
};
pub use engine::schemes::{
    fuds_delete, random_delete, tournament_select, Deletion, SchemeConfig, Selection,
};
pub use metrics::curve::{diversity_curve, diversity_vs_best_curve, CurvePoint, DiversityKind};
pub use metrics::diversity::{avg_pairwise_hamming, top_band_diversity};
pub use metrics::histogram::{population_histogram, Histogram};
pub use metrics::stats::{aggregate, AggregateStats};
pub use metrics::trace::{RunTrace, StopReason};
pub use problems::deceptive::{deceptive2d_evaluate, Deceptive2D, Point};
pub use problems::pmx::pmx_crossover;
pub use problems::sat::{sat_evaluate, Cnf3Instance, MaxSat};
pub use problems::scp::{scp_evaluate, scp_repair, ScpInstance};
pub use problems::tsp::{tsp_evaluate, TspInstance};
pub use scalar::Scalar;

pub type LevelTableF64 = LevelTable<f64>;
pub type LevelTableF32 = LevelTable<f32>;
pub type RunTraceF64 = RunTrace<f64>;
pub type RunTraceF32 = RunTrace<f32>;
pub type StopRuleF64 = StopRule<f64>;
pub type RunSettingsF64 = RunSettings<f64>;
pub type AggregateStatsF64 = AggregateStats<f64>;
pub type Deceptive2DF64 = Deceptive2D<f64>;
pub type TspInstanceF64 = TspInstance<f64>;
pub type TspInstanceF32 = TspInstance<f32>;
pub type ScpInstanceF64 = ScpInstance<f64>;
pub type MaxSatF64 = MaxSat<f64>;

#[derive(Debug, Error)]
pub enum EvoError {
    #[error("operation needs a non-empty population")]
    EmptyPopulation,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("genome is not a permutation: {0}")]
    NotAPermutation(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("cut points [{cut1}, {cut2}) are invalid for length {len}")]
    InvalidCuts { cut1: usize, cut2: usize, len: usize },
    #[error("selection leaves row {row} uncovered")]
    Infeasible { row: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("sample {0} is not finite")]
    NonFinite(f64),
}
