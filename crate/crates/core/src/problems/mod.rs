//! Benchmark problem families.

pub mod deceptive;
pub mod pmx;
pub mod sat;
pub mod scp;
pub mod tsp;
