//! Diversity, run traces and summary statistics.

pub mod curve;
pub mod diversity;
pub mod histogram;
pub mod stats;
pub mod trace;
