//! Steady-state evolutionary engine.

pub mod level_table;
pub mod population;
pub mod problem;
pub mod run;
pub mod schemes;
