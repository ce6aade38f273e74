//! Fitness-level occupancy index.
//!
//! `[f_min, f_max]` is cut into `L` equal-width levels. Every level is
//! half-open except the last one, which also contains `f_max`. Each level
//! keeps the population slots whose fitness falls inside it, sorted by slot
//! id so that "the r-th member of a level" has one meaning regardless of
//! insertion history.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::EvoError;

/// Where a fitness value landed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelHit {
    pub index: usize,
    /// The value was outside `[f_min, f_max]` (or NaN) and was clamped.
    pub clamped: bool,
}

/// Map `f` to its level in `[f_min, f_max]` split into `levels` parts.
///
/// Values outside the bounds are clamped to the nearest end and reported
/// through [`LevelHit::clamped`]. NaN goes to level 0.
pub fn level_index<S: Scalar>(f: S, f_min: S, f_max: S, levels: usize) -> LevelHit {
    debug_assert!(levels >= 1 && f_min < f_max);
    if f.is_nan() {
        return LevelHit { index: 0, clamped: true };
    }
    if f < f_min {
        return LevelHit { index: 0, clamped: true };
    }
    if f >= f_max {
        return LevelHit {
            index: levels - 1,
            clamped: f > f_max,
        };
    }
    let scaled = ((f - f_min) * S::of_count(levels) / (f_max - f_min)).floor();
    // rounding can push values just below f_max onto L
    let index = scaled.to_usize().unwrap_or(0).min(levels - 1);
    LevelHit { index, clamped: false }
}

/// Default number of levels for a population of `capacity`: `round(sqrt(capacity))`, at least 1.
pub fn default_level_count(capacity: usize) -> usize {
    ((capacity as f64).sqrt().round() as usize).max(1)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelTable<S> {
    f_min: S,
    f_max: S,
    levels: Vec<Vec<usize>>,
    len: usize,
    out_of_bounds: u64,
}

impl<S: Scalar> LevelTable<S> {
    pub fn new(f_min: S, f_max: S, level_count: usize) -> Result<Self, EvoError> {
        if level_count == 0 {
            return Err(EvoError::Config("level count must be at least 1".into()));
        }
        if !(f_min < f_max) || !f_min.is_finite() || !f_max.is_finite() {
            return Err(EvoError::Config(format!(
                "fitness bounds must satisfy f_min < f_max, got [{f_min}, {f_max}]"
            )));
        }
        Ok(LevelTable {
            f_min,
            f_max,
            levels: vec![Vec::new(); level_count],
            len: 0,
            out_of_bounds: 0,
        })
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn bounds(&self) -> (S, S) {
        (self.f_min, self.f_max)
    }

    /// Width of one level.
    pub fn width(&self) -> S {
        (self.f_max - self.f_min) / S::of_count(self.levels.len())
    }

    /// Lower fitness edge of `level`.
    pub fn lower_edge(&self, level: usize) -> S {
        self.f_min + self.width() * S::of_count(level)
    }

    /// Pure lookup, does not touch the out-of-bounds counter.
    pub fn level_index(&self, f: S) -> LevelHit {
        level_index(f, self.f_min, self.f_max, self.levels.len())
    }

    /// Lookup that counts clamped values.
    pub fn classify(&mut self, f: S) -> usize {
        let hit = self.level_index(f);
        if hit.clamped {
            self.out_of_bounds += 1;
        }
        hit.index
    }

    pub fn out_of_bounds(&self) -> u64 {
        self.out_of_bounds
    }

    pub fn insert(&mut self, slot: usize, level: usize) {
        let list = &mut self.levels[level];
        match list.binary_search(&slot) {
            Ok(_) => panic!("slot {slot} already present in level {level}"),
            Err(at) => list.insert(at, slot),
        }
        self.len += 1;
    }

    /// Returns false if `slot` was not in `level`.
    pub fn remove(&mut self, slot: usize, level: usize) -> bool {
        let list = &mut self.levels[level];
        match list.binary_search(&slot) {
            Ok(at) => {
                list.remove(at);
                self.len -= 1;
                true
            }
            Err(_) => false,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Slots in `level`, ascending.
    pub fn members(&self, level: usize) -> &[usize] {
        &self.levels[level]
    }

    pub fn occupancy_of(&self, level: usize) -> usize {
        self.levels[level].len()
    }

    pub fn occupancy(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// Most populated level; the lowest index wins ties. `None` when empty.
    pub fn fullest_level(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for (i, list) in self.levels.iter().enumerate() {
            let n = list.len();
            if n > 0 && best.map_or(true, |(_, m)| n > m) {
                best = Some((i, n));
            }
        }
        best.map(|(i, _)| i)
    }
}
