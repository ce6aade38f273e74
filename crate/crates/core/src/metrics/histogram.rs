use serde::{Deserialize, Serialize};

use crate::engine::population::Population;
use crate::scalar::Scalar;

/// Level occupancy with each level's fitness range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram<S> {
    /// Lower fitness edge of every level.
    pub lower_edges: Vec<S>,
    pub width: S,
    pub counts: Vec<usize>,
}

impl<S: Scalar> Histogram<S> {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `(lower, upper)` fitness range of `level`.
    pub fn range(&self, level: usize) -> (S, S) {
        let lo = self.lower_edges[level];
        (lo, lo + self.width)
    }
}

pub fn population_histogram<G, S: Scalar>(pop: &Population<G, S>) -> Histogram<S> {
    let table = pop.table();
    Histogram {
        lower_edges: (0..table.level_count()).map(|l| table.lower_edge(l)).collect(),
        width: table.width(),
        counts: table.occupancy(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::level_table::LevelTable;
    use crate::engine::problem::Individual;

    fn pop(fs: &[f64]) -> Population<(), f64> {
        let mut p = Population::new(8, LevelTable::new(0.0, 4.0, 4).unwrap()).unwrap();
        for &f in fs {
            p.push(Individual { genome: (), fitness: f }).unwrap();
        }
        p
    }

    #[test]
    fn empty_population_gives_zero_counts() {
        let h = population_histogram(&pop(&[]));
        assert_eq!(h.counts, vec![0; 4]);
        assert_eq!(h.lower_edges, vec![0.0, 1.0, 2.0, 3.0]);
        assert_eq!(h.range(3), (3.0, 4.0));
    }

    #[test]
    fn counts_sum_to_members() {
        let h = population_histogram(&pop(&[0.1, 3.9, 4.0, 2.2, 2.3]));
        assert_eq!(h.counts, vec![1, 0, 2, 2]);
        assert_eq!(h.total(), 5);
    }

    #[test]
    fn uniform_fitness_fills_one_level() {
        let h = population_histogram(&pop(&[1.5; 6]));
        assert_eq!(h.counts.iter().filter(|&&c| c > 0).count(), 1);
        assert_eq!(h.counts[1], 6);
    }
}
