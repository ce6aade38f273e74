//! Selection and deletion schemes.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::engine::population::Population;
use crate::scalar::Scalar;
use crate::EvoError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Selection {
    /// Sample `k` members with replacement, keep the fittest.
    Tournament(usize),
    /// Every member equally likely.
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Deletion {
    Random,
    /// Fitness uniform deletion: remove a random member of the most crowded
    /// fitness level.
    Fuds,
}

impl Deletion {
    pub fn suffix(self) -> &'static str {
        match self {
            Deletion::Random => "R",
            Deletion::Fuds => "F",
        }
    }
}

/// One steady-state configuration: how parents are picked, who dies, and
/// how often the variation operators fire.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub selection: Selection,
    pub deletion: Deletion,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
}

impl SchemeConfig {
    pub fn new(selection: Selection, deletion: Deletion) -> Self {
        SchemeConfig {
            selection,
            deletion,
            crossover_prob: 0.5,
            mutation_prob: 0.5,
        }
    }

    pub fn tournament(k: usize, deletion: Deletion) -> Self {
        Self::new(Selection::Tournament(k), deletion)
    }

    pub fn with_probs(mut self, crossover_prob: f64, mutation_prob: f64) -> Self {
        self.crossover_prob = crossover_prob;
        self.mutation_prob = mutation_prob;
        self
    }

    pub fn validate(&self) -> Result<(), EvoError> {
        if let Selection::Tournament(0) = self.selection {
            return Err(EvoError::Config("tournament size must be at least 1".into()));
        }
        for (name, p) in [
            ("crossover probability", self.crossover_prob),
            ("mutation probability", self.mutation_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(EvoError::Config(format!("{name} {p} is outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// `TOUR<k>-R`, `RAND-F` and so on.
impl fmt::Display for SchemeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.selection {
            Selection::Tournament(k) => write!(f, "TOUR{k}-{}", self.deletion.suffix()),
            Selection::Uniform => write!(f, "RAND-{}", self.deletion.suffix()),
        }
    }
}

pub fn select<G, S: Scalar, R: Rng + ?Sized>(
    pop: &Population<G, S>,
    selection: Selection,
    rng: &mut R,
) -> Result<usize, EvoError> {
    match selection {
        Selection::Tournament(k) => tournament_select(pop, k, rng),
        Selection::Uniform => tournament_select(pop, 1, rng),
    }
}

/// Draws `k` entrants with replacement and returns the fittest. Ties among
/// entrants are broken uniformly at random.
pub fn tournament_select<G, S: Scalar, R: Rng + ?Sized>(
    pop: &Population<G, S>,
    k: usize,
    rng: &mut R,
) -> Result<usize, EvoError> {
    if pop.is_empty() {
        return Err(EvoError::EmptyPopulation);
    }
    if k == 0 {
        return Err(EvoError::Config("tournament size must be at least 1".into()));
    }
    let n = pop.len();
    let mut winner = rng.gen_range(0..n);
    let mut best = pop.fitness(winner);
    let mut tied = 1u32;
    for _ in 1..k {
        let slot = rng.gen_range(0..n);
        let f = pop.fitness(slot);
        if f > best {
            winner = slot;
            best = f;
            tied = 1;
        } else if f == best {
            // reservoir step: each tied entrant ends up the winner with prob 1/tied
            tied += 1;
            if rng.gen_range(0..tied) == 0 {
                winner = slot;
            }
        }
    }
    Ok(winner)
}

pub fn delete<G, S: Scalar, R: Rng + ?Sized>(
    pop: &Population<G, S>,
    deletion: Deletion,
    rng: &mut R,
) -> Result<usize, EvoError> {
    match deletion {
        Deletion::Random => random_delete(pop, rng),
        Deletion::Fuds => fuds_delete(pop, rng),
    }
}

/// Picks the slot to delete under fitness uniform deletion. The caller
/// removes it.
pub fn fuds_delete<G, S: Scalar, R: Rng + ?Sized>(
    pop: &Population<G, S>,
    rng: &mut R,
) -> Result<usize, EvoError> {
    let table = pop.table();
    let level = table.fullest_level().ok_or(EvoError::EmptyPopulation)?;
    let candidates = table.members(level);
    Ok(candidates[rng.gen_range(0..candidates.len())])
}

/// Picks a slot uniformly at random.
pub fn random_delete<G, S: Scalar, R: Rng + ?Sized>(
    pop: &Population<G, S>,
    rng: &mut R,
) -> Result<usize, EvoError> {
    if pop.is_empty() {
        return Err(EvoError::EmptyPopulation);
    }
    Ok(rng.gen_range(0..pop.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::level_table::LevelTable;
    use crate::engine::problem::Individual;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn population(fitness: &[f64], levels: usize) -> Population<(), f64> {
        let table = LevelTable::new(0.0, levels as f64, levels).unwrap();
        let mut pop = Population::new(fitness.len().max(1), table).unwrap();
        for &f in fitness {
            pop.push(Individual { genome: (), fitness: f }).unwrap();
        }
        pop
    }

    /// Population whose level occupancy is exactly `occ` (level i holds fitness i + 0.5).
    fn with_occupancy(occ: &[usize]) -> Population<(), f64> {
        let fs: Vec<f64> = occ
            .iter()
            .enumerate()
            .flat_map(|(lvl, &n)| std::iter::repeat(lvl as f64 + 0.5).take(n))
            .collect();
        population(&fs, occ.len())
    }

    #[test]
    fn fuds_picks_lowest_of_the_fullest_levels() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (occ, level) in [(vec![2, 7, 7, 1], 1), (vec![5], 0), (vec![0, 0, 3], 2)] {
            let pop = with_occupancy(&occ);
            for _ in 0..200 {
                let slot = fuds_delete(&pop, &mut rng).unwrap();
                assert_eq!(pop.level_of(slot), level, "occupancy {occ:?}");
            }
        }
    }

    #[test]
    fn fuds_is_uniform_inside_the_level() {
        let pop = with_occupancy(&[1, 4]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut hits = [0usize; 5];
        let trials = 40_000;
        for _ in 0..trials {
            hits[fuds_delete(&pop, &mut rng).unwrap()] += 1;
        }
        assert_eq!(hits[0], 0);
        for &h in &hits[1..] {
            let p = h as f64 / trials as f64;
            assert!((p - 0.25).abs() < 0.015, "{hits:?}");
        }
    }

    #[test]
    fn empty_population_is_an_error() {
        let pop = population(&[], 3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(matches!(fuds_delete(&pop, &mut rng), Err(EvoError::EmptyPopulation)));
        assert!(matches!(random_delete(&pop, &mut rng), Err(EvoError::EmptyPopulation)));
        assert!(matches!(tournament_select(&pop, 2, &mut rng), Err(EvoError::EmptyPopulation)));
    }

    #[test]
    fn singleton_is_always_chosen() {
        let pop = population(&[0.3], 1);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert_eq!(random_delete(&pop, &mut rng).unwrap(), 0);
        assert_eq!(fuds_delete(&pop, &mut rng).unwrap(), 0);
        assert_eq!(tournament_select(&pop, 7, &mut rng).unwrap(), 0);
    }

    #[test]
    fn random_delete_hits_rare_level_at_its_share() {
        // occupancy [1, 999]; Monte Carlo with 10^6 draws, 3 sigma band
        let pop = with_occupancy(&[1, 999]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let trials = 1_000_000;
        let hits = (0..trials)
            .filter(|_| pop.level_of(random_delete(&pop, &mut rng).unwrap()) == 0)
            .count();
        let p = 0.001;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        let freq = hits as f64 / trials as f64;
        assert!((freq - p).abs() <= 3.0 * sigma, "frequency {freq}");
    }

    #[test]
    fn tournament_of_two_from_three_picks_best_five_ninths() {
        // ordered pairs (i, j) from {0,1,2}: best (2) wins whenever it is drawn: 5 of 9
        let pop = population(&[0.5, 1.5, 2.5], 3);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let trials = 90_000;
        let wins = (0..trials)
            .filter(|_| tournament_select(&pop, 2, &mut rng).unwrap() == 2)
            .count();
        let p = 5.0 / 9.0;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((wins as f64 / trials as f64 - p).abs() < 4.0 * sigma);
    }

    #[test]
    fn huge_tournament_finds_the_fittest() {
        let pop = population(&[0.2, 3.9, 1.1, 2.0], 4);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            assert_eq!(tournament_select(&pop, 200, &mut rng).unwrap(), 1);
        }
    }

    #[test]
    fn tournament_ties_are_split_evenly() {
        let pop = population(&[1.0, 1.0, 0.0], 3);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut hits = [0usize; 3];
        for _ in 0..30_000 {
            hits[tournament_select(&pop, 50, &mut rng).unwrap()] += 1;
        }
        assert_eq!(hits[2], 0);
        let share = hits[0] as f64 / 30_000.0;
        assert!((share - 0.5).abs() < 0.02, "{hits:?}");
    }

    #[test]
    fn scheme_labels() {
        assert_eq!(SchemeConfig::tournament(10, Deletion::Random).to_string(), "TOUR10-R");
        assert_eq!(SchemeConfig::new(Selection::Uniform, Deletion::Fuds).to_string(), "RAND-F");
        assert!(SchemeConfig::tournament(0, Deletion::Fuds).validate().is_err());
        assert!(SchemeConfig::tournament(2, Deletion::Fuds)
            .with_probs(1.5, 0.5)
            .validate()
            .is_err());
    }
}
