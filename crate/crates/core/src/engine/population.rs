use crate::engine::level_table::LevelTable;
use crate::engine::problem::Individual;
use crate::scalar::Scalar;
use crate::EvoError;

/// Bounded steady-state population with its fitness-level index.
///
/// Members live in slots `0..len()`. A replacement reuses the slot of the
/// individual it removes, so slot ids never exceed `capacity - 1`.
#[derive(Clone, Debug)]
pub struct Population<G, S> {
    members: Vec<Individual<G, S>>,
    member_levels: Vec<usize>,
    capacity: usize,
    table: LevelTable<S>,
}

impl<G, S: Scalar> Population<G, S> {
    pub fn new(capacity: usize, table: LevelTable<S>) -> Result<Self, EvoError> {
        if capacity == 0 {
            return Err(EvoError::Config("capacity must be at least 1".into()));
        }
        Ok(Population {
            members: Vec::with_capacity(capacity),
            member_levels: Vec::with_capacity(capacity),
            capacity,
            table,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn is_full(&self) -> bool {
        self.members.len() >= self.capacity
    }

    pub fn members(&self) -> &[Individual<G, S>] {
        &self.members
    }

    pub fn get(&self, slot: usize) -> &Individual<G, S> {
        &self.members[slot]
    }

    pub fn fitness(&self, slot: usize) -> S {
        self.members[slot].fitness
    }

    pub fn table(&self) -> &LevelTable<S> {
        &self.table
    }

    /// Level stored for `slot` when it was inserted.
    pub fn level_of(&self, slot: usize) -> usize {
        self.member_levels[slot]
    }

    /// Appends a new member; fails once the population is full.
    pub fn push(&mut self, individual: Individual<G, S>) -> Result<usize, EvoError> {
        if self.is_full() {
            return Err(EvoError::Config(format!(
                "population already holds its capacity of {}",
                self.capacity
            )));
        }
        let slot = self.members.len();
        let level = self.table.classify(individual.fitness);
        self.table.insert(slot, level);
        self.members.push(individual);
        self.member_levels.push(level);
        Ok(slot)
    }

    /// Puts `individual` into `slot`, returning the member it displaced.
    pub fn replace(&mut self, slot: usize, individual: Individual<G, S>) -> Individual<G, S> {
        let old_level = self.member_levels[slot];
        let removed = self.table.remove(slot, old_level);
        debug_assert!(removed, "slot {slot} missing from level {old_level}");
        let level = self.table.classify(individual.fitness);
        self.table.insert(slot, level);
        self.member_levels[slot] = level;
        std::mem::replace(&mut self.members[slot], individual)
    }

    /// Slot of the fittest member (lowest slot on ties).
    pub fn best(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, m) in self.members.iter().enumerate() {
            if best.map_or(true, |b| m.fitness > self.members[b].fitness) {
                best = Some(i);
            }
        }
        best
    }

    pub fn fitnesses(&self) -> impl Iterator<Item = S> + '_ {
        self.members.iter().map(|m| m.fitness)
    }

    /// Recounts every level from the members' fitness values and compares it
    /// with the incrementally maintained index.
    pub fn check_coherence(&self) -> Result<(), String> {
        let levels = self.table.level_count();
        let mut expected: Vec<Vec<usize>> = vec![Vec::new(); levels];
        for (slot, m) in self.members.iter().enumerate() {
            let lvl = self.table.level_index(m.fitness).index;
            if lvl != self.member_levels[slot] {
                return Err(format!(
                    "slot {slot} with fitness {} is filed under level {} but belongs to {lvl}",
                    m.fitness, self.member_levels[slot]
                ));
            }
            expected[lvl].push(slot);
        }
        for (lvl, want) in expected.iter().enumerate() {
            if self.table.members(lvl) != want.as_slice() {
                return Err(format!(
                    "level {lvl} holds {:?}, recount gives {:?}",
                    self.table.members(lvl),
                    want
                ));
            }
        }
        if self.table.len() != self.members.len() {
            return Err(format!(
                "level table counts {} members, population has {}",
                self.table.len(),
                self.members.len()
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ind(f: f64) -> Individual<(), f64> {
        Individual { genome: (), fitness: f }
    }

    #[test]
    fn push_and_replace_keep_table_in_sync() {
        let table = LevelTable::new(0.0, 1.0, 4).unwrap();
        let mut pop = Population::new(3, table).unwrap();
        pop.push(ind(0.1)).unwrap();
        pop.push(ind(0.6)).unwrap();
        pop.push(ind(0.65)).unwrap();
        assert!(pop.push(ind(0.2)).is_err());
        assert_eq!(pop.table().occupancy(), vec![1, 0, 2, 0]);
        let old = pop.replace(1, ind(1.0));
        assert_eq!(old.fitness, 0.6);
        assert_eq!(pop.table().occupancy(), vec![1, 0, 1, 1]);
        assert_eq!(pop.best(), Some(1));
        pop.check_coherence().unwrap();
    }

    #[test]
    fn out_of_bounds_members_are_counted() {
        let table = LevelTable::new(0.0, 1.0, 2).unwrap();
        let mut pop = Population::new(2, table).unwrap();
        pop.push(ind(-3.0)).unwrap();
        pop.push(ind(2.0)).unwrap();
        assert_eq!(pop.table().out_of_bounds(), 2);
        assert_eq!(pop.table().occupancy(), vec![1, 1]);
        pop.check_coherence().unwrap();
    }

    #[test]
    fn zero_capacity_is_rejected() {
        let table = LevelTable::<f64>::new(0.0, 1.0, 2).unwrap();
        assert!(Population::<(), f64>::new(0, table).is_err());
    }
}
