//! The steady-state loop.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::level_table::{default_level_count, LevelTable};
use crate::engine::population::Population;
use crate::engine::problem::{Individual, Problem};
use crate::engine::schemes::{delete, select, SchemeConfig};
use crate::metrics::diversity::{avg_pairwise_hamming, top_band_bits};
use crate::metrics::histogram::population_histogram;
use crate::metrics::trace::{BestPoint, DiversitySample, RunTrace, StopReason};
use crate::scalar::Scalar;
use crate::EvoError;

/// Approximate generation count of a steady-state run.
pub fn generations_of(cycles: u64, capacity: usize) -> f64 {
    assert!(capacity > 0, "capacity must be positive");
    cycles as f64 / capacity as f64
}

/// When to stop. Any clause that fires ends the run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StopRule<S> {
    pub max_generations: Option<f64>,
    /// Generations without a strict improvement of the best-ever fitness.
    pub stall_generations: Option<f64>,
    pub target_fitness: Option<S>,
}

impl<S: Scalar> StopRule<S> {
    pub fn max_generations(g: f64) -> Self {
        StopRule {
            max_generations: Some(g),
            stall_generations: None,
            target_fitness: None,
        }
    }

    pub fn stall(g: f64) -> Self {
        StopRule {
            max_generations: None,
            stall_generations: Some(g),
            target_fitness: None,
        }
    }

    pub fn with_target(mut self, target: S) -> Self {
        self.target_fitness = Some(target);
        self
    }

    pub fn with_max_generations(mut self, g: f64) -> Self {
        self.max_generations = Some(g);
        self
    }

    pub fn validate(&self) -> Result<(), EvoError> {
        if self.max_generations.is_none()
            && self.stall_generations.is_none()
            && self.target_fitness.is_none()
        {
            return Err(EvoError::Config("stop rule needs at least one clause".into()));
        }
        for (name, v) in [
            ("max_generations", self.max_generations),
            ("stall_generations", self.stall_generations),
        ] {
            if let Some(v) = v {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(EvoError::Config(format!("{name} must be positive, got {v}")));
                }
            }
        }
        Ok(())
    }
}

/// Diversity sampling; only active for problems exposing bit genomes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiversitySettings<S> {
    /// Sampling period in cycles; `None` means `capacity / 10`.
    pub every: Option<u64>,
    /// Top-band width in fitness units.
    pub band_width: S,
}

impl<S: Scalar> Default for DiversitySettings<S> {
    fn default() -> Self {
        DiversitySettings {
            every: None,
            band_width: S::of(20.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSettings<S> {
    pub capacity: usize,
    pub initial_size: usize,
    /// `None` means `round(sqrt(capacity))`.
    pub level_count: Option<usize>,
    pub stop: StopRule<S>,
    /// `None` disables diversity sampling.
    pub diversity: Option<DiversitySettings<S>>,
}

impl<S: Scalar> RunSettings<S> {
    /// Full initial population, default levels, diversity sampling on.
    pub fn new(capacity: usize, stop: StopRule<S>) -> Self {
        RunSettings {
            capacity,
            initial_size: capacity,
            level_count: None,
            stop,
            diversity: Some(DiversitySettings::default()),
        }
    }

    pub fn with_initial_size(mut self, n: usize) -> Self {
        self.initial_size = n;
        self
    }

    pub fn with_level_count(mut self, levels: usize) -> Self {
        self.level_count = Some(levels);
        self
    }

    pub fn without_diversity(mut self) -> Self {
        self.diversity = None;
        self
    }

    pub fn levels(&self) -> usize {
        self.level_count
            .unwrap_or_else(|| default_level_count(self.capacity))
    }

    pub fn diversity_every(&self) -> Option<u64> {
        self.diversity
            .map(|d| d.every.unwrap_or((self.capacity as u64 / 10).max(1)))
    }

    pub fn validate(&self) -> Result<(), EvoError> {
        if self.capacity == 0 {
            return Err(EvoError::Config("capacity must be at least 1".into()));
        }
        if self.initial_size == 0 || self.initial_size > self.capacity {
            return Err(EvoError::Config(format!(
                "initial size {} must lie in 1..={}",
                self.initial_size, self.capacity
            )));
        }
        if self.level_count == Some(0) {
            return Err(EvoError::Config("level count must be at least 1".into()));
        }
        if let Some(DiversitySettings { every: Some(0), .. }) = self.diversity {
            return Err(EvoError::Config("diversity period must be at least 1".into()));
        }
        self.stop.validate()
    }
}

/// A member removed by the deletion scheme.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Deleted<S> {
    pub slot: usize,
    pub level: usize,
    pub fitness: S,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepRecord<S> {
    /// Slot the child now occupies.
    pub child: usize,
    pub child_fitness: S,
    /// `None` during the growth phase.
    pub deleted: Option<Deleted<S>>,
    pub crossed: bool,
    pub mutated: bool,
}

/// One steady-state cycle: breed a child, make room if full, insert.
pub fn steady_state_step<P, R>(
    pop: &mut Population<P::Genome, P::Scalar>,
    problem: &P,
    scheme: &SchemeConfig,
    rng: &mut R,
) -> Result<StepRecord<P::Scalar>, EvoError>
where
    P: Problem,
    R: Rng + ?Sized,
{
    let first = select(pop, scheme.selection, rng)?;
    let crossed = rng.gen_bool(scheme.crossover_prob);
    let (mut genome, mutated) = if crossed {
        let second = select(pop, scheme.selection, rng)?;
        let child = problem.crossover(&pop.get(first).genome, &pop.get(second).genome, rng);
        (child, rng.gen_bool(scheme.mutation_prob))
    } else {
        (pop.get(first).genome.clone(), true)
    };
    if mutated {
        problem.mutate(&mut genome, rng);
    }
    problem.repair(&mut genome);
    let child = Individual::evaluated(problem, genome)?;
    let child_fitness = child.fitness;

    if !pop.is_full() {
        let slot = pop.push(child)?;
        return Ok(StepRecord {
            child: slot,
            child_fitness,
            deleted: None,
            crossed,
            mutated,
        });
    }
    let slot = delete(pop, scheme.deletion, rng)?;
    let level = pop.level_of(slot);
    let removed = pop.replace(slot, child);
    Ok(StepRecord {
        child: slot,
        child_fitness,
        deleted: Some(Deleted {
            slot,
            level,
            fitness: removed.fitness,
        }),
        crossed,
        mutated,
    })
}

/// A single seeded run that can be driven cycle by cycle.
pub struct Engine<'p, P: Problem> {
    problem: &'p P,
    scheme: SchemeConfig,
    settings: RunSettings<P::Scalar>,
    seed: u64,
    rng: ChaCha8Rng,
    pop: Population<P::Genome, P::Scalar>,
    cycles: u64,
    best: Individual<P::Genome, P::Scalar>,
    last_improvement: u64,
    best_points: Vec<BestPoint<P::Scalar>>,
    diversity: Vec<DiversitySample<P::Scalar>>,
    diversity_every: Option<u64>,
}

impl<'p, P: Problem> Engine<'p, P> {
    /// Validates the configuration and draws the initial population.
    pub fn new(
        problem: &'p P,
        scheme: SchemeConfig,
        settings: RunSettings<P::Scalar>,
        seed: u64,
    ) -> Result<Self, EvoError> {
        scheme.validate()?;
        settings.validate()?;
        let (f_min, f_max) = problem.fitness_bounds();
        let table = LevelTable::new(f_min, f_max, settings.levels())?;
        let mut pop = Population::new(settings.capacity, table)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..settings.initial_size {
            let mut genome = problem.random_genome(&mut rng);
            problem.repair(&mut genome);
            pop.push(Individual::evaluated(problem, genome)?)?;
        }
        let best = pop.get(pop.best().expect("initial population is non-empty")).clone();
        let diversity_every = settings.diversity_every().filter(|_| {
            problem.bits(&best.genome).is_some()
        });
        let mut engine = Engine {
            problem,
            scheme,
            settings,
            seed,
            rng,
            pop,
            cycles: 0,
            best_points: vec![BestPoint {
                cycle: 0,
                fitness: best.fitness,
            }],
            best,
            last_improvement: 0,
            diversity: Vec::new(),
            diversity_every,
        };
        if engine.diversity_every.is_some() {
            engine.sample_diversity();
        }
        Ok(engine)
    }

    pub fn step(&mut self) -> Result<StepRecord<P::Scalar>, EvoError> {
        let record = steady_state_step(&mut self.pop, self.problem, &self.scheme, &mut self.rng)?;
        self.cycles += 1;
        if record.child_fitness > self.best.fitness {
            self.best = self.pop.get(record.child).clone();
            self.last_improvement = self.cycles;
            self.best_points.push(BestPoint {
                cycle: self.cycles,
                fitness: record.child_fitness,
            });
        }
        if let Some(every) = self.diversity_every {
            if self.cycles % every == 0 {
                self.sample_diversity();
            }
        }
        Ok(record)
    }

    /// The clause that ends the run now, if any.
    pub fn stop_reason(&self) -> Option<StopReason> {
        let stop = &self.settings.stop;
        if let Some(target) = stop.target_fitness {
            if self.best.fitness >= target {
                return Some(StopReason::TargetReached);
            }
        }
        let capacity = self.settings.capacity as f64;
        if let Some(g) = stop.max_generations {
            if self.cycles as f64 >= g * capacity {
                return Some(StopReason::GenerationLimit);
            }
        }
        if let Some(g) = stop.stall_generations {
            if (self.cycles - self.last_improvement) as f64 >= g * capacity {
                return Some(StopReason::Stalled);
            }
        }
        None
    }

    /// Steps until a stop clause fires and returns the trace.
    pub fn run_to_end(&mut self) -> Result<RunTrace<P::Scalar>, EvoError> {
        let reason = loop {
            if let Some(reason) = self.stop_reason() {
                break reason;
            }
            self.step()?;
        };
        Ok(self.trace(reason))
    }

    pub fn population(&self) -> &Population<P::Genome, P::Scalar> {
        &self.pop
    }

    pub fn best(&self) -> &Individual<P::Genome, P::Scalar> {
        &self.best
    }

    pub fn cycles(&self) -> u64 {
        self.cycles
    }

    pub fn generations(&self) -> f64 {
        generations_of(self.cycles, self.settings.capacity)
    }

    pub fn scheme(&self) -> &SchemeConfig {
        &self.scheme
    }

    pub fn settings(&self) -> &RunSettings<P::Scalar> {
        &self.settings
    }

    /// Snapshot of everything recorded so far.
    pub fn trace(&self, stop_reason: StopReason) -> RunTrace<P::Scalar> {
        RunTrace {
            seed: self.seed,
            scheme: self.scheme,
            capacity: self.settings.capacity,
            initial_size: self.settings.initial_size,
            level_count: self.pop.table().level_count(),
            diversity_every: self.diversity_every,
            best: self.best_points.clone(),
            diversity: self.diversity.clone(),
            histogram: population_histogram(&self.pop),
            cycles: self.cycles,
            out_of_bounds: self.pop.table().out_of_bounds(),
            stop_reason,
        }
    }

    fn sample_diversity(&mut self) {
        let band = self
            .settings
            .diversity
            .map(|d| d.band_width)
            .unwrap_or_else(|| P::Scalar::of(20.0));
        let problem = self.problem;
        let members = self.pop.members();
        let bits: Vec<&[bool]> = members
            .iter()
            .filter_map(|m| problem.bits(&m.genome))
            .collect();
        let fitness: Vec<P::Scalar> = members.iter().map(|m| m.fitness).collect();
        self.diversity.push(DiversitySample {
            cycle: self.cycles,
            best: self.best.fitness,
            total: avg_pairwise_hamming(&bits),
            top_band: top_band_bits(&bits, &fitness, band),
        });
    }
}

/// Runs one seeded experiment to completion.
pub fn run<P: Problem>(
    problem: &P,
    scheme: SchemeConfig,
    settings: RunSettings<P::Scalar>,
    seed: u64,
) -> Result<RunTrace<P::Scalar>, EvoError> {
    Engine::new(problem, scheme, settings, seed)?.run_to_end()
}
