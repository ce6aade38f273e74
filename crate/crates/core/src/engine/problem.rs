use rand::Rng;

use crate::scalar::Scalar;
use crate::ProblemError;

/// An optimisation problem as seen by the steady-state engine.
///
/// Fitness is maximised. Implementations must be pure: `evaluate` on the same
/// genome always yields the same value.
pub trait Problem: Sync {
    type Scalar: Scalar;
    type Genome: Clone + Send + Sync;

    fn random_genome<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Genome;

    fn evaluate(&self, genome: &Self::Genome) -> Result<Self::Scalar, ProblemError>;

    fn mutate<R: Rng + ?Sized>(&self, genome: &mut Self::Genome, rng: &mut R);

    fn crossover<R: Rng + ?Sized>(
        &self,
        first: &Self::Genome,
        second: &Self::Genome,
        rng: &mut R,
    ) -> Self::Genome;

    /// Runs on every freshly built genome before it is evaluated.
    fn repair(&self, _genome: &mut Self::Genome) {}

    /// `(f_min, f_max)` used to lay out fitness levels.
    fn fitness_bounds(&self) -> (Self::Scalar, Self::Scalar);

    /// Bit-vector view for Hamming diversity; `None` when the genome has no
    /// such view.
    fn bits<'g>(&self, _genome: &'g Self::Genome) -> Option<&'g [bool]> {
        None
    }
}

/// A genome with its cached fitness.
#[derive(Clone, Debug, PartialEq)]
pub struct Individual<G, S> {
    pub genome: G,
    pub fitness: S,
}

impl<G, S: Scalar> Individual<G, S> {
    pub fn evaluated<P>(problem: &P, genome: G) -> Result<Self, ProblemError>
    where
        P: Problem<Genome = G, Scalar = S>,
    {
        let fitness = problem.evaluate(&genome)?;
        Ok(Individual { genome, fitness })
    }
}
