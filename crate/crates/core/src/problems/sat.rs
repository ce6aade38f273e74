//! MAX-SAT over clauses of at most three literals.

use std::marker::PhantomData;

use rand::Rng;

use crate::engine::problem::Problem;
use crate::scalar::Scalar;
use crate::ProblemError;

/// Clauses stored back to back; literal `+v` / `-v` refers to variable `v`
/// (1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf3Instance {
    n_vars: usize,
    lits: Vec<i32>,
    starts: Vec<usize>,
    short_clauses: usize,
}

impl Cnf3Instance {
    pub fn new(n_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self, ProblemError> {
        if n_vars == 0 {
            return Err(ProblemError::InvalidInstance("formula needs at least one variable".into()));
        }
        let mut lits = Vec::with_capacity(clauses.len() * 3);
        let mut starts = Vec::with_capacity(clauses.len() + 1);
        let mut short_clauses = 0;
        for (k, clause) in clauses.iter().enumerate() {
            if clause.is_empty() || clause.len() > 3 {
                return Err(ProblemError::InvalidInstance(format!(
                    "clause {} has {} literals, expected 1 to 3",
                    k + 1,
                    clause.len()
                )));
            }
            if let Some(&l) = clause
                .iter()
                .find(|&&l| l == 0 || l.unsigned_abs() as usize > n_vars)
            {
                return Err(ProblemError::InvalidInstance(format!(
                    "clause {} has literal {l} outside 1..={n_vars}",
                    k + 1
                )));
            }
            short_clauses += (clause.len() < 3) as usize;
            starts.push(lits.len());
            lits.extend_from_slice(clause);
        }
        starts.push(lits.len());
        Ok(Cnf3Instance {
            n_vars,
            lits,
            starts,
            short_clauses,
        })
    }

    pub fn vars(&self) -> usize {
        self.n_vars
    }

    pub fn clause_count(&self) -> usize {
        self.starts.len() - 1
    }

    /// Number of clauses with fewer than three literals.
    pub fn short_clauses(&self) -> usize {
        self.short_clauses
    }

    pub fn clause(&self, k: usize) -> &[i32] {
        &self.lits[self.starts[k]..self.starts[k + 1]]
    }

    pub fn clauses(&self) -> impl Iterator<Item = &[i32]> + '_ {
        self.starts.windows(2).map(move |w| &self.lits[w[0]..w[1]])
    }
}

#[inline]
fn literal_true(lit: i32, assignment: &[bool]) -> bool {
    assignment[lit.unsigned_abs() as usize - 1] == (lit > 0)
}

/// Number of satisfied clauses.
pub fn sat_evaluate(assignment: &[bool], inst: &Cnf3Instance) -> Result<usize, ProblemError> {
    if assignment.len() != inst.n_vars {
        return Err(ProblemError::LengthMismatch {
            expected: inst.n_vars,
            found: assignment.len(),
        });
    }
    Ok(inst
        .clauses()
        .filter(|c| c.iter().any(|&l| literal_true(l, assignment)))
        .count())
}

/// Engine adapter: fitness is the satisfied clause count as a scalar.
#[derive(Clone, Debug)]
pub struct MaxSat<S> {
    inst: Cnf3Instance,
    _scalar: PhantomData<S>,
}

impl<S: Scalar> MaxSat<S> {
    pub fn new(inst: Cnf3Instance) -> Self {
        MaxSat {
            inst,
            _scalar: PhantomData,
        }
    }

    pub fn instance(&self) -> &Cnf3Instance {
        &self.inst
    }
}

impl<S: Scalar> Problem for MaxSat<S> {
    type Scalar = S;
    type Genome = Vec<bool>;

    fn random_genome<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<bool> {
        (0..self.inst.n_vars).map(|_| rng.gen_bool(0.5)).collect()
    }

    fn evaluate(&self, x: &Vec<bool>) -> Result<S, ProblemError> {
        sat_evaluate(x, &self.inst).map(S::of_count)
    }

    /// Flips one variable.
    fn mutate<R: Rng + ?Sized>(&self, x: &mut Vec<bool>, rng: &mut R) {
        let v = rng.gen_range(0..x.len());
        x[v] = !x[v];
    }

    /// Each variable from a parent chosen by coin flip.
    fn crossover<R: Rng + ?Sized>(&self, first: &Vec<bool>, second: &Vec<bool>, rng: &mut R) -> Vec<bool> {
        first
            .iter()
            .zip(second)
            .map(|(&a, &b)| if rng.gen_bool(0.5) { a } else { b })
            .collect()
    }

    fn fitness_bounds(&self) -> (S, S) {
        let hi = S::of_count(self.inst.clause_count());
        if hi > S::zero() {
            (S::zero(), hi)
        } else {
            (S::zero(), S::one())
        }
    }

    fn bits<'g>(&self, x: &'g Vec<bool>) -> Option<&'g [bool]> {
        Some(x)
    }
}
