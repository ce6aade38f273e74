//! Symmetric TSP on an explicit distance matrix.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::engine::problem::Problem;
use crate::problems::pmx::pmx_random;
use crate::scalar::Scalar;
use crate::ProblemError;

/// `n × n` symmetric distance matrix with zero diagonal and entries in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TspInstance<S> {
    n: usize,
    dist: Vec<S>,
}

impl<S: Scalar> TspInstance<S> {
    /// `dist` is row-major. Fails on a ragged, asymmetric, non-zero-diagonal
    /// or out-of-range matrix.
    pub fn new(n: usize, dist: Vec<S>) -> Result<Self, ProblemError> {
        if n < 2 {
            return Err(ProblemError::InvalidInstance(format!(
                "a tour needs at least 2 cities, got {n}"
            )));
        }
        if dist.len() != n * n {
            return Err(ProblemError::InvalidInstance(format!(
                "expected {} distances, got {}",
                n * n,
                dist.len()
            )));
        }
        for i in 0..n {
            if dist[i * n + i] != S::zero() {
                return Err(ProblemError::InvalidInstance(format!(
                    "diagonal entry ({i}, {i}) is {}",
                    dist[i * n + i]
                )));
            }
            for j in 0..n {
                let d = dist[i * n + j];
                if !(d >= S::zero() && d <= S::one()) {
                    return Err(ProblemError::InvalidInstance(format!(
                        "distance ({i}, {j}) = {d} is outside [0, 1]"
                    )));
                }
                if d != dist[j * n + i] {
                    return Err(ProblemError::InvalidInstance(format!(
                        "distance ({i}, {j}) = {d} differs from ({j}, {i}) = {}",
                        dist[j * n + i]
                    )));
                }
            }
        }
        Ok(TspInstance { n, dist })
    }

    pub fn cities(&self) -> usize {
        self.n
    }

    pub fn dist(&self, i: usize, j: usize) -> S {
        self.dist[i * self.n + j]
    }

    /// Row-major matrix.
    pub fn matrix(&self) -> &[S] {
        &self.dist
    }

    /// Length of the closed tour; no validation.
    pub fn tour_length(&self, tour: &[usize]) -> S {
        let n = tour.len();
        (0..n).fold(S::zero(), |acc, i| acc + self.dist(tour[i], tour[(i + 1) % n]))
    }

    /// Sum of the `n` shortest distinct edges; no tour can be shorter.
    pub fn length_lower_bound(&self) -> S {
        let mut edges: Vec<S> = (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.dist(i, j))
            .collect();
        edges.sort_by(|a, b| a.partial_cmp(b).expect("validated finite"));
        edges.iter().take(self.n).fold(S::zero(), |a, &b| a + b)
    }
}

/// Reciprocal tour length. Fails unless `tour` is a permutation of the cities.
pub fn tsp_evaluate<S: Scalar>(tour: &[usize], inst: &TspInstance<S>) -> Result<S, ProblemError> {
    check_permutation(tour, inst.n)?;
    Ok(S::one() / inst.tour_length(tour))
}

pub fn check_permutation(tour: &[usize], n: usize) -> Result<(), ProblemError> {
    if tour.len() != n {
        return Err(ProblemError::NotAPermutation(format!(
            "tour has {} entries for {n} cities",
            tour.len()
        )));
    }
    let mut seen = vec![false; n];
    for &c in tour {
        if c >= n || std::mem::replace(&mut seen[c], true) {
            return Err(ProblemError::NotAPermutation(format!(
                "city {c} is out of range or repeated"
            )));
        }
    }
    Ok(())
}

/// Exchanges the cities at two distinct positions.
pub fn swap_mutation<R: Rng + ?Sized>(tour: &mut [usize], rng: &mut R) {
    let n = tour.len();
    if n < 2 {
        return;
    }
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    tour.swap(i, j);
}

impl<S: Scalar> Problem for TspInstance<S> {
    type Scalar = S;
    type Genome = Vec<usize>;

    fn random_genome<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let mut tour: Vec<usize> = (0..self.n).collect();
        tour.shuffle(rng);
        tour
    }

    fn evaluate(&self, tour: &Vec<usize>) -> Result<S, ProblemError> {
        tsp_evaluate(tour, self)
    }

    fn mutate<R: Rng + ?Sized>(&self, tour: &mut Vec<usize>, rng: &mut R) {
        swap_mutation(tour, rng);
    }

    fn crossover<R: Rng + ?Sized>(&self, first: &Vec<usize>, second: &Vec<usize>, rng: &mut R) -> Vec<usize> {
        pmx_random(first, second, rng).expect("engine tours are permutations of the same cities")
    }

    /// `[1/n, 1/lower_bound]`: every edge is at most 1, and no tour beats
    /// the `n` shortest edges.
    fn fitness_bounds(&self) -> (S, S) {
        let f_min = S::one() / S::of_count(self.n);
        let lb = self.length_lower_bound();
        let f_max = if lb > S::zero() { S::one() / lb } else { S::max_value().sqrt() };
        if f_max > f_min {
            (f_min, f_max)
        } else {
            // every tour has length n
            (f_min, f_min + S::one())
        }
    }
}
