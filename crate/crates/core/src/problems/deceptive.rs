//! Deceptive landscape on the unit square.
//!
//! Two thin bands cut the square: `I1 = [a, a+δ] × [0, 1]` and
//! `I2 = [0, 1] × [b, b+δ]`. Fitness is 3 almost everywhere, drops to 1 on
//! `I1` and to 2 on `I2`, and peaks at 4 only on the `δ × δ` crossing. The
//! only way to the peak goes through the low-fitness bands.

use rand::Rng;

use crate::engine::problem::Problem;
use crate::scalar::Scalar;
use crate::ProblemError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Deceptive2D<S> {
    a: S,
    b: S,
    delta: S,
}

impl<S: Scalar> Deceptive2D<S> {
    pub fn new(a: S, b: S, delta: S) -> Result<Self, ProblemError> {
        let unit = |v: S| v >= S::zero() && v <= S::one();
        if !(delta > S::zero() && delta < S::one()) {
            return Err(ProblemError::InvalidInstance(format!(
                "band width {delta} must lie in (0, 1)"
            )));
        }
        if !unit(a) || !unit(b) || a + delta > S::one() || b + delta > S::one() {
            return Err(ProblemError::InvalidInstance(format!(
                "bands [{a}, {a}+{delta}] and [{b}, {b}+{delta}] must fit in [0, 1]"
            )));
        }
        Ok(Deceptive2D { a, b, delta })
    }

    /// Both bands centred in the square.
    pub fn centered(delta: S) -> Result<Self, ProblemError> {
        let start = (S::one() - delta) / S::of(2.0);
        Self::new(start, start, delta)
    }

    pub fn delta(&self) -> S {
        self.delta
    }

    pub fn in_first_band(&self, x: S) -> bool {
        x >= self.a && x <= self.a + self.delta
    }

    pub fn in_second_band(&self, y: S) -> bool {
        y >= self.b && y <= self.b + self.delta
    }

    pub fn fitness_at(&self, x: S, y: S) -> S {
        S::of(deceptive2d_evaluate(self, x, y) as f64)
    }
}

/// Fitness in `{1, 2, 3, 4}`.
pub fn deceptive2d_evaluate<S: Scalar>(inst: &Deceptive2D<S>, x: S, y: S) -> u8 {
    match (inst.in_first_band(x), inst.in_second_band(y)) {
        (true, true) => 4,
        (true, false) => 1,
        (false, true) => 2,
        (false, false) => 3,
    }
}

fn unit_draw<S: Scalar, R: Rng + ?Sized>(rng: &mut R) -> S {
    S::of(rng.gen::<f64>())
}

impl<S: Scalar> Problem for Deceptive2D<S> {
    type Scalar = S;
    type Genome = Point<S>;

    fn random_genome<R: Rng + ?Sized>(&self, rng: &mut R) -> Point<S> {
        Point {
            x: unit_draw(rng),
            y: unit_draw(rng),
        }
    }

    fn evaluate(&self, p: &Point<S>) -> Result<S, ProblemError> {
        Ok(self.fitness_at(p.x, p.y))
    }

    /// Redraws either coordinate.
    fn mutate<R: Rng + ?Sized>(&self, p: &mut Point<S>, rng: &mut R) {
        if rng.gen_bool(0.5) {
            p.x = unit_draw(rng);
        } else {
            p.y = unit_draw(rng);
        }
    }

    fn crossover<R: Rng + ?Sized>(&self, first: &Point<S>, second: &Point<S>, _rng: &mut R) -> Point<S> {
        Point {
            x: first.x,
            y: second.y,
        }
    }

    fn fitness_bounds(&self) -> (S, S) {
        (S::one(), S::of(4.0))
    }
}
