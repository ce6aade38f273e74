//! Weighted set covering.
//!
//! Genomes are column-selection bit vectors. Every genome the engine builds
//! goes through [`scp_repair`], which makes it a cover and strips redundant
//! columns, so evaluation only ever sees feasible selections.

use rand::Rng;

use crate::engine::problem::Problem;
use crate::scalar::Scalar;
use crate::ProblemError;

#[derive(Clone, Debug, PartialEq)]
pub struct ScpInstance<S> {
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
    cost: Vec<S>,
}

impl<S: Scalar> ScpInstance<S> {
    /// `rows[i]` lists the (0-based) columns covering row `i`.
    pub fn new(rows: Vec<Vec<usize>>, cost: Vec<S>) -> Result<Self, ProblemError> {
        let n = cost.len();
        if rows.is_empty() || n == 0 {
            return Err(ProblemError::InvalidInstance(
                "instance needs at least one row and one column".into(),
            ));
        }
        if let Some((j, c)) = cost.iter().enumerate().find(|(_, c)| !(**c > S::zero()) || !c.is_finite()) {
            return Err(ProblemError::InvalidInstance(format!(
                "column {} has non-positive cost {c}",
                j + 1
            )));
        }
        let mut cols = vec![Vec::new(); n];
        let mut rows = rows;
        for (i, row) in rows.iter_mut().enumerate() {
            row.sort_unstable();
            row.dedup();
            if row.is_empty() {
                return Err(ProblemError::InvalidInstance(format!(
                    "row {} is covered by no column",
                    i + 1
                )));
            }
            for &j in row.iter() {
                if j >= n {
                    return Err(ProblemError::InvalidInstance(format!(
                        "row {} references column {} of {n}",
                        i + 1,
                        j + 1
                    )));
                }
                cols[j].push(i);
            }
        }
        Ok(ScpInstance { rows, cols, cost })
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn columns(&self) -> usize {
        self.cost.len()
    }

    pub fn cost(&self, col: usize) -> S {
        self.cost[col]
    }

    pub fn costs(&self) -> &[S] {
        &self.cost
    }

    /// Columns covering `row`, ascending.
    pub fn row_cover(&self, row: usize) -> &[usize] {
        &self.rows[row]
    }

    /// Rows covered by `col`, ascending.
    pub fn column_rows(&self, col: usize) -> &[usize] {
        &self.cols[col]
    }

    pub fn selection_cost(&self, x: &[bool]) -> S {
        x.iter()
            .zip(&self.cost)
            .filter(|(&on, _)| on)
            .fold(S::zero(), |acc, (_, &c)| acc + c)
    }

    /// First uncovered row, if any.
    pub fn uncovered_row(&self, x: &[bool]) -> Option<usize> {
        self.rows
            .iter()
            .position(|cover| !cover.iter().any(|&j| x[j]))
    }

    pub fn is_cover(&self, x: &[bool]) -> bool {
        x.len() == self.columns() && self.uncovered_row(x).is_none()
    }
}

/// Reciprocal cost of a feasible selection.
pub fn scp_evaluate<S: Scalar>(x: &[bool], inst: &ScpInstance<S>) -> Result<S, ProblemError> {
    if x.len() != inst.columns() {
        return Err(ProblemError::LengthMismatch {
            expected: inst.columns(),
            found: x.len(),
        });
    }
    if let Some(row) = inst.uncovered_row(x) {
        return Err(ProblemError::Infeasible { row });
    }
    Ok(S::one() / inst.selection_cost(x))
}

/// Greedy completion followed by redundancy elimination.
///
/// Adds, while rows are uncovered, the column with the lowest cost per newly
/// covered row (lowest index on ties). Then walks the selected columns from
/// most to least expensive (higher index first on ties) and drops each one
/// whose rows are all covered by something else.
pub fn scp_repair<S: Scalar>(x: &mut [bool], inst: &ScpInstance<S>) {
    assert_eq!(x.len(), inst.columns(), "selection length");
    let m = inst.rows();
    let n = inst.columns();
    let mut covered_by = vec![0u32; m];
    for j in (0..n).filter(|&j| x[j]) {
        for &i in &inst.cols[j] {
            covered_by[i] += 1;
        }
    }
    let mut uncovered = covered_by.iter().filter(|&&c| c == 0).count();
    if uncovered > 0 {
        // new rows each column would cover
        let mut gain: Vec<usize> = (0..n)
            .map(|j| inst.cols[j].iter().filter(|&&i| covered_by[i] == 0).count())
            .collect();
        while uncovered > 0 {
            let mut pick: Option<(usize, S)> = None;
            for j in 0..n {
                if x[j] || gain[j] == 0 {
                    continue;
                }
                let ratio = inst.cost[j] / S::of_count(gain[j]);
                if pick.map_or(true, |(_, r)| ratio < r) {
                    pick = Some((j, ratio));
                }
            }
            let (j, _) = pick.expect("validated instances cover every row");
            x[j] = true;
            for &i in &inst.cols[j] {
                if covered_by[i] == 0 {
                    uncovered -= 1;
                    for &k in &inst.rows[i] {
                        gain[k] -= 1;
                    }
                }
                covered_by[i] += 1;
            }
        }
    }
    let mut selected: Vec<usize> = (0..n).filter(|&j| x[j]).collect();
    selected.sort_by(|&a, &b| {
        inst.cost[b]
            .partial_cmp(&inst.cost[a])
            .expect("finite costs")
            .then(b.cmp(&a))
    });
    for j in selected {
        if inst.cols[j].iter().all(|&i| covered_by[i] >= 2) {
            x[j] = false;
            for &i in &inst.cols[j] {
                covered_by[i] -= 1;
            }
        }
    }
}

impl<S: Scalar> Problem for ScpInstance<S> {
    type Scalar = S;
    type Genome = Vec<bool>;

    /// One random covering column per row; repair trims the rest.
    fn random_genome<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<bool> {
        let mut x = vec![false; self.columns()];
        for cover in &self.rows {
            x[cover[rng.gen_range(0..cover.len())]] = true;
        }
        x
    }

    fn evaluate(&self, x: &Vec<bool>) -> Result<S, ProblemError> {
        scp_evaluate(x, self)
    }

    /// Flips one column.
    fn mutate<R: Rng + ?Sized>(&self, x: &mut Vec<bool>, rng: &mut R) {
        let j = rng.gen_range(0..x.len());
        x[j] = !x[j];
    }

    /// Uniform crossover.
    fn crossover<R: Rng + ?Sized>(&self, first: &Vec<bool>, second: &Vec<bool>, rng: &mut R) -> Vec<bool> {
        first
            .iter()
            .zip(second)
            .map(|(&a, &b)| if rng.gen_bool(0.5) { a } else { b })
            .collect()
    }

    fn repair(&self, x: &mut Vec<bool>) {
        scp_repair(x, self);
    }

    /// `[1/total cost, 1/cheapest column]`.
    fn fitness_bounds(&self) -> (S, S) {
        let total = self.cost.iter().fold(S::zero(), |a, &c| a + c);
        let cheapest = self.cost.iter().copied().fold(S::infinity(), S::min);
        let (lo, hi) = (S::one() / total, S::one() / cheapest);
        if hi > lo {
            (lo, hi)
        } else {
            // a single column
            (lo, lo + S::one())
        }
    }

    fn bits<'g>(&self, x: &'g Vec<bool>) -> Option<&'g [bool]> {
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// rows: r0 {0, 1}, r1 {1, 2}, r2 {0, 2}; costs 3, 1, 2
    fn toy() -> ScpInstance<f64> {
        ScpInstance::new(vec![vec![0, 1], vec![1, 2], vec![0, 2]], vec![3.0, 1.0, 2.0]).unwrap()
    }

    #[test]
    fn greedy_from_empty_matches_hand_trace() {
        // ratios: c0 3/2, c1 1/2, c2 2/2 -> take c1 (covers r0, r1)
        // left r2: c0 3/1, c2 2/1 -> take c2
        // redundancy pass: c2 (cost 2) is the only cover of r2, c1 only cover of r0
        let inst = toy();
        let mut x = vec![false; 3];
        scp_repair(&mut x, &inst);
        assert_eq!(x, vec![false, true, true]);
        assert_eq!(scp_evaluate(&x, &inst).unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn fixed_point_on_redundancy_free_cover() {
        let inst = toy();
        let mut x = vec![true, true, false];
        scp_repair(&mut x, &inst);
        assert_eq!(x, vec![true, true, false]);
    }

    #[test]
    fn all_columns_lose_redundancy() {
        // most expensive first: c0 (rows 0, 2 both double-covered) dropped,
        // then c2 is sole cover of r2, c1 sole cover of r0
        let inst = toy();
        let mut x = vec![true; 3];
        scp_repair(&mut x, &inst);
        assert_eq!(x, vec![false, true, true]);
    }

    #[test]
    fn single_column_and_all_columns_costs() {
        let inst = ScpInstance::new(vec![vec![0, 1], vec![0], vec![0, 2]], vec![5.0, 1.0, 2.0]).unwrap();
        assert_eq!(scp_evaluate(&[true, false, false], &inst).unwrap(), 0.2);
        assert_eq!(scp_evaluate(&[true, true, true], &inst).unwrap(), 1.0 / 8.0);
        assert!(matches!(
            scp_evaluate(&[false, true, true], &inst),
            Err(ProblemError::Infeasible { row: 1 })
        ));
        assert!(scp_evaluate(&[true], &inst).is_err());
    }

    #[test]
    fn invalid_instances() {
        assert!(ScpInstance::new(vec![vec![0], vec![]], vec![1.0]).is_err());
        assert!(ScpInstance::new(vec![vec![3]], vec![1.0]).is_err());
        assert!(ScpInstance::new(vec![vec![0]], vec![0.0]).is_err());
    }

    fn instance() -> impl Strategy<Value = ScpInstance<f64>> {
        (1usize..12, 1usize..15).prop_flat_map(|(m, n)| {
            (
                prop::collection::vec(prop::collection::vec(0..n, 1..4), m),
                prop::collection::vec(1u32..20, n),
            )
                .prop_map(|(rows, cost)| {
                    ScpInstance::new(rows, cost.into_iter().map(f64::from).collect()).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn repair_yields_redundancy_free_covers(
            (inst, seed) in (instance(), prop::collection::vec(any::<bool>(), 15))
        ) {
            let mut x: Vec<bool> = seed[..inst.columns()].to_vec();
            scp_repair(&mut x, &inst);
            prop_assert!(inst.is_cover(&x));
            for j in (0..x.len()).filter(|&j| x[j]) {
                let mut y = x.clone();
                y[j] = false;
                prop_assert!(!inst.is_cover(&y), "column {} is redundant", j);
            }
            let again = { let mut z = x.clone(); scp_repair(&mut z, &inst); z };
            prop_assert_eq!(again, x);
        }
    }
}
