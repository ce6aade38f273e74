//! Partially mapped crossover.

use rand::Rng;

use crate::ProblemError;

/// Child takes `first[cut1..cut2]` verbatim. Every other position takes the
/// value from `second`; if that value is already in the copied segment it
/// is replaced by the `second` value at the position the segment holds it,
/// repeatedly, until the value falls outside the segment.
///
/// Elements are arbitrary `usize` labels; both parents must be permutations
/// of the same set.
pub fn pmx_crossover(
    first: &[usize],
    second: &[usize],
    cut1: usize,
    cut2: usize,
) -> Result<Vec<usize>, ProblemError> {
    let n = first.len();
    if second.len() != n {
        return Err(ProblemError::LengthMismatch {
            expected: n,
            found: second.len(),
        });
    }
    if cut1 >= cut2 || cut2 > n {
        return Err(ProblemError::InvalidCuts { cut1, cut2, len: n });
    }
    let max = first.iter().copied().max().unwrap_or(0);
    // position of each label in `first`, only for the copied segment
    let mut seg_pos = vec![usize::MAX; max + 1];
    for i in cut1..cut2 {
        seg_pos[first[i]] = i;
    }
    let mut child = Vec::with_capacity(n);
    for i in 0..n {
        if (cut1..cut2).contains(&i) {
            child.push(first[i]);
            continue;
        }
        let mut v = second[i];
        let mut hops = 0;
        while let Some(&p) = seg_pos.get(v).filter(|&&p| p != usize::MAX) {
            v = second[p];
            hops += 1;
            if hops > n {
                return Err(ProblemError::NotAPermutation(
                    "parents are not permutations of the same set".into(),
                ));
            }
        }
        if v > max {
            return Err(ProblemError::NotAPermutation(
                "parents are not permutations of the same set".into(),
            ));
        }
        child.push(v);
    }
    Ok(child)
}

/// Two distinct cut points `cut1 < cut2` drawn uniformly from `0..=n`.
pub fn random_cuts<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    assert!(n >= 1);
    let a = rng.gen_range(0..=n);
    let mut b = rng.gen_range(0..n);
    if b >= a {
        b += 1;
    }
    (a.min(b), a.max(b))
}

/// PMX with random cuts.
pub fn pmx_random<R: Rng + ?Sized>(
    first: &[usize],
    second: &[usize],
    rng: &mut R,
) -> Result<Vec<usize>, ProblemError> {
    if first.is_empty() {
        return Ok(Vec::new());
    }
    let (c1, c2) = random_cuts(first.len(), rng);
    pmx_crossover(first, second, c1, c2)
}
