//! Hamming diversity of bit-vector populations.

use crate::engine::population::Population;
use crate::scalar::Scalar;

/// Mean Hamming distance over all unordered pairs. `None` for fewer than two
/// genomes.
///
/// Computed per bit position: a position where `c` of `n` genomes carry a one
/// contributes `c * (n - c)` differing pairs, so the whole sum is `O(n * len)`.
///
/// Panics if the genomes differ in length.
pub fn avg_pairwise_hamming(genomes: &[&[bool]]) -> Option<f64> {
    let n = genomes.len();
    if n < 2 {
        return None;
    }
    let len = genomes[0].len();
    let mut ones = vec![0u64; len];
    for g in genomes {
        assert_eq!(g.len(), len, "genomes must have equal length");
        for (count, &bit) in ones.iter_mut().zip(g.iter()) {
            *count += bit as u64;
        }
    }
    let n64 = n as u64;
    let differing: u64 = ones.iter().map(|&c| c * (n64 - c)).sum();
    let pairs = (n64 * (n64 - 1) / 2) as f64;
    Some(differing as f64 / pairs)
}

/// Mean pairwise Hamming distance among genomes whose fitness is at least
/// `max(fitness) - band_width`. `None` when fewer than two qualify.
pub fn top_band_bits<S: Scalar>(genomes: &[&[bool]], fitness: &[S], band_width: S) -> Option<f64> {
    assert_eq!(genomes.len(), fitness.len());
    let best = fitness.iter().copied().fold(None, |acc: Option<S>, f| {
        Some(acc.map_or(f, |a| a.max(f)))
    })?;
    let floor = best - band_width;
    let band: Vec<&[bool]> = genomes
        .iter()
        .zip(fitness)
        .filter(|(_, &f)| f >= floor)
        .map(|(g, _)| *g)
        .collect();
    avg_pairwise_hamming(&band)
}

/// Total diversity of a bit-vector population.
pub fn population_diversity<G: AsRef<[bool]>, S: Scalar>(pop: &Population<G, S>) -> Option<f64> {
    let bits: Vec<&[bool]> = pop.members().iter().map(|m| m.genome.as_ref()).collect();
    avg_pairwise_hamming(&bits)
}

/// Diversity among members within `band_width` of the current best.
pub fn top_band_diversity<G: AsRef<[bool]>, S: Scalar>(
    pop: &Population<G, S>,
    band_width: S,
) -> Option<f64> {
    let bits: Vec<&[bool]> = pop.members().iter().map(|m| m.genome.as_ref()).collect();
    let fitness: Vec<S> = pop.fitnesses().collect();
    top_band_bits(&bits, &fitness, band_width)
}
