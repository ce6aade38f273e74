use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::io::ParseError;
use crate::problems::tsp::TspInstance;
use crate::scalar::Scalar;
use crate::ProblemError;

const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Random-distance instance: every `d(i, j)`, `i < j`, drawn uniformly from
/// `[0, 1)` in row-major order from a ChaCha8 stream seeded with `seed`.
pub fn gen_random_tsp<S: Scalar>(n_cities: usize, seed: u64) -> Result<TspInstance<S>, ProblemError> {
    if n_cities < 2 {
        return Err(ProblemError::InvalidInstance(format!(
            "need at least 2 cities, got {n_cities}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n_cities;
    let mut dist = vec![S::zero(); n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = S::of(rng.gen::<f64>());
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    TspInstance::new(n, dist)
}

/// `n` on the first line, then one line per row. Values use the shortest
/// decimal form that reads back to the same number.
pub fn serialize_tsp<S: Scalar>(inst: &TspInstance<S>) -> String {
    let n = inst.cities();
    let mut out = String::with_capacity(n * n * 20);
    let _ = writeln!(out, "{n}");
    for i in 0..n {
        for j in 0..n {
            if j > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", inst.dist(i, j));
        }
        out.push('\n');
    }
    out
}

pub fn parse_tsp<S: Scalar>(text: &str) -> Result<TspInstance<S>, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (line, first) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or(ParseError::Truncated {
            line: 1,
            what: "expected city count".into(),
        })?;
    let n: usize = first.trim().parse().map_err(|_| ParseError::BadHeader {
        line,
        msg: format!("`{}` is not a city count", first.trim()),
    })?;
    if n < 2 {
        return Err(ParseError::BadHeader {
            line,
            msg: format!("need at least 2 cities, got {n}"),
        });
    }
    let mut dist = vec![S::zero(); n * n];
    let mut row_lines = vec![0usize; n];
    let mut last = line;
    for i in 0..n {
        let (line, text) = lines.next().ok_or(ParseError::Truncated {
            line: last,
            what: format!("expected {n} rows, got {i}"),
        })?;
        last = line;
        row_lines[i] = line;
        let cells: Vec<&str> = text.split_whitespace().collect();
        if cells.len() != n {
            return Err(ParseError::RaggedRow {
                line,
                expected: n,
                found: cells.len(),
            });
        }
        for (j, tok) in cells.into_iter().enumerate() {
            let d: S = tok.parse().map_err(|_| ParseError::BadToken {
                line,
                token: tok.to_string(),
            })?;
            if !(d >= S::zero() && d <= S::one()) {
                return Err(ParseError::Invalid {
                    line,
                    msg: format!("distance ({i}, {j}) = {d} is outside [0, 1]"),
                });
            }
            dist[i * n + j] = d;
        }
        if dist[i * n + i] != S::zero() {
            return Err(ParseError::NonzeroDiagonal { line, i });
        }
    }
    if let Some((line, text)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(ParseError::TrailingData {
            line,
            token: text.trim().to_string(),
        });
    }
    let tol = S::of(SYMMETRY_TOLERANCE);
    for i in 0..n {
        for j in i + 1..n {
            let (upper, lower) = (dist[i * n + j], dist[j * n + i]);
            if (upper - lower).abs() > tol {
                return Err(ParseError::Asymmetric {
                    line: row_lines[j],
                    i: j,
                    j: i,
                });
            }
            dist[j * n + i] = upper;
        }
    }
    TspInstance::new(n, dist).map_err(|e| ParseError::Invalid {
        line,
        msg: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_city_layout() {
        let inst = TspInstance::new(2, vec![0.0, 0.5, 0.5, 0.0]).unwrap();
        assert_eq!(serialize_tsp(&inst), "2\n0 0.5\n0.5 0\n");
    }

    #[test]
    fn generator_is_deterministic_and_in_range() {
        let a: TspInstance<f64> = gen_random_tsp(20, 7).unwrap();
        let b: TspInstance<f64> = gen_random_tsp(20, 7).unwrap();
        let c: TspInstance<f64> = gen_random_tsp(20, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.matrix().iter().all(|&d| (0.0..=1.0).contains(&d)));
        assert!(gen_random_tsp::<f64>(1, 0).is_err());
    }

    #[test]
    fn malformed_matrices() {
        let cases: [(&str, fn(&ParseError) -> bool); 6] = [
            ("2\n0 0.5\n0.4 0\n", |e| matches!(e, ParseError::Asymmetric { line: 3, .. })),
            ("2\n0 0.5\n0.5\n", |e| matches!(e, ParseError::RaggedRow { line: 3, expected: 2, found: 1 })),
            ("2\n0.1 0.5\n0.5 0\n", |e| matches!(e, ParseError::NonzeroDiagonal { line: 2, i: 0 })),
            ("2\n0 0.5\n", |e| matches!(e, ParseError::Truncated { .. })),
            ("2\n0 0.5\n0.5 0\n1\n", |e| matches!(e, ParseError::TrailingData { line: 4, .. })),
            ("two\n", |e| matches!(e, ParseError::BadHeader { line: 1, .. })),
        ];
        for (text, check) in cases {
            let err = parse_tsp::<f64>(text).unwrap_err();
            assert!(check(&err), "{text:?} gave {err:?}");
        }
    }

    #[test]
    fn tiny_asymmetry_is_absorbed() {
        let inst: TspInstance<f64> = parse_tsp("2\n0 0.5\n0.5000000000000001 0\n").unwrap();
        assert_eq!(inst.dist(1, 0), 0.5);
    }

    proptest! {
        #[test]
        fn serialize_then_parse_is_identity(n in 2usize..15, seed in any::<u64>()) {
            let a: TspInstance<f64> = gen_random_tsp(n, seed).unwrap();
            prop_assert_eq!(parse_tsp::<f64>(&serialize_tsp(&a)).unwrap(), a.clone());
            let b: TspInstance<f32> = gen_random_tsp(n, seed).unwrap();
            prop_assert_eq!(parse_tsp::<f32>(&serialize_tsp(&b)).unwrap(), b);
        }
    }
}
