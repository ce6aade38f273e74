//! Instance file formats.
//!
//! | kind         | grammar                                                            |
//! |--------------|--------------------------------------------------------------------|
//! | `dimacs-cnf` | `c` comments, one `p cnf V C` line, `0`-terminated clauses         |
//! | `orlib-scp`  | `m n`, `n` costs, then per row a count `k` and `k` 1-based columns |
//! | `tsp-matrix` | `n` on the first line, then `n` lines of `n` distances             |
//!
//! Every parser reports 1-based line numbers and rejects trailing data.

mod dimacs;
mod orlib;
mod tsp;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use dimacs::parse_dimacs_cnf;
pub use orlib::parse_orlib_scp;
pub use tsp::{gen_random_tsp, parse_tsp, serialize_tsp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InstanceFileFormat {
    DimacsCnf,
    OrlibScp,
    TspMatrix,
}

impl fmt::Display for InstanceFileFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InstanceFileFormat::DimacsCnf => "dimacs-cnf",
            InstanceFileFormat::OrlibScp => "orlib-scp",
            InstanceFileFormat::TspMatrix => "tsp-matrix",
        })
    }
}

impl FromStr for InstanceFileFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dimacs-cnf" => Ok(InstanceFileFormat::DimacsCnf),
            "orlib-scp" => Ok(InstanceFileFormat::OrlibScp),
            "tsp-matrix" => Ok(InstanceFileFormat::TspMatrix),
            other => Err(format!("unknown instance format `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: missing `p cnf` problem line")]
    MissingProblemLine { line: usize },
    #[error("line {line}: malformed header: {msg}")]
    BadHeader { line: usize, msg: String },
    #[error("line {line}: header declares {expected} clauses, found {found}")]
    ClauseCount { line: usize, expected: usize, found: usize },
    #[error("line {line}: literal {lit} refers to a variable outside 1..={vars}")]
    VariableOutOfRange { line: usize, lit: i64, vars: usize },
    #[error("line {line}: empty clause")]
    EmptyClause { line: usize },
    #[error("line {line}: clause has {len} literals, at most 3 are supported")]
    ClauseTooLong { line: usize, len: usize },
    #[error("line {line}: invalid token `{token}`")]
    BadToken { line: usize, token: String },
    #[error("line {line}: input ends early: {what}")]
    Truncated { line: usize, what: String },
    #[error("line {line}: column index {index} outside 1..={columns}")]
    ColumnOutOfRange { line: usize, index: i64, columns: usize },
    #[error("line {line}: row {row} has no covering column")]
    EmptyRow { line: usize, row: usize },
    #[error("line {line}: trailing data `{token}`")]
    TrailingData { line: usize, token: String },
    #[error("line {line}: row has {found} entries, expected {expected}")]
    RaggedRow { line: usize, expected: usize, found: usize },
    #[error("line {line}: distance ({i}, {j}) differs from ({j}, {i})")]
    Asymmetric { line: usize, i: usize, j: usize },
    #[error("line {line}: diagonal entry ({i}, {i}) is not zero")]
    NonzeroDiagonal { line: usize, i: usize },
    #[error("line {line}: {msg}")]
    Invalid { line: usize, msg: String },
}

impl ParseError {
    pub fn line(&self) -> usize {
        use ParseError::*;
        match *self {
            MissingProblemLine { line }
            | BadHeader { line, .. }
            | ClauseCount { line, .. }
            | VariableOutOfRange { line, .. }
            | EmptyClause { line }
            | ClauseTooLong { line, .. }
            | BadToken { line, .. }
            | Truncated { line, .. }
            | ColumnOutOfRange { line, .. }
            | EmptyRow { line, .. }
            | TrailingData { line, .. }
            | RaggedRow { line, .. }
            | Asymmetric { line, .. }
            | NonzeroDiagonal { line, .. }
            | Invalid { line, .. } => line,
        }
    }
}

/// Whitespace-separated tokens with their 1-based line numbers.
pub(crate) struct Tokens<'a> {
    inner: Box<dyn Iterator<Item = (usize, &'a str)> + 'a>,
    last_line: usize,
}

impl<'a> Tokens<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        let last_line = text.lines().count().max(1);
        Tokens {
            inner: Box::new(
                text.lines()
                    .enumerate()
                    .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i + 1, t))),
            ),
            last_line,
        }
    }

    pub(crate) fn next_token(&mut self) -> Option<(usize, &'a str)> {
        self.inner.next()
    }

    pub(crate) fn expect<T: FromStr>(&mut self, what: &str) -> Result<(usize, T), ParseError> {
        let (line, tok) = self.next_token().ok_or_else(|| ParseError::Truncated {
            line: self.last_line,
            what: format!("expected {what}"),
        })?;
        tok.parse()
            .map(|v| (line, v))
            .map_err(|_| ParseError::BadToken {
                line,
                token: tok.to_string(),
            })
    }

    pub(crate) fn finish(mut self) -> Result<(), ParseError> {
        match self.next_token() {
            None => Ok(()),
            Some((line, tok)) => Err(ParseError::TrailingData {
                line,
                token: tok.to_string(),
            }),
        }
    }
}
