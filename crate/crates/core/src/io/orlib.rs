use crate::io::{ParseError, Tokens};
use crate::problems::scp::ScpInstance;
use crate::scalar::Scalar;

/// Parses an OR-Library set covering file.
pub fn parse_orlib_scp<S: Scalar>(text: &str) -> Result<ScpInstance<S>, ParseError> {
    let mut toks = Tokens::new(text);
    let (line, m): (usize, usize) = toks.expect("row count")?;
    let (_, n): (usize, usize) = toks.expect("column count")?;
    if m == 0 || n == 0 {
        return Err(ParseError::BadHeader {
            line,
            msg: format!("dimensions {m} x {n} must be positive"),
        });
    }
    let mut cost = Vec::with_capacity(n);
    for j in 0..n {
        let (line, c): (usize, S) = toks.expect(&format!("cost of column {}", j + 1))?;
        if !(c > S::zero()) || !c.is_finite() {
            return Err(ParseError::Invalid {
                line,
                msg: format!("column {} has non-positive cost {c}", j + 1),
            });
        }
        cost.push(c);
    }
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let (line, k): (usize, usize) = toks.expect(&format!("cover count of row {}", i + 1))?;
        if k == 0 {
            return Err(ParseError::EmptyRow { line, row: i + 1 });
        }
        let mut cover = Vec::with_capacity(k);
        for _ in 0..k {
            let (line, idx): (usize, i64) = toks.expect(&format!("column index for row {}", i + 1))?;
            if idx < 1 || idx as u64 > n as u64 {
                return Err(ParseError::ColumnOutOfRange {
                    line,
                    index: idx,
                    columns: n,
                });
            }
            cover.push(idx as usize - 1);
        }
        rows.push(cover);
    }
    toks.finish()?;
    ScpInstance::new(rows, cost).map_err(|e| ParseError::Invalid { line, msg: e.to_string() })
}
