use crate::io::ParseError;
use crate::problems::sat::Cnf3Instance;

/// Parses DIMACS CNF text.
///
/// Tolerates the `%` and `0` end markers some SATLIB files carry after the
/// last clause. Clauses may span lines; clauses with more than three
/// literals are rejected.
pub fn parse_dimacs_cnf(text: &str) -> Result<Cnf3Instance, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut clause_line = 0;
    let mut ended = false;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::BadHeader {
                    line,
                    msg: "second problem line".into(),
                });
            }
            header = Some(parse_header(trimmed, line)?);
            continue;
        }
        let Some((_, vars, declared)) = header else {
            return Err(ParseError::MissingProblemLine { line });
        };
        for tok in trimmed.split_whitespace() {
            if tok == "%" {
                ended = true;
                continue;
            }
            let lit: i64 = tok.parse().map_err(|_| ParseError::BadToken {
                line,
                token: tok.to_string(),
            })?;
            if ended || (clauses.len() == declared && current.is_empty()) {
                // only end markers may follow the final clause
                if lit == 0 {
                    continue;
                }
                if ended {
                    return Err(ParseError::TrailingData {
                        line,
                        token: tok.to_string(),
                    });
                }
                return Err(ParseError::ClauseCount {
                    line,
                    expected: declared,
                    found: declared + 1,
                });
            }
            if lit == 0 {
                if current.is_empty() {
                    return Err(ParseError::EmptyClause { line });
                }
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if lit.unsigned_abs() as usize > vars {
                return Err(ParseError::VariableOutOfRange { line, lit, vars });
            }
            if current.is_empty() {
                clause_line = line;
            }
            current.push(lit as i32);
            if current.len() > 3 {
                return Err(ParseError::ClauseTooLong {
                    line: clause_line,
                    len: current.len(),
                });
            }
        }
    }

    let Some((header_line, vars, declared)) = header else {
        return Err(ParseError::MissingProblemLine { line: last_line.max(1) });
    };
    if !current.is_empty() {
        return Err(ParseError::Truncated {
            line: clause_line,
            what: "clause is not terminated by 0".into(),
        });
    }
    if clauses.len() != declared {
        return Err(ParseError::ClauseCount {
            line: last_line.max(header_line),
            expected: declared,
            found: clauses.len(),
        });
    }
    Cnf3Instance::new(vars, clauses).map_err(|e| ParseError::Invalid {
        line: header_line,
        msg: e.to_string(),
    })
}

fn parse_header(text: &str, line: usize) -> Result<(usize, usize, usize), ParseError> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    let bad = |msg: &str| ParseError::BadHeader {
        line,
        msg: msg.to_string(),
    };
    if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
        return Err(bad("expected `p cnf <variables> <clauses>`"));
    }
    let vars: usize = parts[2].parse().map_err(|_| bad("variable count is not a number"))?;
    let count: usize = parts[3].parse().map_err(|_| bad("clause count is not a number"))?;
    if vars == 0 {
        return Err(bad("variable count must be positive"));
    }
    Ok((line, vars, count))
}
