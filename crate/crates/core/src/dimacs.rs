//! DIMACS-CNF reading and writing.
//!
//! Clauses may span or share lines; only the `0` terminator delimits them. Content
//! after the declared number of clauses is ignored, which tolerates the `%` / `0`
//! footer carried by SATLIB files. Writing is canonical: no comments, one clause per
//! line, LF line endings.

use std::io::{self, Read};

use thiserror::Error;

use crate::cnf::{Clause, CnfFormula, Literal};

#[derive(Debug, Error)]
pub enum DimacsError {
    #[error("missing `p cnf <vars> <clauses>` header")]
    MissingHeader,
    #[error("line {line}: malformed header `{text}`")]
    BadHeader { line: usize, text: String },
    #[error("header declares {declared} clauses but {found} were found")]
    ClauseCountMismatch { declared: usize, found: usize },
    #[error("line {line}: literal {literal} exceeds the declared {num_vars} variables")]
    LiteralOutOfRange {
        line: usize,
        literal: i64,
        num_vars: usize,
    },
    #[error("input ends inside a clause that is missing its `0` terminator")]
    UnterminatedClause,
    #[error("line {line}: empty clause")]
    EmptyClause { line: usize },
    #[error("line {line}: invalid token `{token}`")]
    InvalidToken { line: usize, token: String },
    #[error("input is not valid UTF-8/ASCII")]
    Encoding,
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Parses DIMACS-CNF text.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();

    'lines: for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let Some((num_vars, num_clauses)) = header else {
            if !line.starts_with('p') {
                return Err(DimacsError::MissingHeader);
            }
            header = Some(parse_header(line, line_no)?);
            if header.map(|h| h.1) == Some(0) {
                break;
            }
            continue;
        };
        for token in line.split_whitespace() {
            let code: i64 = token.parse().map_err(|_| DimacsError::InvalidToken {
                line: line_no,
                token: token.to_string(),
            })?;
            if code == 0 {
                if current.is_empty() {
                    return Err(DimacsError::EmptyClause { line: line_no });
                }
                clauses.push(Clause::new(std::mem::take(&mut current)).expect("nonempty"));
                if clauses.len() == num_clauses {
                    break 'lines;
                }
                continue;
            }
            if code.unsigned_abs() as usize > num_vars {
                return Err(DimacsError::LiteralOutOfRange {
                    line: line_no,
                    literal: code,
                    num_vars,
                });
            }
            current.push(Literal::from_dimacs(code).expect("nonzero"));
        }
    }

    let (num_vars, num_clauses) = header.ok_or(DimacsError::MissingHeader)?;
    if !current.is_empty() {
        return Err(DimacsError::UnterminatedClause);
    }
    if clauses.len() != num_clauses {
        return Err(DimacsError::ClauseCountMismatch {
            declared: num_clauses,
            found: clauses.len(),
        });
    }
    Ok(CnfFormula::new(num_vars, clauses).expect("literals range-checked during parsing"))
}

fn parse_header(line: &str, line_no: usize) -> Result<(usize, usize), DimacsError> {
    let bad = || DimacsError::BadHeader {
        line: line_no,
        text: line.to_string(),
    };
    let parts: Vec<&str> = line.split_whitespace().collect();
    match parts.as_slice() {
        ["p", "cnf", vars, clauses] => Ok((
            vars.parse().map_err(|_| bad())?,
            clauses.parse().map_err(|_| bad())?,
        )),
        _ => Err(bad()),
    }
}

/// Reads a DIMACS-CNF stream.
pub fn read_dimacs<R: Read>(mut reader: R) -> Result<CnfFormula, DimacsError> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    let text = String::from_utf8(bytes).map_err(|_| DimacsError::Encoding)?;
    parse_dimacs(&text)
}

/// Canonical serialization: `p cnf V C` followed by one clause per line.
pub fn write_dimacs(f: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", f.num_vars(), f.num_clauses());
    for clause in f.clauses() {
        for lit in clause.literals() {
            out.push_str(&lit.to_dimacs().to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}
