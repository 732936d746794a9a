//! Sparse QUBO text format as used by the OR-Library and Biq-Mac
//! collections: a header line `n nnz`, then `nnz` lines `i j v` with
//! 1-based indices. Diagonal entries (`i = j`) are linear terms, the rest
//! quadratic. Some collections state maximization problems; pass
//! `negate = true` to flip signs into our minimization convention (the
//! caller un-negates reported objectives on the way out).

use std::collections::BTreeSet;
use std::fmt::Write as _;

use qubokit_core::QuboModel;

use super::FormatError;

pub fn read_bqp(text: &str, negate: bool) -> Result<QuboModel, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_no, header) = lines.next().ok_or(FormatError::Malformed {
        line: 1,
        msg: "empty file, expected a 'n nnz' header".into(),
    })?;
    let mut parts = header.split_whitespace();
    let n: usize = parse_tok(parts.next(), header_no)?;
    let nnz: usize = parse_tok(parts.next(), header_no)?;
    if parts.next().is_some() {
        return Err(FormatError::Malformed {
            line: header_no,
            msg: "header must be exactly 'n nnz'".into(),
        });
    }

    let mut model = QuboModel::new(n);
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut read = 0usize;
    for (line_no, line) in lines {
        if read == nnz {
            return Err(FormatError::Malformed {
                line: line_no,
                msg: format!("extra data after {nnz} entries"),
            });
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(FormatError::Malformed {
                line: line_no,
                msg: format!("expected 'i j v', found {} tokens", toks.len()),
            });
        }
        let i: usize = parse_tok(Some(toks[0]), line_no)?;
        let j: usize = parse_tok(Some(toks[1]), line_no)?;
        let v: f64 = toks[2].parse().map_err(|_| FormatError::BadToken {
            token: toks[2].into(),
        })?;
        if i < 1 || i > n || j < 1 || j > n {
            return Err(FormatError::Malformed {
                line: line_no,
                msg: format!("index pair ({i}, {j}) out of range 1..={n}"),
            });
        }
        let key = (i.min(j), i.max(j));
        if !seen.insert(key) {
            return Err(FormatError::Malformed {
                line: line_no,
                msg: format!("duplicate pair ({}, {})", key.0, key.1),
            });
        }
        if !v.is_finite() {
            return Err(FormatError::Malformed {
                line: line_no,
                msg: "coefficient must be finite".into(),
            });
        }
        let v = if negate { -v } else { v };
        if v != 0.0 {
            if i == j {
                model.add_linear(i - 1, v);
            } else {
                model.add_quad(i - 1, j - 1, v);
            }
        }
        read += 1;
    }
    if read != nnz {
        return Err(FormatError::TokenCount {
            expected: nnz,
            found: read,
        });
    }
    Ok(model)
}

/// Serializes the linear and quadratic terms; the format has no slot for a
/// constant offset, so it is returned for the caller to surface.
pub fn write_bqp(model: &QuboModel) -> (String, f64) {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", model.n(), model.nnz());
    for (j, v) in model.linear_terms() {
        let _ = writeln!(out, "{} {} {}", j + 1, j + 1, v);
    }
    for (i, j, v) in model.quad_terms() {
        let _ = writeln!(out, "{} {} {}", i + 1, j + 1, v);
    }
    (out, model.constant())
}

fn parse_tok<T: std::str::FromStr>(tok: Option<&str>, line: usize) -> Result<T, FormatError> {
    let tok = tok.ok_or(FormatError::Malformed {
        line,
        msg: "missing token".into(),
    })?;
    tok.parse().map_err(|_| FormatError::BadToken { token: tok.into() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m1() -> QuboModel {
        let mut m = QuboModel::new(2);
        m.add_linear(0, -1.0);
        m.add_linear(1, -1.0);
        m.add_quad(0, 1, 2.0);
        m
    }

    #[test]
    fn reads_the_two_variable_fixture() {
        let m = read_bqp("2 3\n1 1 -1\n2 2 -1\n1 2 2\n", false).unwrap();
        assert_eq!(m, m1());
    }

    #[test]
    fn reads_an_empty_model() {
        let m = read_bqp("1 0\n", false).unwrap();
        assert_eq!(m.n(), 1);
        assert_eq!(m.nnz(), 0);
    }

    #[test]
    fn negate_flips_every_sign() {
        let m = read_bqp("2 3\n1 1 1\n2 2 1\n1 2 -2\n", true).unwrap();
        assert_eq!(m, m1());
    }

    #[test]
    fn rejects_out_of_range_duplicates_and_junk() {
        assert!(matches!(
            read_bqp("2 1\n1 3 5\n", false),
            Err(FormatError::Malformed { .. })
        ));
        assert!(matches!(
            read_bqp("2 2\n1 2 5\n2 1 4\n", false),
            Err(FormatError::Malformed { .. })
        ));
        assert!(matches!(
            read_bqp("2 1\n1 2\n", false),
            Err(FormatError::Malformed { .. })
        ));
        assert!(matches!(
            read_bqp("2 1\n1 2 x\n", false),
            Err(FormatError::BadToken { .. })
        ));
        assert!(matches!(
            read_bqp("2 2\n1 2 5\n", false),
            Err(FormatError::TokenCount { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn round_trips_models_without_constants() {
        let m = m1();
        let (text, constant) = write_bqp(&m);
        assert_eq!(constant, 0.0);
        assert_eq!(read_bqp(&text, false).unwrap(), m);
    }
}
