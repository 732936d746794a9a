//! QAPLIB whitespace format: the size `n`, then the n×n flow matrix, then
//! the n×n distance matrix, all as plain numbers separated by arbitrary
//! whitespace.

use qubokit_core::problems::QapInstance;

use super::FormatError;

pub fn read_qaplib(text: &str) -> Result<QapInstance, FormatError> {
    let mut tokens = text.split_whitespace();
    let n_tok = tokens.next().ok_or(FormatError::TokenCount {
        expected: 1,
        found: 0,
    })?;
    let n: usize = n_tok.parse().map_err(|_| FormatError::BadToken {
        token: n_tok.into(),
    })?;
    let expected = 2 * n * n;
    let mut numbers = Vec::with_capacity(expected);
    for tok in tokens {
        let v: f64 = tok.parse().map_err(|_| FormatError::BadToken { token: tok.into() })?;
        numbers.push(v);
    }
    if numbers.len() != expected {
        return Err(FormatError::TokenCount {
            expected: expected + 1,
            found: numbers.len() + 1,
        });
    }
    let matrix = |offset: usize| -> Vec<Vec<f64>> {
        (0..n)
            .map(|r| numbers[offset + r * n..offset + (r + 1) * n].to_vec())
            .collect()
    };
    QapInstance::new(matrix(0), matrix(n * n))
        .map_err(|e| FormatError::Invalid(e.to_string()))
}
