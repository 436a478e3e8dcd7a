//! Plain-text matrix format.
//!
//! ```text
//! 2 2
//! 1,0 0.5,-0.25
//! 0.5,0.25 2,0
//! ```
//!
//! The first line holds the row and column counts; each following line holds
//! one row of `re,im` entries separated by whitespace. Numbers are written in
//! shortest round-trip form, so a written matrix re-parses bit for bit.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{check_finite, ComplexMatrix, C64};

pub fn write_matrix(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| {
                let z = m[(i, j)];
                format!("{},{}", z.re, z.im)
            })
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

fn parse_entry(token: &str) -> Result<C64> {
    let (re, im) = token
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("entry `{token}` is not of the form re,im")))?;
    let re: f64 = re.trim().parse().map_err(|_| Error::Parse(format!("bad real part in `{token}`")))?;
    let im: f64 = im.trim().parse().map_err(|_| Error::Parse(format!("bad imaginary part in `{token}`")))?;
    Ok(C64::new(re, im))
}

/// Parses one matrix from the start of `lines`, consuming exactly its lines.
pub fn parse_matrix_lines<'a, I>(lines: &mut I) -> Result<ComplexMatrix>
where
    I: Iterator<Item = &'a str>,
{
    let header = lines
        .by_ref()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .ok_or_else(|| Error::Parse("missing matrix header".into()))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(Error::Parse(format!("header `{header}` must be `rows cols`")));
    }
    let rows: usize = dims[0].parse().map_err(|_| Error::Parse(format!("bad row count `{}`", dims[0])))?;
    let cols: usize = dims[1].parse().map_err(|_| Error::Parse(format!("bad column count `{}`", dims[1])))?;
    if rows == 0 || cols == 0 {
        return Err(Error::Parse("matrix dimensions must be positive".into()));
    }
    let mut m = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {rows} rows, found {i}")))?;
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != cols {
            return Err(Error::Parse(format!("row {i} has {} entries, expected {cols}", entries.len())));
        }
        for (j, tok) in entries.iter().enumerate() {
            m[(i, j)] = parse_entry(tok)?;
        }
    }
    check_finite(&m)?;
    Ok(m)
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut lines = text.lines();
    let m = parse_matrix_lines(&mut lines)?;
    if let Some(extra) = lines.map(str::trim).find(|l| !l.is_empty()) {
        return Err(Error::Parse(format!("trailing content after matrix: `{extra}`")));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_documented_example() {
        let m = parse_matrix("2 2\n1,0 0.5,-0.25\n0.5,0.25 2,0\n").unwrap();
        assert_eq!(m[(0, 1)], C64::new(0.5, -0.25));
        assert_eq!(m[(1, 1)], C64::new(2.0, 0.0));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_matrix("2 2\n1,0 1,0\n").is_err());
        assert!(parse_matrix("1 2\n1,0\n").is_err());
        assert!(parse_matrix("1 1\n1\n").is_err());
        assert!(parse_matrix("1 1\nNaN,0\n").is_err());
        assert!(parse_matrix("1 1\n1,0\n2 2\n").is_err());
    }

    proptest! {
        #[test]
        fn round_trip_is_bitwise(
            rows in 1usize..5,
            cols in 1usize..5,
            seed in proptest::collection::vec((-1e300f64..1e300, -1e-300f64..1e-300), 16),
        ) {
            let m = ComplexMatrix::from_fn(rows, cols, |i, j| {
                let (a, b) = seed[(i * cols + j) % seed.len()];
                C64::new(a / (1.0 + j as f64 * 3.7), b * (i as f64 - 1.3))
            });
            let back = parse_matrix(&write_matrix(&m)).unwrap();
            for (x, y) in m.iter().zip(back.iter()) {
                prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
                prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
        }
    }
}
