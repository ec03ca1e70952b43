//! Plain-text problem files.
//!
//! ```text
//! # optional label
//! A 3 2
//! <row-major values, whitespace separated>
//! b 3 1
//! ...
//! c 2 1
//! ...
//! x 2 1        (optional)
//! ...
//! ```
//!
//! Values are written as hex float literals so a round trip is exact; the
//! reader also accepts decimal literals.

use std::fmt::Write;

use super::hexfloat::{format_hex, parse_float};
use super::QlsProblem;
use crate::numkernel::DenseMatrix;
use crate::{Error, Result};

pub fn write_problem(p: &QlsProblem) -> String {
    let mut out = String::new();
    if !p.label.is_empty() {
        let _ = writeln!(out, "# {}", p.label.replace('\n', " "));
    }
    write_block(&mut out, "A", p.m(), p.n(), |i, j| p.a[(i, j)]);
    write_block(&mut out, "b", p.m(), 1, |i, _| p.b[i]);
    write_block(&mut out, "c", p.n(), 1, |i, _| p.c[i]);
    if let Some(x) = &p.x_exact {
        write_block(&mut out, "x", p.n(), 1, |i, _| x[i]);
    }
    out
}

fn write_block(out: &mut String, name: &str, rows: usize, cols: usize, at: impl Fn(usize, usize) -> f64) {
    let _ = writeln!(out, "{name} {rows} {cols}");
    for i in 0..rows {
        let row: Vec<String> = (0..cols).map(|j| format_hex(at(i, j))).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

pub fn read_problem(text: &str) -> Result<QlsProblem> {
    let mut label = String::new();
    let mut tokens = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('#') {
            if label.is_empty() {
                label = rest.trim().to_string();
            }
            continue;
        }
        tokens.extend(line.split_whitespace());
    }

    let mut blocks: Vec<(String, usize, usize, Vec<f64>)> = Vec::new();
    let mut it = tokens.into_iter();
    while let Some(name) = it.next() {
        let dim = |tok: Option<&str>| -> Result<usize> {
            tok.and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::InvalidParameter(format!("bad dimensions for block {name}")))
        };
        let rows = dim(it.next())?;
        let cols = dim(it.next())?;
        let mut vals = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            let tok = it
                .next()
                .ok_or_else(|| Error::InvalidParameter(format!("block {name} is truncated")))?;
            let v = parse_float(tok)
                .ok_or_else(|| Error::InvalidParameter(format!("bad number {tok:?} in block {name}")))?;
            vals.push(v);
        }
        blocks.push((name.to_string(), rows, cols, vals));
    }

    let take = |key: &str| blocks.iter().find(|b| b.0 == key);
    let (_, m, n, a_vals) = take("A").ok_or_else(|| Error::InvalidParameter("missing block A".into()))?;
    let mut col_major = vec![0.0; m * n];
    for i in 0..*m {
        for j in 0..*n {
            col_major[j * m + i] = a_vals[i * n + j];
        }
    }
    let a = DenseMatrix::from_col_major(*m, *n, col_major)?;
    let vector = |key: &str| -> Result<Option<Vec<f64>>> {
        match take(key) {
            None => Ok(None),
            Some((_, _, 1, v)) => Ok(Some(v.clone())),
            Some((_, _, cols, _)) => Err(Error::DimensionMismatch(format!(
                "block {key} must have one column, got {cols}"
            ))),
        }
    };
    let b = vector("b")?.ok_or_else(|| Error::InvalidParameter("missing block b".into()))?;
    let c = vector("c")?.ok_or_else(|| Error::InvalidParameter("missing block c".into()))?;
    QlsProblem::new(a, b, c, vector("x")?, label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{assemble_problem, orthogonal_factor, sigma_c1};

    #[test]
    fn round_trip_is_exact() {
        let u = orthogonal_factor(5, 3, 9);
        let v = orthogonal_factor(3, 1, 9);
        let p = assemble_problem(&u, &sigma_c1(3, 0.3).unwrap(), &v, &[0.1, -2.0, 1e-300], "demo problem").unwrap();
        let q = read_problem(&write_problem(&p)).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn decimal_input_and_errors() {
        let text = "A 2 1\n1\n2\nb 2 1\n1 1\nc 1 1\n0.5\n";
        let p = read_problem(text).unwrap();
        assert_eq!(p.a.as_slice(), &[1.0, 2.0]);
        assert_eq!(p.x_exact, None);
        assert!(read_problem("A 2 1\n1\n").is_err());
        assert!(read_problem("b 1 1\n1\nc 1 1\n1\n").is_err());
        assert!(read_problem("A 1 1\nfoo\nb 1 1\n1\nc 1 1\n1\n").is_err());
    }
}
