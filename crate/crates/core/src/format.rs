//! Plain-text matrix and ensemble files.
//!
//! A matrix is written as a line holding `n` followed by `n` rows of `n`
//! whitespace-separated entries of the form `re+imj` (`re-imj` for a negative
//! imaginary part). Purely real (`2.5`) and purely imaginary (`-3j`) entries
//! are accepted on input. An ensemble file starts with a `count n` header and
//! then holds `count` matrices back to back. Blank lines and lines starting
//! with `#` are ignored.

use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::ensemble::MatrixEnsemble;
use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, C64};

/// Formats a float with 17 significant digits in scientific notation.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn format_entry(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}j", sci(z.re), sign, sci(z.im.abs()))
}

pub fn parse_entry(token: &str) -> Option<C64> {
    let Some(body) = token.strip_suffix('j') else {
        return token.parse().ok().map(|re| C64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => {
            let re = body[..i].parse().ok()?;
            let im = match &body[i..] {
                "+" => 1.0,
                "-" => -1.0,
                s => s.parse().ok()?,
            };
            Some(C64::new(re, im))
        }
        None => {
            let im = match body {
                "" | "+" => 1.0,
                "-" => -1.0,
                s => s.parse().ok()?,
            };
            Some(C64::new(0.0, im))
        }
    }
}

pub fn write_matrix(out: &mut String, m: &HermitianMatrix) {
    let n = m.dim();
    let _ = writeln!(out, "{n}");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format_entry(m.get(i, j))).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

pub fn matrix_to_string(m: &HermitianMatrix) -> String {
    let mut out = String::new();
    write_matrix(&mut out, m);
    out
}

pub fn ensemble_to_string(members: &[HermitianMatrix]) -> String {
    let n = members.first().map_or(0, HermitianMatrix::dim);
    let mut out = format!("{} {}\n", members.len(), n);
    for m in members {
        write_matrix(&mut out, m);
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate(),
        }
    }

    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        self.inner.by_ref().find_map(|(i, line)| {
            let line = line.trim();
            (!line.is_empty() && !line.starts_with('#')).then_some((i + 1, line))
        })
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.next_content().ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("unexpected end of input, expected {what}"),
        })
    }
}

fn parse_usize(line: usize, token: &str, what: &str) -> Result<usize> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected {what}, found {token:?}"),
    })
}

fn read_matrix(lines: &mut Lines<'_>) -> Result<HermitianMatrix> {
    let (line_no, header) = lines.expect("matrix dimension")?;
    let n = parse_usize(line_no, header, "matrix dimension")?;
    if n == 0 {
        return Err(Error::Parse {
            line: line_no,
            message: "matrix dimension must be at least 1".into(),
        });
    }
    let mut entries = DMatrix::zeros(n, n);
    for i in 0..n {
        let (line_no, row) = lines.expect("matrix row")?;
        let tokens: Vec<&str> = row.split_whitespace().collect();
        if tokens.len() != n {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected {n} entries, found {}", tokens.len()),
            });
        }
        for (j, token) in tokens.into_iter().enumerate() {
            entries[(i, j)] = parse_entry(token).ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("malformed entry {token:?}"),
            })?;
        }
    }
    HermitianMatrix::new(entries)
}

pub fn parse_matrix(text: &str) -> Result<HermitianMatrix> {
    let mut lines = Lines::new(text);
    let m = read_matrix(&mut lines)?;
    if let Some((line, _)) = lines.next_content() {
        return Err(Error::Parse {
            line,
            message: "trailing content after matrix".into(),
        });
    }
    Ok(m)
}

/// Parses the member list of an ensemble file.
pub fn parse_members(text: &str) -> Result<Vec<HermitianMatrix>> {
    let mut lines = Lines::new(text);
    let (line_no, header) = lines.expect("ensemble header \"count n\"")?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [count, n] = fields[..] else {
        return Err(Error::Parse {
            line: line_no,
            message: format!("expected header \"count n\", found {header:?}"),
        });
    };
    let count = parse_usize(line_no, count, "member count")?;
    let n = parse_usize(line_no, n, "matrix dimension")?;
    let mut members = Vec::with_capacity(count);
    for _ in 0..count {
        let m = read_matrix(&mut lines)?;
        if m.dim() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: m.dim(),
            });
        }
        members.push(m);
    }
    if let Some((line, _)) = lines.next_content() {
        return Err(Error::Parse {
            line,
            message: format!("more than the declared {count} matrices"),
        });
    }
    Ok(members)
}

pub fn parse_ensemble(text: &str) -> Result<MatrixEnsemble> {
    MatrixEnsemble::analyze(parse_members(text)?)
}
