//! Plain-text generator matrices.
//!
//! ```text
//! q2=13^2 n=25 k=7
//! 1 0 0 ... t^95
//! ...
//! ```
//! Blank lines and lines starting with `#` are ignored.

use super::{CodeError, Matrix};
use crate::field::{Element, FieldTower};

/// Header fields of a matrix file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixFile {
    pub p: u32,
    /// Extension degree 2m of GF(q²) over GF(p).
    pub degree: u32,
    pub n: usize,
    pub k: usize,
}

impl MatrixFile {
    pub fn m(&self) -> u32 {
        self.degree / 2
    }

    pub fn read_header(text: &str) -> Result<(Self, usize), CodeError> {
        let (line_no, line) = content_lines(text).next().ok_or_else(|| CodeError::Parse {
            line: 1,
            column: 1,
            message: "empty matrix file".into(),
        })?;
        let err = |column: usize, message: &str| CodeError::Parse {
            line: line_no,
            column,
            message: message.to_string(),
        };
        let mut q2 = None;
        let mut n = None;
        let mut k = None;
        for (column, word) in words(line) {
            let (key, value) = word
                .split_once('=')
                .ok_or_else(|| err(column, "expected key=value"))?;
            match key {
                "q2" => {
                    let (p, d) = value
                        .split_once('^')
                        .ok_or_else(|| err(column, "expected q2=<p>^<2m>"))?;
                    let p: u32 = p.parse().map_err(|_| err(column, "bad prime"))?;
                    let d: u32 = d.parse().map_err(|_| err(column, "bad degree"))?;
                    if d == 0 || d % 2 == 1 {
                        return Err(err(column, "degree of GF(q²) must be even"));
                    }
                    q2 = Some((p, d));
                }
                "n" => n = Some(value.parse().map_err(|_| err(column, "bad n"))?),
                "k" => k = Some(value.parse().map_err(|_| err(column, "bad k"))?),
                _ => return Err(err(column, "unknown header key")),
            }
        }
        let (p, degree) = q2.ok_or_else(|| err(1, "missing q2"))?;
        let n = n.ok_or_else(|| err(1, "missing n"))?;
        let k = k.ok_or_else(|| err(1, "missing k"))?;
        Ok((Self { p, degree, n, k }, line_no))
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

/// Whitespace-separated words with 1-based byte columns.
fn words(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace().map(move |w| {
        let offset = w.as_ptr() as usize - line.as_ptr() as usize;
        (offset + 1, w)
    })
}

/// Parses a matrix file over `f`. With `systematic_prefix` every row holds
/// the n−k entries after an omitted identity block.
pub fn parse_matrix(
    f: &FieldTower,
    text: &str,
    systematic_prefix: bool,
) -> Result<(MatrixFile, Matrix), CodeError> {
    let (header, header_line) = MatrixFile::read_header(text)?;
    if header.p != f.p() || header.degree != 2 * f.m() {
        return Err(CodeError::Parse {
            line: header_line,
            column: 1,
            message: format!("header field {}^{} differs from {}", header.p, header.degree, f.label()),
        });
    }
    if header.k > header.n {
        return Err(CodeError::Parse {
            line: header_line,
            column: 1,
            message: "k exceeds n".into(),
        });
    }
    let width = if systematic_prefix {
        header.n - header.k
    } else {
        header.n
    };
    let mut rows = Vec::with_capacity(header.k);
    for (line_no, line) in content_lines(text).skip(1) {
        let mut row = Vec::with_capacity(header.n);
        if systematic_prefix {
            row.extend((0..header.k).map(|i| {
                if i == rows.len() {
                    Element::ONE
                } else {
                    Element::ZERO
                }
            }));
        }
        let mut count = 0;
        for (column, token) in words(line) {
            let e = f.parse_element(token).map_err(|e| CodeError::Parse {
                line: line_no,
                column,
                message: e.to_string(),
            })?;
            row.push(e);
            count += 1;
        }
        if count != width {
            return Err(CodeError::Parse {
                line: line_no,
                column: line.len() + 1,
                message: format!("expected {width} entries, found {count}"),
            });
        }
        if rows.len() == header.k {
            return Err(CodeError::Parse {
                line: line_no,
                column: 1,
                message: format!("more than k = {} rows", header.k),
            });
        }
        rows.push(row);
    }
    if rows.len() != header.k {
        return Err(CodeError::Parse {
            line: text.lines().count() + 1,
            column: 1,
            message: format!("expected {} rows, found {}", header.k, rows.len()),
        });
    }
    let matrix = if rows.is_empty() {
        Matrix::zeros(0, header.n)
    } else {
        Matrix::from_rows(rows)
    };
    Ok((header, matrix))
}

/// Canonical text form: header line, then one space-separated row per line.
pub fn format_matrix(f: &FieldTower, g: &Matrix) -> String {
    let mut out = format!("q2={} n={} k={}\n", f.label(), g.cols(), g.rows());
    for r in 0..g.rows() {
        let tokens: Vec<String> = g.row(r).iter().map(Element::to_string).collect();
        out.push_str(&tokens.join(" "));
        out.push('\n');
    }
    out
}
