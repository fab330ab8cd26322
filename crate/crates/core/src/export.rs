//! Text matrix formats for bases and minimal-vector sets.
//!
//! Plain: a header line `cols rows`, then one line per row of single-space
//! separated decimals. Bracket: `[[a b c][d e f]]` on one line, the form
//! common lattice-reduction tools read. Both end in a newline.

use std::fmt::Write;

use crate::error::{Error, Result};

pub fn to_plain<'a>(cols: usize, rows: impl IntoIterator<Item = &'a [i64]>) -> String {
    let rows: Vec<&[i64]> = rows.into_iter().collect();
    let mut out = format!("{cols} {}\n", rows.len());
    for r in rows {
        push_row(&mut out, r);
        out.push('\n');
    }
    out
}

pub fn to_bracket<'a>(rows: impl IntoIterator<Item = &'a [i64]>) -> String {
    let mut out = String::from("[");
    for r in rows {
        out.push('[');
        push_row(&mut out, r);
        out.push(']');
    }
    out.push_str("]\n");
    out
}

fn push_row(out: &mut String, r: &[i64]) {
    for (i, x) in r.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{x}").expect("writing to a String");
    }
}

fn bad(why: impl Into<String>) -> Error {
    Error::BadMatrix(why.into())
}

fn parse_row(s: &str) -> Result<Vec<i64>> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| bad(format!("`{t}` is not an integer"))))
        .collect()
}

/// Reads either format; whitespace (including newlines inside brackets) is
/// insignificant beyond separating entries. Rows must have equal length.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<i64>>> {
    let text = text.trim();
    let rows = if let Some(inner) = text.strip_prefix('[') {
        let inner = inner
            .strip_suffix(']')
            .ok_or_else(|| bad("unbalanced brackets"))?;
        let mut rows = Vec::new();
        let mut rest = inner.trim_start();
        while !rest.is_empty() {
            let body = rest.strip_prefix('[').ok_or_else(|| bad("expected `[`"))?;
            let end = body.find(']').ok_or_else(|| bad("unterminated row"))?;
            rows.push(parse_row(&body[..end])?);
            rest = body[end + 1..].trim_start();
        }
        rows
    } else {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = parse_row(lines.next().ok_or_else(|| bad("empty input"))?)?;
        let [cols, count] = header[..] else {
            return Err(bad("header must be `cols rows`"));
        };
        let rows: Vec<Vec<i64>> = lines.map(parse_row).collect::<Result<_>>()?;
        if rows.len() as i64 != count || rows.iter().any(|r| r.len() as i64 != cols) {
            return Err(bad("matrix does not match its header"));
        }
        rows
    };
    if rows.windows(2).any(|w| w[0].len() != w[1].len()) {
        return Err(bad("ragged rows"));
    }
    Ok(rows)
}
