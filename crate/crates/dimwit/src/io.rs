//! Matrix file formats.
//!
//! Text: a header line `m_A m_B`, then `m_A` lines of `m_B` numbers. Blank
//! lines and lines starting with `#` are skipped.
//!
//! JSON: `{"rows": m_A, "cols": m_B, "entries": [[..], ..]}`; `entries` may
//! also be a flat row-major array.

use std::fmt;
use std::io::Read;
use std::path::Path;

use dimwit_core::BellExpression;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct ParseError {
    /// 1-based; 0 when the problem is not tied to a position.
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(
                f,
                "line {}, column {}: {}",
                self.line, self.column, self.message
            )
        }
    }
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

/// Reads a matrix from `path`, or from stdin when `path` is `-`.
pub fn read_matrix(path: &Path) -> Result<BellExpression, ParseError> {
    let mut text = String::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| err(0, 0, format!("{}: {e}", path.display())))?;
    parse_matrix(&text)
}

/// Parses either format, picking JSON when the first non-blank character is `{`.
pub fn parse_matrix(text: &str) -> Result<BellExpression, ParseError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

/// Tokens of one line with their 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace().map(move |tok| {
        let offset = tok.as_ptr() as usize - line.as_ptr() as usize;
        (line[..offset].chars().count() + 1, tok)
    })
}

fn parse_number(tok: &str, line: usize, col: usize) -> Result<f64, ParseError> {
    let v: f64 = tok
        .parse()
        .map_err(|_| err(line, col, format!("`{tok}` is not a number")))?;
    if !v.is_finite() {
        return Err(err(line, col, format!("`{tok}` is not finite")));
    }
    Ok(v)
}

fn parse_dim(tok: &str, line: usize, col: usize) -> Result<usize, ParseError> {
    match tok.parse::<usize>() {
        Ok(d) if d > 0 => Ok(d),
        _ => Err(err(line, col, format!("`{tok}` is not a positive integer"))),
    }
}

pub fn parse_text(text: &str) -> Result<BellExpression, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));

    let (hline, header) = lines.next().ok_or_else(|| err(1, 1, "empty input"))?;
    let head: Vec<_> = tokens(header).collect();
    if head.len() != 2 {
        let col = head.get(2).map_or(1, |t| t.0);
        return Err(err(hline, col, "header must be `m_A m_B`"));
    }
    let rows = parse_dim(head[0].1, hline, head[0].0)?;
    let cols = parse_dim(head[1].1, hline, head[1].0)?;

    let mut entries = Vec::with_capacity(rows * cols);
    let mut last_line = hline;
    for r in 0..rows {
        let (lno, line) = lines
            .next()
            .ok_or_else(|| err(last_line + 1, 1, format!("expected {rows} rows, found {r}")))?;
        last_line = lno;
        let mut count = 0;
        for (col, tok) in tokens(line) {
            if count == cols {
                return Err(err(lno, col, format!("row has more than {cols} entries")));
            }
            entries.push(parse_number(tok, lno, col)?);
            count += 1;
        }
        if count < cols {
            let end = line.chars().count() + 1;
            return Err(err(
                lno,
                end,
                format!("row has {count} entries, expected {cols}"),
            ));
        }
    }
    if let Some((lno, line)) = lines.next() {
        let col = tokens(line).next().map_or(1, |t| t.0);
        return Err(err(
            lno,
            col,
            format!("unexpected content after {rows} rows"),
        ));
    }
    BellExpression::new(rows, cols, entries).map_err(|e| err(hline, 1, e.to_string()))
}

pub fn parse_json(text: &str) -> Result<BellExpression, ParseError> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| err(e.line(), e.column(), e.to_string()))?;
    let field = |name: &str| {
        v.get(name)
            .ok_or_else(|| err(0, 0, format!("missing field `{name}`")))
    };
    let dim = |name: &str| -> Result<usize, ParseError> {
        match field(name)?.as_u64() {
            Some(d) if d > 0 => Ok(d as usize),
            _ => Err(err(0, 0, format!("`{name}` must be a positive integer"))),
        }
    };
    let rows = dim("rows")?;
    let cols = dim("cols")?;
    let raw = field("entries")?
        .as_array()
        .ok_or_else(|| err(0, 0, "`entries` must be an array"))?;

    let number = |x: &Value, at: String| -> Result<f64, ParseError> {
        x.as_f64()
            .filter(|v| v.is_finite())
            .ok_or_else(|| err(0, 0, format!("entry {at} is not a finite number")))
    };
    let mut entries = Vec::with_capacity(rows * cols);
    if raw.iter().all(Value::is_array) && !raw.is_empty() {
        if raw.len() != rows {
            return Err(err(
                0,
                0,
                format!("{} rows given, `rows` is {rows}", raw.len()),
            ));
        }
        for (i, row) in raw.iter().enumerate() {
            let row = row.as_array().expect("checked above");
            if row.len() != cols {
                return Err(err(
                    0,
                    0,
                    format!("row {i} has {} entries, `cols` is {cols}", row.len()),
                ));
            }
            for (j, x) in row.iter().enumerate() {
                entries.push(number(x, format!("[{i}][{j}]"))?);
            }
        }
    } else {
        if raw.len() != rows * cols {
            return Err(err(
                0,
                0,
                format!("{} entries given, expected {}", raw.len(), rows * cols),
            ));
        }
        for (k, x) in raw.iter().enumerate() {
            entries.push(number(x, format!("[{k}]"))?);
        }
    }
    BellExpression::new(rows, cols, entries).map_err(|e| err(0, 0, e.to_string()))
}

/// Text form. `Display` for `f64` prints the shortest string that parses
/// back to the same value, so [`parse_text`] recovers the matrix exactly.
pub fn format_text(expr: &BellExpression) -> String {
    let mut out = format!("{} {}\n", expr.rows(), expr.cols());
    for i in 0..expr.rows() {
        let row: Vec<String> = expr.row(i).iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// JSON form with nested `entries`.
pub fn matrix_json(expr: &BellExpression) -> Value {
    let rows: Vec<Vec<f64>> = (0..expr.rows()).map(|i| expr.row(i).to_vec()).collect();
    serde_json::json!({ "rows": expr.rows(), "cols": expr.cols(), "entries": rows })
}
