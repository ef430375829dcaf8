//! Text formats for colorings.
//!
//! RLE: whitespace-separated tokens `c^k` (a run of `k` positions colored
//! `c`) or a bare `c` (a single position). The coloring file format is the
//! RLE body preceded by an optional header line `@<start>` or
//! `@<start> r=<r>`. The structured form is JSON with fields `start`, `r`
//! and `colors`.

use std::fmt;

use thiserror::Error;

use crate::coloring::{Color, Coloring, ColoringError, Pos};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Empty,
    MalformedToken(String),
    ZeroRun,
    ZeroColor,
    BadHeader(String),
    Coloring(ColoringError),
    Json(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Empty => write!(f, "no runs"),
            ParseErrorKind::MalformedToken(t) => write!(f, "malformed token `{t}`"),
            ParseErrorKind::ZeroRun => write!(f, "run length must be at least 1"),
            ParseErrorKind::ZeroColor => write!(f, "colors start at 1"),
            ParseErrorKind::BadHeader(h) => write!(f, "bad header `{h}`"),
            ParseErrorKind::Coloring(e) => write!(f, "{e}"),
            ParseErrorKind::Json(e) => write!(f, "{e}"),
        }
    }
}

/// Parse failure with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

fn err(line: usize, column: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, column, kind }
}

fn parse_token(tok: &str, line: usize, column: usize) -> Result<(Color, usize), ParseError> {
    let malformed = || err(line, column, ParseErrorKind::MalformedToken(tok.to_string()));
    let (c, k) = match tok.split_once('^') {
        Some((c, k)) => (c, Some(k)),
        None => (tok, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(c) || k.is_some_and(|k| !digits(k)) {
        return Err(malformed());
    }
    let color: Color = c.parse().map_err(|_| malformed())?;
    let run: usize = match k {
        Some(k) => k.parse().map_err(|_| malformed())?,
        None => 1,
    };
    if color == 0 {
        return Err(err(line, column, ParseErrorKind::ZeroColor));
    }
    if run == 0 {
        return Err(err(line, column + c.len() + 1, ParseErrorKind::ZeroRun));
    }
    Ok((color, run))
}

fn parse_body<'a, I>(lines: I, start: Pos, r: Option<Color>) -> Result<Coloring, ParseError>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let mut colors = Vec::new();
    let mut last = (1, 1);
    for (lineno, line) in lines {
        let mut col = 0;
        for tok in line.split_whitespace() {
            // column of this token within the line
            let offset = line[col..].find(tok).map(|o| o + col).unwrap_or(col);
            col = offset + tok.len();
            let (c, k) = parse_token(tok, lineno, offset + 1)?;
            colors.extend(std::iter::repeat_n(c, k));
            last = (lineno, offset + 1);
        }
    }
    if colors.is_empty() {
        return Err(err(last.0, last.1, ParseErrorKind::Empty));
    }
    let r = r.unwrap_or_else(|| colors.iter().copied().max().unwrap_or(1));
    Coloring::new(start, colors, r).map_err(|e| err(last.0, last.1, ParseErrorKind::Coloring(e)))
}

/// Parses an RLE string into a coloring starting at `start`; `r` is the
/// largest color seen.
pub fn parse_rle(text: &str, start: Pos) -> Result<Coloring, ParseError> {
    parse_body(text.lines().enumerate().map(|(i, l)| (i + 1, l)), start, None)
}

/// As [`parse_rle`] with an explicit color count.
pub fn parse_rle_with_r(text: &str, start: Pos, r: Color) -> Result<Coloring, ParseError> {
    parse_body(text.lines().enumerate().map(|(i, l)| (i + 1, l)), start, Some(r))
}

/// Maximal-run RLE, every token written as `c^k`.
pub fn to_rle(c: &Coloring) -> String {
    c.runs().iter().map(|(color, k)| format!("{color}^{k}")).collect::<Vec<_>>().join(" ")
}

fn parse_header(h: &str, line: usize) -> Result<(Pos, Option<Color>), ParseError> {
    let bad = || err(line, 1, ParseErrorKind::BadHeader(h.to_string()));
    let rest = h.trim().strip_prefix('@').ok_or_else(bad)?;
    let mut parts = rest.split_whitespace();
    let start: Pos = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let r = match parts.next() {
        Some(p) => Some(p.strip_prefix("r=").ok_or_else(bad)?.parse().map_err(|_| bad())?),
        None => None,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok((start, r))
}

/// Parses the coloring file format. A body starting with `{` is read as
/// JSON; otherwise an optional `@start [r=R]` header precedes the RLE.
pub fn parse_coloring_text(text: &str) -> Result<Coloring, ParseError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        return serde_json::from_str(trimmed).map_err(|e| err(e.line(), e.column(), ParseErrorKind::Json(e.to_string())));
    }
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty()).peekable();
    let (start, r) = match lines.peek() {
        Some(&(n, l)) if l.trim_start().starts_with('@') => {
            lines.next();
            parse_header(l, n)?
        }
        _ => (1, None),
    };
    parse_body(lines, start, r)
}

/// Emits the coloring file format; inverse of [`parse_coloring_text`].
pub fn to_coloring_text(c: &Coloring) -> String {
    let max = c.colors().iter().copied().max().unwrap_or(1);
    if c.r() > max {
        format!("@{} r={}\n{}\n", c.start(), c.r(), to_rle(c))
    } else {
        format!("@{}\n{}\n", c.start(), to_rle(c))
    }
}

pub fn to_json(c: &Coloring) -> String {
    serde_json::to_string(c).expect("coloring serializes")
}
