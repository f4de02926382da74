//! The line-oriented `.divide` text format.
//!
//! ```text
//! divide v1
//! # name: e6
//! branch open: (-99/100,0) (1/2,1/4) (99/100,0)
//! branch closed: (0,1/2) (1/2,-1/2) (-1/2,-1/2)
//! ```
//!
//! Numbers are exact: `0.1` is `1/10`. `#` starts a comment; the special
//! comments `# name:` and `# comment:` carry document metadata.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::divide::{validate, Branch, BranchKind, Divide, DivideError};
use crate::geometry::{Point2, Rational};

pub const FORMAT_VERSION: &str = "v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: expected {expected}, found {found}")]
    Syntax { line: usize, column: usize, expected: String, found: String },
    #[error("range error at line {line}, column {column}: {value} is outside [-1, 1]")]
    Range { line: usize, column: usize, value: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DivideDocument {
    pub version: String,
    pub branches: Vec<Branch>,
    pub name: Option<String>,
    pub comment: Option<String>,
}

impl DivideDocument {
    pub fn new(branches: Vec<Branch>) -> Self {
        DivideDocument { version: FORMAT_VERSION.to_string(), branches, ..Default::default() }
    }

    pub fn from_divide(divide: &Divide) -> Self {
        DivideDocument::new(divide.branches().to_vec())
    }

    pub fn to_divide(&self) -> Result<Divide, DivideError> {
        validate(self.branches.clone())
    }
}

impl FromStr for DivideDocument {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(src: &str, line: usize) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0, line }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    fn error(&self, expected: &str) -> ParseError {
        let found = match self.peek() {
            None => "end of line".to_string(),
            Some(_) => {
                let rest: String = self.chars[self.pos..].iter().take(12).collect();
                format!("{rest:?}")
            }
        };
        ParseError::Syntax {
            line: self.line,
            column: self.pos + 1,
            expected: expected.to_string(),
            found,
        }
    }

    fn word(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let save = self.pos;
        self.skip_ws();
        let at = self.pos;
        match self.word() {
            Some(w) if w == kw => Ok(()),
            _ => {
                self.pos = at;
                let e = self.error(&format!("'{kw}'"));
                self.pos = save;
                Err(e)
            }
        }
    }

    fn symbol(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("'{c}'")))
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    /// `DECIMAL | INT "/" INT`, parsed exactly.
    fn number(&mut self) -> Result<(Rational, usize), ParseError> {
        self.skip_ws();
        let column = self.pos + 1;
        let negative = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let whole = self.digits();
        let value = if self.peek() == Some('/') {
            if whole.is_empty() {
                return Err(self.error("number"));
            }
            self.pos += 1;
            let den = self.digits();
            if den.is_empty() {
                return Err(self.error("denominator"));
            }
            let den = BigInt::from_str(&den).unwrap();
            if den.is_zero() {
                self.pos -= 1;
                return Err(self.error("nonzero denominator"));
            }
            Rational::new(BigInt::from_str(&whole).unwrap(), den)
        } else {
            let frac = if self.peek() == Some('.') {
                self.pos += 1;
                self.digits()
            } else {
                String::new()
            };
            if whole.is_empty() && frac.is_empty() {
                return Err(self.error("number"));
            }
            let digits = format!("{whole}{frac}");
            let num = BigInt::from_str(&digits).unwrap();
            let den = num_traits::pow(BigInt::from(10), frac.len());
            Rational::new(num, den)
        };
        Ok((if negative { -value } else { value }, column))
    }

    fn point(&mut self) -> Result<Point2, ParseError> {
        self.symbol('(')?;
        let x = self.coordinate()?;
        self.symbol(',')?;
        let y = self.coordinate()?;
        self.symbol(')')?;
        Ok(Point2::new(x, y))
    }

    fn coordinate(&mut self) -> Result<Rational, ParseError> {
        let (v, column) = self.number()?;
        if v.abs() > Rational::one() {
            return Err(ParseError::Range { line: self.line, column, value: v.to_string() });
        }
        Ok(v)
    }
}

/// Parses one exact number in the syntax of the format, e.g. `0.25` or `-3/8`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let mut c = Cursor::new(text, 1);
    let (v, _) = c.number()?;
    if !c.at_end() {
        return Err(c.error("end of number"));
    }
    Ok(v)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses a `.divide` document. LF and CRLF line endings are accepted.
pub fn parse(text: &str) -> Result<DivideDocument, ParseError> {
    let mut doc = DivideDocument::default();
    let mut header_seen = false;
    let mut last_line = 0;
    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let trimmed = raw.trim_start();
        if let Some(meta) = trimmed.strip_prefix('#') {
            let meta = meta.trim_start();
            if let Some(v) = meta.strip_prefix("name:") {
                doc.name = Some(v.trim().to_string());
            } else if let Some(v) = meta.strip_prefix("comment:") {
                doc.comment = Some(v.trim().to_string());
            }
            continue;
        }
        let body = strip_comment(raw);
        if body.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor::new(body, line_no);
        if !header_seen {
            cur.keyword("divide")?;
            cur.keyword(FORMAT_VERSION)?;
            if !cur.at_end() {
                return Err(cur.error("end of line"));
            }
            doc.version = FORMAT_VERSION.to_string();
            header_seen = true;
            continue;
        }
        cur.keyword("branch")?;
        let kind = match cur.word().as_deref() {
            Some("open") => BranchKind::Open,
            Some("closed") => BranchKind::Closed,
            _ => {
                cur.pos = 0;
                cur.keyword("branch")?;
                cur.skip_ws();
                return Err(cur.error("'open' or 'closed'"));
            }
        };
        cur.symbol(':')?;
        let mut vertices = vec![cur.point()?];
        while !cur.at_end() {
            vertices.push(cur.point()?);
        }
        doc.branches.push(Branch { kind, vertices });
    }
    if !header_seen {
        return Err(ParseError::Syntax {
            line: last_line.max(1),
            column: 1,
            expected: "'divide v1' header".into(),
            found: "end of input".into(),
        });
    }
    Ok(doc)
}

/// Canonical text: header, metadata, then one branch per line with
/// coordinates in lowest terms.
pub fn serialize(doc: &DivideDocument) -> String {
    let mut out = format!("divide {FORMAT_VERSION}\n");
    let clean = |s: &str| s.replace(['\r', '\n'], " ").trim().to_string();
    if let Some(name) = &doc.name {
        writeln!(out, "# name: {}", clean(name)).unwrap();
    }
    if let Some(comment) = &doc.comment {
        writeln!(out, "# comment: {}", clean(comment)).unwrap();
    }
    for b in &doc.branches {
        out.push_str(match b.kind {
            BranchKind::Open => "branch open:",
            BranchKind::Closed => "branch closed:",
        });
        for v in &b.vertices {
            write!(out, " ({},{})", v.x, v.y).unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ratio;

    #[test]
    fn standalone_numbers() {
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational(" -3/8 ").unwrap(), ratio(-3, 8));
        assert!(parse_rational("1/2x").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn open_branch() {
        let doc = parse("divide v1\nbranch open: (-0.99,0.0) (0.99,0.0)\n").unwrap();
        assert_eq!(doc.branches.len(), 1);
        assert_eq!(doc.branches[0].kind, BranchKind::Open);
        assert_eq!(doc.branches[0].vertices.len(), 2);
        assert_eq!(doc.branches[0].vertices[0].x, ratio(-99, 100));
    }

    #[test]
    fn closed_branch() {
        let doc = parse("divide v1\nbranch closed: (0,0.5) (0.5,-0.5) (-0.5,-0.5)\n").unwrap();
        assert_eq!(doc.branches[0].kind, BranchKind::Closed);
        assert_eq!(doc.branches[0].vertices.len(), 3);
    }

    #[test]
    fn missing_header() {
        match parse("branch open: (0,0)") {
            Err(ParseError::Syntax { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn decimals_are_exact() {
        let doc = parse("divide v1\nbranch open: (0.5, -0.1) (3/4,+1)\n").unwrap();
        assert_eq!(doc.branches[0].vertices[0].x, ratio(1, 2));
        assert_eq!(doc.branches[0].vertices[0].y, ratio(-1, 10));
        assert!(serialize(&doc).contains("(1/2,-1/10) (3/4,1)"));
    }

    #[test]
    fn comments_crlf_and_blank_lines() {
        let text = "# leading\r\ndivide v1 # header\r\n\r\n  branch open: (-1,0)(1,0) # tail\r\n";
        let doc = parse(text).unwrap();
        assert_eq!(doc.branches[0].vertices.len(), 2);
    }

    #[test]
    fn metadata_round_trip() {
        let mut doc = DivideDocument::new(vec![]);
        doc.name = Some("e6".into());
        doc.comment = Some("one branch".into());
        let text = serialize(&doc);
        assert_eq!(text, "divide v1\n# name: e6\n# comment: one branch\n");
        assert_eq!(parse(&text).unwrap(), doc);
    }

    #[test]
    fn empty_document_serializes_header_only() {
        let doc = DivideDocument::new(vec![]);
        assert_eq!(serialize(&doc), "divide v1\n");
        let back = parse("divide v1\n").unwrap();
        assert!(matches!(back.to_divide(), Err(DivideError::EmptyDivide)));
    }

    #[test]
    fn range_and_syntax_errors() {
        assert!(matches!(
            parse("divide v1\nbranch open: (1.5,0) (0,0)\n"),
            Err(ParseError::Range { line: 2, column: 15, .. })
        ));
        assert!(matches!(
            parse("divide v1\nbranch wobbly: (0,0)\n"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
        assert!(matches!(parse("divide v1\nbranch open: (0,0\n"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("divide v1\nbranch open: (1/0,0)\n"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("divide v1\nbranch open:\n"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("divide v2\n"), Err(ParseError::Syntax { line: 1, .. })));
        assert!(matches!(parse(""), Err(ParseError::Syntax { .. })));
    }
}
