//! Matrix documents: the on-disk form of an exponent matrix.
//!
//! Two encodings are accepted, chosen by the first non-space byte:
//!
//! * JSON, `{"n": 3, "d": 2, "rows": [[2,0,0,0], …]}` with `n` and `d` optional;
//! * plain text, an optional `n d` header line followed by one
//!   whitespace-separated row per line. Blank lines and `#` comments are ignored.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::map::ExponentMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("invalid JSON document: {0}")]
    Json(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("document contains no rows")]
    Empty,
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, found: usize, expected: usize },
    #[error("header says n = {header}, but the matrix has {rows} rows")]
    DimensionMismatch { header: usize, rows: usize },
    #[error("header says d = {header}, but row {row} sums to {sum}")]
    DegreeMismatch { header: i64, row: usize, sum: i64 },
}

/// A parsed but not yet validated matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<i64>,
    pub rows: Vec<Vec<i64>>,
}

/// Output form of a valid exponent matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub n: usize,
    pub d: u64,
    pub rows: Vec<Vec<u64>>,
}

impl From<&ExponentMatrix> for MatrixDocument {
    fn from(m: &ExponentMatrix) -> Self {
        MatrixDocument { n: m.n(), d: m.d(), rows: m.to_rows() }
    }
}

impl RawDocument {
    fn check(self) -> Result<Self, DocumentError> {
        let Some(first) = self.rows.first() else {
            return Err(DocumentError::Empty);
        };
        let width = first.len();
        for (row, r) in self.rows.iter().enumerate() {
            if r.len() != width {
                return Err(DocumentError::Ragged { row, found: r.len(), expected: width });
            }
        }
        if let Some(n) = self.n {
            if n + 1 != self.rows.len() {
                return Err(DocumentError::DimensionMismatch { header: n, rows: self.rows.len() });
            }
        }
        if let Some(d) = self.d {
            for (row, r) in self.rows.iter().enumerate() {
                let sum: i64 = r.iter().sum();
                if sum != d {
                    return Err(DocumentError::DegreeMismatch { header: d, row, sum });
                }
            }
        }
        Ok(self)
    }
}

pub fn parse_document(input: &str) -> Result<RawDocument, DocumentError> {
    if input.trim_start().starts_with('{') {
        let doc: RawDocument =
            serde_json::from_str(input).map_err(|e| DocumentError::Json(e.to_string()))?;
        return doc.check();
    }
    let mut lines = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let values = content
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i64>().map_err(|_| DocumentError::Syntax {
                    line: idx + 1,
                    message: format!("not an integer: {tok:?}"),
                })
            })
            .collect::<Result<Vec<i64>, _>>()?;
        lines.push((idx + 1, values));
    }
    let mut doc = RawDocument { n: None, d: None, rows: Vec::new() };
    let mut iter = lines.into_iter().peekable();
    // exponent matrices have at least three columns, so a two-entry line is the header
    if let Some((line, first)) = iter.peek() {
        if first.len() == 2 {
            let n = usize::try_from(first[0]).map_err(|_| DocumentError::Syntax {
                line: *line,
                message: "n must be non-negative".to_string(),
            })?;
            doc.n = Some(n);
            doc.d = Some(first[1]);
            iter.next();
        }
    }
    doc.rows = iter.map(|(_, v)| v).collect();
    doc.check()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::phi_nd;

    #[test]
    fn text_with_and_without_header() {
        let with = parse_document("3 2\n2 0 0 0\n1 1 0 0\n0 1 1 0\n0 0 1 1\n").unwrap();
        assert_eq!((with.n, with.d), (Some(3), Some(2)));
        let without = parse_document("# comment\n2 0 0 0\n1 1 0 0\n\n0 1 1 0\n0 0 1 1 # tail\n").unwrap();
        assert_eq!(without.rows, with.rows);
        assert_eq!((without.n, without.d), (None, None));
    }

    #[test]
    fn display_round_trips() {
        let m = phi_nd(3, 4);
        let doc = parse_document(&m.to_string()).unwrap();
        assert_eq!(doc.n, Some(3));
        assert_eq!(doc.d, Some(4));
        assert_eq!(
            doc.rows,
            m.to_rows().iter().map(|r| r.iter().map(|&x| x as i64).collect::<Vec<_>>()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn json_documents() {
        let doc = parse_document(r#" {"rows": [[0,1,1],[1,0,1],[1,1,0]]}"#).unwrap();
        assert_eq!(doc.rows.len(), 3);
        let doc = parse_document(r#"{"n": 2, "d": 2, "rows": [[0,1,1],[1,0,1],[1,1,0]], "dprime": 2}"#).unwrap();
        assert_eq!(doc.n, Some(2));
        let out = serde_json::to_string(&MatrixDocument::from(&phi_nd(2, 2))).unwrap();
        assert_eq!(out, r#"{"n":2,"d":2,"rows":[[2,0,0],[1,1,0],[0,1,1]]}"#);
    }

    #[test]
    fn malformed_documents() {
        assert!(matches!(parse_document("1 2 3\n4 5\n"), Err(DocumentError::Ragged { row: 1, .. })));
        assert!(matches!(parse_document("1 x 3\n"), Err(DocumentError::Syntax { line: 1, .. })));
        assert_eq!(parse_document("  \n# nothing\n"), Err(DocumentError::Empty));
        assert!(matches!(
            parse_document("3 2\n2 0 0\n1 1 0\n0 1 1\n"),
            Err(DocumentError::DimensionMismatch { header: 3, rows: 3 })
        ));
        assert!(matches!(
            parse_document("2 3\n2 0 0\n1 1 0\n0 1 1\n"),
            Err(DocumentError::DegreeMismatch { header: 3, row: 0, sum: 2 })
        ));
        assert!(matches!(parse_document("{\"rows\": 3}"), Err(DocumentError::Json(_))));
    }
}
