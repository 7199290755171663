use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isotopic::MatrixPair;
use crate::linalg::{parse_rational, Mat, Rational};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Text(String),
}

/// A pair of square matrices as read from disk: `{"n": 2, "A": [[..]], "B": [[..]]}`
/// with integer or `"p/q"` entries.
#[derive(Debug, Clone, Deserialize)]
struct RawPair {
    n: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<Entry>>,
    #[serde(rename = "B")]
    b: Vec<Vec<Entry>>,
}

/// The serialized form of a pair, entries as lowest-terms strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairDocument {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<String>>,
}

impl PairDocument {
    pub fn from_pair(p: &MatrixPair) -> Self {
        Self { n: p.n(), a: matrix_strings(p.a()), b: matrix_strings(p.b()) }
    }
}

pub fn rational_string(r: &Rational) -> String {
    r.to_string()
}

pub fn matrix_strings(m: &Mat) -> Vec<Vec<String>> {
    m.rows().iter().map(|row| row.iter().map(rational_string).collect()).collect()
}

fn parse_matrix(name: &str, n: usize, rows: Vec<Vec<Entry>>) -> Result<Mat> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Parse(format!("{name} is not {n} x {n}")));
    }
    let rows = rows
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|e| match e {
                    Entry::Int(i) => Ok(Rational::from_integer(i.into())),
                    Entry::Text(s) => parse_rational(&s),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Mat::from_rows(rows)
}

/// Parses a pair document from JSON text.
pub fn parse_pair(text: &str) -> Result<MatrixPair> {
    let raw: RawPair = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if raw.n == 0 {
        return Err(Error::Parse("n must be at least 1".into()));
    }
    let a = parse_matrix("A", raw.n, raw.a)?;
    let b = parse_matrix("B", raw.n, raw.b)?;
    MatrixPair::new(a, b)
}
