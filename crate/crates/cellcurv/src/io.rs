//! Line-oriented text format for complexes:
//!
//! ```text
//! # comment
//! cell <id> <dim>
//! face <tau-id> <sigma-id> <+1|-1>
//! ```
//!
//! Ids are arbitrary non-whitespace tokens. The parser reports the
//! offending line for every rejection; the serializer emits the canonical
//! (dimension, id) order so round trips are byte-stable.

use thiserror::Error;

use crate::complex::{CellComplex, ComplexBuilder, ComplexError};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: expected `cell <id> <dim>`, got `{text}`")]
    BadCellLine { line: usize, text: String },
    #[error("line {line}: expected `face <tau> <sigma> <+1|-1>`, got `{text}`")]
    BadFaceLine { line: usize, text: String },
    #[error("line {line}: bad dimension `{token}`")]
    BadDim { line: usize, token: String },
    #[error("line {line}: bad sign token `{token}` (must be +1 or -1)")]
    BadSign { line: usize, token: String },
    #[error("line {line}: unknown directive `{token}`")]
    UnknownDirective { line: usize, token: String },
    #[error("line {line}: {source}")]
    Structure {
        line: usize,
        #[source]
        source: ComplexError,
    },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Parses the `cell`/`face` line format into a validated-for-shape complex.
pub fn parse_complex(text: &str) -> Result<CellComplex, ParseError> {
    let mut builder = ComplexBuilder::new();
    // remember the defining line of each id and pair for error reports
    let mut cell_lines: Vec<(String, usize)> = Vec::new();
    let mut face_lines: Vec<(String, String, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let directive = tokens.next().unwrap_or("");
        match directive {
            "cell" => {
                let (Some(id), Some(dim), None) = (tokens.next(), tokens.next(), tokens.next())
                else {
                    return Err(ParseError::BadCellLine {
                        line,
                        text: content.to_string(),
                    });
                };
                let dim: usize = dim.parse().map_err(|_| ParseError::BadDim {
                    line,
                    token: dim.to_string(),
                })?;
                builder.cell(id, dim);
                cell_lines.push((id.to_string(), line));
            }
            "face" => {
                let (Some(tau), Some(sigma), Some(sign), None) =
                    (tokens.next(), tokens.next(), tokens.next(), tokens.next())
                else {
                    return Err(ParseError::BadFaceLine {
                        line,
                        text: content.to_string(),
                    });
                };
                let sign = match sign {
                    "+1" | "1" => 1,
                    "-1" => -1,
                    other => {
                        return Err(ParseError::BadSign {
                            line,
                            token: other.to_string(),
                        })
                    }
                };
                builder.incidence(tau, sigma, sign);
                face_lines.push((tau.to_string(), sigma.to_string(), line));
            }
            other => {
                return Err(ParseError::UnknownDirective {
                    line,
                    token: other.to_string(),
                })
            }
        }
    }

    builder.finish().map_err(|e| {
        let line = match &e {
            ComplexError::DuplicateCell(id) => cell_lines
                .iter()
                .filter(|(l, _)| l == id)
                .nth(1)
                .map(|(_, n)| *n),
            ComplexError::UnknownCell(id) => face_lines
                .iter()
                .find(|(t, s, _)| t == id || s == id)
                .map(|(_, _, n)| *n),
            ComplexError::DimensionMismatch { tau, sigma } => face_lines
                .iter()
                .find(|(t, s, _)| t == tau && s == sigma)
                .map(|(_, _, n)| *n),
            ComplexError::DuplicateIncidence { tau, sigma } => face_lines
                .iter()
                .filter(|(t, s, _)| t == tau && s == sigma)
                .nth(1)
                .map(|(_, _, n)| *n),
            _ => None,
        };
        match line {
            Some(line) => ParseError::Structure { line, source: e },
            None => ParseError::Complex(e),
        }
    })
}

/// Serializes in the canonical order: cells by (dim, id), then faces by
/// (tau, sigma).
pub fn serialize_complex(c: &CellComplex) -> String {
    let mut out = String::new();
    for i in c.cell_ids() {
        out.push_str(&format!("cell {} {}\n", c.label(i), c.dim_of(i)));
    }
    for v in c.vectors() {
        let sign = c.sign(v.tau, v.sigma).expect("vector of the complex");
        out.push_str(&format!(
            "face {} {} {}\n",
            c.label(v.tau),
            c.label(v.sigma),
            if sign > 0 { "+1" } else { "-1" }
        ));
    }
    out
}
