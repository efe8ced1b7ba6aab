//! Plain-text potential files.
//!
//! One monomial per line: a real coefficient followed by one non-negative
//! integer exponent per variable. `#` starts a comment; blank lines are
//! ignored. The dimension is the number of exponents on the first term line
//! and every other line must agree with it.
//!
//! ```text
//! # V = -q1^4 - q1^2 q2^2
//! -1  4 0
//! -1  2 2
//! ```

use std::path::Path;

use kfp_core::{Monomial, Polynomial};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Empty(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

fn at(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Line {
        line,
        message: message.into(),
    }
}

pub fn parse_potential(text: &str) -> Result<Polynomial, ParseError> {
    let mut dim = None;
    let mut terms = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let coeff_token = tokens.next().expect("non-empty line has a token");
        let coeff: f64 = coeff_token
            .parse()
            .map_err(|_| at(line, format!("`{coeff_token}` is not a real coefficient")))?;
        if !coeff.is_finite() {
            return Err(at(line, "coefficient must be finite"));
        }
        let exponents = tokens
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| at(line, format!("`{t}` is not a non-negative integer exponent")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if exponents.is_empty() {
            return Err(at(line, "a term needs at least one exponent"));
        }
        match dim {
            None => dim = Some(exponents.len()),
            Some(d) if d != exponents.len() => {
                return Err(at(
                    line,
                    format!("expected {d} exponent(s) as on the first term, found {}", exponents.len()),
                ))
            }
            Some(_) => {}
        }
        terms.push(Monomial::new(coeff, exponents));
    }
    let dim = dim.ok_or_else(|| ParseError::Empty("potential file contains no terms".into()))?;
    Polynomial::new(dim, terms).map_err(|e| ParseError::Empty(e.to_string()))
}

pub fn read_potential(path: &Path) -> Result<Polynomial, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_potential(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_terms_and_comments() {
        let p = parse_potential("# header\n-1 4 0   # q1^4\n\n-1 2 2\n").unwrap();
        assert_eq!(p.dim(), 2);
        assert_eq!(p.homogeneous_degree(), Some(4));
        assert_eq!(p.eval(&[1.0, 1.0]), -2.0);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(
            parse_potential("1 2\n1 2 0\n"),
            Err(at(2, "expected 1 exponent(s) as on the first term, found 2"))
        );
        assert!(matches!(parse_potential("\n\nx 1"), Err(ParseError::Line { line: 3, .. })));
        assert!(matches!(parse_potential("1 -2"), Err(ParseError::Line { line: 1, .. })));
        assert!(matches!(parse_potential("2.5"), Err(ParseError::Line { line: 1, .. })));
        assert!(matches!(parse_potential("# nothing\n"), Err(ParseError::Empty(_))));
    }
}
