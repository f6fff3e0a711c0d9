//! JSON input documents.
//!
//! ```json
//! {"variables": ["x1", "x2"], "parity": "even",
//!  "bivector": [{"coeff": "1", "monomial": {"x1": 1, "x2": 1}, "frame": [1, 2]}]}
//! ```
//!
//! Frames are 1-based. `"odd"` parity selects the exterior carrier.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use poisson_workbench::calculus::{BivectorTerm, CalculusError, PoissonStructure};
use poisson_workbench::graded::{AlgebraError, CarrierSpec};
use poisson_workbench::rational::Rational;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{location}: malformed rational {text:?}")]
    MalformedRational { location: String, text: String },
    #[error("{location}: unknown variable {name:?}")]
    UnknownVariable { location: String, name: String },
    #[error("{location}: frame [{i}, {j}] must name two distinct variables in 1..={n}")]
    BadFrame { location: String, i: usize, j: usize, n: usize },
    #[error("{location}: duplicates {previous}")]
    DuplicateTerm { location: String, previous: String },
    #[error("parity must be \"even\" or \"odd\", found {0:?}")]
    BadParity(String),
    #[error("{location}: exponent {exponent} of odd variable {name:?}")]
    OddExponent { location: String, name: String, exponent: u32 },
    #[error(transparent)]
    Carrier(#[from] AlgebraError),
    #[error(transparent)]
    Structure(#[from] CalculusError),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    variables: Vec<String>,
    parity: String,
    #[serde(default)]
    bivector: Vec<TermDocument>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDocument {
    coeff: String,
    #[serde(default)]
    monomial: BTreeMap<String, u32>,
    frame: [usize; 2],
}

/// Parses `p/q` or `p` with integer `p`, `q` and `q != 0`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let t = text.trim();
    if t.is_empty() || t.contains(char::is_whitespace) {
        return None;
    }
    Rational::from_str(t).ok()
}

pub fn parse_input(document: &str) -> Result<PoissonStructure, InputError> {
    let doc: Document = serde_json::from_str(document)?;
    let odd = match doc.parity.as_str() {
        "even" => false,
        "odd" => true,
        other => return Err(InputError::BadParity(other.to_string())),
    };
    let carrier = Arc::new(if odd {
        CarrierSpec::exterior(&doc.variables)?
    } else {
        CarrierSpec::polynomial(&doc.variables)?
    });
    let n = doc.variables.len();
    let mut seen: BTreeMap<(Vec<u32>, (usize, usize)), usize> = BTreeMap::new();
    let mut terms = Vec::with_capacity(doc.bivector.len());
    for (k, t) in doc.bivector.iter().enumerate() {
        let location = format!("bivector[{k}]");
        let coeff = parse_rational(&t.coeff).ok_or_else(|| InputError::MalformedRational {
            location: format!("{location}.coeff"),
            text: t.coeff.clone(),
        })?;
        let mut exponents = vec![0u32; n];
        for (name, &e) in &t.monomial {
            let i = doc.variables.iter().position(|v| v == name).ok_or_else(|| InputError::UnknownVariable {
                location: format!("{location}.monomial"),
                name: name.clone(),
            })?;
            if odd && e > 1 {
                return Err(InputError::OddExponent {
                    location: format!("{location}.monomial"),
                    name: name.clone(),
                    exponent: e,
                });
            }
            exponents[i] = e;
        }
        let [i, j] = t.frame;
        if i == j || i == 0 || j == 0 || i > n || j > n {
            return Err(InputError::BadFrame {
                location: format!("{location}.frame"),
                i,
                j,
                n,
            });
        }
        let key = (exponents.clone(), (i.min(j), i.max(j)));
        if let Some(previous) = seen.insert(key, k) {
            return Err(InputError::DuplicateTerm {
                location,
                previous: format!("bivector[{previous}]"),
            });
        }
        terms.push(BivectorTerm {
            coeff,
            exponents,
            frame: (i - 1, j - 1),
        });
    }
    Ok(PoissonStructure::from_terms(&carrier, &terms)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_plane() {
        let doc = r#"{"variables":["x1","x2"],"parity":"even","bivector":[{"coeff":"1","monomial":{"x1":1,"x2":1},"frame":[1,2]}]}"#;
        let pi = parse_input(doc).unwrap();
        assert_eq!(pi.bivector().to_string(), "x1*x2*d/dx1*d/dx2");
        assert!(pi.quadratic_constants().is_some());
    }

    #[test]
    fn empty_bivector() {
        let pi = parse_input(r#"{"variables":["x1","x2"],"parity":"even","bivector":[]}"#).unwrap();
        assert!(pi.bivector().is_zero());
    }

    #[test]
    fn rejections() {
        let bad = |coeff: &str, mono: &str, frame: &str| {
            format!(r#"{{"variables":["x1","x2"],"parity":"even","bivector":[{{"coeff":"{coeff}","monomial":{mono},"frame":{frame}}}]}}"#)
        };
        assert!(matches!(parse_input(&bad("1/0", "{}", "[1,2]")), Err(InputError::MalformedRational { .. })));
        assert!(matches!(parse_input(&bad("1.5", "{}", "[1,2]")), Err(InputError::MalformedRational { .. })));
        assert!(matches!(parse_input(&bad("1", r#"{"y":1}"#, "[1,2]")), Err(InputError::UnknownVariable { .. })));
        assert!(matches!(parse_input(&bad("1", "{}", "[2,2]")), Err(InputError::BadFrame { .. })));
        assert!(matches!(parse_input(&bad("1", "{}", "[1,3]")), Err(InputError::BadFrame { .. })));
        let dup = r#"{"variables":["x1","x2"],"parity":"even","bivector":[
            {"coeff":"1","monomial":{},"frame":[1,2]},{"coeff":"2","monomial":{},"frame":[2,1]}]}"#;
        match parse_input(dup) {
            Err(e @ InputError::DuplicateTerm { .. }) => assert_eq!(e.to_string(), "bivector[1]: duplicates bivector[0]"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_input(r#"{"variables":["x1"],"parity":"neither","bivector":[]}"#),
            Err(InputError::BadParity(_))
        ));
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/6"), Some(poisson_workbench::rational::ratio(-1, 2)));
        assert_eq!(parse_rational("7"), Some(poisson_workbench::rational::int(7)));
        assert_eq!(parse_rational("1/ 2"), None);
    }
}
