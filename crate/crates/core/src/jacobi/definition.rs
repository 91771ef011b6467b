//! Plain-text sequence definitions:
//!
//! ```toml
//! omega = "1/2"
//! alpha = "c*n"
//! params = {c = 0.3}
//! ```
//!
//! or `catalog = "q_gaussian"` with `params = {q = 0.5}`. Numeric parameters
//! are read as the decimal they are written as (`0.3` is exactly `3/10`);
//! strings such as `"1/3"` are also accepted.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use super::{catalog_sequence, JacobiSequence};
use crate::scalar::{parse_rational, ParamMap, Scalar};

#[derive(Debug, Error)]
pub enum DefinitionError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid sequence definition: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("invalid sequence definition: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ParamValue {
    Int(i64),
    Float(f64),
    Text(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDefinition {
    omega: Option<String>,
    alpha: Option<String>,
    catalog: Option<String>,
    #[serde(default)]
    params: BTreeMap<String, ParamValue>,
}

/// A parsed definition file.
#[derive(Debug, Clone)]
pub struct SequenceDefinition {
    pub sequence: JacobiSequence,
}

fn param_scalar(name: &str, value: &ParamValue) -> Result<Scalar, DefinitionError> {
    let text = match value {
        ParamValue::Int(v) => v.to_string(),
        // Shortest round-trip rendering, i.e. the decimal as written.
        ParamValue::Float(v) => format!("{v}"),
        ParamValue::Text(s) => s.clone(),
    };
    parse_rational(&text)
        .map(Scalar::Exact)
        .map_err(|_| DefinitionError::Invalid(format!("parameter `{name}`: cannot read `{text}` as a number")))
}

impl SequenceDefinition {
    pub fn parse(text: &str) -> Result<Self, DefinitionError> {
        let raw: RawDefinition = toml::from_str(text)?;
        let mut params = ParamMap::new();
        for (name, value) in &raw.params {
            params.insert(name.clone(), param_scalar(name, value)?);
        }
        let sequence = match (raw.catalog, raw.omega, raw.alpha) {
            (Some(name), None, None) => {
                catalog_sequence(&name, &params).map_err(|e| DefinitionError::Invalid(e.to_string()))?
            }
            (None, Some(omega), Some(alpha)) => {
                JacobiSequence::parse_expressions(&omega, &alpha, params).map_err(DefinitionError::Invalid)?
            }
            (Some(_), _, _) => {
                return Err(DefinitionError::Invalid("`catalog` cannot be combined with `omega`/`alpha`".into()))
            }
            _ => return Err(DefinitionError::Invalid("expected `catalog`, or both `omega` and `alpha`".into())),
        };
        Ok(SequenceDefinition { sequence })
    }

    pub fn load(path: &Path) -> Result<Self, DefinitionError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| DefinitionError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn expression_file_with_decimal_parameter() {
        let def = SequenceDefinition::parse("omega = \"1/2\"\nalpha = \"c*n\"\nparams = {c=0.3}\n").unwrap();
        let seq = def.sequence;
        assert_eq!(seq.alpha_exact(10).unwrap(), BigRational::new(3.into(), 1.into()));
        assert_eq!(seq.omega_exact(10).unwrap(), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn catalog_file() {
        let def = SequenceDefinition::parse("catalog = \"q_gaussian\"\nparams = { q = \"1/2\" }").unwrap();
        assert_eq!(def.sequence.omega_exact(1).unwrap(), BigRational::new(3.into(), 2.into()));
    }

    #[test]
    fn rejects_bad_definitions() {
        for text in [
            "omega = \"n+1\"",
            "catalog = \"gaussian\"\nomega = \"n\"",
            "catalog = \"gaussian\"\nextra = 1",
            "omega = \"n+\"\nalpha = \"0\"",
            "catalog = \"q_gaussian\"\nparams = {q = 2}",
            "omega = \"c\"\nalpha = \"0\"",
            "",
        ] {
            assert!(SequenceDefinition::parse(text).is_err(), "{text}");
        }
    }
}
