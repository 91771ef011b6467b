//! Resolving the sequence selected on the command line.

use std::path::PathBuf;

use clap::Args;
use fockspace::jacobi::{catalog_sequence, JacobiSequence, SequenceDefinition};
use fockspace::scalar::{parse_rational, Mode, ParamMap, Scalar};

use crate::CliError;

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["catalog", "file"]))]
pub struct SourceArgs {
    /// Catalog sequence: gaussian, uniform, exponential, q_gaussian, free_shift.
    #[arg(long)]
    pub catalog: Option<String>,
    /// TOML sequence definition file.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Catalog parameter as `name=value` (repeatable).
    #[arg(long = "param", value_name = "NAME=VALUE", requires = "catalog")]
    pub params: Vec<String>,
}

fn parse_param(text: &str) -> Result<(String, Scalar), CliError> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("parameter `{text}` is not of the form name=value")))?;
    let value = parse_rational(value).map_err(|e| CliError::Config(e.to_string()))?;
    Ok((name.trim().to_string(), Scalar::Exact(value)))
}

impl SourceArgs {
    pub fn load(&self) -> Result<JacobiSequence, CliError> {
        match (&self.catalog, &self.file) {
            (Some(name), None) => {
                let mut params = ParamMap::new();
                for text in &self.params {
                    let (name, value) = parse_param(text)?;
                    if params.insert(name.clone(), value).is_some() {
                        return Err(CliError::Config(format!("parameter `{name}` given twice")));
                    }
                }
                catalog_sequence(name, &params).map_err(|e| CliError::Config(e.to_string()))
            }
            (None, Some(path)) => SequenceDefinition::load(path)
                .map(|d| d.sequence)
                .map_err(|e| CliError::Config(e.to_string())),
            _ => Err(CliError::Config("exactly one of --catalog and --file is required".into())),
        }
    }
}

/// The requested mode, or exact arithmetic whenever the sequence allows it.
pub fn resolve_mode(requested: Option<Mode>, seq: &JacobiSequence) -> Mode {
    requested.unwrap_or(if seq.supports_exact() { Mode::Exact } else { Mode::Float })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters_are_exact_decimals() {
        let (name, value) = parse_param("q=0.3").unwrap();
        assert_eq!(name, "q");
        assert_eq!(value, Scalar::ratio(3, 10));
        assert!(parse_param("q").is_err());
        assert!(parse_param("q=abc").is_err());
    }
}
