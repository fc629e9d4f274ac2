use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use sphere_distal::distality::SemigroupSpec;
use sphere_distal::{Config, Matrix64};

use crate::report::Failure;

fn read(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        return std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::io(format!("stdin: {e}")));
    }
    fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn parse_json<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

/// A matrix file holds either `{"dim": d, "rows": [...]}` or the bare rows.
pub fn matrix(path: &Path) -> Result<Matrix64, Failure> {
    let text = read(path)?;
    let value: serde_json::Value = parse_json(path, &text)?;
    if value.is_array() {
        let rows: Vec<Vec<f64>> = parse_json(path, &text)?;
        return Matrix64::from_rows(&rows).map_err(|e| Failure::parse(format!("{}: {e}", path.display())));
    }
    parse_json(path, &text)
}

pub fn semigroup_spec(path: &Path) -> Result<SemigroupSpec<f64>, Failure> {
    parse_json(path, &read(path)?)
}

/// Loads the configuration file, if any, and validates the result.
pub fn config(path: Option<&PathBuf>) -> Result<Config, Failure> {
    match path {
        Some(p) => parse_json(p, &read(p)?),
        None => Ok(Config::default()),
    }
}

/// Parses a comma-separated vector such as `0.5,-1`. Components are plain
/// numbers; anything carrying a unit (`30deg`, `1rad`) is refused.
pub fn vector(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|part| {
            let part = part.trim();
            let v: f64 = part.parse().map_err(|_| {
                if part.trim_start_matches(['+', '-']).starts_with(|c: char| c.is_ascii_digit() || c == '.') {
                    format!("`{part}` has a unit suffix; give plain numbers (angles in radians)")
                } else {
                    format!("`{part}` is not a number")
                }
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("`{part}` is not finite"))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectors() {
        assert_eq!(vector("0.5,-1").unwrap(), vec![0.5, -1.0]);
        assert_eq!(vector(" 1 , 2 ,3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(vector("30deg,0").unwrap_err().contains("unit suffix"));
        assert!(vector("1rad").unwrap_err().contains("unit suffix"));
        assert!(vector("x,1").unwrap_err().contains("not a number"));
        assert!(vector("inf,0").unwrap_err().contains("not finite"));
        assert!(vector("").is_err());
    }
}
