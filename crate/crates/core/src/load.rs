//! Reading device files: JSON with positioned diagnostics, and resolution of
//! the `monoid` and `generators` fields, which may be inline JSON or paths
//! relative to the referring file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde_json::Value;
use thiserror::Error;

use crate::monoid::{GenMap, Monoid, MonoidError};
use crate::words::WordError;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Syntax { path: String, line: usize, column: usize, message: String },
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Parses `text` (read from `path`, used only in diagnostics) into `T`.
pub fn parse_str<T: DeserializeOwned>(path: &str, text: &str) -> Result<T, LoadError> {
    serde_json::from_str(text).map_err(|e| LoadError::Syntax {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

pub fn read_text(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.display().to_string(), source })
}

pub fn read_file<T: DeserializeOwned>(path: &Path) -> Result<T, LoadError> {
    let text = read_text(path)?;
    parse_str(&path.display().to_string(), &text)
}

fn resolve_path(base: Option<&Path>, rel: &str) -> PathBuf {
    let p = Path::new(rel);
    match base {
        Some(b) if p.is_relative() => b.join(p),
        _ => p.to_path_buf(),
    }
}

/// A monoid given inline or as a path to a monoid file.
pub fn resolve_monoid(v: &Value, base: Option<&Path>) -> Result<Monoid, LoadError> {
    match v {
        Value::String(rel) => {
            let path = resolve_path(base, rel);
            let inner: Value = read_file(&path)?;
            Ok(Monoid::from_json(&inner)?)
        }
        Value::Object(_) => Ok(Monoid::from_json(v)?),
        _ => Err(LoadError::Schema("\"monoid\" must be an object or a file path".into())),
    }
}

/// An optional generator map given inline or as a path to a generator file.
pub fn resolve_generators(m: &Monoid, v: Option<&Value>, base: Option<&Path>) -> Result<Option<GenMap>, LoadError> {
    match v {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(rel)) => {
            let path = resolve_path(base, rel);
            let inner: Value = read_file(&path)?;
            Ok(Some(GenMap::from_json(m, &inner)?))
        }
        Some(obj @ Value::Object(_)) => Ok(Some(GenMap::from_json(m, obj)?)),
        Some(_) => Err(LoadError::Schema("\"generators\" must be an object or a file path".into())),
    }
}

/// Directory containing `path`, for resolving relative references.
pub fn base_dir(path: &Path) -> Option<&Path> {
    path.parent().filter(|p| !p.as_os_str().is_empty())
}
