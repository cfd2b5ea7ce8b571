//! Versioned JSON documents for every input and output of the toolkit.
//!
//! Every top-level document carries `"schema": "tropmoduli/1"`. Rationals
//! are written as `"p/q"` strings; integral data as JSON integers. Errors
//! name the offending location as a JSON pointer.

mod docs;

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{format_rat, parse_rat, Rat};

pub use docs::*;

pub const SCHEMA: &str = "tropmoduli/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pointer}: {message}")]
pub struct IoError {
    pub pointer: String,
    pub message: String,
}

impl IoError {
    pub fn at(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        IoError {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}

fn escape(token: &str) -> String {
    token.replace('~', "~0").replace('/', "~1")
}

/// Appends a reference token to a JSON pointer.
pub fn child(pointer: &str, token: impl ToString) -> String {
    format!("{pointer}/{}", escape(&token.to_string()))
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out = child(&out, index),
            Segment::Map { key } => out = child(&out, key),
            Segment::Enum { variant } => out = child(&out, variant),
            Segment::Unknown => {}
        }
    }
    out
}

/// Parses a top-level document and checks its schema tag. A command-line
/// report is accepted in place of the document in its payload.
pub fn parse_document<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| IoError::at("", format!("not JSON: {e}")))?;
    if value.get("verb").is_some() {
        if let Some(payload) = value.get("payload").filter(|p| p.get("schema").is_some()) {
            return parse_document(&payload.to_string()).map_err(|e| IoError {
                pointer: format!("/payload{}", e.pointer),
                message: e.message,
            });
        }
    }
    match value.get("schema") {
        Some(serde_json::Value::String(s)) if s == SCHEMA => {}
        Some(other) => return Err(IoError::at("/schema", format!("expected \"{SCHEMA}\", found {other}"))),
        None => return Err(IoError::at("/schema", "missing schema tag")),
    }
    serde_path_to_error::deserialize(value).map_err(|e| IoError::at(pointer_of(e.path()), e.inner().to_string()))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub(crate) fn rat_in(s: &str, pointer: &str) -> Result<Rat, IoError> {
    parse_rat(s).ok_or_else(|| IoError::at(pointer, format!("`{s}` is not a rational of the form p/q")))
}

pub(crate) fn rat_out(r: &Rat) -> String {
    format_rat(r)
}
