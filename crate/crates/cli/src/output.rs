//! Provenance headers, failure classification and atomic file output.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A failed run and its exit code: 2 for unreadable or malformed input,
/// 3 for a failed check.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Check(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Check(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "input error: {m}"),
            Failure::Check(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl From<attrib_core::Error> for Failure {
    fn from(e: attrib_core::Error) -> Self {
        if e.is_validation() {
            Failure::Check(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

pub type Outcome<T> = Result<T, Failure>;

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

/// Who produced a document and from what. Carries no timestamps so that
/// identical runs produce identical bytes.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: Value,
    pub inputs: Vec<InputDigest>,
}

impl Provenance {
    pub fn new(command: &'static str, config: &impl Serialize) -> Self {
        Self {
            tool: "attrib",
            version: VERSION,
            command,
            config: serde_json::to_value(config).unwrap_or(Value::Null),
            inputs: Vec::new(),
        }
    }

    /// Reads an input file, recording its digest.
    pub fn read(&mut self, path: &Path) -> Outcome<String> {
        let bytes = std::fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        self.inputs.push(InputDigest {
            path: path.to_path_buf(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).map_err(|_| Failure::Input(format!("{}: not UTF-8", path.display())))
    }

    /// Wraps `body` as `{"provenance": …, <body fields>}`.
    pub fn json_document(&self, body: &impl Serialize) -> Outcome<String> {
        let mut doc = json!({ "provenance": self });
        match serde_json::to_value(body)? {
            Value::Object(fields) => doc.as_object_mut().expect("object").extend(fields),
            other => {
                doc["result"] = other;
            }
        }
        Ok(serde_json::to_string_pretty(&doc)? + "\n")
    }

    /// `#`-prefixed header lines for CSV and text outputs.
    pub fn comment_lines(&self) -> String {
        let mut out = format!("# {} {} {}\n", self.tool, self.version, self.command);
        out.push_str(&format!("# config: {}\n", self.config));
        for input in &self.inputs {
            out.push_str(&format!("# input: {} sha256:{}\n", input.path.display(), input.sha256));
        }
        out
    }

    pub fn one_line(&self) -> String {
        self.comment_lines()
            .lines()
            .map(|l| l.trim_start_matches("# "))
            .collect::<Vec<_>>()
            .join("; ")
    }

    /// A CSV document with the header lines prepended.
    pub fn csv_document(&self, header: &[&str], rows: &[Vec<String>]) -> Outcome<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        let body = w.into_inner().map_err(|e| Failure::Input(e.to_string()))?;
        Ok(self.comment_lines() + &String::from_utf8_lossy(&body))
    }
}

/// Writes via a temporary file in the destination directory and renames it
/// into place. `None` writes to standard output.
pub fn emit(path: Option<&Path>, contents: &str) -> Outcome<()> {
    match path {
        None => {
            std::io::stdout().write_all(contents.as_bytes())?;
            Ok(())
        }
        Some(path) => write_atomic(path, contents),
    }
}

pub fn write_atomic(path: &Path, contents: &str) -> Outcome<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path)
        .map_err(|e| Failure::Input(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

/// Formats a float for tables: shortest round-trip representation.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn sci(x: f64) -> String {
    format!("{x:.4e}")
}
