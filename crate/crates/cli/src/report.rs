use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Ordered by severity so a batch exits with its worst verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Ok,
    TrivialDiagram,
    Stuck,
    InvalidInput,
}

impl Verdict {
    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Ok | Verdict::TrivialDiagram => 0,
            Verdict::Stuck => 1,
            Verdict::InvalidInput => 2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Input {
    pub path: String,
    pub sha256: String,
}

impl Input {
    pub fn hash(path: &Path, bytes: &[u8]) -> Self {
        Input { path: path.display().to_string(), sha256: hex::encode(Sha256::digest(bytes)) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<Input>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convention: Option<&'static str>,
    pub results: Value,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

/// A report plus its text rendering.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub human: String,
}

impl Outcome {
    pub fn invalid(command: &str, inputs: Vec<Input>, errors: Vec<String>) -> Self {
        Outcome {
            report: Report {
                command: command.to_string(),
                inputs,
                verdict: Verdict::InvalidInput,
                convention: None,
                results: Value::Null,
                warnings: vec![],
                errors,
            },
            human: String::new(),
        }
    }
}
