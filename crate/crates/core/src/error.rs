//! Crate-wide errors and structured validation reports.

use serde::Serialize;
use thiserror::Error;

/// Machine-readable codes for group validation failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationCode {
    EmptyTypeset,
    ComparableTypes,
    NotEFree,
    CoefficientNotDivisor,
    RankOneIndex,
    RegulatorCriterion,
    IndicesNotCoprime,
    NoOverlap,
    ShapeMismatch,
}

/// One violated validation clause, with enough context to locate it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Error)]
#[error("{message}")]
pub struct Violation {
    pub code: ViolationCode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub piece: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub type_label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    pub message: String,
}

impl Violation {
    pub fn new(code: ViolationCode, message: impl Into<String>) -> Self {
        Violation {
            code,
            piece: None,
            type_label: None,
            prime: None,
            message: message.into(),
        }
    }

    pub fn with_piece(mut self, piece: usize) -> Self {
        self.piece = Some(piece);
        self
    }

    pub fn with_type(mut self, label: impl Into<String>) -> Self {
        self.type_label = Some(label.into());
        self
    }

    pub fn with_prime(mut self, prime: u64) -> Self {
        self.prime = Some(prime);
        self
    }
}

/// Outcome of a validation pass. Holds the first violated clause when invalid.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn valid() -> Self {
        ValidationReport {
            ok: true,
            violations: Vec::new(),
        }
    }

    pub fn invalid(v: Violation) -> Self {
        ValidationReport {
            ok: false,
            violations: vec![v],
        }
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Validation(#[from] Violation),
    #[error("{dimension} = {actual} exceeds cap {cap}")]
    Resource {
        dimension: &'static str,
        actual: usize,
        cap: usize,
    },
    #[error("parse error ({location}): {message}")]
    Parse { location: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
