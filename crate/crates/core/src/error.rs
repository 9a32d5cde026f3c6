use thiserror::Error;

use crate::arith::Field;
use crate::relations::{Syzygy, TorsionCertificate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("mixed field tags: {left} and {right}")]
    FieldMismatch { left: Field, right: Field },
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Rejection of an operator or data document, with the path to the offending node.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}: {message}")]
pub struct ParseError {
    pub path: String,
    pub message: String,
}

impl ParseError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        ParseError { path: path.into(), message: message.into() }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid input: {0}")]
    Input(String),
    /// A relation among supposedly independent generators had a zero
    /// coefficient on the new vector; the degree cap is too small.
    #[error("degenerate relation: {0}")]
    Degenerate(String),
    #[error("generators are not independent within the degree cap")]
    NotIndependent(Box<Syzygy>),
    #[error("torsion present in the span")]
    Torsion(Box<TorsionCertificate>),
    /// Caps insufficient to reach a verdict.
    #[error("unknown within caps: {0}")]
    Unknown(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
