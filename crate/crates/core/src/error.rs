use std::fmt;

use thiserror::Error;

/// What went wrong while reading one of the text formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),
    #[error("missing converse line for atom `{0}`")]
    MissingConverse(String),
    #[error("missing table entry `compose {0} {1}`")]
    MissingTableEntry(String, String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("duplicate entry: {0}")]
    DuplicateEntry(String),
    #[error("pair ({0},{1}) out of range for domain size {2}")]
    PairOutOfRange(usize, usize, usize),
    #[error("duplicate pair ({1},{2}) for atom `{0}`")]
    DuplicatePair(String, usize, usize),
    #[error("too many atoms: {0} (at most {max})", max = crate::element::MAX_ATOMS)]
    TooManyAtoms(usize),
}

/// A parse failure with a 1-based source position. Errors about missing
/// content that is only detectable at end of input point one past the last line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, column, kind }
    }

    pub(crate) fn syntax(line: usize, column: usize, msg: impl Into<String>) -> Self {
        Self::new(line, column, ParseErrorKind::Syntax(msg.into()))
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("malformed amalgamation diagram: {0}")]
    MalformedDiagram(String),
    #[error("not a proper relation algebra: {0}")]
    NotProper(String),
    #[error("network does not match algebra: {0}")]
    Mismatch(String),
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("extension failed: the network on {size} nodes has no one-point atomic extension")]
    ExtensionFailed { size: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
