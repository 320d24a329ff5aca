//! Readers and writers for the data language (N-Triples plus `@prefix`
//! directives and prefixed names) and the rule language
//! (`{conditions} => {conclusions}.` and `{conditions} => {@false}.`).

mod cursor;
mod data;
mod lexer;
mod rules;
mod serialize;

use std::fmt;

use thiserror::Error;

pub use data::{parse_data, parse_data_bytes, parse_data_with, DataOptions};
pub use rules::{parse_patterns, parse_rules, parse_rules_bytes, Conclusion, Rule, RuleDocument};
pub use serialize::{serialize_graph, OutputMode};

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: not an RDF triple: {message}")]
    Strictness {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: unsafe rule {rule}: ?{variable} occurs in the conclusion but in no condition")]
    UnsafeRule {
        line: usize,
        column: usize,
        rule: String,
        variable: String,
    },
    #[error("{line}:{column}: rule {rule}: blank node _:{label} is not allowed in a conclusion")]
    ExistentialConclusion {
        line: usize,
        column: usize,
        rule: String,
        label: String,
    },
}

impl ParseError {
    pub fn position(&self) -> Position {
        let (line, column) = match self {
            ParseError::Syntax { line, column, .. }
            | ParseError::Strictness { line, column, .. }
            | ParseError::UnsafeRule { line, column, .. }
            | ParseError::ExistentialConclusion { line, column, .. } => (*line, *column),
        };
        Position { line, column }
    }

    pub(crate) fn syntax(at: Position, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            line: at.line,
            column: at.column,
            message: message.into(),
        }
    }
}
