//! The `.rm` textual format: a line-oriented notation for responsibility
//! models, with a recovering parser and a canonical serializer.
//!
//! A document holds one model:
//!
//! ```text
//! model "cos-asis" {
//!   # entities
//!   org CompanyB "Company B"
//!   human SupportManager "Support Manager" owner CompanyB
//!   responsibility TimelySupportResolution owner CompanyB
//!   resource.phys LeasedLine "Leased Line" owner Telco
//!   org Telco
//!
//!   # relationships
//!   responsible SupportManager -> TimelySupportResolution
//!   has TimelySupportResolution -> LeasedLine
//!   assoc CompanyB -- Telco : "leased line contract"
//!
//!   # container-box shorthand: every brace element shares the relationship
//!   group responsible Telco -> { SupportLeasedLine, MaintainPricingModel }
//! }
//! ```
//!
//! Statements are one per line; `#` starts a comment outside quoted strings;
//! identifiers are `[A-Za-z_][A-Za-z0-9_]*`; labels and annotations are
//! double-quoted with `\"`, `\\` and `\n` escapes. Entities may be declared
//! in any order (an `owner` may name an organization declared later);
//! relationships may likewise appear before or after their endpoints. Input
//! accepts LF or CRLF; the serializer emits LF.
//!
//! [`serialize`] emits the canonical form: entities sorted by kind bucket
//! (organizations, humans, responsibilities, resources) then id,
//! relationships in insertion order, `group` shorthand always expanded.
//! The canonical form is byte-stable and re-parses to an equal model.

mod lexer;
mod parser;
mod serializer;

use std::fmt;

use crate::model::Model;

pub use parser::parse;
pub use serializer::{serialize, SerializeError};

/// Diagnostic severity. `Error` diagnostics imply no model is produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// A source location: 1-based line and column, and the length in characters
/// of the offending text (at least 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    pub fn new(line: usize, column: usize, length: usize) -> Self {
        debug_assert!(line >= 1 && column >= 1 && length >= 1);
        SourceSpan {
            line,
            column,
            length,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// One parser finding: a violated rule with its location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    pub span: SourceSpan,
    /// Stable kebab-case rule identifier, e.g. `unknown-endpoint`.
    pub rule: &'static str,
    pub message: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}: {}: {}",
            self.span, self.severity, self.rule, self.message
        )
    }
}

/// A successfully parsed document: the validated model plus any
/// warning-severity diagnostics (e.g. entities without an owner).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parsed {
    pub model: Model,
    pub warnings: Vec<ParseDiagnostic>,
}
