use std::fmt;

use serde::Serialize;

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl Pos {
    pub fn new(line: usize, col: usize) -> Self {
        Pos { line, col }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// Which check produced a diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticKind {
    Syntax,
    DuplicateId,
    DuplicateLiteral,
    Arity,
    AxiomConfidence,
    StrictWeight,
    OutOfRange,
    NonGroundPremise,
    UnsafeVariable,
    EmptyStrictBody,
    BadIdentifier,
    PreferenceUnknown,
    PreferenceKind,
    PreferenceCycle,
    UnknownScheme,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub kind: DiagnosticKind,
    pub pos: Option<Pos>,
    pub message: String,
    /// Ids of the offending theory elements.
    pub subjects: Vec<String>,
}

impl Diagnostic {
    pub fn error(kind: DiagnosticKind, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            kind,
            pos: None,
            message: message.into(),
            subjects: Vec::new(),
        }
    }

    pub fn at(mut self, pos: Pos) -> Self {
        self.pos = Some(pos);
        self
    }

    pub fn with_subjects<I, S>(mut self, subjects: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.subjects = subjects.into_iter().map(Into::into).collect();
        self
    }

    /// `file:line:col: severity: message`. Diagnostics without a source
    /// position point at 1:1.
    pub fn render(&self, file: &str) -> String {
        let pos = self.pos.unwrap_or(Pos::new(1, 1));
        format!("{}:{}:{}: {}: {}", file, pos.line, pos.col, self.severity, self.message)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pos {
            Some(p) => write!(f, "{}:{}: {}: {}", p.line, p.col, self.severity, self.message),
            None => write!(f, "{}: {}", self.severity, self.message),
        }
    }
}
