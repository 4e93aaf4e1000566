use alloc::string::String;
use core::fmt;

use crate::ast::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
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

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub line: u32,
    pub col: u32,
    pub len: u32,
    pub message: String,
    pub rule_id: &'static str,
}

impl Diagnostic {
    pub fn error(span: Span, rule_id: &'static str, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            line: span.line,
            col: span.col,
            len: span.len,
            message: message.into(),
            rule_id,
        }
    }

    pub fn warning(span: Span, rule_id: &'static str, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Warning, ..Self::error(span, rule_id, message) }
    }

    /// Renders as `path:line:col: severity[rule_id]: message`.
    pub fn render(&self, path: &str) -> String {
        alloc::format!(
            "{}:{}:{}: {}[{}]: {}",
            path, self.line, self.col, self.severity, self.rule_id, self.message
        )
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}[{}]: {}", self.line, self.col, self.severity, self.rule_id, self.message)
    }
}
