//! Located diagnostics for the frontend and per-function checks.

use std::path::Path;

use thiserror::Error;

use super::ast::Loc;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Diagnostic {
    #[error("{loc}: syntax error: {message}")]
    Syntax { loc: Loc, message: String },

    #[error("{loc}: unsupported construct: {construct}{}", render_hint(.hint))]
    Unsupported {
        loc: Loc,
        construct: String,
        hint: Option<&'static str>,
    },

    #[error("{loc}: undeclared variable: {name}")]
    UndeclaredVariable { loc: Loc, name: String },

    #[error("{loc}: duplicate declaration: {name}")]
    DuplicateDeclaration { loc: Loc, name: String },
}

fn render_hint(hint: &Option<&'static str>) -> String {
    match hint {
        Some(h) => format!(" ({h})"),
        None => String::new(),
    }
}

impl Diagnostic {
    pub fn syntax(loc: Loc, message: impl Into<String>) -> Diagnostic {
        Diagnostic::Syntax {
            loc,
            message: message.into(),
        }
    }

    pub fn unsupported(loc: Loc, construct: impl Into<String>) -> Diagnostic {
        Diagnostic::Unsupported {
            loc,
            construct: construct.into(),
            hint: None,
        }
    }

    pub fn unsupported_with_hint(
        loc: Loc,
        construct: impl Into<String>,
        hint: &'static str,
    ) -> Diagnostic {
        Diagnostic::Unsupported {
            loc,
            construct: construct.into(),
            hint: Some(hint),
        }
    }

    pub fn loc(&self) -> Loc {
        match self {
            Diagnostic::Syntax { loc, .. }
            | Diagnostic::Unsupported { loc, .. }
            | Diagnostic::UndeclaredVariable { loc, .. }
            | Diagnostic::DuplicateDeclaration { loc, .. } => *loc,
        }
    }

    pub fn category(&self) -> &'static str {
        match self {
            Diagnostic::Syntax { .. } => "syntax error",
            Diagnostic::Unsupported { .. } => "unsupported construct",
            Diagnostic::UndeclaredVariable { .. } => "undeclared variable",
            Diagnostic::DuplicateDeclaration { .. } => "duplicate declaration",
        }
    }

    /// The `file:line:col: category: message` form used on stderr.
    pub fn render(&self, file: &Path) -> String {
        format!("{}:{}", file.display(), self)
    }
}
