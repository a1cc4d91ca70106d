//! Front end for the restricted object language: parsing into an object
//! graph, admissibility checks, and per-pair session extraction.

mod ast;
mod extract;
mod graph;
mod lexer;
mod parser;
mod validate;

pub use ast::{Block, ClassDecl, Expr, Field, Method, Param, Program, Span, Stmt, TypeExpr};
pub use extract::{abstract_sessions, annotate_widths, event_labels, extract_sessions, extract_sessions_with, object_session, payload_of, PairSessions};
pub use graph::{parse_program, CallEdge, CallEvent, FieldBinding, MethodSig, ObjectDecl, ObjectGraph};
pub use parser::parse_ast;
pub use validate::{validate_constraints, ConstraintViolation, ViolationKind};

use thiserror::Error;

use crate::session::LtsError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{line}:{col}: unknown class `{name}`")]
    UnknownClass { name: String, line: usize, col: usize },
    #[error("{line}:{col}: unknown object `{name}`")]
    UnknownObject { name: String, line: usize, col: usize },
    #[error("{line}:{col}: object `{object}` of class `{class}` has no method `{method}`")]
    UnknownMethod { object: String, class: String, method: String, line: usize, col: usize },
    #[error("{line}:{col}: `{name}` is declared twice")]
    Duplicate { name: String, line: usize, col: usize },
    #[error("{line}:{col}: message `{message}` has no fixed width ({ty})")]
    Unbounded { message: String, ty: String, line: usize, col: usize },
    #[error(transparent)]
    Lts(#[from] LtsError),
}

impl FrontendError {
    pub(crate) fn syntax(span: Span, message: impl Into<String>) -> Self {
        FrontendError::Syntax { line: span.line, col: span.col, message: message.into() }
    }

    /// Source position the error points at; `0:0` when it has none.
    pub fn span(&self) -> Span {
        let (line, col) = match self {
            FrontendError::Syntax { line, col, .. }
            | FrontendError::UnknownClass { line, col, .. }
            | FrontendError::UnknownObject { line, col, .. }
            | FrontendError::UnknownMethod { line, col, .. }
            | FrontendError::Duplicate { line, col, .. }
            | FrontendError::Unbounded { line, col, .. } => (*line, *col),
            FrontendError::Lts(_) => (0, 0),
        };
        Span { line, col }
    }
}
