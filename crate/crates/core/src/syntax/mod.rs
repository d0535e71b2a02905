//! FSP source text to a resolved syntax tree.

mod ast;
pub mod eval;
mod expand;
mod lexer;
mod parser;
mod pretty;
mod resolve;

use thiserror::Error;

pub use ast::*;
pub use eval::{eval_bool, eval_expr, eval_int, Env, EvalError, Scoped, Value};
pub use expand::{expand_label, expand_set, ExpandError, Expansion};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unsupported construct: {feature}")]
    Unsupported {
        line: usize,
        col: usize,
        feature: String,
    },
    #[error("{line}:{col}: `{name}` is already declared")]
    Duplicate {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("unresolved name `{name}` in {context}")]
    Unresolved { name: String, context: String },
    #[error("invalid {context}: {msg}")]
    Invalid { context: String, msg: String },
}

impl SyntaxError {
    /// Source line of the error, when it has one.
    pub fn line(&self) -> Option<usize> {
        match self {
            SyntaxError::Syntax { line, .. }
            | SyntaxError::Unsupported { line, .. }
            | SyntaxError::Duplicate { line, .. } => Some(*line),
            _ => None,
        }
    }

    /// Same error with its line number replaced.
    pub fn with_line(mut self, new_line: usize) -> Self {
        match &mut self {
            SyntaxError::Syntax { line, .. }
            | SyntaxError::Unsupported { line, .. }
            | SyntaxError::Duplicate { line, .. } => *line = new_line,
            _ => {}
        }
        self
    }
}

/// Parses and resolves a complete FSP unit.
pub fn parse(src: &str) -> Result<SpecAst, SyntaxError> {
    let mut spec = parser::parse_unit(src)?;
    resolve::resolve(&mut spec)?;
    Ok(spec)
}

/// Parses a single expression without resolving names.
pub fn parse_expr(src: &str) -> Result<Expr, SyntaxError> {
    parser::parse_expr_text(src)
}
