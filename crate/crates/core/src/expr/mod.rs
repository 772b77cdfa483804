//! Coefficient expression language.
//!
//! Real literals, chart coordinate names, unary minus, `+ - * / ^` and the
//! functions `sin cos tan exp log sqrt pow`. See `docs/expression-grammar.md`
//! for the grammar.

mod ast;
mod eval;
mod lexer;
mod parser;

use thiserror::Error;

pub use ast::{BinOp, Expr, Func};
pub use eval::CompiledExpr;
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{parse, parse_str};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ExprError {
    #[error("lexical error at offset {offset}: {message}")]
    Lex { offset: usize, message: String },

    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unbound variable '{0}'")]
    UnboundVariable(String),

    #[error("{0}")]
    Domain(String),
}

impl ExprError {
    /// Source offset for lexical and syntax errors.
    pub fn offset(&self) -> Option<usize> {
        match self {
            ExprError::Lex { offset, .. } | ExprError::Syntax { offset, .. } => Some(*offset),
            _ => None,
        }
    }
}

/// Parses `source` and binds it against the given coordinate names.
pub fn compile<S: AsRef<str>>(source: &str, names: &[S]) -> Result<CompiledExpr, ExprError> {
    parse_str(source)?.compile(names)
}
