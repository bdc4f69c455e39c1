//! PAL, the privilege policy language.
//!
//! ```text
//! program   := namespace*
//! namespace := "namespace" STRING "{" stmt* "}"
//! stmt      := "let" IDENT "is" IDENT | IDENT ":=" expr
//! expr      := term ("+" term)*
//! term      := factor ("*" factor)*
//! factor    := primary ("/" IDENT)*
//! primary   := IDENT | "(" expr ")" | "[" expr ("<:"|"~") expr "]"
//! ```
//!
//! `#` starts a line comment. All binary operators are left-associative.

mod format;
mod lexer;
mod parser;

pub use format::{format_expr, format_program};
pub use lexer::{is_identifier, tokenize, Token, TokenKind, KEYWORDS};
pub use parser::{parse, parse_expr, parse_source};

use std::fmt;

use thiserror::Error;

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    pub fn start() -> Self {
        Pos { line: 1, column: 1 }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Lexical or syntax error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
    /// Tokens that would have been accepted; empty for lexical errors.
    pub expected: Vec<TokenKind>,
}

impl SyntaxError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        Self {
            pos,
            message: message.into(),
            expected: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub namespaces: Vec<Namespace>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Namespace {
    pub name: String,
    pub statements: Vec<Stmt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StmtKind {
    /// `let entity is Category`
    LetIs { entity: String, category: String },
    /// `name := body`
    Define { name: String, body: Expr },
}

#[derive(Clone, Debug, Eq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub pos: Pos,
}

// Position is provenance, not structure.
impl PartialEq for Stmt {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GuardOp {
    /// `<:`
    Compliance,
    /// `~`
    Congruence,
}

impl GuardOp {
    pub fn symbol(self) -> &'static str {
        match self {
            GuardOp::Compliance => "<:",
            GuardOp::Congruence => "~",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Name(String),
    Sum(Box<Expr>, Box<Expr>),
    Product(Box<Expr>, Box<Expr>),
    /// `left / scope`, where `scope` names a category or an entity.
    Slash(Box<Expr>, String),
    Guard(GuardOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn name(n: impl Into<String>) -> Self {
        Expr::Name(n.into())
    }

    pub fn sum(l: Expr, r: Expr) -> Self {
        Expr::Sum(Box::new(l), Box::new(r))
    }

    pub fn product(l: Expr, r: Expr) -> Self {
        Expr::Product(Box::new(l), Box::new(r))
    }

    pub fn slash(l: Expr, scope: impl Into<String>) -> Self {
        Expr::Slash(Box::new(l), scope.into())
    }

    pub fn guard(op: GuardOp, l: Expr, r: Expr) -> Self {
        Expr::Guard(op, Box::new(l), Box::new(r))
    }

    /// Operands of a left-nested chain of sums, in source order.
    pub fn summands(&self) -> Vec<&Expr> {
        match self {
            Expr::Sum(l, r) => {
                let mut out = l.summands();
                out.extend(r.summands());
                out
            }
            other => vec![other],
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_expr(self))
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_program(self))
    }
}
