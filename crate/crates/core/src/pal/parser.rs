//! Recursive-descent parser.

use std::collections::BTreeSet;

use super::lexer::{tokenize, Token, TokenKind};
use super::{Expr, GuardOp, Namespace, Program, Stmt, StmtKind, SyntaxError};

struct Parser<'t> {
    tokens: &'t [Token],
    at: usize,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> &'t Token {
        &self.tokens[self.at.min(self.tokens.len() - 1)]
    }

    fn advance(&mut self) -> &'t Token {
        let t = self.peek();
        if t.kind != TokenKind::Eof {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: &[TokenKind]) -> SyntaxError {
        let found = self.peek();
        let list = expected
            .iter()
            .map(TokenKind::describe)
            .collect::<Vec<_>>()
            .join(" or ");
        let found_text = match found.kind {
            TokenKind::Eof => "end of input".to_string(),
            _ => format!("`{}`", found.text),
        };
        SyntaxError {
            pos: found.pos,
            message: format!("expected {list}, found {found_text}"),
            expected: expected.to_vec(),
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<&'t Token, SyntaxError> {
        if self.peek().kind == kind {
            Ok(self.advance())
        } else {
            Err(self.error(&[kind]))
        }
    }

    fn program(&mut self) -> Result<Program, SyntaxError> {
        let mut namespaces = Vec::new();
        let mut seen = BTreeSet::new();
        while self.peek().kind != TokenKind::Eof {
            if self.peek().kind != TokenKind::Namespace {
                return Err(self.error(&[TokenKind::Namespace, TokenKind::Eof]));
            }
            let kw = self.advance();
            let name = self.expect(TokenKind::Str)?;
            if !seen.insert(name.text.clone()) {
                return Err(SyntaxError::new(
                    kw.pos,
                    format!("duplicate namespace \"{}\"", name.text),
                ));
            }
            self.expect(TokenKind::LBrace)?;
            let mut statements = Vec::new();
            while self.peek().kind != TokenKind::RBrace {
                statements.push(self.statement()?);
            }
            self.advance();
            namespaces.push(Namespace {
                name: name.text.clone(),
                statements,
            });
        }
        Ok(Program { namespaces })
    }

    fn statement(&mut self) -> Result<Stmt, SyntaxError> {
        let start = self.peek();
        match start.kind {
            TokenKind::Let => {
                self.advance();
                let entity = self.expect(TokenKind::Ident)?.text.clone();
                self.expect(TokenKind::Is)?;
                let category = self.expect(TokenKind::Ident)?.text.clone();
                Ok(Stmt {
                    kind: StmtKind::LetIs { entity, category },
                    pos: start.pos,
                })
            }
            TokenKind::Ident => {
                self.advance();
                self.expect(TokenKind::Define)?;
                let body = self.expr()?;
                Ok(Stmt {
                    kind: StmtKind::Define {
                        name: start.text.clone(),
                        body,
                    },
                    pos: start.pos,
                })
            }
            _ => Err(self.error(&[TokenKind::Let, TokenKind::Ident, TokenKind::RBrace])),
        }
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut left = self.term()?;
        while self.peek().kind == TokenKind::Plus {
            self.advance();
            left = Expr::sum(left, self.term()?);
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut left = self.factor()?;
        while self.peek().kind == TokenKind::Star {
            self.advance();
            left = Expr::product(left, self.factor()?);
        }
        Ok(left)
    }

    fn factor(&mut self) -> Result<Expr, SyntaxError> {
        let mut left = self.primary()?;
        while self.peek().kind == TokenKind::Slash {
            self.advance();
            let scope = self.expect(TokenKind::Ident)?;
            left = Expr::slash(left, scope.text.clone());
        }
        Ok(left)
    }

    fn primary(&mut self) -> Result<Expr, SyntaxError> {
        match self.peek().kind {
            TokenKind::Ident => Ok(Expr::name(self.advance().text.clone())),
            TokenKind::LParen => {
                self.advance();
                let e = self.expr()?;
                self.expect(TokenKind::RParen)?;
                Ok(e)
            }
            TokenKind::LBracket => {
                self.advance();
                let left = self.expr()?;
                let op = match self.peek().kind {
                    TokenKind::Complies => GuardOp::Compliance,
                    TokenKind::Tilde => GuardOp::Congruence,
                    _ => return Err(self.error(&[TokenKind::Complies, TokenKind::Tilde])),
                };
                self.advance();
                let right = self.expr()?;
                self.expect(TokenKind::RBracket)?;
                Ok(Expr::guard(op, left, right))
            }
            _ => Err(self.error(&[TokenKind::Ident, TokenKind::LParen, TokenKind::LBracket])),
        }
    }
}

/// Parses a token stream (as produced by [`tokenize`]) into a program.
pub fn parse(tokens: &[Token]) -> Result<Program, SyntaxError> {
    if tokens.is_empty() {
        return Ok(Program::default());
    }
    Parser { tokens, at: 0 }.program()
}

pub fn parse_source(source: &str) -> Result<Program, SyntaxError> {
    parse(&tokenize(source)?)
}

/// Parses a standalone expression, e.g. a command-line query.
pub fn parse_expr(source: &str) -> Result<Expr, SyntaxError> {
    let tokens = tokenize(source)?;
    let mut p = Parser {
        tokens: &tokens,
        at: 0,
    };
    let e = p.expr()?;
    if p.peek().kind != TokenKind::Eof {
        return Err(p.error(&[TokenKind::Plus, TokenKind::Star, TokenKind::Slash, TokenKind::Eof]));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pal::Pos;

    #[test]
    fn empty_namespace() {
        let p = parse_source(r#"namespace "x" { }"#).unwrap();
        assert_eq!(p.namespaces.len(), 1);
        assert!(p.namespaces[0].statements.is_empty());
        assert!(parse_source("").unwrap().namespaces.is_empty());
    }

    #[test]
    fn slash_binds_tighter_than_sum() {
        let e = parse_expr("reader + write/TechDoc").unwrap();
        assert_eq!(
            e,
            Expr::sum(Expr::name("reader"), Expr::slash(Expr::name("write"), "TechDoc"))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse_expr("a + b * c / D + d").unwrap();
        assert_eq!(
            e,
            Expr::sum(
                Expr::sum(
                    Expr::name("a"),
                    Expr::product(Expr::name("b"), Expr::slash(Expr::name("c"), "D"))
                ),
                Expr::name("d")
            )
        );
        let e = parse_expr("a * b * c").unwrap();
        assert_eq!(
            e,
            Expr::product(Expr::product(Expr::name("a"), Expr::name("b")), Expr::name("c"))
        );
    }

    #[test]
    fn guards() {
        let e = parse_expr("read * [session1 <: read/doc1]").unwrap();
        assert_eq!(
            e,
            Expr::product(
                Expr::name("read"),
                Expr::guard(
                    GuardOp::Compliance,
                    Expr::name("session1"),
                    Expr::slash(Expr::name("read"), "doc1")
                )
            )
        );
        assert!(matches!(
            parse_expr("[a ~ b]").unwrap(),
            Expr::Guard(GuardOp::Congruence, _, _)
        ));
    }

    #[test]
    fn error_positions_and_expectations() {
        let err = parse_source("namespace \"x\" {\n  a := + b\n}").unwrap_err();
        assert_eq!(err.pos, Pos { line: 2, column: 8 });
        assert!(err.expected.contains(&TokenKind::Ident));

        let err = parse_source("namespace \"x\" { a := b").unwrap_err();
        assert_eq!(err.pos, Pos { line: 1, column: 23 });
        assert!(err.message.contains("end of input"));

        let err = parse_expr("[a b]").unwrap_err();
        assert_eq!(err.expected, vec![TokenKind::Complies, TokenKind::Tilde]);

        assert!(parse_source("namespace \"x\" {} namespace \"x\" {}").is_err());
        assert!(parse_expr("a / (b)").is_err());
        assert!(parse_expr("a b").is_err());
    }

    #[test]
    fn statement_positions() {
        let p = parse_source("namespace \"n\" {\n  let d is C\n  x := d\n}").unwrap();
        let st = &p.namespaces[0].statements;
        assert_eq!(st[0].pos, Pos { line: 2, column: 3 });
        assert_eq!(st[1].pos, Pos { line: 3, column: 3 });
    }
}
