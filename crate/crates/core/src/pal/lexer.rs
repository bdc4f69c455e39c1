use std::fmt;

use super::{Pos, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Str,
    Namespace,
    Let,
    Is,
    Define,
    Plus,
    Star,
    Slash,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Complies,
    Tilde,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> &'static str {
        match self {
            TokenKind::Ident => "identifier",
            TokenKind::Str => "string",
            TokenKind::Namespace => "`namespace`",
            TokenKind::Let => "`let`",
            TokenKind::Is => "`is`",
            TokenKind::Define => "`:=`",
            TokenKind::Plus => "`+`",
            TokenKind::Star => "`*`",
            TokenKind::Slash => "`/`",
            TokenKind::LParen => "`(`",
            TokenKind::RParen => "`)`",
            TokenKind::LBrace => "`{`",
            TokenKind::RBrace => "`}`",
            TokenKind::LBracket => "`[`",
            TokenKind::RBracket => "`]`",
            TokenKind::Complies => "`<:`",
            TokenKind::Tilde => "`~`",
            TokenKind::Eof => "end of input",
        }
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.describe())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Identifier name or decoded string contents; the operator text otherwise.
    pub text: String,
    pub pos: Pos,
}

pub const KEYWORDS: [&str; 3] = ["namespace", "let", "is"];

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic())
        && chars.all(|c| c.is_alphanumeric() || c == '_')
        && !KEYWORDS.contains(&s)
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }
}

/// Splits PAL source into tokens, ending with [`TokenKind::Eof`].
pub fn tokenize(source: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut cur = Cursor {
        chars: source.chars().peekable(),
        pos: Pos::start(),
    };
    let mut tokens = Vec::new();
    loop {
        while let Some(c) = cur.peek() {
            if c.is_whitespace() {
                cur.bump();
            } else if c == '#' {
                while cur.peek().is_some_and(|c| c != '\n') {
                    cur.bump();
                }
            } else {
                break;
            }
        }
        let pos = cur.pos;
        let Some(c) = cur.bump() else {
            tokens.push(Token {
                kind: TokenKind::Eof,
                text: String::new(),
                pos,
            });
            return Ok(tokens);
        };
        let single = |kind| (kind, c.to_string());
        let (kind, text) = match c {
            '+' => single(TokenKind::Plus),
            '*' => single(TokenKind::Star),
            '/' => single(TokenKind::Slash),
            '(' => single(TokenKind::LParen),
            ')' => single(TokenKind::RParen),
            '{' => single(TokenKind::LBrace),
            '}' => single(TokenKind::RBrace),
            '[' => single(TokenKind::LBracket),
            ']' => single(TokenKind::RBracket),
            '~' => single(TokenKind::Tilde),
            ':' if cur.peek() == Some('=') => {
                cur.bump();
                (TokenKind::Define, ":=".to_string())
            }
            '<' if cur.peek() == Some(':') => {
                cur.bump();
                (TokenKind::Complies, "<:".to_string())
            }
            '"' => {
                let mut text = String::new();
                loop {
                    match cur.bump() {
                        None | Some('\n') => {
                            return Err(SyntaxError::new(pos, "unterminated string literal"))
                        }
                        Some('"') => break,
                        Some('\\') => match cur.bump() {
                            Some(e @ ('"' | '\\')) => text.push(e),
                            _ => {
                                return Err(SyntaxError::new(cur.pos, "invalid escape in string literal"))
                            }
                        },
                        Some(ch) => text.push(ch),
                    }
                }
                (TokenKind::Str, text)
            }
            c if c.is_alphabetic() => {
                let mut text = c.to_string();
                while let Some(n) = cur.peek().filter(|n| n.is_alphanumeric() || *n == '_') {
                    text.push(n);
                    cur.bump();
                }
                let kind = match text.as_str() {
                    "namespace" => TokenKind::Namespace,
                    "let" => TokenKind::Let,
                    "is" => TokenKind::Is,
                    _ => TokenKind::Ident,
                };
                (kind, text)
            }
            other => {
                return Err(SyntaxError::new(pos, format!("unexpected character `{other}`")));
            }
        };
        tokens.push(Token { kind, text, pos });
    }
}
