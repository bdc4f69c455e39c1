//! Line-oriented facts files.
//!
//! ```text
//! # statements
//! statement on_duty_alice
//! statement on_duty_bob
//! fact morning = on_duty_alice
//! condition alice_present = any on_duty_alice
//! condition always = true
//! ```
//!
//! Declarations may appear in any order. The family is closed after loading.

use std::collections::BTreeSet;

use super::{close_family, Condition, Fact, FactFamily, FactsError, Statement, StatementSet};

/// A loaded facts file: the closed family plus its conditions in file order.
#[derive(Clone, Debug)]
pub struct FactsFile {
    pub family: FactFamily,
    pub conditions: Vec<Condition>,
}

struct Word<'a> {
    text: &'a str,
    column: usize,
}

fn split_words<'a>(line: &'a str) -> Vec<Word<'a>> {
    let mut words = Vec::new();
    let mut start: Option<usize> = None;
    let push = |words: &mut Vec<Word<'a>>, s: usize, e: usize| {
        words.push(Word {
            text: &line[s..e],
            column: line[..s].chars().count() + 1,
        })
    };
    for (i, c) in line.char_indices() {
        if c.is_whitespace() || c == '=' {
            if let Some(s) = start.take() {
                push(&mut words, s, i);
            }
            if c == '=' {
                push(&mut words, i, i + 1);
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        push(&mut words, s, line.len());
    }
    words
}

fn is_token(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '.')
}

enum Decl<'a> {
    Statement(Word<'a>),
    Fact(Word<'a>, Vec<Word<'a>>),
    Any(Word<'a>, Vec<Word<'a>>),
    Constant(Word<'a>, bool),
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> FactsError {
    FactsError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn parse_line(lineno: usize, words: Vec<Word<'_>>) -> Result<Decl<'_>, FactsError> {
    let mut it = words.into_iter();
    let head = it.next().expect("caller skips blank lines");
    let name = it
        .next()
        .ok_or_else(|| syntax(lineno, head.column + head.text.len(), "expected an identifier"))?;
    if !is_token(name.text) {
        return Err(syntax(lineno, name.column, format!("invalid identifier `{}`", name.text)));
    }
    let rest: Vec<Word<'_>> = it.collect();
    let check_tokens = |ws: &[Word<'_>]| -> Result<(), FactsError> {
        match ws.iter().find(|w| !is_token(w.text)) {
            Some(w) => Err(syntax(lineno, w.column, format!("invalid identifier `{}`", w.text))),
            None => Ok(()),
        }
    };
    let expect_eq = |rest: &[Word<'_>]| -> Result<(), FactsError> {
        match rest.first() {
            Some(w) if w.text == "=" => Ok(()),
            Some(w) => Err(syntax(lineno, w.column, format!("expected `=`, found `{}`", w.text))),
            None => Err(syntax(lineno, name.column + name.text.len(), "expected `=`")),
        }
    };
    match head.text {
        "statement" => {
            if let Some(w) = rest.first() {
                return Err(syntax(lineno, w.column, "unexpected input after statement id"));
            }
            Ok(Decl::Statement(name))
        }
        "fact" => {
            expect_eq(&rest)?;
            let members: Vec<Word<'_>> = rest.into_iter().skip(1).collect();
            check_tokens(&members)?;
            Ok(Decl::Fact(name, members))
        }
        "condition" => {
            expect_eq(&rest)?;
            let mut body = rest.into_iter().skip(1);
            let kind = body
                .next()
                .ok_or_else(|| syntax(lineno, name.column, "expected `any`, `true` or `false`"))?;
            let tail: Vec<Word<'_>> = body.collect();
            match kind.text {
                "any" => {
                    check_tokens(&tail)?;
                    Ok(Decl::Any(name, tail))
                }
                "true" | "false" => match tail.first() {
                    Some(w) => Err(syntax(lineno, w.column, "unexpected input after constant")),
                    None => Ok(Decl::Constant(name, kind.text == "true")),
                },
                other => Err(syntax(
                    lineno,
                    kind.column,
                    format!("expected `any`, `true` or `false`, found `{other}`"),
                )),
            }
        }
        other => Err(syntax(lineno, head.column, format!("unknown directive `{other}`"))),
    }
}

/// Parses a facts file and closes its family.
pub fn parse_facts(source: &str) -> Result<FactsFile, FactsError> {
    let mut decls = Vec::new();
    for (i, raw) in source.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let words = split_words(line);
        if words.is_empty() {
            continue;
        }
        decls.push((i + 1, parse_line(i + 1, words)?));
    }

    let mut universe = StatementSet::new();
    for (lineno, d) in &decls {
        if let Decl::Statement(w) = d {
            if !universe.insert(Statement::new(w.text)) {
                return Err(FactsError::Duplicate {
                    line: *lineno,
                    column: w.column,
                    what: "statement",
                    id: w.text.to_string(),
                });
            }
        }
    }

    let resolve = |lineno: usize, words: &[Word<'_>]| -> Result<StatementSet, FactsError> {
        words
            .iter()
            .map(|w| {
                let s = Statement::new(w.text);
                if universe.contains(&s) {
                    Ok(s)
                } else {
                    Err(FactsError::UnknownStatement {
                        line: lineno,
                        column: w.column,
                        statement: w.text.to_string(),
                    })
                }
            })
            .collect()
    };

    let mut generators = Vec::new();
    let mut conditions = Vec::new();
    let mut fact_ids = BTreeSet::new();
    let mut condition_ids = BTreeSet::new();
    for (lineno, d) in &decls {
        let lineno = *lineno;
        match d {
            Decl::Statement(_) => {}
            Decl::Fact(name, members) => {
                if !fact_ids.insert(name.text) {
                    return Err(FactsError::Duplicate {
                        line: lineno,
                        column: name.column,
                        what: "fact",
                        id: name.text.to_string(),
                    });
                }
                generators.push(Fact::new(name.text, resolve(lineno, members)?));
            }
            Decl::Any(name, _) | Decl::Constant(name, _) => {
                if !condition_ids.insert(name.text) {
                    return Err(FactsError::Duplicate {
                        line: lineno,
                        column: name.column,
                        what: "condition",
                        id: name.text.to_string(),
                    });
                }
                conditions.push(match d {
                    Decl::Any(_, members) => Condition::witness(name.text, resolve(lineno, members)?),
                    Decl::Constant(_, v) => Condition::constant(name.text, *v),
                    _ => unreachable!(),
                });
            }
        }
    }

    let family = close_family(universe, generators)?;
    Ok(FactsFile { family, conditions })
}
