//! Canonical PAL text with minimal parentheses.

use super::{Expr, Program, StmtKind};

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Sum(..) => 1,
        Expr::Product(..) => 2,
        Expr::Slash(..) => 3,
        Expr::Name(_) | Expr::Guard(..) => 4,
    }
}

fn write_operand(out: &mut String, e: &Expr, parens: bool) {
    if parens {
        out.push('(');
        write_expr(out, e);
        out.push(')');
    } else {
        write_expr(out, e);
    }
}

fn write_expr(out: &mut String, e: &Expr) {
    let p = precedence(e);
    match e {
        Expr::Name(n) => out.push_str(n),
        Expr::Sum(l, r) | Expr::Product(l, r) => {
            write_operand(out, l, precedence(l) < p);
            out.push_str(if p == 1 { " + " } else { " * " });
            write_operand(out, r, precedence(r) <= p);
        }
        Expr::Slash(l, scope) => {
            write_operand(out, l, precedence(l) < p);
            out.push('/');
            out.push_str(scope);
        }
        Expr::Guard(op, l, r) => {
            out.push('[');
            write_expr(out, l);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            write_expr(out, r);
            out.push(']');
        }
    }
}

pub fn format_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e);
    out
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

pub fn format_program(p: &Program) -> String {
    let mut out = String::new();
    for (i, ns) in p.namespaces.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str("namespace ");
        out.push_str(&quote(&ns.name));
        out.push_str(" {\n");
        for st in &ns.statements {
            out.push_str("  ");
            match &st.kind {
                StmtKind::LetIs { entity, category } => {
                    out.push_str(&format!("let {entity} is {category}"));
                }
                StmtKind::Define { name, body } => {
                    out.push_str(name);
                    out.push_str(" := ");
                    write_expr(&mut out, body);
                }
            }
            out.push('\n');
        }
        out.push_str("}\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pal::{is_identifier, parse_expr, parse_source, GuardOp, Namespace, Pos, Stmt};
    use proptest::prelude::*;

    #[test]
    fn minimal_parentheses() {
        let e = Expr::sum(Expr::name("a"), Expr::product(Expr::name("b"), Expr::name("c")));
        assert_eq!(format_expr(&e), "a + b * c");
        let e = Expr::product(Expr::sum(Expr::name("a"), Expr::name("b")), Expr::name("c"));
        assert_eq!(format_expr(&e), "(a + b) * c");
        let e = Expr::sum(Expr::name("a"), Expr::sum(Expr::name("b"), Expr::name("c")));
        assert_eq!(format_expr(&e), "a + (b + c)");
        let e = Expr::slash(Expr::sum(Expr::name("read"), Expr::name("list")), "TechDoc");
        assert_eq!(format_expr(&e), "(read + list)/TechDoc");
    }

    #[test]
    fn namespace_names_are_escaped() {
        let p = Program {
            namespaces: vec![Namespace {
                name: "a \"b\" \\".into(),
                statements: vec![],
            }],
        };
        assert_eq!(parse_source(&format_program(&p)).unwrap(), p);
    }

    fn ident() -> impl Strategy<Value = String> {
        "[a-zA-Z][a-zA-Z0-9_]{0,5}".prop_filter("keyword", |s| is_identifier(s))
    }

    fn expr() -> impl Strategy<Value = Expr> {
        let leaf = ident().prop_map(Expr::Name);
        leaf.prop_recursive(6, 64, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::sum(l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Expr::product(l, r)),
                (inner.clone(), ident()).prop_map(|(l, s)| Expr::slash(l, s)),
                (inner.clone(), inner, any::<bool>()).prop_map(|(l, r, c)| {
                    let op = if c { GuardOp::Compliance } else { GuardOp::Congruence };
                    Expr::guard(op, l, r)
                }),
            ]
        })
    }

    fn program() -> impl Strategy<Value = Program> {
        let stmt = prop_oneof![
            (ident(), ident()).prop_map(|(entity, category)| Stmt {
                kind: StmtKind::LetIs { entity, category },
                pos: Pos::start(),
            }),
            (ident(), expr()).prop_map(|(name, body)| Stmt {
                kind: StmtKind::Define { name, body },
                pos: Pos::start(),
            }),
        ];
        prop::collection::vec(prop::collection::vec(stmt, 0..4), 0..3).prop_map(|nss| Program {
            namespaces: nss
                .into_iter()
                .enumerate()
                .map(|(i, statements)| Namespace {
                    name: format!("ns{i}"),
                    statements,
                })
                .collect(),
        })
    }

    proptest! {
        #[test]
        fn expr_round_trip(e in expr()) {
            prop_assert_eq!(parse_expr(&format_expr(&e)).unwrap(), e);
        }

        #[test]
        fn program_round_trip(p in program()) {
            prop_assert_eq!(parse_source(&format_program(&p)).unwrap(), p);
        }

        #[test]
        fn tokenize_is_total(s in "\\PC{0,40}") {
            let len_lines = s.lines().count().max(1);
            match crate::pal::tokenize(&s) {
                Ok(tokens) => prop_assert_eq!(tokens.last().unwrap().kind.clone(), crate::pal::TokenKind::Eof),
                Err(e) => prop_assert!(e.pos.line <= len_lines + 1),
            }
        }
    }
}
