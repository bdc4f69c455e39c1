//! Role-based access control models and their translation to PAL.
//!
//! ```text
//! op read                      # operation
//! cat TechDoc                  # object category
//! obj doc1 in TechDoc          # object
//! role reader = read/TechDoc, list/TechDoc
//! inherits manager reader      # manager is senior to reader
//! user bob = reader, writer
//! ```

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::pal::{is_identifier, Expr, Namespace, Pos, Program, Stmt, StmtKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RbacError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("`{name}` is not a valid identifier")]
    InvalidName { name: String },
    #[error("`{name}` is declared twice")]
    Duplicate { name: String },
    #[error("unknown {what} `{name}`")]
    Unknown { what: &'static str, name: String },
    #[error("category `{0}` has no objects")]
    EmptyCategory(String),
    #[error("role `{0}` grants nothing")]
    EmptyRole(String),
    #[error("user `{0}` has no roles")]
    EmptyUser(String),
    #[error("role `{0}` inherits from itself")]
    SelfInheritance(String),
    #[error("cyclic role hierarchy: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RbacModel {
    pub operations: BTreeSet<String>,
    pub categories: BTreeSet<String>,
    /// `(object, category)` memberships.
    pub objects: BTreeSet<(String, String)>,
    /// Permissions `(operation, category)` in declaration order.
    pub roles: BTreeMap<String, Vec<(String, String)>>,
    /// `(senior, junior)` pairs.
    pub hierarchy: BTreeSet<(String, String)>,
    /// Role assignments in declaration order.
    pub users: BTreeMap<String, Vec<String>>,
}

impl RbacModel {
    /// Juniors of `role`, sorted.
    pub fn juniors(&self, role: &str) -> Vec<&str> {
        self.hierarchy
            .iter()
            .filter(|(s, _)| s == role)
            .map(|(_, j)| j.as_str())
            .collect()
    }

    pub fn objects_in(&self, category: &str) -> Vec<&str> {
        self.objects
            .iter()
            .filter(|(_, c)| c == category)
            .map(|(o, _)| o.as_str())
            .collect()
    }

    pub fn validate(&self) -> Result<(), RbacError> {
        let mut seen = BTreeSet::new();
        let objects: BTreeSet<&str> = self.objects.iter().map(|(o, _)| o.as_str()).collect();
        let names = self
            .operations
            .iter()
            .chain(&self.categories)
            .map(String::as_str)
            .chain(objects.iter().copied())
            .chain(self.roles.keys().map(String::as_str))
            .chain(self.users.keys().map(String::as_str));
        for name in names {
            if !is_identifier(name) {
                return Err(RbacError::InvalidName { name: name.into() });
            }
            if !seen.insert(name) {
                return Err(RbacError::Duplicate { name: name.into() });
            }
        }

        for (_, c) in &self.objects {
            if !self.categories.contains(c) {
                return Err(unknown("category", c));
            }
        }
        for (role, perms) in &self.roles {
            for (op, cat) in perms {
                if !self.operations.contains(op) {
                    return Err(unknown("operation", op));
                }
                if !self.categories.contains(cat) {
                    return Err(unknown("category", cat));
                }
                if self.objects_in(cat).is_empty() {
                    return Err(RbacError::EmptyCategory(cat.clone()));
                }
            }
            if perms.is_empty() && self.juniors(role).is_empty() {
                return Err(RbacError::EmptyRole(role.clone()));
            }
        }
        for (s, j) in &self.hierarchy {
            for r in [s, j] {
                if !self.roles.contains_key(r) {
                    return Err(unknown("role", r));
                }
            }
            if s == j {
                return Err(RbacError::SelfInheritance(s.clone()));
            }
        }
        for (user, roles) in &self.users {
            if roles.is_empty() {
                return Err(RbacError::EmptyUser(user.clone()));
            }
            for r in roles {
                if !self.roles.contains_key(r) {
                    return Err(unknown("role", r));
                }
            }
        }
        self.role_order().map(|_| ())
    }

    /// Roles with juniors first; ties broken by name.
    pub fn role_order(&self) -> Result<Vec<String>, RbacError> {
        let mut pending: BTreeMap<&str, usize> = self
            .roles
            .keys()
            .map(|r| (r.as_str(), self.juniors(r).len()))
            .collect();
        let mut ready: BTreeSet<&str> = pending
            .iter()
            .filter(|(_, n)| **n == 0)
            .map(|(r, _)| *r)
            .collect();
        let mut order = Vec::new();
        while let Some(r) = ready.pop_first() {
            pending.remove(r);
            order.push(r.to_string());
            for (s, j) in &self.hierarchy {
                if j == r {
                    if let Some(n) = pending.get_mut(s.as_str()) {
                        *n -= 1;
                        if *n == 0 {
                            ready.insert(s);
                        }
                    }
                }
            }
        }
        if pending.is_empty() {
            Ok(order)
        } else {
            Err(RbacError::Cycle(self.find_cycle(&pending.keys().copied().collect())))
        }
    }

    /// Walks pending juniors from any pending role; every pending role has
    /// one, so the walk must revisit a role.
    fn find_cycle(&self, pending: &BTreeSet<&str>) -> Vec<String> {
        let mut path = vec![*pending.first().expect("a cycle leaves roles pending")];
        loop {
            let cur = *path.last().unwrap();
            let next = self
                .juniors(cur)
                .into_iter()
                .find(|j| pending.contains(j))
                .expect("pending roles have a pending junior");
            if let Some(i) = path.iter().position(|p| *p == next) {
                let mut cycle: Vec<String> = path[i..].iter().map(|s| s.to_string()).collect();
                cycle.push(next.to_string());
                return cycle;
            }
            path.push(next);
        }
    }
}

fn unknown(what: &'static str, name: &str) -> RbacError {
    RbacError::Unknown {
        what,
        name: name.to_string(),
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> RbacError {
    RbacError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn list(rest: &str) -> Vec<String> {
    rest.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

pub fn parse_rbac(source: &str) -> Result<RbacModel, RbacError> {
    let mut m = RbacModel::default();
    for (i, raw) in source.lines().enumerate() {
        let line = i + 1;
        let uncommented = raw.split('#').next().unwrap_or("");
        let text = uncommented.trim();
        if text.is_empty() {
            continue;
        }
        let col = uncommented.chars().take_while(|c| c.is_whitespace()).count() + 1;
        let (head, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let rest = rest.trim();
        let one = |what: &str| -> Result<String, RbacError> {
            match rest.split_whitespace().collect::<Vec<_>>()[..] {
                [name] => Ok(name.to_string()),
                _ => Err(syntax(line, col, format!("expected `{what} <name>`"))),
            }
        };
        match head {
            "op" => {
                if !m.operations.insert(one("op")?) {
                    return Err(RbacError::Duplicate { name: rest.into() });
                }
            }
            "cat" => {
                if !m.categories.insert(one("cat")?) {
                    return Err(RbacError::Duplicate { name: rest.into() });
                }
            }
            "obj" => match rest.split_whitespace().collect::<Vec<_>>()[..] {
                [o, "in", c] => {
                    m.objects.insert((o.into(), c.into()));
                }
                _ => return Err(syntax(line, col, "expected `obj <name> in <category>`")),
            },
            "inherits" => match rest.split_whitespace().collect::<Vec<_>>()[..] {
                [s, j] => {
                    m.hierarchy.insert((s.into(), j.into()));
                }
                _ => return Err(syntax(line, col, "expected `inherits <senior> <junior>`")),
            },
            "role" | "user" => {
                let (name, body) = match rest.split_once('=') {
                    Some((n, b)) => (n.trim(), b),
                    None => (rest, ""),
                };
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(syntax(line, col, format!("expected `{head} <name> = ...`")));
                }
                let items = list(body);
                if head == "user" {
                    if m.users.insert(name.into(), items).is_some() {
                        return Err(RbacError::Duplicate { name: name.into() });
                    }
                    continue;
                }
                let mut perms = Vec::new();
                for item in items {
                    let Some((op, cat)) = item.split_once('/') else {
                        return Err(syntax(line, col, format!("expected `op/category`, found `{item}`")));
                    };
                    perms.push((op.trim().to_string(), cat.trim().to_string()));
                }
                if m.roles.insert(name.into(), perms).is_some() {
                    return Err(RbacError::Duplicate { name: name.into() });
                }
            }
            other => return Err(syntax(line, col, format!("unknown directive `{other}`"))),
        }
    }
    Ok(m)
}

fn sum(parts: Vec<Expr>) -> Expr {
    parts
        .into_iter()
        .reduce(Expr::sum)
        .expect("validated roles and users are non-empty")
}

/// Translates a validated model into a single PAL namespace `rbac`.
pub fn import_rbac(model: &RbacModel) -> Result<Program, RbacError> {
    model.validate()?;
    let stmt = |kind| Stmt {
        kind,
        pos: Pos::start(),
    };
    let mut statements = Vec::new();
    for (o, c) in &model.objects {
        statements.push(stmt(StmtKind::LetIs {
            entity: o.clone(),
            category: c.clone(),
        }));
    }
    for role in model.role_order()? {
        let mut parts: Vec<Expr> = model.juniors(&role).into_iter().map(Expr::name).collect();
        parts.extend(
            model.roles[&role]
                .iter()
                .map(|(op, cat)| Expr::slash(Expr::name(op), cat)),
        );
        statements.push(stmt(StmtKind::Define {
            name: role,
            body: sum(parts),
        }));
    }
    for (user, roles) in &model.users {
        statements.push(stmt(StmtKind::Define {
            name: user.clone(),
            body: sum(roles.iter().map(Expr::name).collect()),
        }));
    }
    Ok(Program {
        namespaces: vec![Namespace {
            name: "rbac".into(),
            statements,
        }],
    })
}
