//! Evaluation of PAL programs into privileges.
//!
//! Names live in one scope per namespace. A name can be introduced as:
//!
//! * a function, on first bare use in an expression (`read`);
//! * an entity or a category, by `let doc1 is TechDoc`;
//! * a privilege, by `name := expr` (later definitions rebind it);
//! * a condition, by the facts file attached to the environment.
//!
//! An entity may additionally be defined as a privilege. After `/` the name
//! then denotes the entity; everywhere else it denotes the privilege.
//!
//! In a product whose operand is a guard (`[p <: q]`, `[u ~ v]`) or a
//! condition name, that condition is attached to the atoms of the other
//! operand. A guard standing alone is an atom over its own synthetic
//! function, see [`guard_function`].

mod rbac;
mod scenario;

pub use rbac::{import_rbac, parse_rbac, RbacError, RbacModel};
pub use scenario::{run_scenario, Outcome, Query, Report, ReportEntry, Scenario, ScenarioError};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::algebra::{Category, Employment, Entity, EntitySet, FunctionSymbol};
use crate::facts::{
    Condition, ConditionKind, ConditionRegistry, EvalContext, EvalError, FactFamily, FactsError,
    FactsFile, RegistryError, Relation,
};
use crate::pal::{format_expr, Expr, GuardOp, Namespace, Pos, Program, StmtKind, SyntaxError};
use crate::privilege::{Arrangement, ArrangementError, HighOrder, MergeMode, Privilege, RenderOptions};

/// Function carried by a guard that is not merged onto an action. The name
/// is not an identifier, so it never collides with a PAL name.
pub fn guard_function(c: &Condition) -> FunctionSymbol {
    FunctionSymbol::new(format!("guard:{}", c.id()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scope {
    Entity(Entity),
    Category(Category),
}

impl Scope {
    pub fn entity_set(&self) -> EntitySet {
        match self {
            Scope::Entity(e) => EntitySet::singleton(e.clone()),
            Scope::Category(c) => c.entity_set(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Function(FunctionSymbol),
    Privilege(Privilege),
    Condition(Condition),
}

/// What a name denotes. `scope` is used after `/`, `value` everywhere else.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binding {
    pub name: String,
    pub scope: Option<Scope>,
    pub value: Option<Value>,
}

impl Binding {
    fn kind(&self) -> &'static str {
        match (&self.value, &self.scope) {
            (Some(Value::Function(_)), _) => "function",
            (Some(Value::Privilege(_)), _) => "privilege",
            (Some(Value::Condition(_)), _) => "condition",
            (None, Some(Scope::Entity(_))) => "entity",
            (None, Some(Scope::Category(_))) => "category",
            (None, None) => "unbound name",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("{pos}: `{name}` is a {found}, expected {expected}")]
    KindClash {
        pos: Pos,
        name: String,
        found: &'static str,
        expected: &'static str,
    },
    #[error("{pos}: `{name}` after `/` must be a category or an entity")]
    NotAScope { pos: Pos, name: String },
    #[error("{pos}: `{name}` cannot be its own category")]
    SelfCategory { pos: Pos, name: String },
}

impl ResolveError {
    pub fn pos(&self) -> Pos {
        match self {
            ResolveError::KindClash { pos, .. }
            | ResolveError::NotAScope { pos, .. }
            | ResolveError::SelfCategory { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Facts(#[from] FactsError),
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Rbac(#[from] RbacError),
    #[error("no namespace \"{0}\" in program")]
    UnknownNamespace(String),
}

impl EngineError {
    /// Source position, when the error has one.
    pub fn pos(&self) -> Option<Pos> {
        match self {
            EngineError::Syntax(e) => Some(e.pos),
            EngineError::Resolve(e) => Some(e.pos()),
            EngineError::Facts(
                FactsError::Syntax { line, column, .. }
                | FactsError::UnknownStatement { line, column, .. }
                | FactsError::Duplicate { line, column, .. },
            )
            | EngineError::Rbac(RbacError::Syntax { line, column, .. }) => Some(Pos {
                line: *line,
                column: *column,
            }),
            _ => None,
        }
    }
}

/// Non-fatal note produced while loading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Warning {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: warning: {}", self.pos, self.message)
    }
}

/// Bindings of one namespace together with its facts and conditions.
#[derive(Clone, Debug)]
pub struct Environment {
    namespace: Option<String>,
    bindings: BTreeMap<String, Binding>,
    functions: Vec<FunctionSymbol>,
    family: FactFamily,
    conditions: ConditionRegistry,
    arrangements: BTreeMap<String, Arrangement>,
    mode: MergeMode,
    warnings: Vec<Warning>,
}

impl Default for Environment {
    fn default() -> Self {
        Self::new()
    }
}

impl Environment {
    pub fn new() -> Self {
        Self {
            namespace: None,
            bindings: BTreeMap::new(),
            functions: Vec::new(),
            family: FactFamily::trivial(),
            conditions: ConditionRegistry::new(),
            arrangements: BTreeMap::new(),
            mode: MergeMode::default(),
            warnings: Vec::new(),
        }
    }

    /// Environment that [`load_program`] fills from the namespace `name`.
    pub fn for_namespace(name: impl Into<String>) -> Self {
        Self {
            namespace: Some(name.into()),
            ..Self::new()
        }
    }

    pub fn with_mode(mut self, mode: MergeMode) -> Self {
        self.mode = mode;
        self
    }

    /// Installs the family and binds every condition by id.
    pub fn with_facts(mut self, facts: FactsFile) -> Result<Self, EngineError> {
        self.family = facts.family;
        for c in facts.conditions {
            if let Some(b) = self.bindings.get(c.id()) {
                return Err(ResolveError::KindClash {
                    pos: Pos::start(),
                    name: c.id().to_string(),
                    found: b.kind(),
                    expected: "condition",
                }
                .into());
            }
            self.conditions.insert(c.clone(), &self.family)?;
            self.bindings.insert(
                c.id().to_string(),
                Binding {
                    name: c.id().to_string(),
                    scope: None,
                    value: Some(Value::Condition(c)),
                },
            );
        }
        Ok(self)
    }

    pub fn namespace(&self) -> Option<&str> {
        self.namespace.as_deref()
    }

    pub fn mode(&self) -> MergeMode {
        self.mode
    }

    pub fn family(&self) -> &FactFamily {
        &self.family
    }

    pub fn conditions(&self) -> &ConditionRegistry {
        &self.conditions
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    pub fn binding(&self, name: &str) -> Option<&Binding> {
        self.bindings.get(name)
    }

    pub fn bindings(&self) -> impl Iterator<Item = &Binding> {
        self.bindings.values()
    }

    /// Functions in order of first use.
    pub fn functions(&self) -> &[FunctionSymbol] {
        &self.functions
    }

    pub fn privilege(&self, name: &str) -> Option<&Privilege> {
        match self.bindings.get(name)?.value.as_ref()? {
            Value::Privilege(p) => Some(p),
            _ => None,
        }
    }

    pub fn category(&self, name: &str) -> Option<&Category> {
        match self.bindings.get(name)?.scope.as_ref()? {
            Scope::Category(c) => Some(c),
            Scope::Entity(_) => None,
        }
    }

    /// Every declared entity.
    pub fn entities(&self) -> BTreeSet<Entity> {
        self.bindings
            .values()
            .filter_map(|b| match &b.scope {
                Some(Scope::Entity(e)) => Some(e.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn define_arrangement(&mut self, name: impl Into<String>, arrangement: Arrangement) {
        self.arrangements.insert(name.into(), arrangement);
    }

    pub fn arrangement(&self, name: &str) -> Option<&Arrangement> {
        self.arrangements.get(name)
    }

    /// Evaluation context over this environment's family and merge mode.
    pub fn context<'a>(&'a self, arrangement: Option<&'a Arrangement>) -> EvalContext<'a> {
        EvalContext {
            family: &self.family,
            arrangement,
            mode: self.mode,
        }
    }

    /// Canonical text: functions in order of first use, labels checked
    /// against current category members.
    pub fn render(&self, p: &Privilege) -> String {
        let opts = RenderOptions::default()
            .with_function_rank(|f| {
                self.functions
                    .iter()
                    .position(|g| g == f)
                    .unwrap_or(usize::MAX)
            })
            .with_category_members(|name| self.category(name).map(|c| c.members().clone()));
        p.render(&opts)
    }

    fn clash(&self, pos: Pos, name: &str, expected: &'static str) -> ResolveError {
        ResolveError::KindClash {
            pos,
            name: name.to_string(),
            found: self.bindings.get(name).map_or("unbound name", Binding::kind),
            expected,
        }
    }

    fn introduce_function(&mut self, name: &str) -> FunctionSymbol {
        let f = FunctionSymbol::new(name);
        self.functions.push(f.clone());
        self.bindings.insert(
            name.to_string(),
            Binding {
                name: name.to_string(),
                scope: None,
                value: Some(Value::Function(f.clone())),
            },
        );
        f
    }

    /// Processes statements in order.
    pub fn load_namespace(&mut self, ns: &Namespace) -> Result<(), EngineError> {
        if self.namespace.is_none() {
            self.namespace = Some(ns.name.clone());
        }
        for st in &ns.statements {
            match &st.kind {
                StmtKind::LetIs { entity, category } => self.declare(entity, category, st.pos)?,
                StmtKind::Define { name, body } => {
                    let value = self.eval_at(body, st.pos)?;
                    self.define(name, value, st.pos)?;
                }
            }
        }
        Ok(())
    }

    fn declare(&mut self, entity: &str, category: &str, pos: Pos) -> Result<(), ResolveError> {
        if entity == category {
            return Err(ResolveError::SelfCategory {
                pos,
                name: entity.to_string(),
            });
        }
        match self.bindings.get(category) {
            None => {}
            Some(Binding {
                scope: Some(Scope::Category(_)),
                value: None,
                ..
            }) => {}
            Some(_) => return Err(self.clash(pos, category, "category")),
        }
        match self.bindings.get(entity) {
            None => {}
            Some(Binding {
                scope: None,
                value: Some(Value::Privilege(_)),
                ..
            })
            | Some(Binding {
                scope: Some(Scope::Entity(_)),
                ..
            }) => {}
            Some(_) => return Err(self.clash(pos, entity, "entity")),
        }

        let e = Entity::new(entity);
        let eb = self.bindings.entry(entity.to_string()).or_insert_with(|| Binding {
            name: entity.to_string(),
            scope: None,
            value: None,
        });
        eb.scope = Some(Scope::Entity(e.clone()));

        let cb = self.bindings.entry(category.to_string()).or_insert_with(|| Binding {
            name: category.to_string(),
            scope: Some(Scope::Category(Category::new(category))),
            value: None,
        });
        if let Some(Scope::Category(c)) = &mut cb.scope {
            c.insert(e);
        }
        Ok(())
    }

    fn define(&mut self, name: &str, value: Privilege, pos: Pos) -> Result<(), ResolveError> {
        match self.bindings.get(name) {
            None => {}
            Some(Binding {
                value: Some(Value::Privilege(_)),
                ..
            }) => self.warnings.push(Warning {
                pos,
                message: format!("`{name}` redefined"),
            }),
            Some(Binding {
                value: None,
                scope: Some(Scope::Entity(_)),
                ..
            }) => {}
            Some(_) => return Err(self.clash(pos, name, "privilege")),
        }
        let b = self.bindings.entry(name.to_string()).or_insert_with(|| Binding {
            name: name.to_string(),
            scope: None,
            value: None,
        });
        b.value = Some(Value::Privilege(value));
        Ok(())
    }

    /// Evaluates `expr`, introducing unknown bare names as functions.
    pub fn eval_expr(&mut self, expr: &Expr) -> Result<Privilege, ResolveError> {
        self.eval_at(expr, Pos::start())
    }

    /// As [`Environment::eval_expr`], reporting errors at `pos`.
    pub fn eval_at(&mut self, expr: &Expr, pos: Pos) -> Result<Privilege, ResolveError> {
        match expr {
            Expr::Name(name) => match self.bindings.get(name) {
                None => {
                    let f = self.introduce_function(name);
                    Ok(Privilege::function(f))
                }
                Some(Binding { value: Some(v), .. }) => Ok(match v {
                    Value::Function(f) => Privilege::function(f.clone()),
                    Value::Privilege(p) => p.clone(),
                    Value::Condition(c) => guard_atom(c),
                }),
                Some(_) => Err(self.clash(pos, name, "privilege or function")),
            },
            Expr::Sum(l, r) => {
                let l = self.eval_at(l, pos)?;
                let r = self.eval_at(r, pos)?;
                Ok(l.compose(&r))
            }
            Expr::Product(l, r) => {
                if let Some(c) = self.attached_condition(r, pos)? {
                    return Ok(self.eval_at(l, pos)?.guarded_by(&c));
                }
                if let Some(c) = self.attached_condition(l, pos)? {
                    return Ok(self.eval_at(r, pos)?.guarded_by(&c));
                }
                let l = self.eval_at(l, pos)?;
                let r = self.eval_at(r, pos)?;
                Ok(l.merge(&r, self.mode))
            }
            Expr::Slash(l, scope) => {
                let set = self.scope(scope, pos)?;
                Ok(self.eval_at(l, pos)?.restrict(&set))
            }
            Expr::Guard(..) => {
                let c = self
                    .attached_condition(expr, pos)?
                    .expect("guards always yield a condition");
                Ok(guard_atom(&c))
            }
        }
    }

    /// The condition a product operand contributes, if it is a guard or a
    /// condition name.
    fn attached_condition(&mut self, e: &Expr, pos: Pos) -> Result<Option<Condition>, ResolveError> {
        match e {
            Expr::Guard(op, l, r) => {
                let p = self.eval_at(l, pos)?;
                let q = self.eval_at(r, pos)?;
                let relation = match op {
                    GuardOp::Compliance => Relation::Compliance,
                    GuardOp::Congruence => Relation::Congruence,
                };
                Ok(Some(Condition::new(
                    format_expr(e),
                    ConditionKind::HighOrder(HighOrder::new(relation, p, q, None)),
                )))
            }
            Expr::Name(n) => match self.bindings.get(n) {
                Some(Binding {
                    value: Some(Value::Condition(c)),
                    ..
                }) => Ok(Some(c.clone())),
                _ => Ok(None),
            },
            _ => Ok(None),
        }
    }

    fn scope(&self, name: &str, pos: Pos) -> Result<EntitySet, ResolveError> {
        match self.bindings.get(name).and_then(|b| b.scope.as_ref()) {
            Some(s) => Ok(s.entity_set()),
            None => Err(ResolveError::NotAScope {
                pos,
                name: name.to_string(),
            }),
        }
    }

    /// Evaluates arrangement expressions into a basis, in source order.
    pub fn load_arrangement(&mut self, exprs: &[Expr]) -> Result<Arrangement, EngineError> {
        let mut basis = Vec::new();
        for e in exprs {
            for part in e.summands() {
                let p = self.eval_at(part, Pos::start())?;
                let mut atoms: Vec<_> = p.atoms().collect();
                atoms.sort_by_key(|a| {
                    (
                        self.functions
                            .iter()
                            .position(|f| f == a.function())
                            .unwrap_or(usize::MAX),
                        a.employment().clone(),
                    )
                });
                for atom in atoms {
                    if !atom.is_unconditioned() {
                        return Err(ArrangementError::Conditioned {
                            employment: atom.employment().to_string(),
                        }
                        .into());
                    }
                    basis.push(atom.employment().clone());
                }
            }
        }
        Ok(Arrangement::new(basis)?)
    }

    /// One singleton basis element per known function and declared entity.
    pub fn atomic_arrangement(&self) -> Arrangement {
        let entities = self.entities();
        Arrangement::atomic(self.functions.iter(), entities.iter())
    }
}

fn guard_atom(c: &Condition) -> Privilege {
    Privilege::employment(Employment::universal(guard_function(c))).guarded_by(c)
}

/// Loads the namespace named by `env` (or the first one, if `env` has no
/// namespace yet) into `env`.
pub fn load_program(program: &Program, mut env: Environment) -> Result<Environment, EngineError> {
    let ns = match env.namespace() {
        Some(name) => match program.namespaces.iter().find(|n| n.name == name) {
            Some(ns) => ns,
            None if program.namespaces.is_empty() => return Ok(env),
            None => return Err(EngineError::UnknownNamespace(name.to_string())),
        },
        None => match program.namespaces.first() {
            Some(ns) => ns,
            None => return Ok(env),
        },
    };
    env.load_namespace(ns)?;
    Ok(env)
}

/// Convenience: evaluate a source expression in `env`.
pub fn eval_source(env: &mut Environment, source: &str) -> Result<Privilege, EngineError> {
    let e = crate::pal::parse_expr(source)?;
    Ok(env.eval_expr(&e)?)
}

/// Convenience: parse and load an arrangement such as `read + list`.
pub fn arrangement_source(env: &mut Environment, source: &str) -> Result<Arrangement, EngineError> {
    let e = crate::pal::parse_expr(source)?;
    env.load_arrangement(std::slice::from_ref(&e))
}
