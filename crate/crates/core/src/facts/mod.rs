//! Facts, fact families and conditions.
//!
//! A fact is a set of statements. A fact family over a statement universe
//! `S` contains `∅` and `S` and is closed under union and intersection. A
//! condition is a boolean function on the facts of a family that is
//! additive over disjoint unions: `r(x₁ ∪ x₂) = r(x₁) ∨ r(x₂)` whenever
//! `x₁ ∩ x₂ = ∅`.

mod file;

pub use file::{parse_facts, FactsFile};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::privilege::{Arrangement, HighOrder, MergeMode};

/// Opaque statement token.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Statement(Arc<str>);

impl Statement {
    pub fn new(id: impl Into<String>) -> Self {
        Self(Arc::from(id.into()))
    }

    pub fn id(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Statement {
    fn from(s: &str) -> Self {
        Statement::new(s)
    }
}

pub type StatementSet = BTreeSet<Statement>;

/// Id given to the empty fact when no declared fact names it.
pub const EMPTY_FACT_ID: &str = "{}";

/// Deterministic id for a fact synthesized by closure.
pub fn synthesized_id(statements: &StatementSet) -> String {
    if statements.is_empty() {
        EMPTY_FACT_ID.to_string()
    } else {
        statements
            .iter()
            .map(Statement::id)
            .collect::<Vec<_>>()
            .join("+")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fact {
    id: String,
    statements: StatementSet,
}

impl Fact {
    pub fn new<I, S>(id: impl Into<String>, statements: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<Statement>,
    {
        Self {
            id: id.into(),
            statements: statements.into_iter().map(Into::into).collect(),
        }
    }

    /// A fact named by [`synthesized_id`].
    pub fn anonymous(statements: StatementSet) -> Self {
        Self {
            id: synthesized_id(&statements),
            statements,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn statements(&self) -> &StatementSet {
        &self.statements
    }

    pub fn is_subset(&self, other: &Fact) -> bool {
        self.statements.is_subset(&other.statements)
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

/// A finite family of facts over a statement universe.
///
/// Facts are unique by statement set and kept in order of cardinality, then
/// lexicographically. Several ids may name the same fact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactFamily {
    universe: StatementSet,
    facts: Vec<Fact>,
    by_id: BTreeMap<String, usize>,
}

impl FactFamily {
    /// Wraps `facts` without closing or validating them. See [`verify_family`].
    pub fn from_facts<I>(universe: StatementSet, facts: I) -> Self
    where
        I: IntoIterator<Item = Fact>,
    {
        let mut unique: BTreeMap<StatementSet, Vec<String>> = BTreeMap::new();
        for fact in facts {
            unique.entry(fact.statements).or_default().push(fact.id);
        }
        let mut entries: Vec<(StatementSet, Vec<String>)> = unique.into_iter().collect();
        entries.sort_by(|(a, _), (b, _)| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

        let mut out = Self {
            universe,
            facts: Vec::with_capacity(entries.len()),
            by_id: BTreeMap::new(),
        };
        for (statements, ids) in entries {
            let index = out.facts.len();
            for id in &ids {
                out.by_id.entry(id.clone()).or_insert(index);
            }
            out.facts.push(Fact {
                id: ids[0].clone(),
                statements,
            });
        }
        out
    }

    /// The family `{∅}` over an empty universe.
    pub fn trivial() -> Self {
        close_family(StatementSet::new(), Vec::new()).expect("no generators")
    }

    pub fn universe(&self) -> &StatementSet {
        &self.universe
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Fact> {
        self.by_id.get(id).map(|&i| &self.facts[i])
    }

    pub fn find(&self, statements: &StatementSet) -> Option<&Fact> {
        self.facts.iter().find(|f| &f.statements == statements)
    }

    pub fn contains(&self, statements: &StatementSet) -> bool {
        self.find(statements).is_some()
    }

    /// Resolves fact ids in order.
    pub fn sequence<'a, I>(&self, ids: I) -> Result<FactSequence, EvalError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        ids.into_iter()
            .map(|id| {
                self.get(id)
                    .cloned()
                    .ok_or_else(|| EvalError::UnknownFact(id.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(FactSequence)
    }
}

/// An ordered list of facts of one family.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactSequence(pub Vec<Fact>);

impl FactSequence {
    pub fn facts(&self) -> &[Fact] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactsError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: unknown statement `{statement}`")]
    UnknownStatement {
        line: usize,
        column: usize,
        statement: String,
    },
    #[error("{line}:{column}: duplicate {what} `{id}`")]
    Duplicate {
        line: usize,
        column: usize,
        what: &'static str,
        id: String,
    },
    #[error("generator `{fact}` references unknown statement `{statement}`")]
    UnknownGeneratorStatement { fact: String, statement: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("condition `{condition}` has no table entry for fact `{fact}`")]
    FactOutsideTable { condition: String, fact: String },
    #[error("condition `{condition}` needs an employment arrangement to evaluate")]
    MissingArrangement { condition: String },
    #[error("condition `{condition}` is high-order and cannot be checked against the union axiom")]
    UnsupportedKind { condition: String },
    #[error("unknown fact `{0}`")]
    UnknownFact(String),
}

/// Smallest family over `universe` that contains the generators, `∅` and
/// the universe, closed under pairwise union and intersection.
///
/// Declared ids are kept; facts produced by the closure get
/// [`synthesized_id`] names.
pub fn close_family(universe: StatementSet, generators: Vec<Fact>) -> Result<FactFamily, FactsError> {
    for g in &generators {
        if let Some(s) = g.statements.iter().find(|s| !universe.contains(s)) {
            return Err(FactsError::UnknownGeneratorStatement {
                fact: g.id.clone(),
                statement: s.id().to_string(),
            });
        }
    }

    let mut sets: BTreeSet<StatementSet> = generators.iter().map(|g| g.statements.clone()).collect();
    sets.insert(StatementSet::new());
    sets.insert(universe.clone());

    let mut frontier: Vec<StatementSet> = sets.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut fresh = Vec::new();
        let snapshot: Vec<StatementSet> = sets.iter().cloned().collect();
        for a in &frontier {
            for b in &snapshot {
                for candidate in [a.union(b).cloned().collect(), a.intersection(b).cloned().collect()] {
                    if !sets.contains(&candidate) {
                        sets.insert(candidate.clone());
                        fresh.push(candidate);
                    }
                }
            }
        }
        frontier = fresh;
    }

    let mut facts = generators;
    let named: BTreeSet<StatementSet> = facts.iter().map(|f| f.statements.clone()).collect();
    facts.extend(
        sets.into_iter()
            .filter(|s| !named.contains(s))
            .map(Fact::anonymous),
    );
    Ok(FactFamily::from_facts(universe, facts))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyViolation {
    MissingEmpty,
    MissingUniverse,
    OutsideUniverse { fact: String, statement: String },
    MissingUnion { left: String, right: String },
    MissingIntersection { left: String, right: String },
}

impl fmt::Display for FamilyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyViolation::MissingEmpty => f.write_str("the empty fact is missing"),
            FamilyViolation::MissingUniverse => f.write_str("the full statement set is missing"),
            FamilyViolation::OutsideUniverse { fact, statement } => {
                write!(f, "fact `{fact}` uses `{statement}` outside the universe")
            }
            FamilyViolation::MissingUnion { left, right } => {
                write!(f, "union of `{left}` and `{right}` is missing")
            }
            FamilyViolation::MissingIntersection { left, right } => {
                write!(f, "intersection of `{left}` and `{right}` is missing")
            }
        }
    }
}

/// Lists every closure property `family` violates; empty iff it is a valid
/// fact family.
pub fn verify_family(family: &FactFamily) -> Vec<FamilyViolation> {
    let mut out = Vec::new();
    if !family.contains(&StatementSet::new()) {
        out.push(FamilyViolation::MissingEmpty);
    }
    if !family.contains(&family.universe) {
        out.push(FamilyViolation::MissingUniverse);
    }
    for fact in &family.facts {
        for s in fact.statements.difference(&family.universe) {
            out.push(FamilyViolation::OutsideUniverse {
                fact: fact.id.clone(),
                statement: s.id().to_string(),
            });
        }
    }
    for (i, a) in family.facts.iter().enumerate() {
        for b in &family.facts[i + 1..] {
            let union: StatementSet = a.statements.union(&b.statements).cloned().collect();
            if !family.contains(&union) {
                out.push(FamilyViolation::MissingUnion {
                    left: a.id.clone(),
                    right: b.id.clone(),
                });
            }
            let meet: StatementSet = a.statements.intersection(&b.statements).cloned().collect();
            if !family.contains(&meet) {
                out.push(FamilyViolation::MissingIntersection {
                    left: a.id.clone(),
                    right: b.id.clone(),
                });
            }
        }
    }
    out
}

/// What a high-order condition asks about two privileges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Compliance,
    Congruence,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConditionKind {
    ConstantTrue,
    ConstantFalse,
    /// True iff the fact contains any of the witness statements.
    Witness(StatementSet),
    /// Explicit truth assignment keyed by statement set.
    Table(BTreeMap<StatementSet, bool>),
    HighOrder(HighOrder),
}

/// A named boolean function on facts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Condition {
    id: Arc<str>,
    kind: Arc<ConditionKind>,
}

impl Condition {
    pub fn new(id: impl Into<String>, kind: ConditionKind) -> Self {
        Self {
            id: Arc::from(id.into()),
            kind: Arc::new(kind),
        }
    }

    pub fn constant(id: impl Into<String>, value: bool) -> Self {
        let kind = if value {
            ConditionKind::ConstantTrue
        } else {
            ConditionKind::ConstantFalse
        };
        Self::new(id, kind)
    }

    pub fn witness<I, S>(id: impl Into<String>, statements: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<Statement>,
    {
        Self::new(
            id,
            ConditionKind::Witness(statements.into_iter().map(Into::into).collect()),
        )
    }

    pub fn table<I>(id: impl Into<String>, entries: I) -> Self
    where
        I: IntoIterator<Item = (StatementSet, bool)>,
    {
        Self::new(id, ConditionKind::Table(entries.into_iter().collect()))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn kind(&self) -> &ConditionKind {
        &self.kind
    }

    pub fn is_high_order(&self) -> bool {
        matches!(*self.kind, ConditionKind::HighOrder(_))
    }

    /// Constant value, if the condition ignores its fact.
    pub fn as_constant(&self) -> Option<bool> {
        match *self.kind {
            ConditionKind::ConstantTrue => Some(true),
            ConditionKind::ConstantFalse => Some(false),
            _ => None,
        }
    }

    pub fn eval(&self, fact: &Fact, ctx: &EvalContext<'_>) -> Result<bool, EvalError> {
        match &*self.kind {
            ConditionKind::ConstantTrue => Ok(true),
            ConditionKind::ConstantFalse => Ok(false),
            ConditionKind::Witness(w) => Ok(!w.is_disjoint(&fact.statements)),
            ConditionKind::Table(table) => {
                table
                    .get(&fact.statements)
                    .copied()
                    .ok_or_else(|| EvalError::FactOutsideTable {
                        condition: self.id.to_string(),
                        fact: fact.id.clone(),
                    })
            }
            ConditionKind::HighOrder(h) => h.eval(&self.id, fact, ctx),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

/// What condition evaluation may need beyond the fact itself.
#[derive(Clone, Copy, Debug)]
pub struct EvalContext<'a> {
    pub family: &'a FactFamily,
    /// Arrangement used by high-order conditions that did not capture one.
    pub arrangement: Option<&'a Arrangement>,
    pub mode: MergeMode,
}

impl<'a> EvalContext<'a> {
    pub fn new(family: &'a FactFamily) -> Self {
        Self {
            family,
            arrangement: None,
            mode: MergeMode::default(),
        }
    }

    pub fn with_arrangement(mut self, arrangement: &'a Arrangement) -> Self {
        self.arrangement = Some(arrangement);
        self
    }

    pub fn with_mode(mut self, mode: MergeMode) -> Self {
        self.mode = mode;
        self
    }
}

/// A disjoint pair on which `r(x₁ ∪ x₂) ≠ r(x₁) ∨ r(x₂)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    pub left: Fact,
    pub right: Fact,
    pub left_value: bool,
    pub right_value: bool,
    pub union_value: bool,
}

/// Checks the disjoint-union axiom on every disjoint pair of `family`.
///
/// Pairs whose union is not in the family are skipped; [`verify_family`]
/// reports those.
pub fn verify_condition_axiom(
    condition: &Condition,
    family: &FactFamily,
) -> Result<Vec<AxiomViolation>, EvalError> {
    if condition.is_high_order() {
        return Err(EvalError::UnsupportedKind {
            condition: condition.id.to_string(),
        });
    }
    let ctx = EvalContext::new(family);
    let values = family
        .facts()
        .iter()
        .map(|f| condition.eval(f, &ctx))
        .collect::<Result<Vec<_>, _>>()?;

    let mut out = Vec::new();
    for (i, a) in family.facts().iter().enumerate() {
        for (j, b) in family.facts().iter().enumerate().skip(i) {
            if !a.statements.is_disjoint(&b.statements) {
                continue;
            }
            let union: StatementSet = a.statements.union(&b.statements).cloned().collect();
            let Some(u) = family.facts().iter().position(|f| f.statements == union) else {
                continue;
            };
            if values[u] != (values[i] || values[j]) {
                out.push(AxiomViolation {
                    left: a.clone(),
                    right: b.clone(),
                    left_value: values[i],
                    right_value: values[j],
                    union_value: values[u],
                });
            }
        }
    }
    Ok(out)
}

/// Every fact of the family on which `condition` holds.
pub fn evidences(
    condition: &Condition,
    family: &FactFamily,
    ctx: &EvalContext<'_>,
) -> Result<Vec<Fact>, EvalError> {
    let mut out = Vec::new();
    for fact in family.facts() {
        if condition.eval(fact, ctx)? {
            out.push(fact.clone());
        }
    }
    Ok(out)
}

/// The ⊆-minimal evidences.
pub fn minimum_evidences(
    condition: &Condition,
    family: &FactFamily,
    ctx: &EvalContext<'_>,
) -> Result<Vec<Fact>, EvalError> {
    let all = evidences(condition, family, ctx)?;
    Ok(all
        .iter()
        .filter(|x| {
            !all.iter()
                .any(|y| y.statements.len() < x.statements.len() && y.is_subset(x))
        })
        .cloned()
        .collect())
}

/// Conditions by id, each validated against a family when inserted.
#[derive(Clone, Debug, Default)]
pub struct ConditionRegistry {
    conditions: BTreeMap<String, Arc<Condition>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("duplicate condition `{0}`")]
    Duplicate(String),
    #[error("condition `{id}` violates the disjoint-union axiom on `{left}` and `{right}`")]
    Axiom { id: String, left: String, right: String },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl ConditionRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `condition`. Tables must satisfy the union axiom over `family`.
    pub fn insert(&mut self, condition: Condition, family: &FactFamily) -> Result<(), RegistryError> {
        if self.conditions.contains_key(condition.id()) {
            return Err(RegistryError::Duplicate(condition.id().to_string()));
        }
        if let ConditionKind::Table(_) = condition.kind() {
            if let Some(v) = verify_condition_axiom(&condition, family)?.into_iter().next() {
                return Err(RegistryError::Axiom {
                    id: condition.id().to_string(),
                    left: v.left.id().to_string(),
                    right: v.right.id().to_string(),
                });
            }
        }
        self.conditions
            .insert(condition.id().to_string(), Arc::new(condition));
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<&Condition> {
        self.conditions.get(id).map(|c| c.as_ref())
    }

    pub fn iter(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.values().map(|c| c.as_ref())
    }

    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[&str]) -> StatementSet {
        items.iter().map(|s| Statement::new(*s)).collect()
    }

    fn family_sets(family: &FactFamily) -> BTreeSet<StatementSet> {
        family.facts().iter().map(|f| f.statements().clone()).collect()
    }

    #[test]
    fn closure_of_single_generator() {
        let fam = close_family(set(&["a", "b"]), vec![Fact::new("fa", ["a"])]).unwrap();
        let expected: BTreeSet<StatementSet> = [set(&[]), set(&["a"]), set(&["a", "b"])].into();
        assert_eq!(family_sets(&fam), expected);
        assert!(verify_family(&fam).is_empty());
        assert_eq!(fam.get("fa").unwrap().statements(), &set(&["a"]));
        assert_eq!(fam.get("a+b").unwrap().statements(), &set(&["a", "b"]));
        assert_eq!(fam.get(EMPTY_FACT_ID).unwrap().statements(), &set(&[]));
    }

    #[test]
    fn closure_without_generators() {
        let fam = close_family(set(&["a"]), vec![]).unwrap();
        let expected: BTreeSet<StatementSet> = [set(&[]), set(&["a"])].into();
        assert_eq!(family_sets(&fam), expected);
    }

    #[test]
    fn closure_adds_unions() {
        let fam = close_family(
            set(&["a", "b", "c"]),
            vec![Fact::new("x", ["a"]), Fact::new("y", ["b"])],
        )
        .unwrap();
        assert!(fam.contains(&set(&["a", "b"])));
        assert!(fam.contains(&set(&[])));
        assert_eq!(fam.len(), 5);
    }

    #[test]
    fn closure_rejects_unknown_statement() {
        let err = close_family(set(&["a"]), vec![Fact::new("x", ["zz"])]).unwrap_err();
        assert_eq!(
            err,
            FactsError::UnknownGeneratorStatement {
                fact: "x".into(),
                statement: "zz".into()
            }
        );
    }

    #[test]
    fn power_set_is_valid() {
        let shapes: [&[&str]; 4] = [&[], &["a"], &["b"], &["a", "b"]];
        let facts = shapes.iter().map(|s| Fact::anonymous(set(s)));
        let fam = FactFamily::from_facts(set(&["a", "b"]), facts);
        assert!(verify_family(&fam).is_empty());
    }

    #[test]
    fn missing_union_reported() {
        let shapes: [&[&str]; 4] = [&[], &["a"], &["b"], &["a", "b", "c"]];
        let facts = shapes.iter().map(|s| Fact::anonymous(set(s)));
        let fam = FactFamily::from_facts(set(&["a", "b", "c"]), facts);
        let v = verify_family(&fam);
        assert_eq!(
            v,
            vec![FamilyViolation::MissingUnion {
                left: "a".into(),
                right: "b".into()
            }]
        );
    }

    #[test]
    fn missing_empty_reported() {
        let fam = FactFamily::from_facts(set(&["a"]), [Fact::anonymous(set(&["a"]))]);
        assert_eq!(verify_family(&fam), vec![FamilyViolation::MissingEmpty]);
    }

    fn power_set(universe: &[&str]) -> FactFamily {
        let n = universe.len();
        let facts = (0..1u32 << n).map(|mask| {
            Fact::anonymous(
                (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| Statement::new(universe[i]))
                    .collect(),
            )
        });
        FactFamily::from_facts(set(universe), facts)
    }

    #[test]
    fn witness_evaluation() {
        let fam = power_set(&["s1", "s2"]);
        let ctx = EvalContext::new(&fam);
        let r = Condition::witness("r", ["s2"]);
        assert!(!r.eval(&Fact::new("t", ["s1"]), &ctx).unwrap());
        assert!(r.eval(&Fact::new("t", ["s1", "s2"]), &ctx).unwrap());
        assert!(Condition::constant("c", true)
            .eval(&Fact::new("t", ["s1"]), &ctx)
            .unwrap());
    }

    #[test]
    fn table_lookup_and_outside_fact() {
        let fam = power_set(&["a", "b"]);
        let ctx = EvalContext::new(&fam);
        let entries: Vec<(StatementSet, bool)> = fam
            .facts()
            .iter()
            .map(|f| (f.statements().clone(), f.statements().contains(&Statement::new("a"))))
            .collect();
        let t = Condition::table("t", entries.clone());
        for (stmts, value) in &entries {
            assert_eq!(t.eval(&Fact::anonymous(stmts.clone()), &ctx).unwrap(), *value);
        }
        let err = t.eval(&Fact::new("z", ["c"]), &ctx).unwrap_err();
        assert!(matches!(err, EvalError::FactOutsideTable { .. }));
    }

    #[test]
    fn table_axiom_violation() {
        let fam = power_set(&["a", "b"]);
        let t = Condition::table(
            "and",
            [
                (set(&[]), false),
                (set(&["a"]), false),
                (set(&["b"]), false),
                (set(&["a", "b"]), true),
            ],
        );
        let v = verify_condition_axiom(&t, &fam).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].left.statements(), &set(&["a"]));
        assert_eq!(v[0].right.statements(), &set(&["b"]));

        let mut reg = ConditionRegistry::new();
        assert!(matches!(reg.insert(t, &fam), Err(RegistryError::Axiom { .. })));
    }

    #[test]
    fn constants_and_witnesses_satisfy_axiom() {
        let fam = power_set(&["a", "b", "c"]);
        for c in [
            Condition::constant("f", false),
            Condition::constant("t", true),
            Condition::witness("w", ["b", "c"]),
        ] {
            assert!(verify_condition_axiom(&c, &fam).unwrap().is_empty(), "{c}");
        }
    }

    #[test]
    fn witness_axiom_holds_on_all_pairs() {
        let fam = power_set(&["a", "b", "c"]);
        let ctx = EvalContext::new(&fam);
        let r = Condition::witness("w", ["a", "c"]);
        for x in fam.facts() {
            for y in fam.facts() {
                let u = Fact::anonymous(x.statements().union(y.statements()).cloned().collect());
                assert_eq!(
                    r.eval(&u, &ctx).unwrap(),
                    r.eval(x, &ctx).unwrap() || r.eval(y, &ctx).unwrap()
                );
            }
        }
    }

    #[test]
    fn evidence_examples() {
        let fam = close_family(
            set(&["s1", "s2"]),
            vec![Fact::new("f1", ["s1"]), Fact::new("f2", ["s2"])],
        )
        .unwrap();
        let ctx = EvalContext::new(&fam);
        let ev = evidences(&Condition::witness("r", ["s2"]), &fam, &ctx).unwrap();
        assert!(ev.iter().all(|f| f.statements().contains(&Statement::new("s2"))));
        assert_eq!(ev.len(), 2);
        assert!(evidences(&Condition::constant("f", false), &fam, &ctx)
            .unwrap()
            .is_empty());
        assert_eq!(
            evidences(&Condition::constant("t", true), &fam, &ctx).unwrap().len(),
            fam.len()
        );
    }

    #[test]
    fn minimum_evidence_examples() {
        let fam = power_set(&["s1", "s2", "s3"]);
        let ctx = EvalContext::new(&fam);
        let min = minimum_evidences(&Condition::witness("r", ["s2", "s3"]), &fam, &ctx).unwrap();
        let got: BTreeSet<StatementSet> = min.iter().map(|f| f.statements().clone()).collect();
        assert_eq!(got, [set(&["s2"]), set(&["s3"])].into());

        let t = minimum_evidences(&Condition::constant("t", true), &fam, &ctx).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t[0].statements().is_empty());
        assert!(minimum_evidences(&Condition::constant("f", false), &fam, &ctx)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn monotone_on_power_set_of_five() {
        let fam = power_set(&["a", "b", "c", "d", "e"]);
        let ctx = EvalContext::new(&fam);
        let r = Condition::witness("r", ["b", "e"]);
        for x in fam.facts() {
            for y in fam.facts() {
                if x.is_subset(y) && r.eval(x, &ctx).unwrap() {
                    assert!(r.eval(y, &ctx).unwrap());
                }
            }
        }
    }
}
