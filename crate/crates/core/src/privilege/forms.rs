//! Arrangements and the forms taken against them: normal forms, pulsed
//! forms and trace matrices, plus the congruence and compliance relations
//! built on pulsed forms.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::{merge, Privilege, PrivilegeAtom};
use crate::algebra::{merge_employment, Employment, Entity, EntitySet, FunctionSymbol};
use crate::facts::{Condition, ConditionKind, EvalContext, EvalError, Fact, FactSequence, Relation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrangementError {
    #[error("arrangement element {index} is empty")]
    EmptyElement { index: usize },
    #[error("arrangement elements `{left}` and `{right}` overlap")]
    Overlap { left: String, right: String },
    #[error("arrangement element `{employment}` carries conditions")]
    Conditioned { employment: String },
}

/// A finite basis of pairwise merge-disjoint employments.
///
/// Order only affects display (trace matrix rows).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Arrangement {
    basis: Vec<Employment>,
}

impl Arrangement {
    pub fn new(basis: Vec<Employment>) -> Result<Self, ArrangementError> {
        if let Some(index) = basis.iter().position(Employment::is_empty) {
            return Err(ArrangementError::EmptyElement { index });
        }
        for (i, m) in basis.iter().enumerate() {
            for n in &basis[i + 1..] {
                if !merge_employment(m, n).is_empty() {
                    return Err(ArrangementError::Overlap {
                        left: m.to_string(),
                        right: n.to_string(),
                    });
                }
            }
        }
        Ok(Self { basis })
    }

    /// Basis made from the atoms of unconditioned privileges, in order.
    pub fn from_privileges<'a, I>(parts: I) -> Result<Self, ArrangementError>
    where
        I: IntoIterator<Item = &'a Privilege>,
    {
        let mut basis = Vec::new();
        for p in parts {
            for atom in p.atoms() {
                if !atom.is_unconditioned() {
                    return Err(ArrangementError::Conditioned {
                        employment: atom.employment().to_string(),
                    });
                }
                basis.push(atom.employment().clone());
            }
        }
        Self::new(basis)
    }

    /// One singleton employment per `(function, entity)` pair.
    pub fn atomic<'a, F, E>(functions: F, entities: E) -> Self
    where
        F: IntoIterator<Item = &'a FunctionSymbol>,
        E: IntoIterator<Item = &'a Entity> + Clone,
    {
        let basis = functions
            .into_iter()
            .flat_map(|f| {
                entities
                    .clone()
                    .into_iter()
                    .map(move |e| Employment::new(f.clone(), EntitySet::singleton(e.clone())))
            })
            .collect();
        Self::new(basis).expect("distinct singletons never overlap")
    }

    pub fn basis(&self) -> &[Employment] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }
}

/// A disjunction of conjunctions of conditions.
///
/// Constant conditions are folded away: a conjunction holding a constant
/// false is dropped, constant trues are removed from conjunctions, and a
/// disjunction holding an empty conjunction is constant true.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Coefficient {
    terms: BTreeSet<BTreeSet<Condition>>,
}

impl Coefficient {
    pub fn constant(value: bool) -> Self {
        let mut terms = BTreeSet::new();
        if value {
            terms.insert(BTreeSet::new());
        }
        Self { terms }
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = BTreeSet<Condition>>,
    {
        let mut folded = BTreeSet::new();
        for term in terms {
            if term.iter().any(|c| c.as_constant() == Some(false)) {
                continue;
            }
            let term: BTreeSet<Condition> = term
                .into_iter()
                .filter(|c| c.as_constant() != Some(true))
                .collect();
            if term.is_empty() {
                return Self::constant(true);
            }
            folded.insert(term);
        }
        Self { terms: folded }
    }

    pub fn terms(&self) -> &BTreeSet<BTreeSet<Condition>> {
        &self.terms
    }

    pub fn is_false(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_true(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().is_some_and(BTreeSet::is_empty)
    }

    pub fn eval(&self, fact: &Fact, ctx: &EvalContext<'_>) -> Result<bool, EvalError> {
        for term in &self.terms {
            let mut all = true;
            for c in term {
                if !c.eval(fact, ctx)? {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_false() {
            return f.write_str("false");
        }
        if self.is_true() {
            return f.write_str("true");
        }
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            for (j, c) in term.iter().enumerate() {
                if j > 0 {
                    f.write_str(" & ")?;
                }
                write!(f, "{c}")?;
            }
        }
        Ok(())
    }
}

/// One coefficient per basis element, in basis order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    arrangement: Arrangement,
    coefficients: Vec<Coefficient>,
}

impl NormalForm {
    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    pub fn coefficients(&self) -> &[Coefficient] {
        &self.coefficients
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Employment, &Coefficient)> {
        self.arrangement.basis.iter().zip(&self.coefficients)
    }

    pub fn pulse(&self, fact: &Fact, ctx: &EvalContext<'_>) -> Result<PulsedForm, EvalError> {
        let bits = self
            .coefficients
            .iter()
            .map(|c| c.eval(fact, ctx))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PulsedForm {
            arrangement: self.arrangement.clone(),
            bits,
        })
    }

    /// `Σ (mᵢ, term)` over every conjunction of every coefficient.
    pub fn to_privilege(&self) -> Privilege {
        self.entries()
            .flat_map(|(m, c)| {
                c.terms()
                    .iter()
                    .filter_map(move |term| PrivilegeAtom::new(m.clone(), term.iter().cloned()))
            })
            .collect()
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, c) in self.entries() {
            writeln!(f, "{m}: {c}")?;
        }
        Ok(())
    }
}

/// Projects `p` onto `arrangement`.
///
/// The coefficient of `mᵢ` is the disjunction, over atoms whose employment
/// overlaps `mᵢ`, of each atom's condition conjunction.
pub fn normal_form(p: &Privilege, arrangement: &Arrangement) -> NormalForm {
    let coefficients = arrangement
        .basis
        .iter()
        .map(|m| {
            Coefficient::from_terms(
                p.atoms()
                    .filter(|a| !merge_employment(a.employment(), m).is_empty())
                    .map(|a| a.conditions().clone()),
            )
        })
        .collect();
    NormalForm {
        arrangement: arrangement.clone(),
        coefficients,
    }
}

/// Coefficients of a normal form evaluated at one fact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PulsedForm {
    arrangement: Arrangement,
    bits: Vec<bool>,
}

impl PulsedForm {
    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

impl fmt::Display for PulsedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (m, b)) in self.arrangement.basis.iter().zip(&self.bits).enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{m}={}", u8::from(*b))?;
        }
        Ok(())
    }
}

pub fn pulse(
    p: &Privilege,
    arrangement: &Arrangement,
    fact: &Fact,
    ctx: &EvalContext<'_>,
) -> Result<PulsedForm, EvalError> {
    normal_form(p, arrangement).pulse(fact, ctx)
}

/// Pulsed forms across a fact sequence; rows are basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceMatrix {
    arrangement: Arrangement,
    sequence: FactSequence,
    rows: Vec<Vec<bool>>,
}

impl TraceMatrix {
    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    pub fn sequence(&self) -> &FactSequence {
        &self.sequence
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    pub fn cell(&self, row: usize, column: usize) -> bool {
        self.rows[row][column]
    }

    pub fn column(&self, column: usize) -> Vec<bool> {
        self.rows.iter().map(|r| r[column]).collect()
    }

    /// Header `employment,<fact-id>,...`, then one `f/E,1,0,...` row per
    /// basis element.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("employment");
        for fact in self.sequence.facts() {
            out.push(',');
            out.push_str(fact.id());
        }
        out.push('\n');
        for (m, row) in self.arrangement.basis.iter().zip(&self.rows) {
            out.push_str(&m.to_string());
            for &b in row {
                out.push_str(if b { ",1" } else { ",0" });
            }
            out.push('\n');
        }
        out
    }
}

pub fn trace(
    p: &Privilege,
    arrangement: &Arrangement,
    sequence: &FactSequence,
    ctx: &EvalContext<'_>,
) -> Result<TraceMatrix, EvalError> {
    let nf = normal_form(p, arrangement);
    let mut rows = vec![Vec::with_capacity(sequence.len()); arrangement.len()];
    for fact in sequence.facts() {
        let pf = nf.pulse(fact, ctx)?;
        for (row, bit) in rows.iter_mut().zip(pf.bits) {
            row.push(bit);
        }
    }
    Ok(TraceMatrix {
        arrangement: arrangement.clone(),
        sequence: sequence.clone(),
        rows,
    })
}

/// Same normal form, compared extensionally on every fact of `ctx.family`.
pub fn structural_eq(
    u: &Privilege,
    v: &Privilege,
    arrangement: &Arrangement,
    ctx: &EvalContext<'_>,
) -> Result<bool, EvalError> {
    let nu = normal_form(u, arrangement);
    let nv = normal_form(v, arrangement);
    for (cu, cv) in nu.coefficients.iter().zip(&nv.coefficients) {
        if cu == cv {
            continue;
        }
        for fact in ctx.family.facts() {
            if cu.eval(fact, ctx)? != cv.eval(fact, ctx)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `u ∼ₜ v`: identical pulsed forms at `fact`.
pub fn congruent(
    u: &Privilege,
    v: &Privilege,
    arrangement: &Arrangement,
    fact: &Fact,
    ctx: &EvalContext<'_>,
) -> Result<bool, EvalError> {
    Ok(pulse(u, arrangement, fact, ctx)?.bits == pulse(v, arrangement, fact, ctx)?.bits)
}

/// `p ⊑ₜ q`: `p * q` is congruent to `q` at `fact`. Mergence uses `ctx.mode`.
pub fn compliant(
    p: &Privilege,
    q: &Privilege,
    arrangement: &Arrangement,
    fact: &Fact,
    ctx: &EvalContext<'_>,
) -> Result<bool, EvalError> {
    congruent(&merge(p, q, ctx.mode), q, arrangement, fact, ctx)
}

/// Condition that asks a relation between two captured privileges.
///
/// Without a captured arrangement, evaluation uses the one in the
/// [`EvalContext`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HighOrder {
    relation: Relation,
    left: Arc<Privilege>,
    right: Arc<Privilege>,
    arrangement: Option<Arc<Arrangement>>,
}

impl HighOrder {
    pub fn new(
        relation: Relation,
        left: Privilege,
        right: Privilege,
        arrangement: Option<Arrangement>,
    ) -> Self {
        Self {
            relation,
            left: Arc::new(left),
            right: Arc::new(right),
            arrangement: arrangement.map(Arc::new),
        }
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn left(&self) -> &Privilege {
        &self.left
    }

    pub fn right(&self) -> &Privilege {
        &self.right
    }

    pub fn arrangement(&self) -> Option<&Arrangement> {
        self.arrangement.as_deref()
    }

    pub(crate) fn eval(&self, id: &str, fact: &Fact, ctx: &EvalContext<'_>) -> Result<bool, EvalError> {
        let arrangement = self
            .arrangement
            .as_deref()
            .or(ctx.arrangement)
            .ok_or_else(|| EvalError::MissingArrangement {
                condition: id.to_string(),
            })?;
        match self.relation {
            Relation::Compliance => compliant(&self.left, &self.right, arrangement, fact, ctx),
            Relation::Congruence => congruent(&self.left, &self.right, arrangement, fact, ctx),
        }
    }
}

/// `[p ⊑ q]` as a condition, with `arrangement` captured.
pub fn compliance_condition(p: &Privilege, q: &Privilege, arrangement: &Arrangement) -> Condition {
    Condition::new(
        format!("[{p} <: {q}]"),
        ConditionKind::HighOrder(HighOrder::new(
            Relation::Compliance,
            p.clone(),
            q.clone(),
            Some(arrangement.clone()),
        )),
    )
}

/// `[u ∼ v]` as a condition, with `arrangement` captured.
pub fn congruence_condition(u: &Privilege, v: &Privilege, arrangement: &Arrangement) -> Condition {
    Condition::new(
        format!("[{u} ~ {v}]"),
        ConditionKind::HighOrder(HighOrder::new(
            Relation::Congruence,
            u.clone(),
            v.clone(),
            Some(arrangement.clone()),
        )),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Category;
    use crate::facts::{close_family, FactFamily, Statement, StatementSet};
    use crate::privilege::MergeMode;

    fn fsym(n: &str) -> FunctionSymbol {
        FunctionSymbol::new(n)
    }

    fn fun(n: &str) -> Privilege {
        Privilege::function(fsym(n))
    }

    fn sum(names: &[&str]) -> Privilege {
        names.iter().fold(Privilege::empty(), |acc, n| acc.compose(&fun(n)))
    }

    fn tech_doc() -> EntitySet {
        let mut c = Category::new("TechDoc");
        c.insert(Entity::new("doc1"));
        c.entity_set()
    }

    fn m4() -> Arrangement {
        Arrangement::from_privileges(&[fun("read"), fun("list"), fun("write"), fun("remove")]).unwrap()
    }

    struct Example {
        session1: Privilege,
        session2: Privilege,
    }

    fn example() -> Example {
        let reader = sum(&["read", "list"]).restrict(&tech_doc());
        let bob = reader.compose(&fun("write").restrict(&tech_doc()));
        Example {
            session1: bob.merge(&sum(&["read", "list", "write", "remove"]), MergeMode::Intersection),
            session2: bob.merge(&sum(&["read", "list"]), MergeMode::Intersection),
        }
    }

    fn trivial() -> FactFamily {
        FactFamily::trivial()
    }

    fn bits(nf: &NormalForm) -> Vec<bool> {
        nf.coefficients().iter().map(|c| !c.is_false()).collect()
    }

    #[test]
    fn arrangement_rejects_overlap() {
        let err = Arrangement::from_privileges(&[fun("read"), fun("read")]).unwrap_err();
        assert!(matches!(err, ArrangementError::Overlap { .. }));
        let err = Arrangement::from_privileges(&[
            fun("read").restrict(&tech_doc()),
            fun("read").restrict(&EntitySet::singleton("doc1")),
        ])
        .unwrap_err();
        assert_eq!(
            err,
            ArrangementError::Overlap {
                left: "read/TechDoc".into(),
                right: "read/{doc1}".into()
            }
        );
    }

    #[test]
    fn arrangement_accepts_disjoint_categories() {
        let m = Arrangement::from_privileges(&[
            fun("read").restrict(&EntitySet::finite(["a"])),
            fun("read").restrict(&EntitySet::finite(["b"])),
        ])
        .unwrap();
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn arrangement_rejects_conditions() {
        let g = fun("read").guarded_by(&Condition::constant("c", true));
        assert!(matches!(
            Arrangement::from_privileges(&[g]),
            Err(ArrangementError::Conditioned { .. })
        ));
    }

    #[test]
    fn session_normal_forms() {
        let ex = example();
        assert_eq!(bits(&normal_form(&ex.session1, &m4())), [true, true, true, false]);
        assert_eq!(bits(&normal_form(&ex.session2, &m4())), [true, true, false, false]);
        assert!(normal_form(&Privilege::empty(), &m4())
            .coefficients()
            .iter()
            .all(Coefficient::is_false));
    }

    #[test]
    fn session_equivalences() {
        let ex = example();
        let fam = trivial();
        let ctx = EvalContext::new(&fam);
        let direct = sum(&["read", "list"]).restrict(&tech_doc());
        assert!(structural_eq(&ex.session2, &direct, &m4(), &ctx).unwrap());
        assert!(structural_eq(&ex.session1, &ex.session1.compose(&ex.session1), &m4(), &ctx).unwrap());
        let t = &fam.facts()[0];
        assert!(!congruent(&ex.session1, &ex.session2, &m4(), t, &ctx).unwrap());
        assert!(congruent(&ex.session1, &ex.session1, &m4(), t, &ctx).unwrap());
    }

    #[test]
    fn session_compliance() {
        let ex = example();
        let fam = trivial();
        let ctx = EvalContext::new(&fam);
        let t = &fam.facts()[0];
        let doc1 = EntitySet::singleton("doc1");
        let read_doc1 = fun("read").restrict(&doc1);
        let write_doc1 = fun("write").restrict(&doc1);
        assert!(compliant(&ex.session1, &read_doc1, &m4(), t, &ctx).unwrap());
        assert!(!compliant(&ex.session2, &write_doc1, &m4(), t, &ctx).unwrap());
        assert!(compliant(&ex.session1, &ex.session1, &m4(), t, &ctx).unwrap());
    }

    #[test]
    fn high_order_conditions() {
        let ex = example();
        let fam = trivial();
        let ctx = EvalContext::new(&fam);
        let t = &fam.facts()[0];
        let doc1 = EntitySet::singleton("doc1");
        let read_doc1 = fun("read").restrict(&doc1);

        let cond = compliance_condition(&ex.session1, &read_doc1, &m4());
        assert!(cond.eval(t, &ctx).unwrap());
        let readguard = fun("read").guarded_by(&cond);
        assert_eq!(pulse(&readguard, &m4(), t, &ctx).unwrap().bits(), [true, false, false, false]);

        let vacuous = compliance_condition(&ex.session2, &Privilege::empty(), &m4());
        assert!(vacuous.eval(t, &ctx).unwrap());

        assert!(congruence_condition(&ex.session1, &ex.session1, &m4()).eval(t, &ctx).unwrap());
        assert!(!congruence_condition(&ex.session1, &ex.session2, &m4()).eval(t, &ctx).unwrap());
    }

    #[test]
    fn uncaptured_high_order_needs_arrangement() {
        let fam = trivial();
        let t = &fam.facts()[0];
        let c = Condition::new(
            "[a <: b]",
            ConditionKind::HighOrder(HighOrder::new(Relation::Compliance, fun("a"), fun("b"), None)),
        );
        let ctx = EvalContext::new(&fam);
        assert!(matches!(c.eval(t, &ctx), Err(EvalError::MissingArrangement { .. })));
        let m = m4();
        assert!(c.eval(t, &ctx.with_arrangement(&m)).unwrap());
    }

    fn witness_family() -> FactFamily {
        let universe: StatementSet = ["s1", "s2"].iter().map(|s| Statement::new(*s)).collect();
        close_family(
            universe,
            vec![Fact::new("t0", ["s1"]), Fact::new("t1", ["s1", "s2"])],
        )
        .unwrap()
    }

    #[test]
    fn witness_pulse() {
        let fam = witness_family();
        let ctx = EvalContext::new(&fam);
        let r = Condition::witness("r", ["s2"]);
        let p = fun("read").guarded_by(&r);
        let m = m4();
        let t0 = fam.get("t0").unwrap();
        let t1 = fam.get("t1").unwrap();
        assert!(!pulse(&p, &m, t0, &ctx).unwrap().bits()[0]);
        assert!(pulse(&p, &m, t1, &ctx).unwrap().bits()[0]);

        let seq = fam.sequence(["t0", "t1"]).unwrap();
        let tm = trace(&p, &m, &seq, &ctx).unwrap();
        assert_eq!(tm.column(0), pulse(&p, &m, t0, &ctx).unwrap().bits());
        assert_eq!(tm.column(1), pulse(&p, &m, t1, &ctx).unwrap().bits());
        assert_eq!(
            tm.to_csv(),
            "employment,t0,t1\nread/*,0,1\nlist/*,0,0\nwrite/*,0,0\nremove/*,0,0\n"
        );
    }

    #[test]
    fn coefficient_folding() {
        let t = Condition::constant("yes", true);
        let f = Condition::constant("no", false);
        let r = Condition::witness("r", ["s"]);
        assert!(Coefficient::from_terms([[t.clone()].into()]).is_true());
        assert!(Coefficient::from_terms([[f.clone(), r.clone()].into()]).is_false());
        let c = Coefficient::from_terms([[t, r.clone()].into(), [f].into()]);
        assert_eq!(c.to_string(), "r");
        assert_eq!(Coefficient::constant(false).to_string(), "false");
    }

    #[test]
    fn normal_form_round_trip_is_equivalent() {
        let fam = witness_family();
        let ctx = EvalContext::new(&fam);
        let r1 = Condition::witness("r1", ["s1"]);
        let r2 = Condition::witness("r2", ["s2"]);
        let p = fun("read")
            .guarded_by(&r1)
            .compose(&fun("read").guarded_by(&r2).guarded_by(&r1))
            .compose(&fun("write").restrict(&tech_doc()));
        let nf = normal_form(&p, &m4());
        assert!(structural_eq(&p, &nf.to_privilege(), &m4(), &ctx).unwrap());
    }
}
