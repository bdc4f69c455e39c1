//! The privilege space.
//!
//! A privilege is a finite set of atoms `(f/E, R)`: an employment guarded by
//! a set of conditions, read conjunctively (an empty set means always
//! granted). Privileges merge with `*` and compose with `+`.

mod forms;
mod render;

pub use forms::{
    compliance_condition, compliant, congruence_condition, congruent, normal_form, pulse,
    structural_eq, trace, Arrangement, ArrangementError, Coefficient, HighOrder, NormalForm,
    PulsedForm, TraceMatrix,
};
pub use render::RenderOptions;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::algebra::{merge_employment, Employment, EntitySet, FunctionSymbol};
use crate::facts::Condition;

/// How mergence combines the condition sets of two atoms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MergeMode {
    /// `R₁ ∩ R₂`.
    #[default]
    Intersection,
    /// `R₁ ∪ R₂`: the merged atom needs both sides' conditions.
    Union,
}

impl MergeMode {
    fn combine(self, a: &BTreeSet<Condition>, b: &BTreeSet<Condition>) -> BTreeSet<Condition> {
        match self {
            MergeMode::Intersection => a.intersection(b).cloned().collect(),
            MergeMode::Union => a.union(b).cloned().collect(),
        }
    }
}

impl fmt::Display for MergeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MergeMode::Intersection => "intersection",
            MergeMode::Union => "union",
        })
    }
}

impl FromStr for MergeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "intersection" => Ok(MergeMode::Intersection),
            "union" => Ok(MergeMode::Union),
            other => Err(format!("unknown merge mode `{other}` (expected intersection or union)")),
        }
    }
}

/// `(f/E, R)` with a non-empty employment.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrivilegeAtom {
    employment: Employment,
    conditions: BTreeSet<Condition>,
}

impl PrivilegeAtom {
    /// `None` when the employment is empty.
    pub fn new<I>(employment: Employment, conditions: I) -> Option<Self>
    where
        I: IntoIterator<Item = Condition>,
    {
        if employment.is_empty() {
            return None;
        }
        Some(Self {
            employment,
            conditions: conditions.into_iter().collect(),
        })
    }

    pub fn unconditioned(employment: Employment) -> Option<Self> {
        Self::new(employment, [])
    }

    pub fn employment(&self) -> &Employment {
        &self.employment
    }

    pub fn function(&self) -> &FunctionSymbol {
        self.employment.function().expect("atoms are never empty")
    }

    pub fn entities(&self) -> &EntitySet {
        self.employment.entities().expect("atoms are never empty")
    }

    pub fn conditions(&self) -> &BTreeSet<Condition> {
        &self.conditions
    }

    pub fn is_unconditioned(&self) -> bool {
        self.conditions.is_empty()
    }

    pub fn merge(&self, other: &PrivilegeAtom, mode: MergeMode) -> Option<PrivilegeAtom> {
        PrivilegeAtom::new(
            merge_employment(&self.employment, &other.employment),
            mode.combine(&self.conditions, &other.conditions),
        )
    }
}

/// A finite set of privilege atoms. The empty set is the identity for `+`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Privilege(BTreeSet<PrivilegeAtom>);

impl Privilege {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `{(f/E, ∅)}`, or the empty privilege when `f/E` is empty.
    pub fn employment(employment: Employment) -> Self {
        PrivilegeAtom::unconditioned(employment).into_iter().collect()
    }

    /// `{(f/*, ∅)}`.
    pub fn function(function: FunctionSymbol) -> Self {
        Self::employment(Employment::universal(function))
    }

    pub fn atoms(&self) -> impl Iterator<Item = &PrivilegeAtom> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn insert(&mut self, atom: PrivilegeAtom) -> bool {
        self.0.insert(atom)
    }

    pub fn is_unconditioned(&self) -> bool {
        self.0.iter().all(PrivilegeAtom::is_unconditioned)
    }

    /// Every condition mentioned by any atom.
    pub fn conditions(&self) -> BTreeSet<&Condition> {
        self.0.iter().flat_map(|a| a.conditions.iter()).collect()
    }

    pub fn merge(&self, other: &Privilege, mode: MergeMode) -> Privilege {
        merge(self, other, mode)
    }

    pub fn compose(&self, other: &Privilege) -> Privilege {
        compose(self, other)
    }

    /// Restricts every atom's entities to `scope`; atoms that vanish are dropped.
    pub fn restrict(&self, scope: &EntitySet) -> Privilege {
        self.0
            .iter()
            .filter_map(|a| PrivilegeAtom::new(a.employment.restrict(scope), a.conditions.clone()))
            .collect()
    }

    /// Adds `condition` to every atom's condition set.
    pub fn guarded_by(&self, condition: &Condition) -> Privilege {
        self.0
            .iter()
            .map(|a| {
                let mut conditions = a.conditions.clone();
                conditions.insert(condition.clone());
                PrivilegeAtom {
                    employment: a.employment.clone(),
                    conditions,
                }
            })
            .collect()
    }
}

impl FromIterator<PrivilegeAtom> for Privilege {
    fn from_iter<T: IntoIterator<Item = PrivilegeAtom>>(iter: T) -> Self {
        Privilege(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Privilege {
    type Item = &'a PrivilegeAtom;
    type IntoIter = std::collections::btree_set::Iter<'a, PrivilegeAtom>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// `u * v`: pairwise atom mergence, dropping empty employments.
pub fn merge(u: &Privilege, v: &Privilege, mode: MergeMode) -> Privilege {
    u.0.iter()
        .flat_map(|a| v.0.iter().filter_map(move |b| a.merge(b, mode)))
        .collect()
}

/// `u + v`: union of atoms.
pub fn compose(u: &Privilege, v: &Privilege) -> Privilege {
    u.0.union(&v.0).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Category, Entity};

    fn tech_doc() -> EntitySet {
        let mut c = Category::new("TechDoc");
        c.insert(Entity::new("doc1"));
        c.entity_set()
    }

    fn fun(name: &str) -> Privilege {
        Privilege::function(FunctionSymbol::new(name))
    }

    fn sum(names: &[&str]) -> Privilege {
        names.iter().fold(Privilege::empty(), |acc, n| acc.compose(&fun(n)))
    }

    #[test]
    fn session_derivations() {
        let reader = sum(&["read", "list"]).restrict(&tech_doc());
        let bob = reader.compose(&fun("write").restrict(&tech_doc()));
        let officepc = sum(&["read", "list", "write", "remove"]);
        let phone = sum(&["read", "list"]);

        let s1 = bob.merge(&officepc, MergeMode::Intersection);
        assert_eq!(s1, sum(&["read", "list", "write"]).restrict(&tech_doc()));
        let s2 = bob.merge(&phone, MergeMode::Intersection);
        assert_eq!(s2, reader);
        assert!(bob.merge(&Privilege::empty(), MergeMode::Union).is_empty());
    }

    #[test]
    fn compose_identities() {
        let u = sum(&["read", "list"]);
        assert_eq!(u.compose(&Privilege::empty()), u);
        assert_eq!(u.compose(&u), u);
    }

    #[test]
    fn condition_combination_modes() {
        let r1 = Condition::witness("r1", ["s1"]);
        let r2 = Condition::witness("r2", ["s2"]);
        let a = fun("read").guarded_by(&r1);
        let b = fun("read").guarded_by(&r2).guarded_by(&r1);

        let inter = a.merge(&b, MergeMode::Intersection);
        let atom = inter.atoms().next().unwrap();
        assert_eq!(atom.conditions().len(), 1);

        let union = a.merge(&b, MergeMode::Union);
        assert_eq!(union.atoms().next().unwrap().conditions().len(), 2);
    }

    #[test]
    fn empty_employment_never_stored() {
        assert!(PrivilegeAtom::unconditioned(Employment::Empty).is_none());
        assert!(Privilege::employment(Employment::new(
            FunctionSymbol::new("read"),
            EntitySet::empty()
        ))
        .is_empty());
    }

    #[test]
    fn merge_mode_parses() {
        assert_eq!("union".parse::<MergeMode>().unwrap(), MergeMode::Union);
        assert_eq!(MergeMode::default().to_string(), "intersection");
        assert!("both".parse::<MergeMode>().is_err());
    }
}
