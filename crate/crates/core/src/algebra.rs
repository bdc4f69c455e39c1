//! Function symbols, entities and employments.
//!
//! An employment `f/E` says that function `f` is employed on every entity of
//! `E`. Two employments merge (`*`) into the employment of their common
//! function over the intersection of their entity sets, and compose (`+`) by
//! set union. Entity sets are kept whole rather than expanded to singletons;
//! extensional equality (the set of `(function, entity)` grants) is the ground
//! truth.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Name of an operation, e.g. `read`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FunctionSymbol(Arc<str>);

impl FunctionSymbol {
    pub fn new(name: impl Into<String>) -> Self {
        Self(Arc::from(name.into()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for FunctionSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Name of a protected object, e.g. `doc1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Entity(Arc<str>);

impl Entity {
    pub fn new(name: impl Into<String>) -> Self {
        Self(Arc::from(name.into()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Entity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A named, growing collection of entities (`let doc1 is TechDoc`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Category {
    name: String,
    members: BTreeSet<Entity>,
}

impl Category {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            members: BTreeSet::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn members(&self) -> &BTreeSet<Entity> {
        &self.members
    }

    /// Adds `entity`; returns false if it was already a member.
    pub fn insert(&mut self, entity: Entity) -> bool {
        self.members.insert(entity)
    }

    /// The entity set this category denotes, labelled with the category name.
    pub fn entity_set(&self) -> EntitySet {
        EntitySet::Finite {
            members: self.members.clone(),
            label: Some(self.name.clone()),
        }
    }
}

/// Either every entity, or an explicit finite set.
///
/// A finite set may carry the name of the category it came from. The label
/// is display-only: equality, ordering and hashing look at members alone.
#[derive(Clone, Debug)]
pub enum EntitySet {
    Universal,
    Finite {
        members: BTreeSet<Entity>,
        label: Option<String>,
    },
}

impl EntitySet {
    pub fn finite<I, E>(members: I) -> Self
    where
        I: IntoIterator<Item = E>,
        E: Into<Entity>,
    {
        EntitySet::Finite {
            members: members.into_iter().map(Into::into).collect(),
            label: None,
        }
    }

    pub fn singleton(entity: impl Into<Entity>) -> Self {
        Self::finite([entity.into()])
    }

    pub fn empty() -> Self {
        Self::finite(Vec::<Entity>::new())
    }

    pub fn is_universal(&self) -> bool {
        matches!(self, EntitySet::Universal)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, EntitySet::Finite { members, .. } if members.is_empty())
    }

    /// Members of a finite set; `None` for the universal set.
    pub fn members(&self) -> Option<&BTreeSet<Entity>> {
        match self {
            EntitySet::Universal => None,
            EntitySet::Finite { members, .. } => Some(members),
        }
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            EntitySet::Finite { label, .. } => label.as_deref(),
            EntitySet::Universal => None,
        }
    }

    pub fn contains(&self, entity: &Entity) -> bool {
        match self {
            EntitySet::Universal => true,
            EntitySet::Finite { members, .. } => members.contains(entity),
        }
    }

    pub fn is_subset(&self, other: &EntitySet) -> bool {
        match (self, other) {
            (_, EntitySet::Universal) => true,
            (EntitySet::Universal, EntitySet::Finite { .. }) => false,
            (EntitySet::Finite { members: a, .. }, EntitySet::Finite { members: b, .. }) => {
                a.is_subset(b)
            }
        }
    }

    /// Intersection. A result equal to one operand keeps that operand's label.
    pub fn intersect(&self, other: &EntitySet) -> EntitySet {
        match (self, other) {
            (EntitySet::Universal, x) | (x, EntitySet::Universal) => x.clone(),
            (
                EntitySet::Finite {
                    members: a,
                    label: la,
                },
                EntitySet::Finite {
                    members: b,
                    label: lb,
                },
            ) => {
                let members: BTreeSet<Entity> = a.intersection(b).cloned().collect();
                let label = if &members == a {
                    la.clone()
                } else if &members == b {
                    lb.clone()
                } else {
                    None
                };
                EntitySet::Finite { members, label }
            }
        }
    }
}

impl PartialEq for EntitySet {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for EntitySet {}

impl PartialOrd for EntitySet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EntitySet {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (EntitySet::Universal, EntitySet::Universal) => Ordering::Equal,
            (EntitySet::Universal, EntitySet::Finite { .. }) => Ordering::Less,
            (EntitySet::Finite { .. }, EntitySet::Universal) => Ordering::Greater,
            (EntitySet::Finite { members: a, .. }, EntitySet::Finite { members: b, .. }) => {
                a.cmp(b)
            }
        }
    }
}

impl Hash for EntitySet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            EntitySet::Universal => 0u8.hash(state),
            EntitySet::Finite { members, .. } => {
                1u8.hash(state);
                members.hash(state);
            }
        }
    }
}

/// Renders `*` for the universal set, the category label when present, and
/// `{e1 e2}` otherwise.
impl fmt::Display for EntitySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntitySet::Universal => f.write_str("*"),
            EntitySet::Finite {
                label: Some(label), ..
            } => f.write_str(label),
            EntitySet::Finite { members, .. } => {
                f.write_str("{")?;
                for (i, e) in members.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str("}")
            }
        }
    }
}

impl From<&str> for Entity {
    fn from(s: &str) -> Self {
        Entity::new(s)
    }
}

impl From<String> for Entity {
    fn from(s: String) -> Self {
        Entity::new(s)
    }
}

/// `f/E`, or the empty employment.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Employment {
    Empty,
    Atom {
        function: FunctionSymbol,
        entities: EntitySet,
    },
}

impl Employment {
    /// Builds `f/E`, normalizing `f/∅` to [`Employment::Empty`].
    pub fn new(function: FunctionSymbol, entities: EntitySet) -> Self {
        if entities.is_empty() {
            Employment::Empty
        } else {
            Employment::Atom { function, entities }
        }
    }

    /// `f` over every entity.
    pub fn universal(function: FunctionSymbol) -> Self {
        Employment::Atom {
            function,
            entities: EntitySet::Universal,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Employment::Empty)
    }

    pub fn function(&self) -> Option<&FunctionSymbol> {
        match self {
            Employment::Atom { function, .. } => Some(function),
            Employment::Empty => None,
        }
    }

    pub fn entities(&self) -> Option<&EntitySet> {
        match self {
            Employment::Atom { entities, .. } => Some(entities),
            Employment::Empty => None,
        }
    }

    /// Restricts the entity set to `scope`.
    pub fn restrict(&self, scope: &EntitySet) -> Employment {
        match self {
            Employment::Empty => Employment::Empty,
            Employment::Atom { function, entities } => {
                Employment::new(function.clone(), entities.intersect(scope))
            }
        }
    }

    /// Does this employment grant `function` on `entity`?
    pub fn grants(&self, function: &FunctionSymbol, entity: &Entity) -> bool {
        match self {
            Employment::Empty => false,
            Employment::Atom {
                function: f,
                entities,
            } => f == function && entities.contains(entity),
        }
    }
}

/// Renders `f/E` using [`EntitySet`]'s display, or `0` for the empty employment.
impl fmt::Display for Employment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Employment::Empty => f.write_str("0"),
            Employment::Atom { function, entities } => write!(f, "{function}/{entities}"),
        }
    }
}

/// Mergence of two employments.
///
/// Symmetric: the result is `f/(E₁ ∩ E₂)` when both sides employ the same
/// function and the entity sets overlap, and empty otherwise.
pub fn merge_employment(a: &Employment, b: &Employment) -> Employment {
    match (a, b) {
        (
            Employment::Atom {
                function: fa,
                entities: ea,
            },
            Employment::Atom {
                function: fb,
                entities: eb,
            },
        ) if fa == fb => Employment::new(fa.clone(), ea.intersect(eb)),
        _ => Employment::Empty,
    }
}

/// A finite set of non-empty employments.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EmploymentSet(BTreeSet<Employment>);

impl EmploymentSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, employment: Employment) -> bool {
        if employment.is_empty() {
            return false;
        }
        self.0.insert(employment)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Employment> {
        self.0.iter()
    }

    pub fn contains(&self, employment: &Employment) -> bool {
        self.0.contains(employment)
    }
}

impl FromIterator<Employment> for EmploymentSet {
    fn from_iter<T: IntoIterator<Item = Employment>>(iter: T) -> Self {
        let mut set = EmploymentSet::new();
        for e in iter {
            set.insert(e);
        }
        set
    }
}

impl IntoIterator for EmploymentSet {
    type Item = Employment;
    type IntoIter = std::collections::btree_set::IntoIter<Employment>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a EmploymentSet {
    type Item = &'a Employment;
    type IntoIter = std::collections::btree_set::Iter<'a, Employment>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// `A * B`: every non-empty pairwise mergence.
pub fn merge_sets(a: &EmploymentSet, b: &EmploymentSet) -> EmploymentSet {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| merge_employment(x, y)))
        .collect()
}

/// `A + B`: set union.
pub fn compose_sets(a: &EmploymentSet, b: &EmploymentSet) -> EmploymentSet {
    a.iter().chain(b.iter()).cloned().collect()
}

/// `F/E` as one atom per function, all sharing `entities`.
pub fn expand<'a, I>(functions: I, entities: &EntitySet) -> EmploymentSet
where
    I: IntoIterator<Item = &'a FunctionSymbol>,
{
    functions
        .into_iter()
        .map(|f| Employment::new(f.clone(), entities.clone()))
        .collect()
}

/// `A/C`: every atom's entities intersected with `scope`; empty results dropped.
pub fn restrict(set: &EmploymentSet, scope: &EntitySet) -> EmploymentSet {
    set.iter().map(|e| e.restrict(scope)).collect()
}
