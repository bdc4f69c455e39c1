//! Canonical privilege text.
//!
//! Atoms print as `f`, `f/Category` or `f/entity`, followed by ` * cond` for
//! each condition, joined with ` + `. A finite entity set that is neither a
//! trusted category nor a singleton is spelled out one entity per atom, so
//! the text stays inside the PAL expression grammar. The empty privilege
//! prints as `0`.

use std::collections::BTreeSet;
use std::fmt;

use super::{Privilege, PrivilegeAtom};
use crate::algebra::{Entity, EntitySet, FunctionSymbol};

type RankFn<'a> = dyn Fn(&FunctionSymbol) -> usize + 'a;
type MembersFn<'a> = dyn Fn(&str) -> Option<BTreeSet<Entity>> + 'a;

/// Hooks that let a caller with a symbol table steer rendering.
#[derive(Default)]
pub struct RenderOptions<'a> {
    /// Sort rank of a function; ties fall back to the name.
    pub function_rank: Option<Box<RankFn<'a>>>,
    /// Current members of a category. A label is only printed when it still
    /// denotes exactly the atom's entities.
    pub category_members: Option<Box<MembersFn<'a>>>,
}

impl<'a> RenderOptions<'a> {
    pub fn with_function_rank(mut self, f: impl Fn(&FunctionSymbol) -> usize + 'a) -> Self {
        self.function_rank = Some(Box::new(f));
        self
    }

    pub fn with_category_members(mut self, f: impl Fn(&str) -> Option<BTreeSet<Entity>> + 'a) -> Self {
        self.category_members = Some(Box::new(f));
        self
    }
}

impl Privilege {
    pub fn render(&self, opts: &RenderOptions<'_>) -> String {
        let rank = |f: &FunctionSymbol| opts.function_rank.as_ref().map_or(0, |r| r(f));
        let mut atoms: Vec<&PrivilegeAtom> = self.atoms().collect();
        atoms.sort_by_cached_key(|a| {
            let entities: Vec<String> = a
                .entities()
                .members()
                .map(|m| m.iter().map(|e| e.name().to_string()).collect())
                .unwrap_or_default();
            let conditions: Vec<String> = a.conditions().iter().map(|c| c.id().to_string()).collect();
            (
                rank(a.function()),
                a.function().name().to_string(),
                !a.entities().is_universal(),
                entities,
                conditions,
            )
        });

        let mut pieces = Vec::new();
        for atom in atoms {
            let mut suffix = String::new();
            let mut ids: Vec<&str> = atom.conditions().iter().map(|c| c.id()).collect();
            ids.sort_unstable();
            for id in ids {
                suffix.push_str(" * ");
                suffix.push_str(id);
            }
            let f = atom.function();
            match atom.entities() {
                EntitySet::Universal => pieces.push(format!("{f}{suffix}")),
                EntitySet::Finite { members, label } => {
                    let trusted = label.as_deref().filter(|l| {
                        opts.category_members
                            .as_ref()
                            .is_none_or(|lookup| lookup(l).as_ref() == Some(members))
                    });
                    if let Some(label) = trusted {
                        pieces.push(format!("{f}/{label}{suffix}"));
                    } else {
                        pieces.extend(members.iter().map(|e| format!("{f}/{e}{suffix}")));
                    }
                }
            }
        }
        if pieces.is_empty() {
            "0".to_string()
        } else {
            pieces.join(" + ")
        }
    }
}

impl fmt::Display for Privilege {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&RenderOptions::default()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Category;
    use crate::facts::Condition;

    fn fun(n: &str) -> Privilege {
        Privilege::function(FunctionSymbol::new(n))
    }

    fn tech_doc() -> EntitySet {
        let mut c = Category::new("TechDoc");
        c.insert(Entity::new("doc1"));
        c.entity_set()
    }

    #[test]
    fn default_order_is_by_name() {
        let p = fun("read").compose(&fun("list")).restrict(&tech_doc());
        assert_eq!(p.to_string(), "list/TechDoc + read/TechDoc");
    }

    #[test]
    fn ranked_order() {
        let p = fun("read").compose(&fun("list")).compose(&fun("write"));
        let order = ["read", "list", "write"];
        let opts = RenderOptions::default()
            .with_function_rank(|f| order.iter().position(|n| *n == f.name()).unwrap_or(usize::MAX));
        assert_eq!(p.render(&opts), "read + list + write");
    }

    #[test]
    fn unlabelled_sets_are_spelled_out() {
        let p = fun("read").restrict(&EntitySet::finite(["b", "a"]));
        assert_eq!(p.to_string(), "read/a + read/b");
        let one = fun("read").restrict(&EntitySet::singleton("doc1"));
        assert_eq!(one.to_string(), "read/doc1");
    }

    #[test]
    fn stale_label_is_spelled_out() {
        let p = fun("read").restrict(&tech_doc());
        let opts = RenderOptions::default().with_category_members(|_| {
            Some(["doc1", "doc2"].iter().map(|e| Entity::new(*e)).collect())
        });
        assert_eq!(p.render(&opts), "read/doc1");
    }

    #[test]
    fn conditions_and_empty() {
        let p = fun("read")
            .guarded_by(&Condition::witness("r2", ["s"]))
            .guarded_by(&Condition::witness("r1", ["s"]));
        assert_eq!(p.to_string(), "read * r1 * r2");
        assert_eq!(Privilege::empty().to_string(), "0");
    }
}
