//! Privilege calculus for separation-of-duty policy.
//!
//! Duty is modelled as privileges: sets of employments `f/E` guarded by
//! conditions on facts. Privileges merge (`*`) and compose (`+`), project onto
//! an employment arrangement as a normal form, and evaluate at a fact as a
//! pulsed form. Congruence and compliance compare pulsed forms and can
//! themselves serve as conditions, which is how guards are built.
//!
//! Policies are written in PAL (see [`pal`]) and evaluated by [`engine`].

pub mod algebra;
pub mod engine;
pub mod facts;
pub mod pal;
pub mod privilege;

pub use engine::{load_program, Environment};
pub use algebra::{Category, Employment, EmploymentSet, Entity, EntitySet, FunctionSymbol};
pub use facts::{Condition, ConditionKind, EvalContext, EvalError, Fact, FactFamily, FactSequence, Statement};
pub use privilege::{Arrangement, MergeMode, NormalForm, Privilege, PrivilegeAtom, PulsedForm, TraceMatrix};
