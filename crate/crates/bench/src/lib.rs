//! Workloads shared by the benchmarks in `benches/`.

use privcalc::engine::arrangement_source;
use privcalc::facts::{parse_facts, FactsFile};
use privcalc::pal::parse_source;
use privcalc::{load_program, Arrangement, Environment, Privilege};

/// A policy with `roles` roles over `ops` operations and `docs` documents,
/// each role granting a sliding window of operations.
pub fn synthetic_policy(roles: usize, ops: usize, docs: usize) -> String {
    assert!(docs > 0 && ops > 0, "need at least one document and operation");
    let cats = docs.min(4);
    let mut s = String::from("namespace \"bench\" {\n");
    for d in 0..docs {
        s.push_str(&format!("  let doc{d} is Doc{}\n", d % cats));
    }
    for r in 0..roles {
        let terms: Vec<String> = (0..3)
            .map(|k| format!("op{}/Doc{} * c{}", (r + k) % ops, (r + k) % cats, (r + k) % 4))
            .collect();
        s.push_str(&format!("  role{r} := {}\n", terms.join(" + ")));
    }
    let all: Vec<String> = (0..roles).map(|r| format!("role{r}")).collect();
    s.push_str(&format!("  everyone := {}\n", all.join(" + ")));
    let ops_sum: Vec<String> = (0..ops).map(|o| format!("op{o}")).collect();
    s.push_str(&format!("  terminal := {}\n", ops_sum.join(" + ")));
    s.push_str("}\n");
    s
}

/// Four witness conditions over four statements; the family is the power set.
pub fn synthetic_facts() -> FactsFile {
    let mut s = String::new();
    for i in 0..4 {
        s.push_str(&format!("statement s{i}\nfact t{i} = s{i}\ncondition c{i} = any s{i}\n"));
    }
    parse_facts(&s).expect("synthetic facts parse")
}

pub struct Workload {
    pub env: Environment,
    pub arrangement: Arrangement,
    pub privilege: Privilege,
}

pub fn workload(roles: usize, ops: usize, docs: usize) -> Workload {
    let env = Environment::new().with_facts(synthetic_facts()).expect("facts load");
    let program = parse_source(&synthetic_policy(roles, ops, docs)).expect("policy parses");
    let mut env = load_program(&program, env).expect("policy loads");
    let m: Vec<String> = (0..ops).map(|o| format!("op{o}")).collect();
    let arrangement = arrangement_source(&mut env, &m.join(" + ")).expect("arrangement");
    let privilege = env.privilege("everyone").expect("everyone").clone();
    Workload {
        env,
        arrangement,
        privilege,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workload_builds() {
        let w = workload(8, 4, 6);
        assert_eq!(w.arrangement.len(), 4);
        assert!(!w.privilege.is_empty());
        assert_eq!(w.env.family().len(), 16);
    }
}
