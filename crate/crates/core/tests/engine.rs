use privcalc::engine::{
    arrangement_source, eval_source, import_rbac, parse_rbac, run_scenario, EngineError, Outcome, Query,
    ResolveError, Scenario,
};
use privcalc::facts::parse_facts;
use privcalc::pal::{format_program, parse_source, Pos};
use privcalc::privilege::{normal_form, trace};
use privcalc::{load_program, Environment, MergeMode};

const EXAMPLE: &str = include_str!("data/example.pal");
const STORY: &str = include_str!("data/story.pal");
const GAUGING: &str = include_str!("data/gauging.pal");
const GAUGING_FACTS: &str = include_str!("data/gauging.facts");
const EXAMPLE_RBAC: &str = include_str!("data/example.rbac");

fn load(src: &str) -> Environment {
    load_program(&parse_source(src).unwrap(), Environment::new()).unwrap()
}

#[test]
fn entity_then_privilege_is_not_a_redefinition() {
    let env = load(STORY);
    assert!(env.warnings().is_empty(), "{:?}", env.warnings());
    assert!(env.binding("doc1").unwrap().scope.is_some());
    assert!(env.privilege("doc1").is_some());
}

#[test]
fn normal_form_text() {
    let mut env = load(EXAMPLE);
    let m = arrangement_source(&mut env, "read + list + write + remove").unwrap();
    let s2 = env.privilege("session2").unwrap();
    let nf = normal_form(s2, &m).to_string();
    assert_eq!(nf, "read/*: true\nlist/*: true\nwrite/*: false\nremove/*: false\n");
}

#[test]
fn gauging_csv_union_mode() {
    let facts = parse_facts(GAUGING_FACTS).unwrap();
    let env = Environment::new().with_mode(MergeMode::Union).with_facts(facts).unwrap();
    let mut env = load_program(&parse_source(GAUGING).unwrap(), env).unwrap();
    let m = arrangement_source(&mut env, "approve/Invoices + pay/Invoices").unwrap();
    let g = env.privilege("g").unwrap().clone();
    let seq = env.family().sequence(["t0", "t1"]).unwrap();
    let tm = trace(&g, &m, &seq, &env.context(Some(&m))).unwrap();
    assert_eq!(
        tm.to_csv(),
        "employment,t0,t1\napprove/Invoices,1,1\npay/Invoices,0,1\n"
    );
    assert_eq!(env.render(&g), "approve/Invoices * on1 + approve/Invoices * on3 + pay/Invoices * on2 + pay/Invoices * on3");
}

#[test]
fn imported_rbac_text() {
    let prog = import_rbac(&parse_rbac(EXAMPLE_RBAC).unwrap()).unwrap();
    let text = format_program(&prog);
    assert!(text.contains("  manager := reader + write/TechDoc + remove/TechDoc\n"), "{text}");
    assert!(text.contains("  bob := reader + writer\n"));
    let mut env = load(&text);
    let p = eval_source(&mut env, "bob").unwrap();
    assert_eq!(env.render(&p), "read/TechDoc + list/TechDoc + write/TechDoc");
}

#[test]
fn resolution_error_points_at_statement() {
    let src = "namespace \"n\" {\n  r := read\n  let read is Ops\n}\n";
    let err = load_program(&parse_source(src).unwrap(), Environment::new()).unwrap_err();
    assert_eq!(err.pos(), Some(Pos { line: 3, column: 3 }));
    assert!(matches!(err, EngineError::Resolve(ResolveError::KindClash { .. })));
}

#[test]
fn scenario_over_fixtures() {
    let s = Scenario {
        program: STORY.into(),
        facts: None,
        namespace: Some("story".into()),
        arrangement: "read + list + write + remove + readable + writable".into(),
        mode: MergeMode::Intersection,
        queries: vec![
            Query::Pulse("interactionguard".into(), "{}".into()),
            Query::Comply("session2".into(), "write/doc1".into(), "{}".into()),
            Query::Congruent("session1".into(), "bob * officepc".into(), "{}".into()),
            Query::Trace("readguard".into(), vec!["{}".into(), "{}".into()]),
        ],
    };
    let report = run_scenario(&s).unwrap();
    let outs: Vec<&Outcome> = report.entries.iter().map(|e| e.outcome.as_ref().unwrap()).collect();
    assert_eq!(
        outs[0].to_string(),
        "read/*=0 list/*=0 write/*=1 remove/*=0 readable/*=0 writable/*=1"
    );
    assert_eq!(outs[1], &Outcome::Verdict(false));
    assert_eq!(outs[2], &Outcome::Verdict(true));
    assert!(matches!(outs[3], Outcome::Trace(t) if t.column(0) == t.column(1)));
}
