//! One-shot evaluation of a program, facts and queries.

use std::fmt;

use thiserror::Error;

use super::{arrangement_source, eval_source, load_program, EngineError, Environment};
use crate::facts::parse_facts;
use crate::pal::parse_source;
use crate::privilege::{compliant, congruent, normal_form, pulse, structural_eq, trace, MergeMode, PulsedForm, TraceMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Eval(String),
    NormalForm(String),
    Equal(String, String),
    /// Expression and fact id.
    Pulse(String, String),
    /// Expression and fact ids.
    Trace(String, Vec<String>),
    /// `p`, `q` and fact id.
    Comply(String, String, String),
    /// `u`, `v` and fact id.
    Congruent(String, String, String),
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Eval(e) => write!(f, "eval {e}"),
            Query::NormalForm(e) => write!(f, "nf {e}"),
            Query::Equal(u, v) => write!(f, "eq {u} ; {v}"),
            Query::Pulse(e, t) => write!(f, "pulse {e} @ {t}"),
            Query::Trace(e, ts) => write!(f, "trace {e} @ {}", ts.join(",")),
            Query::Comply(p, q, t) => write!(f, "comply {p} ; {q} @ {t}"),
            Query::Congruent(u, v, t) => write!(f, "congruent {u} ; {v} @ {t}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Text(String),
    Verdict(bool),
    Pulse(PulsedForm),
    Trace(TraceMatrix),
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Text(s) => f.write_str(s),
            Outcome::Verdict(b) => f.write_str(if *b { "yes" } else { "no" }),
            Outcome::Pulse(p) => write!(f, "{p}"),
            Outcome::Trace(t) => f.write_str(t.to_csv().trim_end()),
        }
    }
}

#[derive(Debug)]
pub struct ReportEntry {
    pub query: Query,
    pub outcome: Result<Outcome, EngineError>,
}

#[derive(Debug)]
pub struct Report {
    pub entries: Vec<ReportEntry>,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "> {}", e.query)?;
            match &e.outcome {
                Ok(o) => writeln!(f, "{o}")?,
                Err(err) => writeln!(f, "error: {err}")?,
            }
        }
        Ok(())
    }
}

/// Inputs that failed to load, each with a label such as `program`.
#[derive(Debug, Error)]
#[error("{}", .errors.iter().map(|(w, e)| format!("{w}: {e}")).collect::<Vec<_>>().join("\n"))]
pub struct ScenarioError {
    pub errors: Vec<(&'static str, EngineError)>,
}

#[derive(Clone, Debug, Default)]
pub struct Scenario {
    pub program: String,
    pub facts: Option<String>,
    pub namespace: Option<String>,
    pub arrangement: String,
    pub mode: MergeMode,
    pub queries: Vec<Query>,
}

/// Loads everything, reporting all load failures together, then answers
/// each query independently.
pub fn run_scenario(s: &Scenario) -> Result<Report, ScenarioError> {
    let mut errors = Vec::new();
    let program = parse_source(&s.program).map_err(|e| errors.push(("program", e.into()))).ok();
    let facts = match &s.facts {
        Some(src) => parse_facts(src).map_err(|e| errors.push(("facts", e.into()))).ok(),
        None => None,
    };
    if !errors.is_empty() {
        return Err(ScenarioError { errors });
    }

    let mut env = match &s.namespace {
        Some(ns) => Environment::for_namespace(ns.clone()),
        None => Environment::new(),
    }
    .with_mode(s.mode);
    if let Some(f) = facts {
        env = env.with_facts(f).map_err(|e| ScenarioError {
            errors: vec![("facts", e)],
        })?;
    }
    let mut env = load_program(&program.expect("parsed"), env).map_err(|e| ScenarioError {
        errors: vec![("program", e)],
    })?;
    let m = arrangement_source(&mut env, &s.arrangement).map_err(|e| ScenarioError {
        errors: vec![("arrangement", e)],
    })?;

    let entries = s
        .queries
        .iter()
        .map(|q| ReportEntry {
            query: q.clone(),
            outcome: answer(&mut env, &m, q),
        })
        .collect();
    Ok(Report { entries })
}

fn answer(env: &mut Environment, m: &crate::Arrangement, q: &Query) -> Result<Outcome, EngineError> {
    let fact = |env: &Environment, id: &str| {
        env.family()
            .get(id)
            .cloned()
            .ok_or_else(|| crate::EvalError::UnknownFact(id.to_string()))
    };
    Ok(match q {
        Query::Eval(e) => {
            let p = eval_source(env, e)?;
            Outcome::Text(env.render(&p))
        }
        Query::NormalForm(e) => {
            let p = eval_source(env, e)?;
            Outcome::Text(normal_form(&p, m).to_string().trim_end().to_string())
        }
        Query::Equal(u, v) => {
            let u = eval_source(env, u)?;
            let v = eval_source(env, v)?;
            Outcome::Verdict(structural_eq(&u, &v, m, &env.context(Some(m)))?)
        }
        Query::Pulse(e, t) => {
            let p = eval_source(env, e)?;
            let t = fact(env, t)?;
            Outcome::Pulse(pulse(&p, m, &t, &env.context(Some(m)))?)
        }
        Query::Trace(e, ts) => {
            let p = eval_source(env, e)?;
            let seq = env.family().sequence(ts.iter().map(String::as_str))?;
            Outcome::Trace(trace(&p, m, &seq, &env.context(Some(m)))?)
        }
        Query::Comply(p, q, t) => {
            let p = eval_source(env, p)?;
            let q = eval_source(env, q)?;
            let t = fact(env, t)?;
            Outcome::Verdict(compliant(&p, &q, m, &t, &env.context(Some(m)))?)
        }
        Query::Congruent(u, v, t) => {
            let u = eval_source(env, u)?;
            let v = eval_source(env, v)?;
            let t = fact(env, t)?;
            Outcome::Verdict(congruent(&u, &v, m, &t, &env.context(Some(m)))?)
        }
    })
}
