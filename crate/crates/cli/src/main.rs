use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use privcalc::engine::{import_rbac, parse_rbac, EngineError};
use privcalc::facts::parse_facts;
use privcalc::pal::{format_program, parse_expr, parse_source};
use privcalc::privilege::{compliant, normal_form, pulse, structural_eq, trace};
use privcalc::{load_program, Arrangement, Environment, Fact, MergeMode, Privilege};

#[derive(Parser)]
#[command(name = "privcalc", version, about = "Evaluate and query PAL privilege policies")]
struct Cli {
    /// How mergence combines condition sets.
    #[arg(long, global = true, default_value_t = MergeMode::Intersection, value_name = "MODE")]
    merge_conditions: MergeMode,

    /// Namespace to load (default: the first one in the file).
    #[arg(long, global = true)]
    namespace: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Policy {
    /// PAL source file.
    file: PathBuf,
    /// Facts file declaring statements, facts and conditions.
    #[arg(long)]
    facts: Option<PathBuf>,
}

#[derive(Args)]
struct WithArrangement {
    #[command(flatten)]
    policy: Policy,
    /// Arrangement as a PAL sum, or @FILE.
    #[arg(long)]
    arrangement: String,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and resolve a program, reporting diagnostics.
    Check(Policy),
    /// Print the canonical form of an expression.
    Eval {
        #[command(flatten)]
        policy: Policy,
        #[arg(long)]
        expr: String,
    },
    /// Print the normal form of an expression over an arrangement.
    Nf {
        #[command(flatten)]
        a: WithArrangement,
        #[arg(long)]
        expr: String,
    },
    /// Decide structural equivalence over every fact.
    Eq {
        #[command(flatten)]
        a: WithArrangement,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Print the pulsed form at a fact.
    Pulse {
        #[command(flatten)]
        a: WithArrangement,
        #[arg(long)]
        expr: String,
        #[arg(long)]
        fact: String,
    },
    /// Print the trace matrix over a fact sequence as CSV.
    Trace {
        #[command(flatten)]
        a: WithArrangement,
        #[arg(long)]
        expr: String,
        /// Comma-separated fact ids.
        #[arg(long, value_delimiter = ',', required = true)]
        seq: Vec<String>,
    },
    /// Decide whether P complies with Q at a fact.
    Comply {
        #[command(flatten)]
        a: WithArrangement,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        #[arg(long)]
        fact: String,
    },
    /// Translate an RBAC model into PAL.
    ImportRbac { file: PathBuf },
}

/// A fully formatted diagnostic; always exit code 2.
struct Failure(String);

fn located(label: &str, e: &EngineError) -> Failure {
    // positioned errors already start with `line:column`
    match e.pos() {
        Some(_) => Failure(format!("{label}:{e}")),
        None => Failure(format!("{label}: {e}")),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

struct Session {
    env: Environment,
}

impl Session {
    fn open(cli: &Cli, policy: &Policy) -> Result<Self, Failure> {
        let label = policy.file.display().to_string();
        let src = read(&policy.file)?;
        let program = parse_source(&src).map_err(|e| located(&label, &e.into()))?;

        let mut env = match &cli.namespace {
            Some(ns) => Environment::for_namespace(ns.clone()),
            None => Environment::new(),
        }
        .with_mode(cli.merge_conditions);
        if let Some(path) = &policy.facts {
            let flabel = path.display().to_string();
            let facts = parse_facts(&read(path)?).map_err(|e| located(&flabel, &e.into()))?;
            env = env.with_facts(facts).map_err(|e| located(&flabel, &e))?;
        }
        let env = load_program(&program, env).map_err(|e| located(&label, &e))?;
        for w in env.warnings() {
            eprintln!("{label}:{w}");
        }
        Ok(Self { env })
    }

    fn eval(&mut self, flag: &str, src: &str) -> Result<Privilege, Failure> {
        let label = format!("--{flag}");
        let e = parse_expr(src).map_err(|e| located(&label, &e.into()))?;
        self.env
            .eval_expr(&e)
            .map_err(|e| located(&label, &e.into()))
    }

    fn arrangement(&mut self, arg: &str) -> Result<Arrangement, Failure> {
        let (label, src) = match arg.strip_prefix('@') {
            Some(path) => (path.to_string(), read(Path::new(path))?),
            None => ("--arrangement".to_string(), arg.to_string()),
        };
        let e = parse_expr(src.trim()).map_err(|e| located(&label, &e.into()))?;
        self.env
            .load_arrangement(std::slice::from_ref(&e))
            .map_err(|e| located(&label, &e))
    }

    fn fact(&self, id: &str) -> Result<Fact, Failure> {
        self.env
            .family()
            .get(id)
            .cloned()
            .ok_or_else(|| Failure(format!("--fact: unknown fact `{id}`")))
    }
}

fn verdict(ok: bool, yes: &str, no: &str) -> ExitCode {
    println!("{}", if ok { yes } else { no });
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn eval_failure(e: privcalc::EvalError) -> Failure {
    Failure(format!("error: {e}"))
}

fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    match &cli.command {
        Command::Check(policy) => {
            let s = Session::open(cli, policy)?;
            let n = s.env.bindings().count();
            println!("{}: ok, {n} names", policy.file.display());
        }
        Command::Eval { policy, expr } => {
            let mut s = Session::open(cli, policy)?;
            let p = s.eval("expr", expr)?;
            println!("{}", s.env.render(&p));
        }
        Command::Nf { a, expr } => {
            let mut s = Session::open(cli, &a.policy)?;
            let m = s.arrangement(&a.arrangement)?;
            let p = s.eval("expr", expr)?;
            print!("{}", normal_form(&p, &m));
        }
        Command::Eq { a, left, right } => {
            let mut s = Session::open(cli, &a.policy)?;
            let m = s.arrangement(&a.arrangement)?;
            let u = s.eval("left", left)?;
            let v = s.eval("right", right)?;
            let ok = structural_eq(&u, &v, &m, &s.env.context(Some(&m))).map_err(eval_failure)?;
            return Ok(verdict(ok, "equal", "not equal"));
        }
        Command::Pulse { a, expr, fact } => {
            let mut s = Session::open(cli, &a.policy)?;
            let m = s.arrangement(&a.arrangement)?;
            let p = s.eval("expr", expr)?;
            let t = s.fact(fact)?;
            let pf = pulse(&p, &m, &t, &s.env.context(Some(&m))).map_err(eval_failure)?;
            println!("{pf}");
        }
        Command::Trace { a, expr, seq } => {
            let mut s = Session::open(cli, &a.policy)?;
            let m = s.arrangement(&a.arrangement)?;
            let p = s.eval("expr", expr)?;
            let seq = s
                .env
                .family()
                .sequence(seq.iter().map(String::as_str))
                .map_err(|e| Failure(format!("--seq: {e}")))?;
            let tm = trace(&p, &m, &seq, &s.env.context(Some(&m))).map_err(eval_failure)?;
            print!("{}", tm.to_csv());
        }
        Command::Comply { a, p, q, fact } => {
            let mut s = Session::open(cli, &a.policy)?;
            let m = s.arrangement(&a.arrangement)?;
            let pp = s.eval("p", p)?;
            let qq = s.eval("q", q)?;
            let t = s.fact(fact)?;
            let ok = compliant(&pp, &qq, &m, &t, &s.env.context(Some(&m))).map_err(eval_failure)?;
            return Ok(verdict(ok, "compliant", "non-compliant"));
        }
        Command::ImportRbac { file } => {
            let label = file.display().to_string();
            let model = parse_rbac(&read(file)?).map_err(|e| located(&label, &e.into()))?;
            let program = import_rbac(&model).map_err(|e| located(&label, &e.into()))?;
            print!("{}", format_program(&program));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}
