use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use iolog::battery::{exhaustive_battery, random_instances, RandomShape};
use iolog::calculus::{check_sequent, SequentDerivation};
use iolog::engine::{self, Certificate, Decision, Mode};
use iolog::modal::embed;
use iolog::oracle::{outputs_entail_goal, Mutation};
use iolog::reduction::query_cnf;
use iolog::sat::{export_dimacs, SatEngine, SolverConfig};
use iolog::selfcheck::crosscheck;
use iolog::semantics::{check_countermodel, IOModel};
use iolog::theory::{check_native, parse_theory, IOPair, IOSequent, LogicId, NativeDerivation, TheoryJson};
use iolog::Error;

const DERIVABLE: u8 = 0;
const NOT_DERIVABLE: u8 = 1;
const USAGE: u8 = 2;
const CAP: u8 = 3;

/// Decide entailment in input/output logics.
///
/// Exit status: 0 derivable (or certificate accepted), 1 not derivable (or
/// certificate rejected), 2 usage or input error, 3 size cap exceeded.
#[derive(Parser, Debug)]
#[command(name = "iolog", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a query and print a JSON verdict.
    Decide {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, value_enum, default_value_t = Emit::Verdict)]
        emit: Emit,
        /// Re-verify a certificate (proof, native derivation or countermodel)
        /// against the query instead of deciding it.
        #[arg(long, value_name = "FILE")]
        check: Option<PathBuf>,
    },
    /// Search for a sequent proof and print it as JSON.
    Prove {
        #[command(flatten)]
        query: QueryArgs,
    },
    /// Print a checked countermodel when the query is not derivable.
    Countermodel {
        #[command(flatten)]
        query: QueryArgs,
    },
    /// Print the query as a SAT problem; unsatisfiable iff derivable.
    Encode {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, value_enum, default_value_t = Emit::Dimacs)]
        emit: Emit,
    },
    /// Print the modal embedding of the query.
    Embed {
        #[command(flatten)]
        query: QueryArgs,
        /// QMLTP-style TPTP instead of the line-based exchange format.
        #[arg(long)]
        tptp: bool,
    },
    /// Re-verify a certificate against the query.
    Check {
        #[command(flatten)]
        query: QueryArgs,
        #[arg(value_name = "CERTIFICATE")]
        certificate: PathBuf,
    },
    /// Cross-check the three decision procedures on built-in instances.
    Selfcheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random instances per logic on top of the exhaustive battery.
        #[arg(long, default_value_t = 100)]
        random: usize,
        /// Break the enumeration procedure on purpose.
        #[arg(long, value_enum)]
        inject: Option<Fault>,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

#[derive(Args, Debug)]
struct QueryArgs {
    /// Theory file: one `A => X` per line, or JSON with "pairs" and
    /// optionally "goal" and "logic".
    #[arg(value_name = "THEORY")]
    theory: PathBuf,
    /// Logic code, out1 to out4 with an optional `c` for the causal variant.
    #[arg(long)]
    logic: Option<LogicId>,
    #[arg(long)]
    goal: Option<IOPair>,
    /// sat (default), oracle or proof.
    #[arg(long)]
    mode: Option<Mode>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Debug)]
struct SolverArgs {
    /// DIMACS solver to run instead of the built-in one.
    #[arg(long, value_name = "PATH")]
    external_solver: Option<PathBuf>,
    /// Plain chronological backtracking, no clause learning.
    #[arg(long)]
    chronological: bool,
}

impl SolverArgs {
    fn engine(&self) -> SatEngine {
        let sat = SatEngine::with_config(SolverConfig {
            learning: !self.chronological,
        });
        match &self.external_solver {
            Some(path) => sat.with_external(path),
            None => sat,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Verdict,
    ProofJson,
    ModelJson,
    Dimacs,
    Modal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Fault {
    DropInput,
    DropOutput,
    AssumeInconsistent,
}

impl From<Fault> for Mutation {
    fn from(f: Fault) -> Mutation {
        match f {
            Fault::DropInput => Mutation::DropInputCondition,
            Fault::DropOutput => Mutation::DropOutputCondition,
            Fault::AssumeInconsistent => Mutation::AssumeInconsistentInput,
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Engine(#[from] Error),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn status(&self) -> u8 {
        match self {
            CliError::Engine(e) if engine::is_cap_error(e) => CAP,
            _ => USAGE,
        }
    }
}

type CliResult = Result<u8, CliError>;

pub fn run(args: impl IntoIterator<Item = OsString>) -> ExitCode {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status())
        }
    }
}

fn dispatch(command: Command) -> CliResult {
    match command {
        Command::Decide { query, emit, check } => match check {
            Some(path) => run_check(&query, &path),
            None => run_decide(&query, emit),
        },
        Command::Prove { query } => run_decide(&query, Emit::ProofJson),
        Command::Countermodel { query } => run_decide(&query, Emit::ModelJson),
        Command::Encode { query, emit } => run_encode(&query, emit),
        Command::Embed { query, tptp } => {
            let problem = embed(&load_query(&query)?);
            print!("{}", if tptp { problem.to_tptp() } else { problem.to_exchange() });
            Ok(DERIVABLE)
        }
        Command::Check { query, certificate } => run_check(&query, &certificate),
        Command::Selfcheck {
            seed,
            random,
            inject,
            solver,
        } => run_selfcheck(seed, random, inject.map(Mutation::from), &solver.engine()),
    }
}

fn load_query(q: &QueryArgs) -> Result<IOSequent, CliError> {
    let text = std::fs::read_to_string(&q.theory).map_err(Error::from)?;
    let is_json = q.theory.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
    let theory = if is_json {
        serde_json::from_str::<TheoryJson>(&text).map_err(Error::from)?
    } else {
        TheoryJson {
            pairs: parse_theory(&text)?,
            goal: None,
            logic: None,
        }
    };
    let goal = q
        .goal
        .clone()
        .or(theory.goal)
        .ok_or_else(|| CliError::Usage("no goal: pass --goal or put one in the theory file".into()))?;
    let logic = q
        .logic
        .or(theory.logic)
        .ok_or_else(|| CliError::Usage("no logic: pass --logic or put one in the theory file".into()))?;
    Ok(IOSequent::new(theory.pairs, goal, logic))
}

fn print_json(value: &Value) {
    println!("{value}");
}

fn verdict_status(derivable: bool) -> u8 {
    if derivable {
        DERIVABLE
    } else {
        NOT_DERIVABLE
    }
}

fn run_decide(q: &QueryArgs, emit: Emit) -> CliResult {
    let s = load_query(q)?;
    let sat = q.solver.engine();
    let mode = match (emit, q.mode) {
        (Emit::ProofJson, None | Some(Mode::Proof)) => Mode::Proof,
        (Emit::ProofJson, Some(other)) => {
            return Err(CliError::Usage(format!("proof output needs proof mode, not {other}")));
        }
        (_, mode) => mode.unwrap_or_default(),
    };
    match emit {
        Emit::Dimacs | Emit::Modal => {
            run_encode(q, emit)?;
        }
        _ => {}
    }
    let decision = engine::decide(&sat, &s, mode)?;
    if let Some(m) = decision.countermodel() {
        // never print a model that does not refute the query
        check_countermodel(m, &s).map_err(|e| Error::MalformedDerivation(format!("countermodel: {e}")))?;
    }
    report(&s, mode, &decision, emit);
    Ok(verdict_status(decision.derivable))
}

fn report(s: &IOSequent, mode: Mode, d: &Decision, emit: Emit) {
    match (&d.certificate, emit) {
        (Certificate::Proof { derivation, .. }, Emit::ProofJson) => {
            eprint!("{derivation}");
            println!("{}", serde_json::to_string(derivation).expect("derivation serializes"));
        }
        (Certificate::Countermodel(m), Emit::ModelJson) => {
            eprintln!("countermodel: {m}");
            println!("{}", serde_json::to_string(m).expect("model serializes"));
        }
        (certificate, Emit::Verdict | Emit::ProofJson | Emit::ModelJson) => {
            let mut line = json!({
                "derivable": d.derivable,
                "logic": s.logic(),
                "mode": mode.name(),
            });
            if let Certificate::Countermodel(m) = certificate {
                line["countermodel"] = json!(m);
                eprintln!("not derivable; countermodel: {m}");
            } else {
                eprintln!("{}", if d.derivable { "derivable" } else { "not derivable" });
            }
            print_json(&line);
        }
        (_, Emit::Dimacs | Emit::Modal) => {}
    }
}

fn run_encode(q: &QueryArgs, emit: Emit) -> CliResult {
    let s = load_query(q)?;
    match emit {
        Emit::Dimacs => print!("{}", export_dimacs(&query_cnf(&s)?)),
        Emit::Modal => print!("{}", embed(&s).to_exchange()),
        other => {
            return Err(CliError::Usage(format!(
                "encode emits dimacs or modal, not {}",
                other.to_possible_value().expect("named variant").get_name()
            )))
        }
    }
    Ok(DERIVABLE)
}

/// Certificates are told apart by their JSON shape.
enum Submitted {
    Native(NativeDerivation),
    Model(IOModel),
    Sequent(SequentDerivation),
}

fn read_certificate(path: &Path) -> Result<Submitted, CliError> {
    let text = std::fs::read_to_string(path).map_err(Error::from)?;
    let value: Value = serde_json::from_str(&text).map_err(Error::from)?;
    let parsed = if value.get("pair").is_some() {
        serde_json::from_value(value).map(Submitted::Native)
    } else if value.get("inputs").is_some() {
        serde_json::from_value(value).map(Submitted::Model)
    } else {
        serde_json::from_value(value).map(Submitted::Sequent)
    };
    Ok(parsed.map_err(Error::from)?)
}

fn run_check(q: &QueryArgs, path: &Path) -> CliResult {
    let s = load_query(q)?;
    let sat = q.solver.engine();
    let (kind, outcome) = match read_certificate(path)? {
        Submitted::Native(d) => ("native", check_native(&d, &s, &sat).map_err(|e| e.to_string())),
        Submitted::Model(m) => ("countermodel", check_countermodel(&m, &s).map_err(|e| e.to_string())),
        Submitted::Sequent(d) => {
            let mut outcome = check_sequent(&d, &s.causal(), &sat).map_err(|e| e.to_string());
            if outcome.is_ok() && !s.logic().causal && !outputs_entail_goal(&sat, &s)? {
                outcome = Err("the premise outputs do not entail the goal output".into());
            }
            ("sequent", outcome)
        }
    };
    let mut line = json!({ "certificate": kind, "accepted": outcome.is_ok() });
    if let Err(reason) = &outcome {
        eprintln!("rejected: {reason}");
        line["reason"] = json!(reason);
    }
    print_json(&line);
    Ok(verdict_status(outcome.is_ok()))
}

fn run_selfcheck(seed: u64, random: usize, mutation: Option<Mutation>, sat: &SatEngine) -> CliResult {
    let mut instances = exhaustive_battery();
    for logic in LogicId::ALL {
        instances.extend(random_instances(seed, logic, random, RandomShape::LARGER));
    }
    let report = crosscheck(sat, &instances, mutation);
    eprintln!("{report}");
    let mut line = json!({
        "instances": report.checked,
        "derivable": report.derivable,
        "failures": report.failures.len(),
    });
    if let Some(f) = report.minimal_failure() {
        line["minimal_failure"] = json!(f.to_string());
    }
    print_json(&line);
    Ok(if report.passed() { 0 } else { 1 })
}
