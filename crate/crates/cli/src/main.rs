use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use sata::diagram::{emit_dot, emit_json, emit_sd, parse_json, parse_sd, DiagramError};
use sata::logicprog::{self, LpError};
use sata::normalform::{self, NormalFormError};
use sata::sat::{self, Method, SatError};
use sata::semantics::{verify_laws, Interpreter, MonRel, SemanticsError, DEFAULT_MAX_WIDTH};
use sata::{Diagram, Generator};

const SAT: u8 = 10;
const UNSAT: u8 = 20;
const FALSE: u8 = 3;
const WIDTH: u8 = 2;
const ERROR: u8 = 1;

#[derive(Parser)]
#[command(name = "sata", version, about = "String diagrams over monotone Boolean relations")]
struct Cli {
    /// Largest table exponent any evaluation step may use
    #[arg(long, global = true, env = "SATA_MAX_WIDTH", default_value_t = DEFAULT_MAX_WIDTH,
          value_parser = clap::value_parser!(u32).range(1..=32))]
    max_width: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// CNF satisfiability
    #[command(subcommand)]
    Sat(SatCommand),
    /// Diagram equality, inclusion, normal forms and rendering
    #[command(subcommand)]
    Diag(DiagCommand),
    /// Definite logic programs
    #[command(subcommand)]
    Lp(LpCommand),
    /// The law suite
    #[command(subcommand)]
    Axioms(AxiomsCommand),
}

#[derive(Subcommand)]
enum SatCommand {
    /// Prints SAT (exit 10) or UNSAT (exit 20)
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Diagram)]
        method: MethodArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Diagram,
    Brute,
}

#[derive(Subcommand)]
enum DiagCommand {
    /// Exit 0 if the diagrams denote the same relation, 3 otherwise
    Eq { left: PathBuf, right: PathBuf },
    /// Exit 0 if the left relation is contained in the right one, 3 otherwise
    Leq { left: PathBuf, right: PathBuf },
    /// Writes the canonical form as `.sd` text
    Normalize {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Writes a Graphviz rendering (or the JSON term tree)
    Render {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "as", value_enum, default_value_t = RenderAs::Dot)]
        render_as: RenderAs,
    },
    /// Prints the relation as JSON
    Interpret { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderAs {
    Dot,
    Json,
    Sd,
}

#[derive(Subcommand)]
enum LpCommand {
    /// Prints the consequences of the facts (the least model by default)
    Model {
        file: PathBuf,
        #[arg(long, default_value = "")]
        facts: String,
    },
    /// Exit 0 if both programs have the same consequence operator, 3 otherwise
    Equiv { left: PathBuf, right: PathBuf },
}

#[derive(Subcommand)]
enum AxiomsCommand {
    /// Checks every law; exit 0 iff all hold
    Verify {
        #[arg(long)]
        json: bool,
        /// Replace a generator by the full relation
        #[arg(long, hide = true)]
        corrupt: Option<String>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn width_code(e: &SemanticsError) -> u8 {
    match e {
        SemanticsError::WidthCapExceeded { .. } => WIDTH,
        _ => ERROR,
    }
}

impl From<SemanticsError> for Failure {
    fn from(e: SemanticsError) -> Self {
        Failure::new(width_code(&e), e.to_string())
    }
}

impl From<NormalFormError> for Failure {
    fn from(e: NormalFormError) -> Self {
        let code = match &e {
            NormalFormError::Semantics(s) => width_code(s),
            _ => ERROR,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<LpError> for Failure {
    fn from(e: LpError) -> Self {
        let code = match &e {
            LpError::Semantics(s) | LpError::NormalForm(NormalFormError::Semantics(s)) => width_code(s),
            _ => ERROR,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<SatError> for Failure {
    fn from(e: SatError) -> Self {
        Failure::new(ERROR, e.to_string())
    }
}

impl From<DiagramError> for Failure {
    fn from(e: DiagramError) -> Self {
        Failure::new(ERROR, e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(ERROR, format!("{}: {e}", path.display())))
}

fn load_diagram(path: &Path) -> Result<Diagram, Failure> {
    let text = read(path)?;
    let parsed = if path.extension().is_some_and(|e| e == "json") {
        parse_json(&text)
    } else {
        parse_sd(&text)
    };
    parsed.map_err(|e| Failure::new(ERROR, format!("{}: {e}", path.display())))
}

fn load_program(path: &Path) -> Result<logicprog::LogicProgram, Failure> {
    logicprog::parse_program(&read(path)?).map_err(|e| Failure::new(ERROR, format!("{}: {e}", path.display())))
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::new(ERROR, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit(format: Format, text: String, value: serde_json::Value) {
    match format {
        Format::Text => println!("{text}"),
        Format::Json => println!("{value}"),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let interp = Interpreter::new(cli.max_width);
    let format = cli.format;
    match cli.command {
        Command::Sat(SatCommand::Check { file, method }) => {
            let f = sat::parse_dimacs(&read(&file)?)
                .map_err(|e| Failure::new(ERROR, format!("{}: {e}", file.display())))?;
            let (method, name) = match method {
                MethodArg::Diagram => (Method::Diagram, "diagram"),
                MethodArg::Brute => (Method::Brute, "brute"),
            };
            let result = sat::is_satisfiable(&interp, &f, method).map_err(|e| Failure::new(ERROR, e.to_string()))?;
            let word = if result { "SAT" } else { "UNSAT" };
            emit(format, word.into(), json!({"result": word, "method": name}));
            Ok(if result { SAT } else { UNSAT })
        }
        Command::Diag(cmd) => diag(&interp, format, cmd),
        Command::Lp(cmd) => lp(&interp, format, cmd),
        Command::Axioms(AxiomsCommand::Verify { json, corrupt }) => {
            let mut interp = interp;
            if let Some(name) = corrupt {
                let g = Generator::from_name(&name)
                    .ok_or_else(|| Failure::new(ERROR, format!("unknown generator `{name}`")))?;
                let (a, b) = g.arity();
                interp = interp.with_override(g, MonRel::top(a, b));
            }
            let outcomes = verify_laws(&interp);
            let passed = outcomes.iter().filter(|o| o.passed).count();
            if json || format == Format::Json {
                let report = json!({
                    "passed": passed,
                    "total": outcomes.len(),
                    "laws": outcomes,
                });
                println!("{report}");
            } else {
                for o in &outcomes {
                    let status = if o.passed { "PASS" } else { "FAIL" };
                    match &o.error {
                        Some(e) => println!("{status} {} ({e})", o.name),
                        None => println!("{status} {}", o.name),
                    }
                }
                println!("{passed}/{} laws hold", outcomes.len());
            }
            Ok(if passed == outcomes.len() { 0 } else { ERROR })
        }
    }
}

fn verdict(format: Format, holds: bool) -> u8 {
    emit(format, holds.to_string(), json!({ "result": holds }));
    if holds {
        0
    } else {
        FALSE
    }
}

fn diag(interp: &Interpreter, format: Format, cmd: DiagCommand) -> Result<u8, Failure> {
    match cmd {
        DiagCommand::Eq { left, right } => {
            let holds = normalform::decide_eq(interp, &load_diagram(&left)?, &load_diagram(&right)?)?;
            Ok(verdict(format, holds))
        }
        DiagCommand::Leq { left, right } => {
            let holds = normalform::decide_leq(interp, &load_diagram(&left)?, &load_diagram(&right)?)?;
            Ok(verdict(format, holds))
        }
        DiagCommand::Normalize { file, out } => {
            let d = load_diagram(&file)?;
            let nf = normalform::normal_form(interp, &d)?;
            let text = match format {
                Format::Text => format!("{}\n", emit_sd(&nf)),
                Format::Json => {
                    let clauses = normalform::clauses_of(interp, &d)?;
                    let list: Vec<String> = clauses.clauses().iter().map(|c| c.to_string()).collect();
                    format!(
                        "{}\n",
                        json!({"dom": d.dom(), "cod": d.cod(), "normal_form": emit_sd(&nf), "clauses": list})
                    )
                }
            };
            write_out(out.as_deref(), &text)?;
            Ok(0)
        }
        DiagCommand::Render { file, out, render_as } => {
            let d = load_diagram(&file)?;
            let text = match render_as {
                RenderAs::Dot => emit_dot(&d),
                RenderAs::Json => format!("{}\n", emit_json(&d)),
                RenderAs::Sd => format!("{}\n", emit_sd(&d)),
            };
            write_out(out.as_deref(), &text)?;
            Ok(0)
        }
        DiagCommand::Interpret { file } => {
            let r = interp.interpret(&load_diagram(&file)?)?;
            println!("{}", r.to_json());
            Ok(0)
        }
    }
}

fn lp(interp: &Interpreter, format: Format, cmd: LpCommand) -> Result<u8, Failure> {
    match cmd {
        LpCommand::Model { file, facts } => {
            let program = load_program(&file)?;
            let start = program.interpretation(&facts)?;
            let model = logicprog::model_via_diagram(interp, &program, &start)?;
            let expected = logicprog::consequence(&program, &start);
            if model != expected {
                return Err(Failure::new(ERROR, "diagram and fixed point disagree"));
            }
            let mut names = program.names(&model);
            names.sort_unstable();
            emit(format, names.join(" "), json!({ "model": names }));
            Ok(0)
        }
        LpCommand::Equiv { left, right } => {
            let holds = logicprog::lp_equiv(interp, &load_program(&left)?, &load_program(&right)?)?;
            Ok(verdict(format, holds))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
