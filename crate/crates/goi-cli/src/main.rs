use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use goi::ell::{check, check_proof, interpret, parse_proof, verify_soundness, Basis};
use goi::io::{basis_from_json, json_to_dot, project_from_json, project_to_dot, project_to_json};
use goi::project::execute_project;
use goi::props::battery::{self, NAMES};
use goi::{Error, Odds, Rational};

/// Exact geometry-of-interaction engine.
///
/// Proof files are S-expressions (`.gl`); projects, graphs and bases are
/// JSON with rationals written as "p/q" strings.
///
/// Exit status: 0 on success, 1 on a logical failure (proof rejected,
/// property violated, infinite execution), 2 on usage or resource errors.
#[derive(Parser)]
#[command(name = "goi", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Bound on path and circuit enumeration.
    #[arg(long, global = true, default_value_t = 10_000)]
    fuel: usize,
    /// Seed of the SplitMix64 generator used by `prop`.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Number of cases run by `prop`.
    #[arg(long, global = true, default_value_t = 100)]
    iters: usize,
    /// Interpretation basis (JSON: variable index, or "*", to bundle).
    #[arg(long, global = true)]
    basis: Option<PathBuf>,
    /// Output format of `interpret`, `exec` and `export`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result here instead of standard output.
    #[arg(short = 'o', global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Parse, localize and check a proof; print its conclusion or diagnostics.
    Check { proof: PathBuf },
    /// Print the project interpreting a proof.
    Interpret { proof: PathBuf },
    /// Execute two projects given as JSON files.
    Exec { left: PathBuf, right: PathBuf },
    /// Interpret a proof, grade its success and pair it with the test battery.
    Verify { proof: PathBuf },
    /// Run a named property battery.
    Prop {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(NAMES))]
        name: String,
    },
    /// Render a graph, thick graph, sliced graph, graphing or project as DOT.
    Export { file: PathBuf },
}

/// Failure with its exit status.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Proof(_) | Error::Infinite(_) => 1,
            _ => 2,
        };
        Fail(code, e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail(2, format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value, Fail> {
    serde_json::from_str(&read(path)?).map_err(|e| Fail(2, format!("{}: {e}", path.display())))
}

fn emit(cli: &Cli, text: &str) -> Result<(), Fail> {
    match &cli.output {
        Some(p) => fs::write(p, text).map_err(|e| Fail(2, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn basis(cli: &Cli) -> Result<Basis<Rational>, Fail> {
    match &cli.basis {
        Some(p) => Ok(basis_from_json(&read_json(p)?)?),
        None => Ok(Basis::standard()),
    }
}

fn project_out(cli: &Cli, p: &goi::project::Project<Rational>) -> Result<(), Fail> {
    match cli.format {
        Format::Json => emit(cli, &pretty(&project_to_json(p))),
        Format::Dot => emit(cli, &project_to_dot(p)),
    }
}

fn run(cli: &Cli) -> Result<(), Fail> {
    match &cli.command {
        Command::Check { proof } => {
            let p = parse_proof(&read(proof)?)?;
            let diags = check_proof(&p);
            if !diags.is_empty() {
                let text: Vec<String> = diags.iter().map(|d| format!("{}:{d}", proof.display())).collect();
                return Err(Fail(1, text.join("\n")));
            }
            let d = check(&p).map_err(|_| Fail(1, "proof rejected".into()))?;
            emit(cli, &format!("ok: {}\n", d.seq))
        }
        Command::Interpret { proof } => {
            let p = parse_proof(&read(proof)?)?;
            let d = check(&p).map_err(|ds| Fail(1, ds.iter().map(|d| format!("{}:{d}", proof.display())).collect::<Vec<_>>().join("\n")))?;
            let a = interpret(&d, &basis(cli)?, &Odds, cli.fuel)?;
            project_out(cli, &a)
        }
        Command::Exec { left, right } => {
            let a = project_from_json::<Rational>(&read_json(left)?)?;
            let b = project_from_json::<Rational>(&read_json(right)?)?;
            project_out(cli, &execute_project(&a, &b, &Odds, cli.fuel)?)
        }
        Command::Verify { proof } => {
            let p = parse_proof(&read(proof)?)?;
            let diags = check_proof(&p);
            if !diags.is_empty() {
                let text: Vec<String> = diags.iter().map(|d| format!("{}:{d}", proof.display())).collect();
                return Err(Fail(1, text.join("\n")));
            }
            let r = verify_soundness(&p, &basis(cli)?, &Odds, cli.fuel)?;
            emit(cli, &pretty(&r.to_json()))?;
            if !r.sound() || !r.consistent() {
                return Err(Fail(1, format!("{}: not sound", proof.display())));
            }
            Ok(())
        }
        Command::Prop { name } => {
            let o = battery::run(name, cli.seed, cli.iters, cli.fuel, battery::default_workers())?;
            let mut text = String::new();
            for (i, m) in &o.failures {
                text.push_str(&format!("case {i}: {m}\n"));
            }
            text.push_str(&format!("{}/{} exact", o.exact, o.total));
            if o.redrawn > 0 {
                text.push_str(&format!(" ({} draws with infinite circuit sets redrawn)", o.redrawn));
            }
            text.push('\n');
            emit(cli, &text)?;
            if !o.passed() {
                return Err(Fail(1, format!("{}: {} of {} cases failed", name, o.failures.len(), o.total)));
            }
            Ok(())
        }
        Command::Export { file } => {
            let v = read_json(file)?;
            match cli.format {
                Format::Dot => emit(cli, &json_to_dot(&v)?),
                Format::Json => {
                    json_to_dot(&v)?;
                    emit(cli, &pretty(&v))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            eprintln!("{msg}");
            ExitCode::from(code)
        }
    }
}
