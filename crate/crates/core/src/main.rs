use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use heartloc::commands::{self, Output};
use heartloc::context::Config;
use heartloc::error::{Error, Result};
use heartloc::fixtures;
use heartloc::problem::{Problem, ProblemFile};
use heartloc::report::exit_code;

/// Cotorsion pairs, hearts, mutations and localizations of module
/// categories of bound quiver algebras.
///
/// Exit status: 0 all checks pass, 1 a verification failed, 2 bad input,
/// 3 a bounded search was inconclusive.
#[derive(Parser)]
#[command(name = "heartloc", version)]
struct Cli {
    /// Prime field characteristic, overriding the file.
    #[arg(long, global = true)]
    field: Option<u32>,
    /// Dimension cap for bounded conflation searches.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Print computed subcategories on the module grid.
    #[arg(long, global = true)]
    print_panels: bool,
    /// Write the Gabriel quivers produced by the command to this file.
    #[arg(long, global = true)]
    dot: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a problem file and summarise its subcategories.
    Check { file: PathBuf },
    /// Right and left Ext¹-perpendicular categories.
    Perp { file: PathBuf, subcat: String },
    /// Rigidity and (RCP) of a subcategory.
    Rigid { file: PathBuf, subcat: String },
    /// Verify a cotorsion pair and list its heart.
    Cotorsion { file: PathBuf, u: String, v: String },
    /// The heart of (U, V), with V = U^⊥1 by default.
    Heart { file: PathBuf, u: String, v: Option<String> },
    /// Right mutation C' of C along D.
    Mutate { file: PathBuf, c: String, d: String },
    /// The localization model H_D/C' with its checks.
    Localize { file: PathBuf, c: String, d: String },
    /// Certify the pseudo-Morita equivalence for (C, D, C').
    VerifyMainTheorem { file: PathBuf, c: String, d: String, c_prime: String },
    /// Class flags of every basis morphism Y -> X.
    ClassifyMorphism { file: PathBuf, c: String, d: String, y: String, x: String },
    /// DOT text for `heart U [V]`, `localized C D` or `localized-dual M' N`.
    ExportDot { file: PathBuf, kind: String, a: String, b: Option<String> },
    /// Run a command on a shipped example (ex61, ex62).
    Demo { name: String, command: Option<String>, args: Vec<String> },
}

fn load(text: &str, cli: &Cli) -> Result<Problem> {
    let defaults = Config::default();
    let config = Config { dim_cap: cli.cap, seed: cli.seed.unwrap_or(defaults.seed), ..defaults };
    ProblemFile::parse(text)?.build(cli.field, config)
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::precondition(format!("{}: {e}", path.display())))
}

fn execute(cli: &Cli) -> Result<(String, Output)> {
    let (text, command, args): (String, String, Vec<String>) = match &cli.command {
        Command::Demo { name, command, args } => {
            let text = fixtures::by_name(name).ok_or_else(|| Error::precondition(format!("no example `{name}`")))?;
            let prob = load(text, cli)?;
            let (command, args) = commands::demo_invocation(&prob, command.as_deref(), args);
            let out = commands::run(&prob, &command, &args, cli.print_panels)?;
            return Ok((command, out));
        }
        Command::Check { file } => (read(file)?, "check".into(), vec![]),
        Command::Perp { file, subcat } => (read(file)?, "perp".into(), vec![subcat.clone()]),
        Command::Rigid { file, subcat } => (read(file)?, "rigid".into(), vec![subcat.clone()]),
        Command::Cotorsion { file, u, v } => (read(file)?, "cotorsion".into(), vec![u.clone(), v.clone()]),
        Command::Heart { file, u, v } => (read(file)?, "heart".into(), [Some(u.clone()), v.clone()].into_iter().flatten().collect()),
        Command::Mutate { file, c, d } => (read(file)?, "mutate".into(), vec![c.clone(), d.clone()]),
        Command::Localize { file, c, d } => (read(file)?, "localize".into(), vec![c.clone(), d.clone()]),
        Command::VerifyMainTheorem { file, c, d, c_prime } => {
            (read(file)?, "verify-main-theorem".into(), vec![c.clone(), d.clone(), c_prime.clone()])
        }
        Command::ClassifyMorphism { file, c, d, y, x } => {
            (read(file)?, "classify-morphism".into(), vec![c.clone(), d.clone(), y.clone(), x.clone()])
        }
        Command::ExportDot { file, kind, a, b } => {
            (read(file)?, "export-dot".into(), [Some(kind.clone()), Some(a.clone()), b.clone()].into_iter().flatten().collect())
        }
    };
    let prob = load(&text, cli)?;
    let out = commands::run(&prob, &command, &args, cli.print_panels)?;
    Ok((command, out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli);
    let code = match result {
        Ok((command, out)) => {
            let dots: String = out.dots.iter().map(|d| d.1.as_str()).collect();
            if command == "export-dot" {
                print!("{dots}");
            } else {
                print!("{}", out.report.render());
            }
            if let Some(path) = &cli.dot {
                if let Err(e) = std::fs::write(path, &dots) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            exit_code(&Ok(out.report))
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&Err(e))
        }
    };
    ExitCode::from(code as u8)
}
