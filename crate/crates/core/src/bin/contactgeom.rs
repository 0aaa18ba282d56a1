use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use contactgeom::contact::EXAMPLES;
use contactgeom::frame::builtin::MODELS;
use contactgeom::scenario::{builtin_scenario, explain, load_scenario, load_scenario_file, run, RunOptions, CHECKS, SCENARIOS};
use contactgeom::tduality::DUAL_PAIRS;

#[derive(Parser)]
#[command(name = "contactgeom", version, about = "Exact checks for generalized almost contact structures")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario file, or a shipped scenario by name.
    Run {
        scenario: String,
        /// Exit with 3 when any check is inconclusive.
        #[arg(long)]
        strict: bool,
        /// Write the key-value report to this path.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Comma-separated sample point indices.
        #[arg(long, value_delimiter = ',')]
        points: Option<Vec<usize>>,
    },
    /// List builtin models, structures, dual pairs, scenarios and checks.
    List,
    /// Describe a check.
    Explain { check: String },
}

fn list() {
    println!("models:");
    for (n, d, _) in MODELS {
        println!("  {:<26} {}", n, d);
    }
    println!("structures:");
    for (n, d) in EXAMPLES {
        println!("  {:<26} {}", n, d);
    }
    println!("dual pairs:");
    for (n, d) in DUAL_PAIRS {
        println!("  {:<26} {}", n, d);
    }
    println!("scenarios:");
    for (n, d, _) in SCENARIOS {
        println!("  {:<26} {}", n, d);
    }
    println!("checks:");
    for c in CHECKS {
        println!("  {:<26} {}", c.name, c.summary);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::List => {
            list();
            ExitCode::SUCCESS
        }
        Cmd::Explain { check } => match explain(&check) {
            Some(text) => {
                print!("{}", text);
                ExitCode::SUCCESS
            }
            None => {
                eprintln!("unknown check `{}`", check);
                ExitCode::from(2)
            }
        },
        Cmd::Run { scenario, strict, report, points } => {
            let loaded = if Path::new(&scenario).exists() {
                load_scenario_file(Path::new(&scenario))
            } else if let Some(src) = builtin_scenario(&scenario) {
                load_scenario(&scenario, src, None)
            } else {
                eprintln!("error: no scenario file or shipped scenario named `{}`", scenario);
                return ExitCode::from(2);
            };
            let sc = match loaded {
                Ok(sc) => sc,
                Err(e) => {
                    eprintln!("error: {}", e);
                    return ExitCode::from(2);
                }
            };
            let rep = run(&sc, &RunOptions { strict, points });
            print!("{}", rep.render_text());
            if let Some(path) = report {
                if let Err(e) = std::fs::write(&path, rep.render_records()) {
                    eprintln!("error: cannot write `{}`: {}", path.display(), e);
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(rep.exit_code() as u8)
        }
    }
}
