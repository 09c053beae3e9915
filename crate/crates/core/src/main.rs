use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use serde::Serialize;

use frobtorus::survey::{self, Mode, SurveyConfig, SurveyError};

#[derive(Parser)]
#[command(name = "frobtorus", version, about = "Absolute simplicity of hyperelliptic Jacobians over small finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze every equation of a family; resumes if --out already has records.
    Survey {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        deg: usize,
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stop after the first COUNT absolutely simple curves.
    Find {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        count: usize,
        /// Defaults to 2g + 1.
        #[arg(long)]
        deg: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One curve (`p; h = …; f = …`) or one Weil polynomial (JSON).
    #[command(group(ArgGroup::new("input").required(true).args(["curve", "weil"])))]
    Analyze {
        #[arg(long)]
        curve: Option<String>,
        #[arg(long)]
        weil: Option<String>,
    },
    /// Re-verify a survey file and summarize it.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

fn run(cli: Cli) -> Result<(), SurveyError> {
    match cli.command {
        Command::Survey {
            p,
            genus,
            deg,
            limit,
            out,
        } => {
            let cfg = SurveyConfig {
                p,
                genus,
                degree: deg,
                limit,
                mode: Mode::Full,
                out,
            };
            print_json(&survey::survey_run(&cfg)?.summary);
        }
        Command::Find {
            p,
            genus,
            count,
            deg,
            out,
        } => {
            let cfg = SurveyConfig {
                p,
                genus,
                degree: deg.unwrap_or(2 * genus + 1),
                limit: None,
                mode: Mode::FindFirst(count),
                out,
            };
            print_json(&survey::survey_run(&cfg)?);
        }
        Command::Analyze { curve, weil } => match (curve, weil) {
            (Some(c), _) => print_json(&survey::analyze_one(&c)?),
            (None, Some(w)) => print_json(&survey::analyze_weil(&w)?),
            (None, None) => unreachable!("clap enforces the group"),
        },
        Command::Report { input } => print_json(&survey::report(&input)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("frobtorus: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 3 })
        }
    }
}
