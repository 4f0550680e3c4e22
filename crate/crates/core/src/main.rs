use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mscheme::cli::{run_suite, Definitions, ResolveOptions, Suite, SuiteOptions};

#[derive(Parser)]
#[command(name = "mscheme", version, about = "Check monoid, fraction-field and scheme definitions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a check suite and write a JSON report.
    Check {
        file: PathBuf,
        /// monoid-axioms, integrality, fraction-field, scheme, thm-1-1 or all
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = mscheme::monoid::sample::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = mscheme::kernel::DEFAULT_DEGREE_BOUND)]
        degree_bound: usize,
        #[arg(long, default_value_t = mscheme::fpcat::DEFAULT_STAGE_BOUND)]
        stage_bound: usize,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Exit with 3 when a check is undecided.
        #[arg(long)]
        strict: bool,
        /// Worker threads (0: all cores).
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Print a definition file in canonical form.
    Fmt { file: PathBuf },
}

fn config_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("mscheme: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { file, suite, seed, degree_bound, stage_bound, out, strict, threads } => {
            let suite: Suite = match suite.parse() {
                Ok(s) => s,
                Err(e) => return config_error(e),
            };
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => return config_error(format!("{}: {e}", file.display())),
            };
            let defs = match Definitions::parse(&text, &ResolveOptions { degree_bound }) {
                Ok(d) => d,
                Err(e) => return config_error(format!("{}:{e}", file.display())),
            };
            let report = run_suite(&defs, suite, &SuiteOptions { seed, degree_bound, stage_bound, threads });
            let json = report.to_json();
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, json + "\n") {
                        return config_error(format!("{}: {e}", path.display()));
                    }
                }
                None => println!("{json}"),
            }
            let s = &report.summary;
            eprintln!(
                "{}: {} pass, {} fail, {} out-of-hypothesis, {} undecided",
                suite, s.pass, s.fail, s.out_of_hypothesis, s.undecided
            );
            ExitCode::from(report.exit_code(strict) as u8)
        }
        Command::Fmt { file } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => return config_error(format!("{}: {e}", file.display())),
            };
            match mscheme::cli::parse_document(&text) {
                Ok(doc) => {
                    print!("{}", doc.to_text());
                    ExitCode::SUCCESS
                }
                Err(e) => config_error(format!("{}:{e}", file.display())),
            }
        }
    }
}
