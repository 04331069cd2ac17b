//! Thin command-line front end over [`wabsim::cli`].
//!
//! Exit codes: 0 success, 1 failed validation or missed calibration targets,
//! 2 I/O or parse errors. Logging is controlled by the `WAB_SIM_LOG`
//! environment variable (`error`, `warn`, `info`, `debug`, `trace`).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use wabsim::cli;

#[derive(Parser)]
#[command(name = "wabsim", version, about = "Wireless access-and-backhaul simulator")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a scenario file and report every validation problem.
    Validate {
        /// Scenario JSON file.
        scenario: PathBuf,
    },
    /// Simulate a scenario and write its artifacts.
    Run {
        /// Scenario JSON file.
        scenario: PathBuf,
        /// Directory receiving the artifacts (created if missing).
        #[arg(short, long, default_value = "out")]
        out_dir: PathBuf,
        /// Override the scenario's random seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Encoding of the per-tick measurement records.
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Check run artifacts against the shipped calibration targets.
    CalibrateCheck {
        /// Directory holding artifacts from `run`.
        #[arg(default_value = "out")]
        dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for cli::OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => cli::OutputFormat::Csv,
            Format::Json => cli::OutputFormat::Json,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("WAB_SIM_LOG", "warn")).init();

    let args = Args::parse();
    let result = match args.command {
        Command::Validate { scenario } => cli::cmd_validate(&scenario).map(|report| {
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            report.ok
        }),
        Command::Run {
            scenario,
            out_dir,
            seed,
            format,
        } => cli::cmd_run(&scenario, &out_dir, seed, format.into()).map(|artifacts| {
            for f in &artifacts.files {
                println!("wrote {}", f.display());
            }
            true
        }),
        Command::CalibrateCheck { dir } => cli::cmd_calibrate_check(&dir).map(|report| {
            for c in &report.checks {
                let verdict = if c.pass { "pass" } else { "FAIL" };
                println!("[{verdict}] {}: {} (want {})", c.name, c.observed, c.target);
            }
            println!("{} passed, {} failed", report.passed, report.failed);
            report.all_passed()
        }),
    };

    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
