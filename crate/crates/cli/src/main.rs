use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod load;
mod report;

#[derive(Parser)]
#[command(name = "ncfair")]
#[command(about = "Noncomparative fairness audits, auditor screening and scenario generation", long_about = None)]
#[command(version)]
struct Cli {
    /// Worker threads for pairwise scans (results do not depend on this)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Commands,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum SummaryFormat {
    #[default]
    Text,
    Md,
}

#[derive(Subcommand)]
enum Commands {
    /// Audit a system against a benchmark and check the fairness bounds
    Audit {
        /// Evaluation CSV of the system under test
        #[arg(long)]
        system: PathBuf,

        /// Evaluation CSV of the benchmark entity
        #[arg(long)]
        benchmark: PathBuf,

        /// Audit configuration (JSON)
        #[arg(long)]
        config: PathBuf,

        /// Write the JSON report here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,

        /// Summary style
        #[arg(long, value_enum, default_value_t = SummaryFormat::Text)]
        summary: SummaryFormat,
    },

    /// Screen a candidate auditor against a benchmark with the threshold rules
    Screen {
        /// Evaluation CSV of the candidate auditor
        #[arg(long)]
        candidate: PathBuf,

        /// Evaluation CSV of the benchmark entity
        #[arg(long)]
        benchmark: PathBuf,

        /// Audit configuration with a "screening" section (JSON)
        #[arg(long)]
        config: PathBuf,

        /// Write the JSON report here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,

        /// Summary style
        #[arg(long, value_enum, default_value_t = SummaryFormat::Text)]
        summary: SummaryFormat,
    },

    /// Generate a synthetic scenario with known ground truth
    Gen {
        /// Scenario spec (JSON)
        #[arg(long)]
        spec: PathBuf,

        /// Output directory
        #[arg(long)]
        out_dir: PathBuf,
    },

    /// Run the soundness and oracle-equivalence suite on generated scenarios
    Selftest {
        /// Number of scenarios
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,

        /// Base seed; trial i uses seed + i
        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Corrupt the estimate under test (harness check)
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match cli.command {
        Commands::Audit {
            system,
            benchmark,
            config,
            out,
            summary,
        } => commands::audit::run(&system, &benchmark, &config, out.as_deref(), summary),
        Commands::Screen {
            candidate,
            benchmark,
            config,
            out,
            summary,
        } => commands::screen::run(&candidate, &benchmark, &config, out.as_deref(), summary),
        Commands::Gen { spec, out_dir } => commands::gen::run(&spec, &out_dir),
        Commands::Selftest {
            trials,
            seed,
            inject_fault,
        } => commands::selftest::run(trials, seed, inject_fault),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
