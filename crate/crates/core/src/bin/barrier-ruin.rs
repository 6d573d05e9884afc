use std::path::PathBuf;
use std::process::ExitCode;

use barrier_ruin::harness::{self, Overrides};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "barrier-ruin", version, about = "Two-barrier ruin sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the K-sweep; write sweep.csv, identities.csv and report.txt.
    Run(Target),
    /// Simulate the K-sweep; write ratios.csv.
    Compare(Target),
}

#[derive(Args)]
struct Target {
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reps: Option<u64>,
    /// Output directory, overriding output.directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

impl Target {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            replications: self.reps,
            out: self.out.clone(),
            workers: self.workers,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(t) => match harness::run(&t.config, &t.overrides()) {
            Ok(summary) => {
                let failed = summary.checks.iter().filter(|c| !c.check.passed).count();
                println!(
                    "wrote {} ({} K values, {} identity checks, {} failed, censored {:.4})",
                    summary.output_dir.display(),
                    summary.rows.len(),
                    summary.checks.len(),
                    failed,
                    summary.censored_fraction
                );
                if summary.success() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Command::Compare(t) => match harness::compare(&t.config, &t.overrides()) {
            Ok(summary) => {
                for (r, f) in summary.rows.iter().zip(&summary.flags) {
                    println!(
                        "K = {}: wedge {:.4} vee {:.4} times {:.4}{}",
                        r.k,
                        r.ratio_wedge(),
                        r.ratio_vee(),
                        r.ratio_times(),
                        if f.iter().any(|&x| x) { " (not shrinking)" } else { "" }
                    );
                }
                println!("wrote {}", summary.output_dir.join("ratios.csv").display());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
    }
}
