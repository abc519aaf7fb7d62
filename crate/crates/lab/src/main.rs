use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use beltrami_lab::{run, verify_suite, ExperimentConfig, LabError, Level};

#[derive(Parser)]
#[command(name = "beltrami-lab", version, about = "Batch runner for Beltrami field experiments")]
struct Cli {
    /// Worker threads for seeds, ε values and matrix samples.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment configuration.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; defaults to $BELTRAMI_LAB_OUT/<kind>-<hash> or lab-output/<kind>-<hash>.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the seed in the configuration.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the acceptance suite and write summary.json.
    Verify {
        #[arg(long, value_enum, default_value = "quick")]
        level: Level,
        #[arg(long, default_value = "lab-output/verify")]
        out: PathBuf,
    },
}

fn fail(e: &LabError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    if let Some(j) = cli.jobs {
        if j == 0 || rayon::ThreadPoolBuilder::new().num_threads(j).build_global().is_err() {
            return fail(&LabError::ConfigInvalid(format!("cannot start a pool of {j} workers")));
        }
    }
    match cli.command {
        Command::Run { config, out, seed } => {
            let mut cfg = match ExperimentConfig::from_path(&config) {
                Ok(c) => c,
                Err(e) => return fail(&e),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            match run(&cfg, out.as_deref()) {
                Ok(rec) => {
                    for a in &rec.assertions {
                        println!("{} {} = {:e} ({:?} {:e})", if a.passed { "ok  " } else { "FAIL" }, a.name, a.value, a.comparison, a.threshold);
                    }
                    println!("{} files in {}", rec.files.len() + 1, rec.output_dir.display());
                    ExitCode::from(rec.exit_code() as u8)
                }
                Err(e) => fail(&e),
            }
        }
        Command::Verify { level, out } => {
            if let Err(e) = std::fs::create_dir_all(&out) {
                return fail(&LabError::compute(e));
            }
            let summary = verify_suite(level, &out.join("scratch"));
            for c in &summary.criteria {
                println!("{}", c.summary_line());
            }
            let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
            if let Err(e) = std::fs::write(out.join("summary.json"), text + "\n") {
                return fail(&LabError::compute(e));
            }
            if summary.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
