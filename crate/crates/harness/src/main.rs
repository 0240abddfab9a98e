use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ergoring_core::pet::{render_outline, TraceNode};
use ergoring_harness::{exit, run_config, run_suite, write_record, ExperimentConfig, HarnessError, ResultRecord, RunOptions};

#[derive(Parser)]
#[command(name = "ergoring", version, about = "Multiple ergodic averages over rings: experiments and checks")]
struct Cli {
    /// Directory for result files.
    #[arg(long, global = true, default_value = "results")]
    out_dir: PathBuf,
    /// Worker threads (defaults to the number of CPUs). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Override the seed from the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Record wall time in the summary files.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment config.
    Run { config: PathBuf },
    /// Run the bundled acceptance configs.
    Suite {
        #[arg(long)]
        tag: Option<String>,
        /// Read the bundled config files from this directory instead.
        #[arg(long)]
        config_dir: Option<PathBuf>,
    },
    /// Reduce a polynomial system, e.g. `"n^2, n"`, and print its trace.
    PetTrace {
        polys: String,
        #[arg(long, default_value = "Z")]
        ring: String,
    },
}

fn report(record: &ResultRecord) {
    for v in &record.verdicts {
        println!("{} {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.name, v.detail);
    }
}

fn main_inner(cli: Cli) -> Result<i32, HarnessError> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| HarnessError::Runtime(e.to_string()))?;
    }
    let options = RunOptions { seed: cli.seed, timing: cli.timing };
    match cli.command {
        Command::Run { config } => {
            let source = std::fs::read_to_string(&config)?;
            let config = ExperimentConfig::parse(&source)?;
            let record = run_config(&config, &options)?;
            report(&record);
            for p in write_record(&record, &cli.out_dir)? {
                println!("wrote {}", p.display());
            }
            Ok(if record.pass() { exit::PASS } else { exit::FAIL })
        }
        Command::Suite { tag, config_dir } => {
            let suite = run_suite(tag.as_deref(), config_dir.as_deref(), &options)?;
            for e in &suite.entries {
                if let Ok(r) = &e.outcome {
                    write_record(r, &cli.out_dir)?;
                }
            }
            print!("{}", suite.table());
            Ok(suite.exit_code())
        }
        Command::PetTrace { polys, ring } => {
            let list: Vec<String> = polys
                .trim()
                .trim_start_matches('{')
                .trim_end_matches('}')
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            let config = ergoring_harness::pet_trace_config("pet-trace", &ring, &list)?;
            let record = run_config(&config, &options)?;
            if let Some(trace) = record.trace.as_ref().and_then(|t| t.get("input")) {
                let node: TraceNode =
                    serde_json::from_value(trace.clone()).map_err(|e| HarnessError::Runtime(e.to_string()))?;
                print!("{}", render_outline(&node));
            } else {
                report(&record);
            }
            let k = record.column("k").and_then(|i| record.rows.first().map(|r| r[i].clone())).unwrap_or_default();
            println!("k = {k}");
            for p in write_record(&record, &cli.out_dir)? {
                println!("wrote {}", p.display());
            }
            Ok(if record.pass() { exit::PASS } else { exit::FAIL })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match main_inner(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
