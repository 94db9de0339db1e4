use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use als_cli::bench::{plan, render_table, run_bench, to_jsonl, BenchConfig};
use als_cli::io::{read_pla, render_cover};
use als_cli::run::{approximate_loaded, verify_docs, ApproxOptions, Threshold};
use als_core::insertion::InsertionConfig;
use als_core::{EngineConfig, LiteralRule, Minimizer};
use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "als",
    version,
    about = "Error-rate constrained approximation of two-level logic"
)]
struct Cli {
    /// error, warn, info, debug or trace
    #[arg(long, global = true, default_value = "warn")]
    log_level: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct EngineArgs {
    /// Reject output don't-cares and `.p` mismatches.
    #[arg(long)]
    strict: bool,
    /// Count input literals only.
    #[arg(long)]
    count_inputs_only: bool,
    /// Pass the chosen EICs to the final minimization as don't-cares.
    #[arg(long)]
    dc_eic: bool,
    #[arg(long, default_value_t = 25.0)]
    sct_top_pct: f64,
    #[arg(long, default_value_t = 80.0)]
    sct_partner_pct: f64,
    /// Use the built-in minimizer even when an external one is configured.
    #[arg(long)]
    no_external: bool,
    /// Espresso executable (default: $ALS_ESPRESSO).
    #[arg(long, value_name = "PATH")]
    espresso: Option<PathBuf>,
}

impl EngineArgs {
    fn options(&self) -> ApproxOptions {
        let minimizer = if self.no_external {
            Minimizer::internal()
        } else if let Some(p) = &self.espresso {
            Minimizer::with_external(p)
        } else {
            Minimizer::from_env()
        };
        ApproxOptions {
            engine: EngineConfig {
                insertion: InsertionConfig {
                    top_pct: self.sct_top_pct,
                    partner_pct: self.sct_partner_pct,
                    ..InsertionConfig::default()
                },
                dc_eic: self.dc_eic,
                minimizer,
            },
            rule: if self.count_inputs_only {
                LiteralRule::InputsOnly
            } else {
                LiteralRule::InputsAndOutputs
            },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Approximate a PLA under an error-rate or error-count budget.
    Approximate {
        input: PathBuf,
        /// Error-rate threshold as a fraction of all input combinations.
        #[arg(long, conflicts_with = "noe", required_unless_present = "noe")]
        er: Option<f64>,
        /// Maximum number of erroneous input combinations.
        #[arg(long)]
        noe: Option<u64>,
        /// Output PLA (default: stdout).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print the report as one JSON line.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Measure the error between two PLAs.
    Verify {
        original: PathBuf,
        approx: PathBuf,
        /// Sample this many random inputs instead of enumerating all of them.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run a benchmark configuration over a directory of PLA files.
    Bench {
        corpus: PathBuf,
        /// noe16, ersweep, or a comma-separated list like `noe:16,er:0.05`.
        #[arg(long, default_value = "noe16")]
        config: String,
        /// Write the JSON-lines report here.
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
        /// Leave wall-clock fields out of both outputs.
        #[arg(long)]
        no_timing: bool,
        /// Run circuits one at a time.
        #[arg(long)]
        sequential: bool,
        #[command(flatten)]
        engine: EngineArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .parse_filters(&cli.log_level)
        .format_timestamp(None)
        .init();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Approximate {
            input,
            er,
            noe,
            output,
            json,
            engine,
        } => {
            let threshold = match (er, noe) {
                (Some(er), None) => Threshold::Er(er),
                (None, Some(e)) => Threshold::Noe(e),
                _ => unreachable!("clap enforces exactly one threshold"),
            };
            let loaded = read_pla(&input, engine.strict)?;
            let (cover, record) = approximate_loaded(&loaded, threshold, &engine.options())?;
            let text = render_cover(&loaded.doc, &cover);
            let report = if json {
                serde_json::to_string(&record)?
            } else {
                record.to_string()
            };
            match output {
                Some(path) => {
                    std::fs::write(&path, text)
                        .with_context(|| format!("cannot write {}", path.display()))?;
                    println!("{report}");
                }
                None => {
                    print!("{text}");
                    eprintln!("{report}");
                }
            }
            Ok(if record.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Verify {
            original,
            approx,
            samples,
            seed,
            strict,
            json,
        } => {
            let a = read_pla(&original, strict)?;
            let b = read_pla(&approx, strict)?;
            let record = verify_docs(&a.doc, &b.doc, samples, seed)?;
            if json {
                println!("{}", serde_json::to_string(&record)?);
            } else {
                println!("{record}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            corpus,
            config,
            report,
            no_timing,
            sequential,
            engine,
        } => {
            let config: BenchConfig = config.parse().map_err(anyhow::Error::msg)?;
            let (jobs, missing) = plan(&corpus, &config)?;
            if !missing.is_empty() {
                log::warn!("not in corpus: {}", missing.join(", "));
            }
            let records = run_bench(&jobs, &engine.options(), engine.strict, !sequential);
            print!("{}", render_table(&records, !no_timing));
            if let Some(path) = report {
                let mut f = std::fs::File::create(&path)
                    .with_context(|| format!("cannot create {}", path.display()))?;
                f.write_all(to_jsonl(&records, !no_timing).as_bytes())?;
            }
            let failed = records.iter().filter(|r| !r.passed()).count();
            if failed > 0 {
                eprintln!("{failed} run(s) failed");
                return Ok(ExitCode::FAILURE);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
