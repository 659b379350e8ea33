use clap::{Parser, Subcommand, ValueEnum};
use ksl_cli::commands::{self, RunConfig};
use ksl_cli::verify::{self, VerifyConfig};
use ksl_core::ring::DEFAULT_SIZE_GUARD;
use ksl_core::Error;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Kloosterman sums, Salem constants, and hyperbola graphs over finite rings.
#[derive(Parser)]
#[command(name = "ksl", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Absolute tolerance on scaled character sums.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Ring size guard; the KSL_GUARD environment variable overrides the
    /// built-in default, this flag overrides both.
    #[arg(long, global = true)]
    guard: Option<u64>,

    /// Worker threads (0 = one per core). Results do not depend on this.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Seed for the randomized verification instances.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Write the payload to this path instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum ComputeFormat {
    #[default]
    Json,
    /// Flattened coefficient table.
    Csv,
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum TableFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum GraphFormat {
    #[default]
    Json,
    /// Edge-list text.
    Edges,
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum ReportFormat {
    #[default]
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Kloosterman-Salem number, argmax witnesses, and the bound ledger.
    Compute {
        /// Ring spec, e.g. "Z/8", "GF(9)", "M2(GF(3))", "GF(4) x Z/3", "Z/2^5".
        #[arg(long)]
        ring: String,
        #[arg(long, value_enum, default_value_t = ComputeFormat::Json)]
        format: ComputeFormat,
    },
    /// Classification table over a ring family.
    Scan {
        /// Family pattern: "fields:q<=N", "zmod:n<=N", or "list:SPEC;SPEC".
        #[arg(long)]
        family: String,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// Hyperbola graph: spectral report and edge-list export.
    Graph {
        #[arg(long)]
        ring: String,
        #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
        format: GraphFormat,
        /// Additionally write the edge list to this path.
        #[arg(long)]
        edges_out: Option<PathBuf>,
    },
    /// Run a named verification suite (or "all").
    Verify {
        /// bounds | extremal-fields | products | pullback | graphs |
        /// counting | matrix | all
        suite: String,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse { .. } | Error::InvalidParameter(_) => 2,
        Error::GuardExceeded { .. } => 3,
        Error::Invariant(_) => 4,
        Error::AsymmetricSet { .. } | Error::ExtremalRing | Error::UnsupportedQuotient(_) => 2,
    }
}

fn emit(out: &Option<PathBuf>, payload: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, payload),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(payload.as_bytes())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    if cli.jobs > 0 {
        // determinism does not depend on the pool size; ignore double-init
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global();
    }
    let guard = cli
        .guard
        .or_else(|| std::env::var("KSL_GUARD").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(DEFAULT_SIZE_GUARD);
    let run_cfg = RunConfig { tolerance: cli.tol, guard };

    let io_fail = |e: std::io::Error| Error::InvalidParameter(format!("cannot write output: {e}"));

    match cli.command {
        Command::Compute { ring, format } => {
            let payload = match format {
                ComputeFormat::Json => {
                    let v = commands::compute_json(&ring, &run_cfg)?;
                    format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"))
                }
                ComputeFormat::Csv => commands::compute_csv(&ring, &run_cfg)?,
            };
            emit(&cli.out, &payload).map_err(io_fail)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan { family, format } => {
            let rows = commands::scan(&family, &run_cfg)?;
            let payload = match format {
                TableFormat::Csv => commands::scan_csv(&rows),
                TableFormat::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&commands::scan_json(&rows))
                        .expect("serializable")
                ),
            };
            emit(&cli.out, &payload).map_err(io_fail)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Graph { ring, format, edges_out } => {
            if let Some(path) = edges_out {
                let edges = commands::graph_edges(&ring, &run_cfg)?;
                std::fs::write(&path, edges).map_err(io_fail)?;
                eprintln!("wrote edge list to {}", path.display());
            }
            let payload = match format {
                GraphFormat::Json => {
                    let v = commands::graph_json(&ring, &run_cfg)?;
                    format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"))
                }
                GraphFormat::Edges => commands::graph_edges(&ring, &run_cfg)?,
            };
            emit(&cli.out, &payload).map_err(io_fail)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, format } => {
            let cfg = VerifyConfig { tolerance: cli.tol, guard, seed: cli.seed };
            let results = verify::run(&suite, &cfg)?;
            let payload = match format {
                ReportFormat::Text => verify::render_text(&results),
                ReportFormat::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&verify::render_json(&results))
                        .expect("serializable")
                ),
            };
            emit(&cli.out, &payload).map_err(io_fail)?;
            for suite in &results {
                eprintln!(
                    "suite {} finished in {:.3}s",
                    suite.suite,
                    suite.runtime.as_secs_f64()
                );
            }
            if results.iter().all(|s| s.passed()) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}
