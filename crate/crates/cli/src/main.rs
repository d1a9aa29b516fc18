//! Command-line entry point.
//!
//! Exit codes: 0 success, 1 validation error, 2 numerical failure,
//! 3 invariant failure (check).

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use evanfront_cli::config::RunConfig;
use evanfront_cli::{commands, output};
use output::Format;

#[derive(Parser)]
#[command(
    name = "evanfront",
    version,
    about = "Causal front propagation of switched-on sources in evanescent media"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file (stdout when absent).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format.
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Worker threads for grid sweeps (all cores when absent).
    #[arg(long)]
    jobs: Option<usize>,
    /// Override of the quadrature relative tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluates the field ψ(x, t) over the configured grid.
    Simulate(CommonArgs),
    /// Analytic pole/forerunner decomposition over the configured grid.
    Decompose(CommonArgs),
    /// Front velocity and traversal time over a carrier-frequency sweep.
    Front(CommonArgs),
    /// Phase maps: level polylines of Re φ and Im φ on complex-Ω grids.
    Phasemap(CommonArgs),
    /// Runs the invariant suite.
    Check {
        /// quick (seconds) or full (adds convergence and crossover scans).
        #[arg(long, default_value = "quick")]
        profile: String,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        // a reader closing the pipe early (e.g. `| head`) is not an error
        Err(e) if is_broken_pipe(&e) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    };
    std::process::exit(code);
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|cause| {
        cause
            .downcast_ref::<std::io::Error>()
            .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
    })
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Simulate(args) => run_table(args, "simulate"),
        Command::Decompose(args) => run_table(args, "decompose"),
        Command::Front(args) => run_table(args, "front"),
        Command::Phasemap(args) => run_phasemap(args),
        Command::Check {
            profile,
            output,
            format,
        } => run_check(&profile, output, format),
    }
}

fn install_pool(jobs: Option<usize>) -> anyhow::Result<()> {
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| anyhow::anyhow!("thread pool: {e}"))?;
    }
    Ok(())
}

fn run_table(args: CommonArgs, which: &str) -> anyhow::Result<i32> {
    install_pool(args.jobs)?;
    let start = Instant::now();
    let cfg = RunConfig::load(&args.config)?;
    let settings = cfg.core_settings(args.tol);
    let outcome = match which {
        "simulate" => commands::simulate(&cfg, &settings)?,
        "decompose" => commands::decompose(&cfg)?,
        "front" => commands::front(&cfg)?,
        _ => unreachable!(),
    };
    let mut sink = output::open_sink(args.output.as_deref())?;
    output::write_table(&mut sink, args.format, which, &cfg, &outcome.table)?;
    drop(sink);
    eprintln!(
        "{which}: {} rows in {:.3}s ({} numerical failures)",
        outcome.table.rows.len(),
        start.elapsed().as_secs_f64(),
        outcome.numerical_failures
    );
    Ok(if outcome.numerical_failures > 0 { 2 } else { 0 })
}

fn run_phasemap(args: CommonArgs) -> anyhow::Result<i32> {
    install_pool(args.jobs)?;
    let start = Instant::now();
    let cfg = RunConfig::load(&args.config)?;
    let files = commands::phasemap_extract(&cfg)?;
    let mut sink = output::open_sink(args.output.as_deref())?;
    match args.format {
        Format::Csv => evanfront::phasemap::write_csv(&mut sink, &files.polylines)?,
        Format::Json => {
            let record = serde_json::json!({
                "command": "phasemap",
                "version": env!("CARGO_PKG_VERSION"),
                "config": &cfg,
                "polylines": &files.polylines,
            });
            serde_json::to_writer_pretty(&mut sink, &record)?;
            use std::io::Write;
            writeln!(sink)?;
        }
    }
    drop(sink);
    eprintln!(
        "phasemap: {} polylines in {:.3}s",
        files.polylines.len(),
        start.elapsed().as_secs_f64()
    );
    Ok(0)
}

fn run_check(profile: &str, output: Option<PathBuf>, format: Format) -> anyhow::Result<i32> {
    let profile = match profile {
        "quick" => evanfront::checks::Profile::Quick,
        "full" => evanfront::checks::Profile::Full,
        other => anyhow::bail!("unknown profile {other:?} (use quick or full)"),
    };
    let start = Instant::now();
    let results = evanfront::checks::run(profile);
    let failures = results.iter().filter(|r| !r.passed).count();
    match output {
        Some(path) => {
            let mut sink = output::open_sink(Some(&path))?;
            match format {
                Format::Json => {
                    serde_json::to_writer_pretty(&mut sink, &results)?;
                    use std::io::Write;
                    writeln!(sink)?;
                }
                Format::Csv => {
                    use std::io::Write;
                    writeln!(sink, "# evanfront check csv v1")?;
                    writeln!(sink, "name,passed,measured,threshold,detail")?;
                    for r in &results {
                        writeln!(
                            sink,
                            "{},{},{},{},\"{}\"",
                            r.name, r.passed, r.measured, r.threshold, r.detail
                        )?;
                    }
                }
            }
        }
        None => {
            for r in &results {
                println!(
                    "{} {:32} measured {:>12.4e}  threshold {:>9.1e}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.measured,
                    r.threshold
                );
            }
        }
    }
    eprintln!(
        "check: {} invariants, {} failures, {:.3}s",
        results.len(),
        failures,
        start.elapsed().as_secs_f64()
    );
    Ok(if failures > 0 { 3 } else { 0 })
}
