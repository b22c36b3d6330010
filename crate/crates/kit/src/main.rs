use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use picard_kit::input::{load_extra, SurfaceDoc};
use picard_kit::{load_session, run_pipeline_with, save_session, Options, Session};

#[derive(Parser)]
#[command(name = "picard-kit", version, about = "Geometric Picard lattices of K3 double sextics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a sublattice of Pic and decide whether it is everything.
    Compute(ComputeArgs),
}

#[derive(clap::Args)]
struct ComputeArgs {
    /// Surface document (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Skip point counting and use this upper bound.
    #[arg(long)]
    tau_override: Option<u32>,
    /// Primes for point counting, comma separated.
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    /// Largest extension degree n for counting over F_{p^n}.
    #[arg(long)]
    max_n: Option<u32>,
    /// Extra divisors (JSON).
    #[arg(long)]
    divisors: Option<PathBuf>,
    /// Wall-clock budget in seconds, over all runs of a session.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Session file; created if missing, resumed otherwise.
    #[arg(long)]
    session: Option<PathBuf>,
    /// Where to write the report; stdout otherwise.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn options(a: &ComputeArgs, base: &Options) -> Options {
    let mut o = base.clone();
    o.tau_override = a.tau_override.or(o.tau_override);
    if let Some(p) = &a.primes {
        o.primes = p.clone();
    }
    if let Some(n) = a.max_n {
        o.max_n = n;
    }
    if a.time_limit.is_some() {
        o.time_limit_secs = a.time_limit;
    }
    o
}

fn compute(a: ComputeArgs) -> anyhow::Result<()> {
    let doc = SurfaceDoc::load(&a.input)?;
    let extra = match &a.divisors {
        Some(p) => load_extra(p)?,
        None => Vec::new(),
    };
    let mut session = match &a.session {
        Some(p) if p.exists() => {
            let mut s = load_session(p).with_context(|| format!("loading {}", p.display()))?;
            if s.surface != doc {
                anyhow::bail!("{} belongs to a different surface", p.display());
            }
            let o = options(&a, &s.options);
            s.update_options(o);
            s.add_extra(extra);
            s
        }
        _ => Session::new(doc, options(&a, &Options::default()), extra),
    };
    let path = a.session.clone();
    let outcome = run_pipeline_with(&mut session, &mut |s| match &path {
        Some(p) => save_session(s, p),
        None => Ok(()),
    })?;
    let json = outcome.report.to_json();
    match &a.report {
        Some(p) => std::fs::write(p, json + "\n").with_context(|| format!("writing {}", p.display()))?,
        None => println!("{json}"),
    }
    eprintln!("rank {} of tau {}: {}", outcome.report.rank, outcome.report.tau, outcome.verdict);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.command {
        Command::Compute(a) => compute(a),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
