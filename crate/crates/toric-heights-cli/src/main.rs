use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use toric_heights_cli::run;
use toric_heights_cli::{ExperimentConfig, PrimeRange, Problem};

#[derive(Parser)]
#[command(name = "toric-heights", version, about = "Height predictions for torsion-twisted toric intersections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Problem file (JSON). Defaults to f = g = 1 + x + y.
    #[arg(long)]
    problem: Option<PathBuf>,
    /// Range of prime torsion orders, `a..b` inclusive.
    #[arg(long, default_value = "101..401")]
    primes: PrimeRange,
    /// Ronkin evaluations per Archimedean dual.
    #[arg(long, default_value_t = 20_000)]
    budget: u64,
    /// Grid resolution of Archimedean duals.
    #[arg(long, default_value_t = 64)]
    resolution: u32,
    /// Seed for the exponents `s`.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Limit height Σ_v MI(roofs, Ronkin duals) with per-place terms (JSON).
    Predict(Common),
    /// Exact cycle heights against the prediction (CSV; JSON summary on stderr
    /// or next to `--out`).
    Verify(Common),
    /// Sum of local error terms at good primes (CSV).
    Tail {
        #[command(flatten)]
        common: Common,
        /// Largest prime included.
        #[arg(long, default_value_t = 100)]
        prime_bound: u64,
    },
    /// Galois-orbit averages of log|h| against m(h) (CSV).
    Equidist(Common),
    /// Mixed volume and torus solution counts (JSON).
    Degree(Common),
}

fn setup(c: &Common) -> Result<(Problem, ExperimentConfig)> {
    let problem = match &c.problem {
        Some(p) => Problem::load(p)?,
        None => Problem::line_pair(),
    };
    let config = ExperimentConfig {
        problem: c.problem.clone(),
        primes: c.primes,
        seed: c.seed,
        budget: c.budget,
        resolution: c.resolution,
        out: c.out.clone(),
        model: Default::default(),
    };
    config.validate()?;
    Ok((problem, config))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn json<T: Serialize>(x: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(x)? + "\n")
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Predict(c) => {
            let (p, cfg) = setup(&c)?;
            emit(&c.out, &json(&run::predict(&p, &cfg)?)?)
        }
        Command::Verify(c) => {
            let (p, cfg) = setup(&c)?;
            let (rows, summary) = run::convergence(&p, &cfg)?;
            emit(&c.out, &run::to_csv(&rows)?)?;
            let s = json(&summary)?;
            match &c.out {
                Some(path) => std::fs::write(path.with_extension("summary.json"), s)?,
                None => eprint!("{s}"),
            }
            Ok(())
        }
        Command::Tail { common, prime_bound } => {
            let (p, cfg) = setup(&common)?;
            emit(&common.out, &run::to_csv(&run::tail(&p, &cfg, prime_bound)?)?)
        }
        Command::Equidist(c) => {
            let (p, cfg) = setup(&c)?;
            emit(&c.out, &run::to_csv(&run::equidist(&p, &cfg)?)?)
        }
        Command::Degree(c) => {
            let (p, cfg) = setup(&c)?;
            emit(&c.out, &json(&run::degree(&p, &cfg)?)?)
        }
    }
}
