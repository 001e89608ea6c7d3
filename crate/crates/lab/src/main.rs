use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use orbclose_lab::{Config, Error, Experiment};

#[derive(Parser)]
#[command(name = "orbclose", version, about = "Orbit-closeness scaling experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shortest-distance exponents for interval and circle maps.
    MapScaling(Common),
    /// Shortest-distance exponents for a suspension flow.
    FlowScaling(Common),
    /// Exponents for a skew product with a prescribed rotation number.
    SkewScaling(Common),
    /// Correlation-dimension estimate against its analytic value.
    CorrDim(Common),
    /// Irrationality-exponent estimates along continued-fraction convergents.
    Gamma(Common),
}

#[derive(Args)]
struct Common {
    /// Flat key = value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    pairs: Option<u64>,
    /// Largest orbit length (rounded down to a power of two).
    #[arg(long)]
    nmax: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    /// Extra `key=value` overrides.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn build(experiment: Experiment, c: &Common) -> Result<Config, Error> {
    let mut cfg = match &c.config {
        Some(path) => Config::load(experiment, path)?,
        None => Config::new(experiment),
    };
    for kv in &c.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got {kv:?}")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    if let Some(seed) = c.seed {
        cfg.set("seed", seed.to_string())?;
    }
    if let Some(p) = c.pairs {
        cfg.set("pairs", p.to_string())?;
    }
    if let Some(t) = c.threads {
        cfg.set("threads", t.to_string())?;
    }
    if let Some(n) = c.nmax {
        if n < 2 {
            return Err(Error::Config("--nmax must be at least 2".into()));
        }
        let key = match experiment {
            Experiment::FlowScaling => "flow.tmax_exp",
            Experiment::CorrDim => "m",
            Experiment::Gamma => "gamma.k",
            _ => "grid.max_exp",
        };
        let value = match experiment {
            Experiment::CorrDim | Experiment::Gamma => n,
            _ => 63 - u64::from(n.leading_zeros()),
        };
        cfg.set(key, value.to_string())?;
    }
    cfg.set("out", c.out.display().to_string())?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, common) = match &cli.command {
        Command::MapScaling(c) => (Experiment::MapScaling, c),
        Command::FlowScaling(c) => (Experiment::FlowScaling, c),
        Command::SkewScaling(c) => (Experiment::SkewScaling, c),
        Command::CorrDim(c) => (Experiment::CorrDim, c),
        Command::Gamma(c) => (Experiment::Gamma, c),
    };
    let result = build(experiment, common).and_then(|cfg| orbclose_lab::run(&cfg, &common.out));
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
