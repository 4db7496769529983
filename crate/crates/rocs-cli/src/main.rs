//! `rocs`: simulate sensor bundles, extract object properties, summarize
//! datasets, build symbolic knowledge bases and rank substitutes.
//!
//! Errors print a single `error[E_CODE] message` line to stderr and exit
//! nonzero (1 for pipeline errors, 2 for usage errors).

mod commands;
mod config;
mod scene;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use rocs_core::error::{Error, Result};

use config::{parse_variance, PipelineConfig};

#[derive(Parser)]
#[command(
    name = "rocs",
    version,
    about = "Object property pipeline: simulate, extract, stats, build-kb, query"
)]
struct Cli {
    /// Key-value config file with [ransac] [flatness] [contact] [simulate]
    /// [knowledge] [stats] [substitution] sections.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize one feature bundle directory per (object, repetition)
    Simulate {
        /// Scene file listing the objects
        #[arg(long)]
        scene: PathBuf,
        /// Directory the bundle tree is written into
        #[arg(long)]
        out: PathBuf,
        /// Root seed; overrides the config file
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Turn a tree of bundle directories into an observation CSV
    Extract {
        /// Root of the bundle tree
        #[arg(long)]
        bundles: PathBuf,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Summarize a dataset: per-class variance, correlations, coverage
    Stats {
        /// Observation CSV
        #[arg(long)]
        data: PathBuf,
        /// Directory for variance.csv, correlation.csv, coverage.csv
        #[arg(long)]
        out: PathBuf,
        /// Variance flavor: population or sample
        #[arg(long)]
        variance: Option<String>,
    },
    /// Cluster instance means into a symbolic knowledge base
    BuildKb {
        /// Observation CSV
        #[arg(long)]
        data: PathBuf,
        /// Output kb.json path
        #[arg(long)]
        out: PathBuf,
        /// Clustering seed; overrides the config file
        #[arg(long)]
        seed: Option<u64>,
        /// Default cluster count per property; overrides the config file
        #[arg(long)]
        eta: Option<usize>,
    },
    /// Rank substitute classes for missing-object queries
    Query {
        /// Knowledge base JSON
        #[arg(long)]
        kb: PathBuf,
        /// Query file: one query object, a JSON array, or {"queries": [...]}
        #[arg(long)]
        queries: PathBuf,
        /// Output JSON path; omitted prints the JSON to stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Substitutability threshold; overrides the config file
        #[arg(long)]
        threshold: Option<f64>,
    },
}

fn load_config(path: Option<&PathBuf>) -> Result<PipelineConfig> {
    match path {
        None => Ok(PipelineConfig::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.display().to_string(),
                source: e,
            })?;
            PipelineConfig::from_str(&text, &path.display().to_string())
        }
    }
}

fn run(cli: Cli) -> Result<String> {
    let mut config = load_config(cli.config.as_ref())?;
    match cli.command {
        Command::Simulate { scene, out, seed } => {
            commands::simulate(&scene, &out, seed, &config)
        }
        Command::Extract { bundles, out } => commands::extract(&bundles, &out, &config),
        Command::Stats {
            data,
            out,
            variance,
        } => {
            if let Some(flavor) = variance {
                config.variance = parse_variance(&flavor)?;
            }
            commands::stats(&data, &out, &config)
        }
        Command::BuildKb {
            data,
            out,
            seed,
            eta,
        } => commands::build_kb(&data, &out, seed, eta, &config),
        Command::Query {
            kb,
            queries,
            out,
            threshold,
        } => commands::query(&kb, &queries, out.as_deref(), threshold, &config),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(summary) => println!("{summary}"),
        Err(err) => {
            // one line, machine-parsable prefix
            let message = err.to_string().replace('\n', "; ");
            eprintln!("error[{}] {message}", err.code());
            std::process::exit(1);
        }
    }
}
