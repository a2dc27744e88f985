use anyhow::Result;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use tandem_cli::commands::{
    cmd_agreement, cmd_annotate, cmd_perft, cmd_report, cmd_run, AgreementOptions,
    AnnotateOptions, ReportOptions, RunOptions,
};

/// Collaborative-chess experiment harness.
#[derive(Parser)]
#[command(name = "tandem", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play a configured match (or suite) and persist records.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the worker count.
        #[arg(long)]
        workers: Option<usize>,
        /// Output directory (default: runs/<config-hash>).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Bitstring pool file to load or create (default: <out>/pool.json).
        #[arg(long)]
        pool: Option<PathBuf>,
    },
    /// Annotate game records with move-level win-probability losses.
    Annotate {
        #[arg(long)]
        records: PathBuf,
        /// Config providing the [evaluator] section.
        #[arg(long)]
        config: PathBuf,
        /// Output path (default: losses.jsonl next to the records).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Render metric tables, curve files, and the text report.
    Report {
        #[arg(long)]
        losses: PathBuf,
        #[arg(long)]
        summary: Option<PathBuf>,
        #[arg(long)]
        records: Option<PathBuf>,
        /// Config for the counterfactual induced-loss table.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Skip the induced-loss table (it replays engines).
        #[arg(long)]
        skip_induced: bool,
        /// Board cap per induced-loss cell.
        #[arg(long, default_value_t = 400)]
        induced_cap: usize,
    },
    /// Count legal move-tree leaves (kernel validation).
    Perft {
        /// FEN string, or "startpos".
        fen: String,
        depth: u32,
    },
    /// Pairwise argmax agreement matrix over a FEN corpus.
    Agreement {
        /// TOML file with [[agents]] entries.
        #[arg(long)]
        config: PathBuf,
        /// FEN-per-line corpus file.
        #[arg(long)]
        corpus: PathBuf,
        /// CSV output path (default: print to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run {
            config,
            seed,
            workers,
            out,
            pool,
        } => {
            cmd_run(&RunOptions {
                config,
                seed,
                workers,
                out,
                pool,
            })?;
        }
        Command::Annotate {
            records,
            config,
            out,
            workers,
        } => {
            cmd_annotate(&AnnotateOptions {
                records,
                config,
                out,
                workers,
            })?;
        }
        Command::Report {
            losses,
            summary,
            records,
            config,
            out,
            skip_induced,
            induced_cap,
        } => {
            cmd_report(&ReportOptions {
                losses,
                summary,
                records,
                config,
                out,
                skip_induced,
                induced_cap,
            })?;
        }
        Command::Perft { fen, depth } => {
            cmd_perft(&fen, depth)?;
        }
        Command::Agreement { config, corpus, out } => {
            cmd_agreement(&AgreementOptions { config, corpus, out })?;
        }
    }
    Ok(())
}
