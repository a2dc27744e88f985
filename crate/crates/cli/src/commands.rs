//! Subcommand implementations. The binary is a thin argument parser over
//! these, and the test suites call them directly.

use crate::agents::CliFactory;
use crate::config::{load_config, ConfigFile, ExperimentConfig};
use crate::formats::{
    games_to_pgn, read_game_records, read_json, read_loss_records, write_json, write_jsonl,
    RunSummary,
};
use crate::induced;
use crate::runner::run_match;
use anyhow::{anyhow, bail, Context, Result};
use std::path::{Path, PathBuf};
use tandem_core::agent::AgentFactory;
use tandem_core::analysis::{
    annotate_losses, default_bucket_edges, render_report, MoveLossRecord, ReportInputs,
};
use tandem_core::board::perft;
use tandem_core::framework::{Framework, GameRecord, Termination};
use tandem_core::Position;

pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub summary: RunSummary,
}

pub struct RunOptions {
    pub config: PathBuf,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
    pub pool: Option<PathBuf>,
}

pub fn cmd_run(options: &RunOptions) -> Result<Vec<RunOutcome>> {
    let loaded = load_config(&options.config)?;
    let experiments: Vec<ExperimentConfig> = match loaded {
        ConfigFile::Single(config) => vec![config],
        ConfigFile::Suite(suite) => {
            let mut members = Vec::with_capacity(suite.members.len());
            for mut member in suite.members {
                // Suite members share one pool and evaluator.
                if member.pool.is_none() {
                    member.pool = suite.pool.clone();
                }
                if member.evaluator.is_none() {
                    member.evaluator = suite.evaluator.clone();
                }
                members.push(member);
            }
            members
        }
    };

    let multi = experiments.len() > 1;
    let mut outcomes = Vec::with_capacity(experiments.len());
    for (index, mut config) in experiments.into_iter().enumerate() {
        if let Some(seed) = options.seed {
            config.master_seed = seed;
        }
        let hash = config.hash();
        let base_out = options
            .out
            .clone()
            .or_else(|| config.out.clone())
            .unwrap_or_else(|| PathBuf::from("runs").join(&hash));
        let out_dir = if multi {
            let name = config
                .name
                .clone()
                .unwrap_or_else(|| format!("experiment-{index}"));
            base_out.join(name)
        } else {
            base_out
        };
        std::fs::create_dir_all(&out_dir)
            .with_context(|| format!("creating {}", out_dir.display()))?;

        let pool_path = options
            .pool
            .clone()
            .unwrap_or_else(|| out_dir.join("pool.json"));
        let (spec, pool) = config.to_match_spec(Some(&pool_path))?;

        let workers = config.effective_workers(options.workers);
        let factory = CliFactory::new();
        let (result, records) = run_match(&spec, &factory, workers)?;

        let maxply_games = records
            .iter()
            .filter(|r| r.termination == Termination::MaxPly)
            .count() as u64;
        let summary = RunSummary {
            schema: 1,
            config_hash: hash.clone(),
            framework: config.framework,
            name: config.name.clone(),
            result: result.clone(),
            maxply_games,
        };

        write_jsonl(&out_dir.join("records.jsonl"), &records)?;
        write_json(&out_dir.join("summary.json"), &summary)?;
        std::fs::write(
            out_dir.join("games.pgn"),
            games_to_pgn(&records, &hash)?.as_bytes(),
        )?;
        if let Some(pool) = &pool {
            if !pool_path.exists() {
                write_json(&pool_path, pool)?;
            }
        }
        println!("{}: {}", out_dir.display(), result.summary_line());
        outcomes.push(RunOutcome { out_dir, summary });
    }
    Ok(outcomes)
}

pub struct AnnotateOptions {
    pub records: PathBuf,
    pub config: PathBuf,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

pub fn cmd_annotate(options: &AnnotateOptions) -> Result<PathBuf> {
    let config = single_config(&options.config)?;
    let evaluator_spec = config
        .evaluator
        .clone()
        .ok_or_else(|| anyhow!("config has no [evaluator] section"))?;
    let factory = CliFactory::new();
    let evaluator = factory.build_evaluator(&evaluator_spec)?;

    let records = read_game_records(&options.records)?;
    let scored: Vec<&GameRecord> = records.iter().filter(|r| !r.is_aborted()).collect();

    let workers = config.effective_workers(options.workers).min(scored.len().max(1));
    let mut losses: Vec<Vec<MoveLossRecord>> = Vec::with_capacity(scored.len());
    if workers <= 1 {
        for record in &scored {
            losses.push(annotate_losses(record, evaluator.as_ref())?);
        }
    } else {
        let next = std::sync::atomic::AtomicUsize::new(0);
        let slots: Vec<std::sync::Mutex<Option<Result<Vec<MoveLossRecord>>>>> =
            (0..scored.len()).map(|_| std::sync::Mutex::new(None)).collect();
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    if i >= scored.len() {
                        break;
                    }
                    let out = annotate_losses(scored[i], evaluator.as_ref())
                        .map_err(anyhow::Error::from);
                    *slots[i].lock().unwrap() = Some(out);
                });
            }
        });
        for slot in slots {
            losses.push(slot.into_inner().unwrap().expect("slot filled")?);
        }
    }

    let flat: Vec<MoveLossRecord> = losses.into_iter().flatten().collect();
    let out = options
        .out
        .clone()
        .unwrap_or_else(|| options.records.with_file_name("losses.jsonl"));
    write_jsonl(&out, &flat)?;
    println!("{}: {} annotated moves", out.display(), flat.len());
    Ok(out)
}

pub struct ReportOptions {
    pub losses: PathBuf,
    pub summary: Option<PathBuf>,
    pub records: Option<PathBuf>,
    pub config: Option<PathBuf>,
    pub out: PathBuf,
    pub skip_induced: bool,
    pub induced_cap: usize,
}

pub fn cmd_report(options: &ReportOptions) -> Result<PathBuf> {
    let losses = read_loss_records(&options.losses)?;
    let summary: Option<RunSummary> = match &options.summary {
        Some(path) => Some(read_json(path)?),
        None => None,
    };
    let records: Option<Vec<GameRecord>> = match &options.records {
        Some(path) => Some(read_game_records(path)?),
        None => None,
    };

    let framework = summary
        .as_ref()
        .map(|s| s.framework)
        .or_else(|| {
            records
                .as_ref()
                .and_then(|r| r.first().map(|g| g.framework))
        })
        .unwrap_or(if losses.iter().any(|l| l.interaction.is_some()) {
            Framework::HandBrain
        } else {
            Framework::TagTeam
        });

    // Method-2 counterfactual needs live agents; only run it when a
    // config and the game records are both available.
    let mut induced_rows = Vec::new();
    if !options.skip_induced {
        if let (Some(config_path), Some(records)) = (&options.config, &records) {
            let config = single_config(config_path)?;
            if let (Some(evaluator_spec), Some(junior)) =
                (config.evaluator.clone(), config.alter.junior.clone())
            {
                let factory = CliFactory::new();
                let evaluator = factory.build_evaluator(&evaluator_spec)?;
                induced_rows = induced::induced_table(
                    records,
                    &config.focal.senior,
                    &config.alter.senior,
                    &junior,
                    &evaluator,
                    &factory,
                    options.induced_cap,
                )?;
            }
        }
    }

    let maxply_games = summary.as_ref().map(|s| s.maxply_games).unwrap_or_else(|| {
        records
            .as_ref()
            .map(|r| {
                r.iter()
                    .filter(|g| g.termination == Termination::MaxPly)
                    .count() as u64
            })
            .unwrap_or(0)
    });

    let config_hash = summary.as_ref().map(|s| s.config_hash.clone());
    let thresholds: Vec<f64> = (0..=20).map(|i| i as f64).collect();
    let inputs = ReportInputs {
        title: summary
            .as_ref()
            .and_then(|s| s.name.as_deref())
            .unwrap_or("tandem experiment"),
        framework,
        config_hash: config_hash.as_deref(),
        pool_id: summary.as_ref().and_then(|s| s.result.pool_id.as_deref()),
        match_result: summary.as_ref().map(|s| &s.result),
        losses: &losses,
        maxply_games,
        induced: &induced_rows,
        bucket_edges: &default_bucket_edges(),
        thresholds: &thresholds,
    };
    let rendered = render_report(&inputs);

    std::fs::create_dir_all(&options.out)?;
    let report_path = options.out.join("report.txt");
    std::fs::write(&report_path, rendered.text.as_bytes())?;
    for (name, contents) in rendered.files {
        std::fs::write(options.out.join(name), contents.as_bytes())?;
    }
    println!("report written to {}", report_path.display());
    Ok(report_path)
}

pub fn cmd_perft(fen: &str, depth: u32) -> Result<u64> {
    let pos = if fen == "startpos" {
        Position::start()
    } else {
        Position::from_fen(fen).map_err(|e| anyhow!("bad FEN: {e}"))?
    };
    let count = perft(&pos, depth);
    println!("{count}");
    Ok(count)
}

#[derive(serde::Serialize, serde::Deserialize)]
pub struct NamedAgent {
    pub name: String,
    pub spec: tandem_core::agent::AgentSpec,
}

#[derive(serde::Serialize, serde::Deserialize)]
pub struct AgentsFile {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub agents: Vec<NamedAgent>,
}

fn default_schema() -> u32 {
    crate::config::CONFIG_SCHEMA_VERSION
}

pub struct AgreementOptions {
    pub config: PathBuf,
    pub corpus: PathBuf,
    pub out: Option<PathBuf>,
}

/// Pairwise argmax agreement matrix over a FEN corpus.
pub fn cmd_agreement(options: &AgreementOptions) -> Result<String> {
    let text = std::fs::read_to_string(&options.config)
        .with_context(|| format!("reading {}", options.config.display()))?;
    let file: AgentsFile = toml::from_str(&text).context("parsing agents file")?;
    if file.agents.len() < 2 {
        bail!("need at least two agents");
    }

    let corpus_text = std::fs::read_to_string(&options.corpus)
        .with_context(|| format!("reading {}", options.corpus.display()))?;
    let mut corpus = Vec::new();
    for (i, line) in corpus_text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let pos = Position::from_fen(line)
            .map_err(|e| anyhow!("corpus line {}: {e}", i + 1))?;
        if pos.legal_moves().is_empty() {
            bail!("corpus line {} is terminal", i + 1);
        }
        corpus.push(pos);
    }
    if corpus.is_empty() {
        bail!("corpus is empty");
    }

    let factory = CliFactory::new();
    // Cache each agent's argmax choices so the matrix costs one pass per
    // agent instead of one per pair.
    let mut choices: Vec<Vec<tandem_core::Move>> = Vec::with_capacity(file.agents.len());
    for agent_spec in &file.agents {
        let mut agent = factory.build(&agent_spec.spec)?;
        let mut row = Vec::with_capacity(corpus.len());
        for pos in &corpus {
            let dist = agent
                .policy(pos)
                .map_err(|e| anyhow!("{}: {e}", agent_spec.name))?;
            row.push(dist.argmax().expect("non-terminal position"));
        }
        choices.push(row);
    }

    let mut csv = String::from("agent");
    for agent in &file.agents {
        csv.push(',');
        csv.push_str(&agent.name);
    }
    csv.push('\n');
    for (i, row_agent) in file.agents.iter().enumerate() {
        csv.push_str(&row_agent.name);
        for j in 0..file.agents.len() {
            let agree = choices[i]
                .iter()
                .zip(&choices[j])
                .filter(|(a, b)| a == b)
                .count();
            let rate = agree as f64 / corpus.len() as f64;
            csv.push_str(&format!(",{rate:.4}"));
        }
        csv.push('\n');
    }

    if let Some(path) = &options.out {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).ok();
        }
        std::fs::write(path, csv.as_bytes())?;
        println!("agreement matrix written to {}", path.display());
    } else {
        print!("{csv}");
    }
    Ok(csv)
}

fn single_config(path: &Path) -> Result<ExperimentConfig> {
    match load_config(path)? {
        ConfigFile::Single(config) => Ok(config),
        ConfigFile::Suite(_) => bail!("expected a single-experiment config"),
    }
}

use tandem_core::agent::Agent as _;
