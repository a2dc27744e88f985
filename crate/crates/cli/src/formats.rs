//! On-disk artifacts: JSON-lines records, PGN export, and run summaries.

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use tandem_core::analysis::MoveLossRecord;
use tandem_core::framework::{
    Framework, GameOutcome, GameRecord, MatchResult, RECORD_SCHEMA_VERSION,
};

/// Append-friendly JSON-lines writer; one record per line.
pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).ok();
    }
    let file = std::fs::File::create(path)
        .with_context(|| format!("creating {}", path.display()))?;
    let mut out = BufWriter::new(file);
    for item in items {
        serde_json::to_writer(&mut out, item)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Read JSON-lines, reporting the 1-based line number of corrupt input.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = std::fs::File::open(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let reader = BufReader::new(file);
    let mut items = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let item = serde_json::from_str(&line)
            .with_context(|| format!("{}: bad record on line {}", path.display(), i + 1))?;
        items.push(item);
    }
    Ok(items)
}

pub fn read_game_records(path: &Path) -> Result<Vec<GameRecord>> {
    let records: Vec<GameRecord> = read_jsonl(path)?;
    for record in &records {
        if record.schema != RECORD_SCHEMA_VERSION {
            bail!(
                "game {} uses record schema {}, this build reads {}",
                record.game_id,
                record.schema,
                RECORD_SCHEMA_VERSION
            );
        }
    }
    Ok(records)
}

pub fn read_loss_records(path: &Path) -> Result<Vec<MoveLossRecord>> {
    read_jsonl(path)
}

/// Match summary persisted next to the records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub schema: u32,
    pub config_hash: String,
    pub framework: Framework,
    #[serde(default)]
    pub name: Option<String>,
    pub result: MatchResult,
    pub maxply_games: u64,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).ok();
    }
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text.as_bytes())
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    Ok(serde_json::from_str(&text)?)
}

/// PGN export with the framework annotations carried as custom tags.
pub fn games_to_pgn(records: &[GameRecord], config_hash: &str) -> Result<String> {
    let mut out = String::new();
    for record in records {
        let result_tag = match (record.is_aborted(), record.result) {
            (true, _) | (false, None) => "*",
            (false, Some(GameOutcome::White)) => "1-0",
            (false, Some(GameOutcome::Black)) => "0-1",
            (false, Some(GameOutcome::Draw)) => "1/2-1/2",
        };
        let _ = writeln!(out, "[Event \"tandem {}\"]", record.framework);
        let _ = writeln!(out, "[Round \"{}\"]", record.game_id + 1);
        let _ = writeln!(
            out,
            "[White \"{}+{}\"]",
            record.white_team.senior, record.white_team.junior
        );
        let _ = writeln!(
            out,
            "[Black \"{}+{}\"]",
            record.black_team.senior, record.black_team.junior
        );
        let _ = writeln!(out, "[Result \"{result_tag}\"]");
        let _ = writeln!(out, "[Framework \"{}\"]", record.framework);
        let _ = writeln!(out, "[FocalColor \"{}\"]", record.focal_color);
        let _ = writeln!(out, "[Seeds \"{}\"]", record.seed);
        let _ = writeln!(out, "[ConfigHash \"{config_hash}\"]");
        if let Some(bits) = &record.bitstring {
            let _ = writeln!(out, "[Bitstring \"{bits}\"]");
            let _ = writeln!(out, "[ActorLabels \"{}\"]", record.actor_label_string());
        }
        if record.framework == Framework::HandBrain {
            let _ = writeln!(out, "[InteractionTypes \"{}\"]", record.interaction_string());
        }
        if let Some(reason) = &record.abort_reason {
            let _ = writeln!(out, "[Aborted \"{reason}\"]");
        }
        out.push('\n');

        let positions = record
            .replay()
            .map_err(|ply| anyhow::anyhow!("game {} unreplayable at ply {ply}", record.game_id))?;
        let mut line = String::new();
        for (i, ply) in record.plies.iter().enumerate() {
            if i % 2 == 0 {
                let _ = write!(line, "{}. ", i / 2 + 1);
            }
            let _ = write!(line, "{} ", positions[i].san(ply.mv));
            if line.len() > 72 {
                out.push_str(line.trim_end());
                out.push('\n');
                line.clear();
            }
        }
        let _ = write!(line, "{result_tag}");
        out.push_str(line.trim_end());
        out.push_str("\n\n");
    }
    Ok(out)
}
