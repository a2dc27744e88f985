//! Parallel match execution: a pool of workers pulls game indices off an
//! atomic counter; per-game seeds depend only on the game index, so the
//! aggregate is identical for any worker count or schedule.

use anyhow::{anyhow, Result};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use tandem_core::agent::AgentFactory;
use tandem_core::framework::{aggregate, GameRecord, GameWorker, MatchResult, MatchSpec};

pub fn run_match(
    spec: &MatchSpec,
    factory: &(dyn AgentFactory + Sync),
    workers: usize,
) -> Result<(MatchResult, Vec<GameRecord>)> {
    spec.validate()?;
    let workers = workers.max(1).min(spec.games.max(1) as usize);

    let mut records: Vec<GameRecord> = if workers == 1 {
        let mut worker = GameWorker::new(spec, factory)?;
        (0..spec.games)
            .map(|id| worker.play(spec, spec.plan(id)))
            .collect()
    } else {
        let next = AtomicU64::new(0);
        let sink: Mutex<Vec<GameRecord>> = Mutex::new(Vec::with_capacity(spec.games as usize));
        let failure: Mutex<Option<String>> = Mutex::new(None);
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| {
                    let mut worker = match GameWorker::new(spec, factory) {
                        Ok(w) => w,
                        Err(e) => {
                            *failure.lock().unwrap() = Some(e.to_string());
                            return;
                        }
                    };
                    loop {
                        let id = next.fetch_add(1, Ordering::Relaxed);
                        if id >= spec.games {
                            break;
                        }
                        let record = worker.play(spec, spec.plan(id));
                        sink.lock().unwrap().push(record);
                    }
                });
            }
        });
        if let Some(message) = failure.lock().unwrap().take() {
            return Err(anyhow!("worker setup failed: {message}"));
        }
        sink.into_inner().unwrap()
    };

    records.sort_by_key(|r| r.game_id);
    if records.len() != spec.games as usize {
        return Err(anyhow!(
            "expected {} games, produced {}",
            spec.games,
            records.len()
        ));
    }
    let mut result = aggregate(&records);
    result.pool_id = spec.pool.as_ref().map(|p| p.pool_id.clone());
    Ok((result, records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tandem_core::agent::{AgentSpec, BuiltinFactory};
    use tandem_core::framework::{BitstringPool, Framework, TeamSpec};

    fn small_spec() -> MatchSpec {
        MatchSpec {
            framework: Framework::TagTeam,
            games: 6,
            focal: TeamSpec {
                senior: AgentSpec::strong(48),
                junior: Some(AgentSpec::weak(100.0)),
            },
            alter: TeamSpec {
                senior: AgentSpec::strong(48),
                junior: Some(AgentSpec::weak(100.0)),
            },
            master_seed: 5,
            max_plies: tandem_core::board::DEFAULT_MAX_PLIES,
            pool: Some(BitstringPool::generate(2, tandem_core::board::DEFAULT_MAX_PLIES, 3)),
        }
    }

    #[test]
    fn multi_worker_equals_single_worker() {
        let spec = small_spec();
        let (single, single_records) = run_match(&spec, &BuiltinFactory, 1).unwrap();
        let (multi, multi_records) = run_match(&spec, &BuiltinFactory, 2).unwrap();
        assert_eq!(single, multi);
        assert_eq!(single_records, multi_records);
    }
}
