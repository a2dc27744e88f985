//! Client side of the Universal Chess Interface over a child process.
//!
//! The protocol logic is written against a line transport so tests can
//! drive it with a scripted peer instead of a real engine binary.

use anyhow::{anyhow, bail, Context, Result};
use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::process::{Child, Command, Stdio};
use std::sync::mpsc::{Receiver, RecvTimeoutError};
use std::time::Duration;
use tandem_core::agent::{
    cp_to_winprob, Agent, AgentError, MoveDistribution, SamplingMode, UciParams, WinProb,
    DEFAULT_LAMBDA, MATE_SCORE,
};
use tandem_core::{Move, Position};

const HANDSHAKE_TIMEOUT: Duration = Duration::from_secs(15);
const SEARCH_TIMEOUT: Duration = Duration::from_secs(120);

pub trait UciTransport: Send {
    fn send_line(&mut self, line: &str) -> Result<()>;
    fn recv_line(&mut self, timeout: Duration) -> Result<Option<String>>;
}

/// Transport over a spawned engine process; a reader thread pumps stdout
/// lines into a channel so reads can time out.
pub struct ProcessTransport {
    child: Child,
    stdin: std::process::ChildStdin,
    lines: Receiver<String>,
}

impl ProcessTransport {
    pub fn spawn(path: &str) -> Result<ProcessTransport> {
        let mut child = Command::new(path)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .with_context(|| format!("spawning uci engine {path}"))?;
        let stdin = child.stdin.take().ok_or_else(|| anyhow!("no stdin pipe"))?;
        let stdout = child.stdout.take().ok_or_else(|| anyhow!("no stdout pipe"))?;
        let (tx, rx) = std::sync::mpsc::channel();
        std::thread::spawn(move || {
            let reader = BufReader::new(stdout);
            for line in reader.lines() {
                match line {
                    Ok(line) => {
                        if tx.send(line).is_err() {
                            break;
                        }
                    }
                    Err(_) => break,
                }
            }
        });
        Ok(ProcessTransport {
            child,
            stdin,
            lines: rx,
        })
    }
}

impl UciTransport for ProcessTransport {
    fn send_line(&mut self, line: &str) -> Result<()> {
        writeln!(self.stdin, "{line}").context("engine stdin closed")?;
        self.stdin.flush().context("engine stdin flush")?;
        Ok(())
    }

    fn recv_line(&mut self, timeout: Duration) -> Result<Option<String>> {
        match self.lines.recv_timeout(timeout) {
            Ok(line) => Ok(Some(line)),
            Err(RecvTimeoutError::Timeout) => Ok(None),
            Err(RecvTimeoutError::Disconnected) => bail!("engine closed its output"),
        }
    }
}

impl Drop for ProcessTransport {
    fn drop(&mut self) {
        let _ = self.send_line("quit");
        std::thread::sleep(Duration::from_millis(30));
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// A connected engine speaking UCI.
pub struct UciEngine {
    transport: Box<dyn UciTransport>,
    params: UciParams,
    nodes: u64,
    temperature: f64,
    sampling: Option<SamplingMode>,
    pub name: Option<String>,
}

impl UciEngine {
    /// Spawn and handshake with an engine process.
    pub fn connect(
        params: &UciParams,
        nodes: u64,
        temperature: f64,
        sampling: Option<SamplingMode>,
    ) -> Result<UciEngine> {
        let path = expand_env(&params.path);
        let transport = ProcessTransport::spawn(&path)?;
        UciEngine::over_transport(Box::new(transport), params.clone(), nodes, temperature, sampling)
    }

    /// Handshake over an arbitrary transport (tests use a scripted one).
    pub fn over_transport(
        transport: Box<dyn UciTransport>,
        params: UciParams,
        nodes: u64,
        temperature: f64,
        sampling: Option<SamplingMode>,
    ) -> Result<UciEngine> {
        let mut engine = UciEngine {
            transport,
            params,
            nodes,
            temperature,
            sampling,
            name: None,
        };
        engine.handshake()?;
        Ok(engine)
    }

    fn handshake(&mut self) -> Result<()> {
        self.transport.send_line("uci")?;
        loop {
            let line = self
                .transport
                .recv_line(HANDSHAKE_TIMEOUT)?
                .ok_or_else(|| anyhow!("timeout waiting for uciok"))?;
            if let Some(name) = line.strip_prefix("id name ") {
                self.name = Some(name.to_string());
            }
            if line.trim() == "uciok" {
                break;
            }
        }
        let multipv = self.params.multipv;
        self.transport
            .send_line(&format!("setoption name MultiPV value {multipv}"))?;
        let options = self.params.options.clone();
        for (name, value) in options {
            self.transport
                .send_line(&format!("setoption name {name} value {value}"))?;
        }
        self.sync()?;
        Ok(())
    }

    fn sync(&mut self) -> Result<()> {
        self.transport.send_line("isready")?;
        loop {
            let line = self
                .transport
                .recv_line(HANDSHAKE_TIMEOUT)?
                .ok_or_else(|| anyhow!("timeout waiting for readyok"))?;
            if line.trim() == "readyok" {
                return Ok(());
            }
        }
    }

    pub fn new_game(&mut self) -> Result<()> {
        self.transport.send_line("ucinewgame")?;
        self.sync()
    }

    /// Run `go nodes N` and collect the deepest multipv score per move.
    /// Returns (per-move centipawn scores, engine best move).
    pub fn search(&mut self, pos: &Position, nodes: u64) -> Result<(Vec<(Move, i32)>, Move)> {
        self.transport
            .send_line(&format!("position fen {}", pos.to_fen()))?;
        self.transport.send_line(&format!("go nodes {nodes}"))?;

        let mut slots: BTreeMap<u32, (Move, i32)> = BTreeMap::new();
        let best = loop {
            let line = self
                .transport
                .recv_line(SEARCH_TIMEOUT)?
                .ok_or_else(|| anyhow!("timeout waiting for bestmove"))?;
            let trimmed = line.trim();
            if let Some(rest) = trimmed.strip_prefix("bestmove") {
                let token = rest
                    .split_whitespace()
                    .next()
                    .ok_or_else(|| anyhow!("empty bestmove"))?;
                break Move::from_uci(token)
                    .ok_or_else(|| anyhow!("bad bestmove {token:?}"))?;
            }
            if trimmed.starts_with("info") {
                if let Some((slot, entry)) = parse_info_line(trimmed) {
                    slots.insert(slot, entry);
                }
            }
        };
        let scores: Vec<(Move, i32)> = slots.into_values().collect();
        Ok((scores, best))
    }

    /// Centipawn score of the best line from the side to move.
    pub fn best_score(&mut self, pos: &Position, nodes: u64) -> Result<i32> {
        let (scores, best) = self.search(pos, nodes)?;
        scores
            .iter()
            .find(|(m, _)| *m == best)
            .or_else(|| scores.first())
            .map(|(_, s)| *s)
            .ok_or_else(|| anyhow!("engine reported no scores"))
    }
}

/// `${VAR}` substitution so configs can defer engine locations to the
/// environment.
pub fn expand_env(path: &str) -> String {
    let mut out = String::with_capacity(path.len());
    let mut rest = path;
    while let Some(start) = rest.find("${") {
        out.push_str(&rest[..start]);
        match rest[start..].find('}') {
            Some(end) => {
                let var = &rest[start + 2..start + end];
                out.push_str(&std::env::var(var).unwrap_or_default());
                rest = &rest[start + end + 1..];
            }
            None => {
                out.push_str(&rest[start..]);
                rest = "";
            }
        }
    }
    out.push_str(rest);
    out
}

fn parse_info_line(line: &str) -> Option<(u32, (Move, i32))> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let mut multipv = 1u32;
    let mut score: Option<i32> = None;
    let mut first_pv: Option<Move> = None;
    let mut i = 0;
    while i < tokens.len() {
        match tokens[i] {
            "multipv" => {
                multipv = tokens.get(i + 1)?.parse().ok()?;
                i += 2;
            }
            "score" => match *tokens.get(i + 1)? {
                "cp" => {
                    score = Some(tokens.get(i + 2)?.parse().ok()?);
                    i += 3;
                }
                "mate" => {
                    let plies: i32 = tokens.get(i + 2)?.parse().ok()?;
                    score = Some(if plies >= 0 {
                        MATE_SCORE - plies.abs()
                    } else {
                        -MATE_SCORE + plies.abs()
                    });
                    i += 3;
                }
                _ => i += 2,
            },
            "pv" => {
                first_pv = Move::from_uci(tokens.get(i + 1)?);
                i = tokens.len();
            }
            _ => i += 1,
        }
    }
    Some((multipv, (first_pv?, score?)))
}

impl Agent for UciEngine {
    fn policy(&mut self, pos: &Position) -> Result<MoveDistribution, AgentError> {
        let mut legal = pos.legal_moves();
        if legal.is_empty() {
            return Err(AgentError::TerminalPosition);
        }
        legal.sort();
        let (scores, best) = self
            .search(pos, self.nodes)
            .map_err(|e| AgentError::Engine(e.to_string()))?;

        // Multipv covers only the top lines; unlisted legal moves drop
        // 300cp below the worst reported line so the support stays full.
        let floor = scores.iter().map(|(_, s)| *s).min().unwrap_or(0) - 300;
        let max = scores
            .iter()
            .map(|(_, s)| *s)
            .max()
            .unwrap_or(0)
            .max(floor) as f64;
        let weights: Vec<(Move, f64)> = legal
            .iter()
            .map(|&m| {
                let cp = scores
                    .iter()
                    .find(|(sm, _)| *sm == m)
                    .map(|(_, s)| *s)
                    .unwrap_or(if m == best { max as i32 } else { floor });
                (m, f64::exp((cp as f64 - max) / self.temperature))
            })
            .collect();
        Ok(MoveDistribution::from_weights(weights))
    }

    fn value(&mut self, pos: &Position) -> Result<WinProb, AgentError> {
        if let Some(wp) = tandem_core::agent::terminal_winprob(pos.positional_status()) {
            return Ok(WinProb::new(wp));
        }
        let cp = self
            .best_score(pos, self.nodes)
            .map_err(|e| AgentError::Engine(e.to_string()))?;
        Ok(WinProb::new(cp_to_winprob(cp as f64, DEFAULT_LAMBDA)))
    }

    fn select_with(
        &mut self,
        pos: &Position,
        mode: SamplingMode,
        rng: &mut dyn rand_core::RngCore,
    ) -> Result<Move, AgentError> {
        match mode {
            SamplingMode::Argmax => {
                // Trust the engine's own move choice.
                let (_, best) = self
                    .search(pos, self.nodes)
                    .map_err(|e| AgentError::Engine(e.to_string()))?;
                if !pos.legal_moves().contains(&best) {
                    return Err(AgentError::Engine(format!(
                        "engine suggested illegal move {}",
                        best.uci()
                    )));
                }
                Ok(best)
            }
            SamplingMode::Sample => {
                let dist = self.policy(pos)?;
                dist.sample(rng).ok_or(AgentError::TerminalPosition)
            }
        }
    }

    fn sampling_override(&self) -> Option<SamplingMode> {
        self.sampling
    }

    fn new_game(&mut self) -> Result<(), AgentError> {
        UciEngine::new_game(self).map_err(|e| AgentError::Engine(e.to_string()))
    }
}
