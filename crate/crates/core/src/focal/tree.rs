//! PUCT tree search guided entirely by a behavioral model's policy and
//! value. Because the model supplies both priors and leaf values, the
//! search inherits the model's tendencies instead of raw engine strength.
//!
//! Conventions: node values live in [0, 1] from the perspective of the
//! side to move at that node and flip sign every ply on backup; unvisited
//! children start from the parent's running mean (first-play urgency with
//! zero reduction); no exploration noise is added anywhere.

use crate::agent::{Agent, AgentError, MoveDistribution, SamplingMode, TreeParams, WinProb};
use crate::board::{Move, Position};
use alloc::boxed::Box;
use alloc::vec::Vec;
use rand_core::RngCore;

struct Node {
    pos: Position,
    mv: Move,
    prior: f64,
    visits: u32,
    value_sum: f64,
    children: Vec<usize>,
    expanded: bool,
    /// Exact outcome for terminal nodes, model value at the depth cap.
    frozen_value: Option<f64>,
    depth: u16,
}

impl Node {
    fn q(&self) -> f64 {
        self.value_sum / self.visits as f64
    }
}

/// One search over a position; holds the arena for inspection by tests.
pub struct TreeSearch {
    nodes: Vec<Node>,
    pub root_move: Move,
}

impl TreeSearch {
    /// Visit counts of the root children, in UCI move order.
    pub fn root_visits(&self) -> Vec<(Move, u32)> {
        self.nodes[0]
            .children
            .iter()
            .map(|&c| (self.nodes[c].mv, self.nodes[c].visits))
            .collect()
    }

    pub fn root_value(&self) -> f64 {
        self.nodes[0].q()
    }
}

pub struct TreeAgent {
    params: TreeParams,
    model: Box<dyn Agent + Send>,
}

impl TreeAgent {
    pub fn new(params: TreeParams, model: Box<dyn Agent + Send>) -> TreeAgent {
        TreeAgent { params, model }
    }

    pub fn search(&mut self, pos: &Position) -> Result<TreeSearch, AgentError> {
        if pos.legal_moves().is_empty() {
            return Err(AgentError::TerminalPosition);
        }
        let budget = self.params.nodes.max(1);
        let c_puct = self.params.c_puct;
        let max_depth = self.params.max_depth;

        let mut nodes: Vec<Node> = Vec::with_capacity(budget as usize + 1);
        nodes.push(Node {
            pos: *pos,
            mv: Move::new(crate::board::Square(0), crate::board::Square(0)),
            prior: 1.0,
            visits: 0,
            value_sum: 0.0,
            children: Vec::new(),
            expanded: false,
            frozen_value: None,
            depth: 0,
        });

        // Root expansion consumes the first unit of budget.
        for _ in 0..budget {
            self.simulate(&mut nodes, c_puct, max_depth)?;
        }

        let root_move = choose_root_move(&nodes);
        Ok(TreeSearch { nodes, root_move })
    }

    fn simulate(
        &mut self,
        nodes: &mut Vec<Node>,
        c_puct: f64,
        max_depth: Option<u16>,
    ) -> Result<(), AgentError> {
        let mut path = Vec::with_capacity(16);
        let mut current = 0usize;
        path.push(current);

        loop {
            if nodes[current].frozen_value.is_some() {
                break;
            }
            if !nodes[current].expanded {
                break;
            }
            let parent_q = nodes[current].q();
            let sqrt_n = libm::sqrt(nodes[current].visits as f64);
            let mut best_child = None;
            let mut best_score = f64::NEG_INFINITY;
            for &child in &nodes[current].children {
                let c = &nodes[child];
                // Edge value from the parent mover's perspective.
                let q = if c.visits > 0 { 1.0 - c.q() } else { parent_q };
                let u = c_puct * c.prior * sqrt_n / (1.0 + c.visits as f64);
                let score = q + u;
                if score > best_score {
                    best_score = score;
                    best_child = Some(child);
                }
            }
            current = best_child.expect("expanded node has children");
            path.push(current);
        }

        let value = self.leaf_value(nodes, current, max_depth)?;
        for (i, &node) in path.iter().rev().enumerate() {
            // Even steps share the leaf's side to move.
            let v = if i % 2 == 0 { value } else { 1.0 - value };
            nodes[node].visits += 1;
            nodes[node].value_sum += v;
        }
        Ok(())
    }

    /// Evaluate (and possibly expand) the leaf; returns a value in [0, 1]
    /// from the perspective of the side to move at the leaf.
    fn leaf_value(
        &mut self,
        nodes: &mut Vec<Node>,
        leaf: usize,
        max_depth: Option<u16>,
    ) -> Result<f64, AgentError> {
        if let Some(v) = nodes[leaf].frozen_value {
            return Ok(v);
        }
        let pos = nodes[leaf].pos;
        let depth = nodes[leaf].depth;

        let status = pos.positional_status();
        if status.is_terminal() {
            let v = if status == crate::board::GameStatus::Checkmate {
                0.0
            } else {
                0.5
            };
            nodes[leaf].frozen_value = Some(v);
            return Ok(v);
        }
        if let Some(cap) = max_depth {
            if depth >= cap {
                let v = self.model.value(&pos)?.value() / 100.0;
                nodes[leaf].frozen_value = Some(v);
                return Ok(v);
            }
        }

        let policy = self.model.policy(&pos)?;
        let value = self.model.value(&pos)?.value() / 100.0;
        let mut children = Vec::with_capacity(policy.len());
        for &(m, p) in policy.entries() {
            let child_pos = pos.apply_move_unchecked(m);
            children.push(nodes.len());
            nodes.push(Node {
                pos: child_pos,
                mv: m,
                prior: p,
                visits: 0,
                value_sum: 0.0,
                children: Vec::new(),
                expanded: false,
                frozen_value: None,
                depth: depth + 1,
            });
        }
        nodes[leaf].children = children;
        nodes[leaf].expanded = true;
        Ok(value)
    }
}

/// Most-visited root child; ties prefer the higher mean value, then UCI
/// order. A budget too small to visit any child falls back to the prior.
fn choose_root_move(nodes: &[Node]) -> Move {
    let root = &nodes[0];
    let any_visit = root.children.iter().any(|&c| nodes[c].visits > 0);
    if !any_visit {
        let mut best = root.children[0];
        for &c in &root.children[1..] {
            if nodes[c].prior > nodes[best].prior {
                best = c;
            }
        }
        return nodes[best].mv;
    }
    let mut best = root.children[0];
    for &c in &root.children[1..] {
        let (bv, cv) = (nodes[best].visits, nodes[c].visits);
        if cv > bv {
            best = c;
            continue;
        }
        if cv == bv && cv > 0 {
            let bq = 1.0 - nodes[best].q();
            let cq = 1.0 - nodes[c].q();
            if cq > bq {
                best = c;
            }
        }
    }
    nodes[best].mv
}

/// Single-call form: search `pos` with `params` over `model`.
pub fn tree_move(
    params: &TreeParams,
    model: Box<dyn Agent + Send>,
    pos: &Position,
) -> Result<Move, AgentError> {
    TreeAgent::new(params.clone(), model).search(pos).map(|s| s.root_move)
}

impl Agent for TreeAgent {
    fn policy(&mut self, pos: &Position) -> Result<MoveDistribution, AgentError> {
        let search = self.search(pos)?;
        let visits = search.root_visits();
        let total: u32 = visits.iter().map(|(_, v)| *v).sum();
        if total == 0 {
            return self.model.policy(pos);
        }
        Ok(MoveDistribution::from_weights(
            visits.into_iter().map(|(m, v)| (m, v as f64)).collect(),
        ))
    }

    fn value(&mut self, pos: &Position) -> Result<WinProb, AgentError> {
        if let Some(wp) = crate::agent::terminal_winprob(pos.positional_status()) {
            return Ok(WinProb::new(wp));
        }
        let search = self.search(pos)?;
        Ok(WinProb::new(search.root_value() * 100.0))
    }

    fn select_with(
        &mut self,
        pos: &Position,
        _mode: SamplingMode,
        _rng: &mut dyn RngCore,
    ) -> Result<Move, AgentError> {
        // Search output is already a single deliberate move.
        Ok(self.search(pos)?.root_move)
    }

    fn sampling_override(&self) -> Option<SamplingMode> {
        Some(SamplingMode::Argmax)
    }
}
