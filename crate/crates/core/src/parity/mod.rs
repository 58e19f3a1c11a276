//! One-counter parity games, their finite truncations, and exact solvers for the
//! truncated arenas.
//!
//! Verifier wins a play iff the least color seen infinitely often is even.

mod arena;
mod bracket;
mod dump;
mod spm;
mod verify;
mod zielonka;

use serde::Serialize;

pub use arena::{truncate, truncate_from, ArenaNode, Counter, FiniteArena, TruncationMode};
pub use bracket::{default_cap, solve_bracketed, solve_bracketed_many, BracketVerdict};
pub use dump::{dump_arena, dump_game, parse_game_dump, DumpError, ParsedDump};
pub use spm::solve_spm;
pub(crate) use verify::tarjan;
pub use verify::{verify_strategy, StrategyError};
pub use zielonka::solve_zielonka;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Player {
    Verifier,
    Falsifier,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Verifier => Player::Falsifier,
            Player::Falsifier => Player::Verifier,
        }
    }

    /// The player favoured by a color: even colors are good for Verifier.
    pub fn of_color(color: u32) -> Player {
        if color % 2 == 0 {
            Player::Verifier
        } else {
            Player::Falsifier
        }
    }
}

pub type VertexId = usize;

/// Winning regions of a finite arena with positional strategies for the winners.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub winner: Vec<Player>,
    /// Chosen successor, present on vertices owned by their winner.
    pub strategy: Vec<Option<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub weight: i64,
    pub target: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub owner: Player,
    pub color: u32,
    /// Which construction step created the vertex; free-form, used in dumps.
    pub provenance: String,
    /// Propositions carried by specification vertices of the QATL* product.
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("vertex {vertex} ({provenance}) can deadlock: it has no outgoing edge of weight >= 0")]
    DeadlockCapable { vertex: VertexId, provenance: String },
    #[error("edge {from} -> {target} points outside the game")]
    DanglingEdge { from: VertexId, target: VertexId },
    #[error("entry vertex {0} does not exist")]
    BadEntry(VertexId),
    #[error("cap {cap} is below the initial credit {credit} the entry ramp must reach")]
    CapBelowCredit { cap: u64, credit: u64 },
    #[error("cap {cap} is below the largest decrement {weight}")]
    CapBelowWeight { cap: u64, weight: u64 },
    #[error("start vertex {0} does not exist")]
    BadStart(VertexId),
}

/// A two-player one-counter parity game with a designated entry vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneCounterParityGame {
    vertices: Vec<Vertex>,
    succ: Vec<Vec<Edge>>,
    pub entry: VertexId,
    /// Counter value the entry ramp raises the counter to (0 without a ramp).
    pub initial_credit: u64,
}

impl OneCounterParityGame {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn owner(&self, v: VertexId) -> Player {
        self.vertices[v].owner
    }

    pub fn color(&self, v: VertexId) -> u32 {
        self.vertices[v].color
    }

    pub fn successors(&self, v: VertexId) -> &[Edge] {
        &self.succ[v]
    }

    /// All edges as `(source, weight, target)`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, i64, VertexId)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(s, es)| es.iter().map(move |e| (s, e.weight, e.target)))
    }

    pub fn max_color(&self) -> u32 {
        self.vertices.iter().map(|v| v.color).max().unwrap_or(0)
    }

    pub fn color_count(&self) -> usize {
        let mut cs: Vec<u32> = self.vertices.iter().map(|v| v.color).collect();
        cs.sort_unstable();
        cs.dedup();
        cs.len()
    }

    pub fn max_abs_weight(&self) -> u64 {
        self.edges().map(|(_, w, _)| w.unsigned_abs()).max().unwrap_or(0)
    }

    /// True when every weight lies in {-1, 0, 1}.
    pub fn is_unit(&self) -> bool {
        self.max_abs_weight() <= 1
    }

    pub fn with_entry(mut self, entry: VertexId) -> Self {
        self.entry = entry;
        self
    }

    /// Checks edge targets, the entry, and deadlock-freedom.
    pub fn validate(&self) -> Result<(), GameError> {
        if self.entry >= self.vertices.len() {
            return Err(GameError::BadEntry(self.entry));
        }
        for (v, es) in self.succ.iter().enumerate() {
            for e in es {
                if e.target >= self.vertices.len() {
                    return Err(GameError::DanglingEdge { from: v, target: e.target });
                }
            }
            if !es.iter().any(|e| e.weight >= 0) {
                return Err(GameError::DeadlockCapable {
                    vertex: v,
                    provenance: self.vertices[v].provenance.clone(),
                });
            }
        }
        Ok(())
    }

    /// Swaps every owner and raises every color by one.
    pub fn dualize(&mut self) {
        for v in &mut self.vertices {
            v.owner = v.owner.opponent();
            v.color += 1;
        }
    }

    /// Keeps only the vertices reachable from `roots`, renumbering them in discovery
    /// order. Returns the new ids of the roots.
    pub fn retain_reachable(&mut self, roots: &[VertexId]) -> Vec<VertexId> {
        let n = self.vertices.len();
        let mut map = vec![usize::MAX; n];
        let mut order = Vec::new();
        let mut stack: Vec<VertexId> = Vec::new();
        for &r in roots {
            if map[r] == usize::MAX {
                map[r] = order.len();
                order.push(r);
                stack.push(r);
            }
            while let Some(v) = stack.pop() {
                for e in &self.succ[v] {
                    if map[e.target] == usize::MAX {
                        map[e.target] = order.len();
                        order.push(e.target);
                        stack.push(e.target);
                    }
                }
            }
        }
        let vertices = order.iter().map(|&v| self.vertices[v].clone()).collect();
        let succ = order
            .iter()
            .map(|&v| {
                self.succ[v].iter().map(|e| Edge { weight: e.weight, target: map[e.target] }).collect()
            })
            .collect();
        self.vertices = vertices;
        self.succ = succ;
        let entry = map[self.entry];
        self.entry = if entry == usize::MAX { map[roots[0]] } else { entry };
        roots.iter().map(|&r| map[r]).collect()
    }
}

/// Incremental construction of a [`OneCounterParityGame`].
#[derive(Clone, Debug, Default)]
pub struct GameBuilder {
    vertices: Vec<Vertex>,
    succ: Vec<Vec<Edge>>,
}

impl GameBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn add_vertex(&mut self, owner: Player, color: u32, provenance: impl Into<String>) -> VertexId {
        self.vertices.push(Vertex { owner, color, provenance: provenance.into(), labels: Vec::new() });
        self.succ.push(Vec::new());
        self.vertices.len() - 1
    }

    pub fn set_labels(&mut self, v: VertexId, labels: Vec<String>) {
        self.vertices[v].labels = labels;
    }

    pub fn add_edge(&mut self, source: VertexId, weight: i64, target: VertexId) {
        self.succ[source].push(Edge { weight, target });
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v]
    }

    /// Outgoing edges of `v` as `(weight, target)`.
    pub fn edges_of(&self, v: VertexId) -> Vec<(i64, VertexId)> {
        self.succ[v].iter().map(|e| (e.weight, e.target)).collect()
    }

    /// Copies all of `game` into the builder; returns the offset added to its vertex ids.
    pub fn embed(&mut self, game: &OneCounterParityGame) -> usize {
        let offset = self.vertices.len();
        self.vertices.extend(game.vertices.iter().cloned());
        self.succ.extend(
            game.succ
                .iter()
                .map(|es| es.iter().map(|e| Edge { weight: e.weight, target: e.target + offset }).collect()),
        );
        offset
    }

    /// Finishes without validation.
    pub fn build_unchecked(self, entry: VertexId) -> OneCounterParityGame {
        OneCounterParityGame { vertices: self.vertices, succ: self.succ, entry, initial_credit: 0 }
    }

    pub fn build(self, entry: VertexId) -> Result<OneCounterParityGame, GameError> {
        let g = self.build_unchecked(entry);
        g.validate()?;
        Ok(g)
    }
}
