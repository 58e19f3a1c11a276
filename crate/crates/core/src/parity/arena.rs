use std::collections::{HashMap, VecDeque};

use super::{GameError, OneCounterParityGame, Player, VertexId};

/// How a truncation treats counter values above the cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TruncationMode {
    /// Crossing the cap is a win for Verifier.
    Optimistic,
    /// Crossing the cap is a loss for Verifier.
    Pessimistic,
    /// Values above the cap collapse into one abstract value; when a decrement
    /// leaves it, Verifier picks the resulting value.
    SaturatedOptimistic,
    /// As `SaturatedOptimistic`, but Falsifier picks.
    SaturatedPessimistic,
}

impl TruncationMode {
    pub fn is_saturated(self) -> bool {
        matches!(self, TruncationMode::SaturatedOptimistic | TruncationMode::SaturatedPessimistic)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Counter {
    Exact(u64),
    /// Some value strictly above the cap.
    Above,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArenaNode {
    Config { vertex: VertexId, counter: Counter },
    /// Choice of the concrete value after a decrement out of `Counter::Above`.
    Resolver { target: VertexId, weight: i64 },
    TopWin,
    TopLose,
    /// Vertex of an arena built directly, not by truncation.
    Plain,
}

/// A finite parity game, usually a truncation of a one-counter parity game.
#[derive(Clone, Debug)]
pub struct FiniteArena {
    pub owner: Vec<Player>,
    pub color: Vec<u32>,
    pub succ: Vec<Vec<usize>>,
    pub nodes: Vec<ArenaNode>,
    pub mode: Option<TruncationMode>,
    pub cap: u64,
    index: HashMap<(VertexId, Counter), usize>,
}

impl FiniteArena {
    /// Builds a plain arena. Panics if a vertex has no successor or an edge dangles.
    pub fn new(owner: Vec<Player>, color: Vec<u32>, succ: Vec<Vec<usize>>) -> Self {
        let n = owner.len();
        assert_eq!(color.len(), n);
        assert_eq!(succ.len(), n);
        for (v, s) in succ.iter().enumerate() {
            assert!(!s.is_empty(), "arena vertex {v} has no successor");
            assert!(s.iter().all(|&t| t < n), "arena vertex {v} has a dangling edge");
        }
        FiniteArena {
            owner,
            color,
            succ,
            nodes: vec![ArenaNode::Plain; n],
            mode: None,
            cap: 0,
            index: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn max_color(&self) -> u32 {
        self.color.iter().copied().max().unwrap_or(0)
    }

    /// Arena vertex standing for `(vertex, counter)`, if it was reached.
    pub fn node_of(&self, vertex: VertexId, counter: Counter) -> Option<usize> {
        self.index.get(&(vertex, counter)).copied()
    }

    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (v, s) in self.succ.iter().enumerate() {
            for &t in s {
                pred[t].push(v);
            }
        }
        pred
    }
}

/// Truncates `g` at `cap`, exploring from `(entry, 0)`.
pub fn truncate(g: &OneCounterParityGame, cap: u64, mode: TruncationMode) -> Result<FiniteArena, GameError> {
    truncate_from(g, cap, mode, &[(g.entry, 0)])
}

/// Truncates `g` at `cap`, exploring the configurations reachable from `roots`.
pub fn truncate_from(
    g: &OneCounterParityGame,
    cap: u64,
    mode: TruncationMode,
    roots: &[(VertexId, u64)],
) -> Result<FiniteArena, GameError> {
    g.validate()?;
    let max_w = g.max_abs_weight();
    if mode.is_saturated() && cap + 1 < max_w {
        return Err(GameError::CapBelowWeight { cap, weight: max_w });
    }
    for &(v, _) in roots {
        if v >= g.vertex_count() {
            return Err(GameError::BadStart(v));
        }
    }
    let resolver_color = g.max_color().max(1);
    let mut b = ArenaBuilder { g, cap, mode, arena: empty_arena(mode, cap), queue: VecDeque::new() };
    let mut resolvers: HashMap<(VertexId, i64), usize> = HashMap::new();
    for &(v, c) in roots {
        let counter = if c > cap { Counter::Above } else { Counter::Exact(c) };
        if counter == Counter::Above && !mode.is_saturated() {
            return Err(GameError::BadStart(v));
        }
        b.config(v, counter);
    }
    while let Some(node) = b.queue.pop_front() {
        let ArenaNode::Config { vertex, counter } = b.arena.nodes[node] else { unreachable!() };
        let mut out = Vec::new();
        for e in g.successors(vertex) {
            let t = match counter {
                Counter::Exact(c) => {
                    let next = c as i128 + e.weight as i128;
                    if next < 0 {
                        continue;
                    }
                    if next > cap as i128 {
                        match mode {
                            TruncationMode::Optimistic => b.top(true),
                            TruncationMode::Pessimistic => b.top(false),
                            _ => b.config(e.target, Counter::Above),
                        }
                    } else {
                        b.config(e.target, Counter::Exact(next as u64))
                    }
                }
                Counter::Above if e.weight >= 0 => b.config(e.target, Counter::Above),
                Counter::Above => {
                    let key = (e.target, e.weight);
                    if let Some(&r) = resolvers.get(&key) {
                        r
                    } else {
                        let resolver = if mode == TruncationMode::SaturatedOptimistic {
                            Player::Verifier
                        } else {
                            Player::Falsifier
                        };
                        let r = b.push(ArenaNode::Resolver { target: e.target, weight: e.weight }, resolver, resolver_color);
                        resolvers.insert(key, r);
                        let mut rs = vec![b.config(e.target, Counter::Above)];
                        let low = cap + 1 - e.weight.unsigned_abs();
                        for c in low..=cap {
                            rs.push(b.config(e.target, Counter::Exact(c)));
                        }
                        b.arena.succ[r] = rs;
                        r
                    }
                }
            };
            if !out.contains(&t) {
                out.push(t);
            }
        }
        debug_assert!(!out.is_empty());
        b.arena.succ[node] = out;
    }
    Ok(b.arena)
}

fn empty_arena(mode: TruncationMode, cap: u64) -> FiniteArena {
    FiniteArena {
        owner: Vec::new(),
        color: Vec::new(),
        succ: Vec::new(),
        nodes: Vec::new(),
        mode: Some(mode),
        cap,
        index: HashMap::new(),
    }
}

struct ArenaBuilder<'a> {
    g: &'a OneCounterParityGame,
    cap: u64,
    mode: TruncationMode,
    arena: FiniteArena,
    queue: VecDeque<usize>,
}

impl ArenaBuilder<'_> {
    fn push(&mut self, node: ArenaNode, owner: Player, color: u32) -> usize {
        let a = &mut self.arena;
        a.nodes.push(node);
        a.owner.push(owner);
        a.color.push(color);
        a.succ.push(Vec::new());
        a.nodes.len() - 1
    }

    fn config(&mut self, vertex: VertexId, counter: Counter) -> usize {
        if let Some(&id) = self.arena.index.get(&(vertex, counter)) {
            return id;
        }
        debug_assert!(matches!(counter, Counter::Exact(c) if c <= self.cap) || self.mode.is_saturated());
        let id = self.push(ArenaNode::Config { vertex, counter }, self.g.owner(vertex), self.g.color(vertex));
        self.arena.index.insert((vertex, counter), id);
        self.queue.push_back(id);
        id
    }

    fn top(&mut self, win: bool) -> usize {
        let node = if win { ArenaNode::TopWin } else { ArenaNode::TopLose };
        if let Some(id) = self.arena.nodes.iter().position(|n| *n == node) {
            return id;
        }
        let id = self.push(node, Player::Verifier, if win { 0 } else { 1 });
        self.arena.succ[id] = vec![id];
        id
    }
}

#[cfg(test)]
mod tests {
    use super::super::GameBuilder;
    use super::*;

    fn pump() -> OneCounterParityGame {
        let mut b = GameBuilder::new();
        let v = b.add_vertex(Player::Verifier, 1, "pump");
        b.add_edge(v, 1, v);
        b.build(v).unwrap()
    }

    #[test]
    fn optimistic_pump_structure() {
        let a = truncate(&pump(), 2, TruncationMode::Optimistic).unwrap();
        assert_eq!(a.len(), 4);
        let top = a.nodes.iter().position(|n| *n == ArenaNode::TopWin).unwrap();
        assert_eq!(a.succ[top], vec![top]);
        assert_eq!(a.color[top] % 2, 0);
        let last = a.node_of(0, Counter::Exact(2)).unwrap();
        assert_eq!(a.succ[last], vec![top]);
    }

    #[test]
    fn pessimistic_pump_structure() {
        let a = truncate(&pump(), 2, TruncationMode::Pessimistic).unwrap();
        assert_eq!(a.len(), 4);
        let top = a.nodes.iter().position(|n| *n == ArenaNode::TopLose).unwrap();
        assert_eq!(a.color[top] % 2, 1);
        assert!(!a.nodes.contains(&ArenaNode::TopWin));
    }

    #[test]
    fn decrement_disabled_at_zero() {
        let mut b = GameBuilder::new();
        let v = b.add_vertex(Player::Verifier, 0, "v");
        let w = b.add_vertex(Player::Verifier, 1, "w");
        b.add_edge(v, -1, w);
        b.add_edge(v, 0, v);
        b.add_edge(w, 0, w);
        let g = b.build(v).unwrap();
        let a = truncate(&g, 5, TruncationMode::Pessimistic).unwrap();
        assert_eq!(a.len(), 1);
        let a = truncate_from(&g, 5, TruncationMode::Pessimistic, &[(v, 1)]).unwrap();
        assert!(a.node_of(w, Counter::Exact(0)).is_some());
    }

    #[test]
    fn saturated_resolver_offers_all_values() {
        let mut b = GameBuilder::new();
        let up = b.add_vertex(Player::Verifier, 0, "up");
        let down = b.add_vertex(Player::Falsifier, 0, "down");
        b.add_edge(up, 1, up);
        b.add_edge(up, 3, down);
        b.add_edge(down, -3, down);
        b.add_edge(down, 0, down);
        let g = b.build(up).unwrap();
        let a = truncate(&g, 4, TruncationMode::SaturatedPessimistic).unwrap();
        let r = a
            .nodes
            .iter()
            .position(|n| matches!(n, ArenaNode::Resolver { .. }))
            .unwrap();
        assert_eq!(a.owner[r], Player::Falsifier);
        let mut targets: Vec<Counter> = a.succ[r]
            .iter()
            .map(|&t| match a.nodes[t] {
                ArenaNode::Config { counter, .. } => counter,
                _ => panic!(),
            })
            .collect();
        targets.sort();
        assert_eq!(targets, vec![Counter::Exact(2), Counter::Exact(3), Counter::Exact(4), Counter::Above]);
        assert!(truncate(&g, 1, TruncationMode::SaturatedPessimistic).is_err());
    }

    #[test]
    fn deadlock_capable_game_is_rejected() {
        let mut b = GameBuilder::new();
        let v = b.add_vertex(Player::Verifier, 0, "v");
        b.add_edge(v, -1, v);
        let g = b.build_unchecked(v);
        assert!(matches!(
            truncate(&g, 3, TruncationMode::Optimistic),
            Err(GameError::DeadlockCapable { .. })
        ));
    }
}
