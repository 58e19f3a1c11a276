use std::collections::HashMap;

use super::{agent_ids, finish, kind_name, side_of, star, BuildOptions, GameFragment, McError};
use crate::formula::{is_qatl_core, Constraint, Formula, FormulaKind, Rel};
use crate::model::{GameModel, StateId};
use crate::parity::{GameBuilder, Player, VertexId};

/// One-vertex game won by Verifier iff `p` labels `s`.
pub fn build_prop_gadget(m: &GameModel, s: StateId, p: &str) -> GameFragment {
    let mut b = GameBuilder::new();
    let v = prop_vertex(&mut b, m.has_label(s, p), &format!("prop {p} @ {}", m.state_name(s)));
    GameFragment { game: b.build_unchecked(v), automata: Vec::new() }
}

/// Counter-test gadget for `r < c`, `r <= c` or `r mod k = c`, won by Verifier from
/// `(entry, i)` iff the constraint holds for `i`. Other relations are rejected.
pub fn build_constraint_gadget(rel: Rel, c: i64, modulus: Option<u64>) -> Result<GameFragment, McError> {
    let constraint = match rel {
        Rel::Lt | Rel::Le => Constraint::new(rel, c),
        Rel::Mod => match modulus {
            Some(k) if k >= 1 => Constraint::modulo(c, k),
            _ => return Err(McError::ZeroModulus),
        },
        _ => return Err(McError::NotQatl(format!("relation {} needs rewriting first", rel.symbol()))),
    };
    let mut b = GameBuilder::new();
    let v = constraint_vertex(&mut b, constraint);
    Ok(GameFragment { game: b.build_unchecked(v), automata: Vec::new() })
}

/// Characteristic game of a desugared QATL formula at state `s`, before any credit
/// ramp: Verifier wins from `(entry, i)` iff the formula holds at `(s, i)`.
pub fn build_qatl_game(
    m: &GameModel,
    s: StateId,
    f: &Formula,
    opts: BuildOptions,
) -> Result<GameFragment, McError> {
    if s >= m.state_count() {
        return Err(McError::NoSuchState(s));
    }
    if !is_qatl_core(f) {
        return Err(McError::NotQatl(f.to_string()));
    }
    let mut c = Compiler::new(m, opts, false);
    let entries = c.entries(f)?;
    finish(c.b.build_unchecked(entries[s]), c.automata)
}

fn prop_vertex(b: &mut GameBuilder, holds: bool, provenance: &str) -> VertexId {
    let v = b.add_vertex(Player::Verifier, if holds { 0 } else { 1 }, provenance);
    b.add_edge(v, 0, v);
    v
}

/// Adds the counter-test gadget for a `<`, `<=` or `mod` constraint; returns its entry.
fn constraint_vertex(b: &mut GameBuilder, c: Constraint) -> VertexId {
    let label = c.to_string();
    match c.rel {
        Rel::Lt | Rel::Le => {
            // a Falsifier-owned countdown; reaching the last vertex refutes the bound
            let len = if c.rel == Rel::Lt { c.constant } else { c.constant + 1 };
            if len <= 0 {
                return prop_vertex(b, false, &format!("{label} (always false)"));
            }
            let first = b.len();
            for j in 0..=len {
                let color = if j == len { 1 } else { 0 };
                let v = b.add_vertex(Player::Falsifier, color, format!("{label} v{j}"));
                b.add_edge(v, 0, v);
            }
            for j in 0..len as usize {
                b.add_edge(first + j, -1, first + j + 1);
            }
            first
        }
        Rel::Mod => {
            let k = c.modulus.expect("modulus") as i64;
            let cc = c.constant.rem_euclid(k);
            // u_j sits at first + j; the play counts down u_{k-1} -> ... -> u_0 -> u_{k-1}
            let first = b.len();
            for j in 0..k {
                let (owner, color) =
                    if j == k - 1 { (Player::Falsifier, 0) } else { (Player::Verifier, 1) };
                let v = b.add_vertex(owner, color, format!("{label} u{j}"));
                b.add_edge(v, 0, v);
            }
            for j in 0..k as usize {
                let next = if j == 0 { k as usize - 1 } else { j - 1 };
                b.add_edge(first + j, -1, first + next);
            }
            first + (cc - 1).rem_euclid(k) as usize
        }
        _ => unreachable!("constraint not desugared: {label}"),
    }
}

/// Shared construction state: one builder, memoized per-state entries for every
/// subformula compiled so far.
pub(crate) struct Compiler<'m> {
    pub(crate) m: &'m GameModel,
    pub(crate) opts: BuildOptions,
    pub(crate) b: GameBuilder,
    /// Compile every coalition through the automaton product, even QATL ones.
    star: bool,
    memo: HashMap<Formula, Vec<VertexId>>,
    pub(crate) automata: Vec<usize>,
}

impl<'m> Compiler<'m> {
    pub(crate) fn new(m: &'m GameModel, opts: BuildOptions, star: bool) -> Self {
        Compiler { m, opts, b: GameBuilder::new(), star, memo: HashMap::new(), automata: Vec::new() }
    }

    /// Entry vertices, indexed by model state, of the game for desugared `f`.
    pub(crate) fn entries(&mut self, f: &Formula) -> Result<Vec<VertexId>, McError> {
        if let Some(e) = self.memo.get(f) {
            return Ok(e.clone());
        }
        let e = self.compile(f)?;
        self.memo.insert(f.clone(), e.clone());
        Ok(e)
    }

    fn compile(&mut self, f: &Formula) -> Result<Vec<VertexId>, McError> {
        let m = self.m;
        let n = m.state_count();
        match &f.kind {
            FormulaKind::Bool(b) => {
                let v = prop_vertex(&mut self.b, *b, &format!("{b}"));
                Ok(vec![v; n])
            }
            FormulaKind::Prop(p) => Ok((0..n)
                .map(|s| prop_vertex(&mut self.b, m.has_label(s, p), &format!("prop {p} @ {}", m.state_name(s))))
                .collect()),
            FormulaKind::Constraint(c) => {
                if let Some(k) = c.modulus {
                    if k == 0 {
                        return Err(McError::ZeroModulus);
                    }
                }
                let v = constraint_vertex(&mut self.b, *c);
                Ok(vec![v; n])
            }
            FormulaKind::Not(a) => {
                if let FormulaKind::Not(inner) = &a.kind {
                    return self.entries(inner);
                }
                let inner = self.entries(a)?;
                Ok(self.dual_copy(&inner))
            }
            FormulaKind::Or(a, b) => {
                let ea = self.entries(a)?;
                let eb = self.entries(b)?;
                Ok((0..n)
                    .map(|s| {
                        let v = self.b.add_vertex(Player::Verifier, 0, format!("or @ {}", m.state_name(s)));
                        self.b.add_edge(v, 0, ea[s]);
                        self.b.add_edge(v, 0, eb[s]);
                        v
                    })
                    .collect())
            }
            FormulaKind::Coalition(agents, body) => {
                let agents = agent_ids(m, agents)?;
                if self.star {
                    return star::product(self, &agents, body);
                }
                match &body.kind {
                    FormulaKind::Next(a) => self.next(&agents, a),
                    FormulaKind::Globally(a) => self.globally(&agents, a),
                    FormulaKind::Until(a, b) => self.until(&agents, a, b),
                    _ => Err(McError::NotQatl(f.to_string())),
                }
            }
            other => Err(McError::NotQatl(format!("{} `{f}` outside a coalition", kind_name(other)))),
        }
    }

    /// Copies everything reachable from `entries` with owners swapped and colors + 1.
    fn dual_copy(&mut self, entries: &[VertexId]) -> Vec<VertexId> {
        let mut map: HashMap<VertexId, VertexId> = HashMap::new();
        let mut order = Vec::new();
        for &e in entries {
            if map.contains_key(&e) {
                continue;
            }
            let mut stack = vec![e];
            map.insert(e, usize::MAX);
            while let Some(v) = stack.pop() {
                order.push(v);
                let succ: Vec<VertexId> = self.b_successors(v);
                for t in succ {
                    if let std::collections::hash_map::Entry::Vacant(slot) = map.entry(t) {
                        slot.insert(usize::MAX);
                        stack.push(t);
                    }
                }
            }
        }
        for &v in &order {
            let old = self.b.vertex(v).clone();
            let id = self.b.add_vertex(old.owner.opponent(), old.color + 1, format!("dual {}", old.provenance));
            self.b.set_labels(id, old.labels);
            map.insert(v, id);
        }
        for &v in &order {
            for (w, t) in self.b.edges_of(v) {
                self.b.add_edge(map[&v], w, map[&t]);
            }
        }
        entries.iter().map(|e| map[e]).collect()
    }

    fn b_successors(&self, v: VertexId) -> Vec<VertexId> {
        self.b.edges_of(v).into_iter().map(|(_, t)| t).collect()
    }

    fn next(&mut self, agents: &[usize], a: &Formula) -> Result<Vec<VertexId>, McError> {
        let m = self.m;
        let sub = self.entries(a)?;
        Ok((0..m.state_count())
            .map(|s| {
                let v = self.b.add_vertex(side_of(m, s, agents), 0, format!("next @ {}", m.state_name(s)));
                for t in m.outgoing(s) {
                    self.b.add_edge(v, t.weight, sub[t.target]);
                }
                v
            })
            .collect())
    }

    fn globally(&mut self, agents: &[usize], a: &Formula) -> Result<Vec<VertexId>, McError> {
        let m = self.m;
        let sub = self.entries(a)?;
        let main: Vec<VertexId> = (0..m.state_count())
            .map(|s| self.b.add_vertex(side_of(m, s, agents), 0, format!("always @ {}", m.state_name(s))))
            .collect();
        for (s, &v) in main.iter().enumerate() {
            for t in m.outgoing(s) {
                let mid = self.b.add_vertex(
                    Player::Falsifier,
                    0,
                    format!("always step {}->{}", m.state_name(s), m.state_name(t.target)),
                );
                self.b.add_edge(v, t.weight, mid);
                self.b.add_edge(mid, 0, main[t.target]);
                self.b.add_edge(mid, 0, sub[t.target]);
            }
        }
        if self.opts.literal_figures {
            return Ok(main);
        }
        Ok((0..m.state_count())
            .map(|s| {
                let p = self.b.add_vertex(Player::Falsifier, 0, format!("always start @ {}", m.state_name(s)));
                self.b.add_edge(p, 0, main[s]);
                self.b.add_edge(p, 0, sub[s]);
                p
            })
            .collect())
    }

    fn until(&mut self, agents: &[usize], a: &Formula, b: &Formula) -> Result<Vec<VertexId>, McError> {
        let m = self.m;
        let hold = self.entries(a)?;
        let goal = self.entries(b)?;
        let main: Vec<VertexId> = (0..m.state_count())
            .map(|s| self.b.add_vertex(side_of(m, s, agents), 1, format!("until @ {}", m.state_name(s))))
            .collect();
        for (s, &v) in main.iter().enumerate() {
            for t in m.outgoing(s) {
                let step = format!("{}->{}", m.state_name(s), m.state_name(t.target));
                let claim = self.b.add_vertex(Player::Verifier, 1, format!("until claim {step}"));
                let challenge = self.b.add_vertex(Player::Falsifier, 1, format!("until challenge {step}"));
                self.b.add_edge(v, t.weight, claim);
                self.b.add_edge(claim, 0, goal[t.target]);
                self.b.add_edge(claim, 0, challenge);
                self.b.add_edge(challenge, 0, hold[t.target]);
                self.b.add_edge(challenge, 0, main[t.target]);
            }
        }
        if self.opts.literal_figures {
            return Ok(main);
        }
        Ok((0..m.state_count())
            .map(|s| {
                let name = m.state_name(s);
                let claim = self.b.add_vertex(Player::Verifier, 1, format!("until start claim @ {name}"));
                let challenge = self.b.add_vertex(Player::Falsifier, 1, format!("until start challenge @ {name}"));
                self.b.add_edge(claim, 0, goal[s]);
                self.b.add_edge(claim, 0, challenge);
                self.b.add_edge(challenge, 0, hold[s]);
                self.b.add_edge(challenge, 0, main[s]);
                claim
            })
            .collect())
    }
}
