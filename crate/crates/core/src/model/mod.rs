//! Turn-based game models with a single non-negative counter.
//!
//! A transition of weight `w` is enabled at counter value `i` iff `i + w >= 0`.

mod expand;
mod parse;

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::formula::Rel;

pub use expand::expand_socg;
pub use parse::load_model;

pub type StateId = usize;
pub type PlayerId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum WeightClass {
    /// Every weight is -1, 0 or 1.
    Unit,
    /// Arbitrary integer weights.
    Succinct,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub source: StateId,
    pub weight: i64,
    pub target: StateId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Configuration {
    pub state: StateId,
    pub counter: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown state `{name}`")]
    UnknownState { line: usize, name: String },
    #[error("line {line}: unknown player `{name}`")]
    UnknownPlayer { line: usize, name: String },
    #[error("line {line}: state `{name}` declared twice")]
    DuplicateState { line: usize, name: String },
    #[error("line {line}: state `{name}` has two owners")]
    TwoOwners { line: usize, name: String },
    #[error("state `{0}` is deadlock-capable: it has no outgoing transition of weight >= 0")]
    DeadlockCapable(String),
    #[error("line {line}: weight {weight} is not allowed in a unit model")]
    NonUnitWeight { line: usize, weight: i64 },
    #[error("line {line}: `{name}` is reserved and cannot be used as a proposition")]
    ReservedName { line: usize, name: String },
    #[error("the model declares no players")]
    NoPlayers,
    #[error("the model declares no states")]
    NoStates,
    #[error("no state `{0}`")]
    NoSuchState(String),
    #[error("history step {step} is not a move of the model")]
    BadHistory { step: usize },
}

/// A validated one-counter game model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameModel {
    states: Vec<String>,
    players: Vec<String>,
    owner: Vec<PlayerId>,
    labels: Vec<BTreeSet<String>>,
    transitions: Vec<Transition>,
    out: Vec<Vec<usize>>,
    weight_class: WeightClass,
    index: HashMap<String, StateId>,
}

/// Programmatic construction of a [`GameModel`].
#[derive(Clone, Debug, Default)]
pub struct ModelBuilder {
    states: Vec<String>,
    players: Vec<String>,
    owner: Vec<PlayerId>,
    labels: Vec<BTreeSet<String>>,
    transitions: Vec<Transition>,
    unit: bool,
}

impl ModelBuilder {
    pub fn new(players: &[&str]) -> Self {
        ModelBuilder { players: players.iter().map(|p| p.to_string()).collect(), ..Default::default() }
    }

    /// Requires all weights to be unit when building.
    pub fn unit(mut self) -> Self {
        self.unit = true;
        self
    }

    pub fn state(&mut self, name: impl Into<String>, owner: PlayerId, labels: &[&str]) -> StateId {
        self.states.push(name.into());
        self.owner.push(owner);
        self.labels.push(labels.iter().map(|l| l.to_string()).collect());
        self.states.len() - 1
    }

    pub fn edge(&mut self, source: StateId, weight: i64, target: StateId) {
        self.transitions.push(Transition { source, weight, target });
    }

    pub fn build(self) -> Result<GameModel, ModelError> {
        GameModel::from_parts(self.players, self.states, self.owner, self.labels, self.transitions, self.unit)
    }
}

impl GameModel {
    fn from_parts(
        players: Vec<String>,
        states: Vec<String>,
        owner: Vec<PlayerId>,
        labels: Vec<BTreeSet<String>>,
        transitions: Vec<Transition>,
        unit: bool,
    ) -> Result<GameModel, ModelError> {
        if players.is_empty() {
            return Err(ModelError::NoPlayers);
        }
        if states.is_empty() {
            return Err(ModelError::NoStates);
        }
        let mut index = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(ModelError::DuplicateState { line: 0, name: s.clone() });
            }
        }
        for &o in &owner {
            if o >= players.len() {
                return Err(ModelError::UnknownPlayer { line: 0, name: o.to_string() });
            }
        }
        let mut out = vec![Vec::new(); states.len()];
        for (i, t) in transitions.iter().enumerate() {
            for s in [t.source, t.target] {
                if s >= states.len() {
                    return Err(ModelError::UnknownState { line: 0, name: s.to_string() });
                }
            }
            if unit && t.weight.abs() > 1 {
                return Err(ModelError::NonUnitWeight { line: 0, weight: t.weight });
            }
            out[t.source].push(i);
        }
        for (s, ts) in out.iter().enumerate() {
            if !ts.iter().any(|&i| transitions[i].weight >= 0) {
                return Err(ModelError::DeadlockCapable(states[s].clone()));
            }
        }
        let weight_class = if unit || transitions.iter().all(|t| t.weight.abs() <= 1) {
            WeightClass::Unit
        } else {
            WeightClass::Succinct
        };
        Ok(GameModel { states, players, owner, labels, transitions, out, weight_class, index })
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.index.get(name).copied()
    }

    pub fn player_id(&self, name: &str) -> Option<PlayerId> {
        self.players.iter().position(|p| p == name)
    }

    pub fn owner(&self, s: StateId) -> PlayerId {
        self.owner[s]
    }

    pub fn owner_name(&self, s: StateId) -> &str {
        &self.players[self.owner[s]]
    }

    pub fn labels(&self, s: StateId) -> &BTreeSet<String> {
        &self.labels[s]
    }

    pub fn has_label(&self, s: StateId, p: &str) -> bool {
        self.labels[s].contains(p)
    }

    /// Every proposition used by some state.
    pub fn propositions(&self) -> BTreeSet<String> {
        self.labels.iter().flatten().cloned().collect()
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Transitions leaving `s`, in declaration order.
    pub fn outgoing(&self, s: StateId) -> impl Iterator<Item = &Transition> + '_ {
        self.out[s].iter().map(move |&i| &self.transitions[i])
    }

    pub fn weight_class(&self) -> WeightClass {
        self.weight_class
    }

    pub fn max_abs_weight(&self) -> u64 {
        self.transitions.iter().map(|t| t.weight.unsigned_abs()).max().unwrap_or(0)
    }

    /// Renders the model in the text format read by [`load_model`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.weight_class == WeightClass::Unit {
            out.push_str("unit\n");
        }
        let _ = writeln!(out, "players: {}", self.players.join(", "));
        for (s, name) in self.states.iter().enumerate() {
            let _ = write!(out, "state {name} owner={}", self.owner_name(s));
            if !self.labels[s].is_empty() {
                let ls: Vec<&str> = self.labels[s].iter().map(String::as_str).collect();
                let _ = write!(out, " labels={{{}}}", ls.join(","));
            }
            out.push('\n');
        }
        for t in &self.transitions {
            let _ = writeln!(out, "edge {} -> {} weight={}", self.states[t.source], self.states[t.target], t.weight);
        }
        out
    }
}

/// The moves available in `c`: each enabled transition with the configuration it leads to.
pub fn enabled_moves(m: &GameModel, c: Configuration) -> Result<Vec<(Transition, Configuration)>, ModelError> {
    if c.state >= m.state_count() {
        return Err(ModelError::NoSuchState(c.state.to_string()));
    }
    Ok(m.outgoing(c.state)
        .filter_map(|t| {
            let next = c.counter as i128 + t.weight as i128;
            (next >= 0 && next <= u64::MAX as i128)
                .then(|| (*t, Configuration { state: t.target, counter: next as u64 }))
        })
        .collect())
}

/// Truth of `counter rel constant`, or of `counter = constant (mod modulus)`.
pub fn eval_constraint(rel: Rel, constant: i64, modulus: Option<u64>, counter: u64) -> bool {
    let i = counter as i128;
    let c = constant as i128;
    match rel {
        Rel::Lt => i < c,
        Rel::Le => i <= c,
        Rel::Eq => i == c,
        Rel::Gt => i > c,
        Rel::Ge => i >= c,
        Rel::Mod => {
            let k = modulus.expect("modular constraint without modulus") as i128;
            i.rem_euclid(k) == c.rem_euclid(k)
        }
    }
}

/// A finite sequence of configurations connected by enabled transitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct History(Vec<Configuration>);

impl History {
    pub fn new(m: &GameModel, configs: Vec<Configuration>) -> Result<History, ModelError> {
        if let Some(c) = configs.iter().find(|c| c.state >= m.state_count()) {
            return Err(ModelError::NoSuchState(c.state.to_string()));
        }
        for (i, w) in configs.windows(2).enumerate() {
            let ok = enabled_moves(m, w[0])?.iter().any(|(_, next)| *next == w[1]);
            if !ok {
                return Err(ModelError::BadHistory { step: i + 1 });
            }
        }
        Ok(History(configs))
    }

    pub fn configurations(&self) -> &[Configuration] {
        &self.0
    }

    pub fn last(&self) -> Option<Configuration> {
        self.0.last().copied()
    }
}
