//! Model-checking games: compile a formula, a model, a state and an initial counter
//! value into a one-counter parity game that Verifier wins iff the formula holds.
//!
//! Builders produce one entry per model state so that sub-games for a subformula are
//! constructed once and shared by every place that challenges it.

mod qatl;
mod star;

use crate::automata::AutomataError;
use crate::formula::FormulaKind;
use crate::model::{GameModel, StateId, WeightClass};
use crate::parity::{GameBuilder, GameError, OneCounterParityGame, Player, VertexId};

pub use qatl::{build_constraint_gadget, build_prop_gadget, build_qatl_game};
pub use star::build_qatlstar_game;

/// Construction switches shared by both builders.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildOptions {
    /// Omit the position-0 claim/challenge vertices and build exactly the drawn
    /// constructions, which only check subformulas after the first move.
    pub literal_figures: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum McError {
    #[error("formula is not in the QATL fragment: {0}")]
    NotQatl(String),
    #[error("coalition names unknown player `{0}`")]
    UnknownAgent(String),
    #[error("no state with id {0}")]
    NoSuchState(StateId),
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("automaton for `{formula}` has {states} states, above the limit {limit}")]
    AutomatonTooLarge { formula: String, states: usize, limit: usize },
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// A game together with the vertex that stands for the checked configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameFragment {
    pub game: OneCounterParityGame,
    /// State counts of the deterministic automata built on the way.
    pub automata: Vec<usize>,
}

impl GameFragment {
    pub fn entry(&self) -> VertexId {
        self.game.entry
    }
}

/// Swaps every owner and adds 1 to every color; the entry is kept.
pub fn dualize(mut f: GameFragment) -> GameFragment {
    f.game.dualize();
    f
}

/// Prepends a ramp that raises the counter from 0 to `credit` before the entry.
///
/// Unit ramps use `credit` vertices with `+1` edges (one vertex with a `0` edge when
/// `credit` is 0); `binary` ramps use a single edge of weight `credit`.
pub fn attach_initial_credit(f: GameFragment, credit: u64, binary: bool) -> GameFragment {
    let mut b = GameBuilder::new();
    b.embed(&f.game);
    let target = f.game.entry;
    let entry = if credit == 0 || binary {
        let v = b.add_vertex(Player::Verifier, 0, format!("credit ramp to {credit}"));
        b.add_edge(v, credit as i64, target);
        v
    } else {
        let first = b.len();
        for k in 0..credit {
            b.add_vertex(Player::Verifier, 0, format!("credit ramp {k}"));
        }
        for k in 0..credit as usize {
            let next = if k + 1 == credit as usize { target } else { first + k + 1 };
            b.add_edge(first + k, 1, next);
        }
        first
    };
    let mut game = b.build_unchecked(entry);
    game.initial_credit = credit;
    GameFragment { game, automata: f.automata }
}

/// Owner of the game vertex mirroring model state `s` for coalition `agents`.
pub(crate) fn side_of(m: &GameModel, s: StateId, agents: &[usize]) -> Player {
    if agents.contains(&m.owner(s)) {
        Player::Verifier
    } else {
        Player::Falsifier
    }
}

pub(crate) fn agent_ids(
    m: &GameModel,
    agents: &std::collections::BTreeSet<String>,
) -> Result<Vec<usize>, McError> {
    agents
        .iter()
        .map(|a| m.player_id(a).ok_or_else(|| McError::UnknownAgent(a.clone())))
        .collect()
}

/// Drops everything unreachable from the entry and validates.
pub(crate) fn finish(mut game: OneCounterParityGame, automata: Vec<usize>) -> Result<GameFragment, McError> {
    game.retain_reachable(&[game.entry]);
    game.validate()?;
    Ok(GameFragment { game, automata })
}

/// Whether ramps for games over `m` should use a single binary-weight edge.
pub fn binary_ramp(m: &GameModel) -> bool {
    m.weight_class() == WeightClass::Succinct
}

pub(crate) fn kind_name(k: &FormulaKind) -> &'static str {
    match k {
        FormulaKind::Bool(_) => "constant",
        FormulaKind::Prop(_) => "proposition",
        FormulaKind::Constraint(_) => "constraint",
        FormulaKind::Not(_) => "negation",
        FormulaKind::Or(..) => "disjunction",
        FormulaKind::And(..) => "conjunction",
        FormulaKind::Implies(..) => "implication",
        FormulaKind::Next(_) => "next",
        FormulaKind::Until(..) => "until",
        FormulaKind::Finally(_) => "eventually",
        FormulaKind::Globally(_) => "always",
        FormulaKind::Coalition(..) => "coalition",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parity::{solve_bracketed, BracketVerdict};

    fn even_loop() -> GameFragment {
        let mut b = GameBuilder::new();
        let v = b.add_vertex(Player::Falsifier, 0, "loop");
        b.add_edge(v, 0, v);
        GameFragment { game: b.build(v).unwrap(), automata: Vec::new() }
    }

    #[test]
    fn zero_credit_is_one_edge() {
        let f = attach_initial_credit(even_loop(), 0, false);
        assert_eq!(f.game.vertex_count(), 2);
        assert_eq!(f.game.successors(f.entry())[0].weight, 0);
    }

    #[test]
    fn ramp_lengths() {
        let f = attach_initial_credit(even_loop(), 3, false);
        assert_eq!(f.game.vertex_count(), 4);
        assert_eq!(f.game.initial_credit, 3);
        let f = attach_initial_credit(even_loop(), 300, true);
        assert_eq!(f.game.vertex_count(), 2);
        assert_eq!(f.game.successors(f.entry())[0].weight, 300);
    }

    #[test]
    fn ramped_even_loop_is_won() {
        let f = attach_initial_credit(even_loop(), 3, false);
        assert_eq!(solve_bracketed(&f.game, 8), Ok(BracketVerdict::VerifierWins));
        let d = dualize(f);
        assert_eq!(solve_bracketed(&d.game, 8), Ok(BracketVerdict::FalsifierWins));
        let dd = dualize(d);
        assert_eq!(solve_bracketed(&dd.game, 8), Ok(BracketVerdict::VerifierWins));
    }
}
