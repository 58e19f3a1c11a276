use serde::Serialize;

use super::arena::{truncate_from, Counter, TruncationMode};
use super::{solve_zielonka, GameError, OneCounterParityGame, Player, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BracketVerdict {
    VerifierWins,
    FalsifierWins,
    Unknown,
}

/// Starting cap and doubling limit used when the caller gives none.
pub fn default_cap(g: &OneCounterParityGame) -> (u64, u64) {
    let start = 64.max(g.initial_credit + 8).max(g.max_abs_weight());
    let heuristic = 4 * g.vertex_count() as u64 * (g.max_color() as u64 + 1);
    (start, start.max(heuristic))
}

/// Decides the winner from `(entry, 0)` by solving truncations at `cap` that
/// under- and over-approximate Verifier's chances.
pub fn solve_bracketed(g: &OneCounterParityGame, cap: u64) -> Result<BracketVerdict, GameError> {
    Ok(solve_bracketed_many(g, cap, &[(g.entry, 0)])?[0])
}

/// As [`solve_bracketed`] for several starting configurations at once.
pub fn solve_bracketed_many(
    g: &OneCounterParityGame,
    cap: u64,
    starts: &[(VertexId, u64)],
) -> Result<Vec<BracketVerdict>, GameError> {
    if cap < g.initial_credit {
        return Err(GameError::CapBelowCredit { cap, credit: g.initial_credit });
    }
    for &(v, c) in starts {
        if v >= g.vertex_count() || c > cap {
            return Err(GameError::BadStart(v));
        }
    }
    let saturate = cap + 1 >= g.max_abs_weight();
    let winners = |mode: TruncationMode| -> Result<Option<Vec<Player>>, GameError> {
        if mode.is_saturated() && !saturate {
            return Ok(None);
        }
        let a = truncate_from(g, cap, mode, starts)?;
        let r = solve_zielonka(&a);
        Ok(Some(
            starts
                .iter()
                .map(|&(v, c)| r.winner[a.node_of(v, Counter::Exact(c)).expect("start is explored")])
                .collect(),
        ))
    };
    let ((pess, sat_pess), (opt, sat_opt)) = rayon::join(
        || rayon::join(|| winners(TruncationMode::Pessimistic), || winners(TruncationMode::SaturatedPessimistic)),
        || rayon::join(|| winners(TruncationMode::Optimistic), || winners(TruncationMode::SaturatedOptimistic)),
    );
    let (pess, sat_pess, opt, sat_opt) = (pess?, sat_pess?, opt?, sat_opt?);
    let at = |w: &Option<Vec<Player>>, i: usize| w.as_ref().map(|w| w[i]);
    Ok((0..starts.len())
        .map(|i| {
            let verifier = at(&pess, i) == Some(Player::Verifier) || at(&sat_pess, i) == Some(Player::Verifier);
            let falsifier = at(&opt, i) == Some(Player::Falsifier) || at(&sat_opt, i) == Some(Player::Falsifier);
            debug_assert!(!(verifier && falsifier), "bracket contradiction at start {i}");
            match (verifier, falsifier) {
                (true, false) => BracketVerdict::VerifierWins,
                (false, true) => BracketVerdict::FalsifierWins,
                _ => BracketVerdict::Unknown,
            }
        })
        .collect())
}
