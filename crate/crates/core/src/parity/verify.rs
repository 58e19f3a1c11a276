use super::{FiniteArena, Player, SolveResult};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StrategyError {
    #[error("vertex {0} is owned by the player in its region but has no strategy")]
    Missing(usize),
    #[error("strategy at vertex {vertex} moves to {target}, which is not a successor")]
    NotASuccessor { vertex: usize, target: usize },
    #[error("strategy at vertex {vertex} leaves the claimed region to {target}")]
    LeavesRegion { vertex: usize, target: usize },
}

/// Checks that `player`'s positional strategy wins from every vertex of the region
/// `r` assigns to `player`.
///
/// Returns `Ok(false)` when the opponent can leave the region or close a cycle whose
/// least color has the opponent's parity.
pub fn verify_strategy(a: &FiniteArena, r: &SolveResult, player: Player) -> Result<bool, StrategyError> {
    let n = a.len();
    let inside: Vec<bool> = r.winner.iter().map(|&w| w == player).collect();
    let mut graph: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in (0..n).filter(|&v| inside[v]) {
        if a.owner[v] == player {
            let t = r.strategy[v].ok_or(StrategyError::Missing(v))?;
            if !a.succ[v].contains(&t) {
                return Err(StrategyError::NotASuccessor { vertex: v, target: t });
            }
            if !inside[t] {
                return Err(StrategyError::LeavesRegion { vertex: v, target: t });
            }
            graph[v].push(t);
        } else {
            if a.succ[v].iter().any(|&t| !inside[t]) {
                return Ok(false);
            }
            graph[v].extend_from_slice(&a.succ[v]);
        }
    }
    let bad_parity = match player {
        Player::Verifier => 1,
        Player::Falsifier => 0,
    };
    let mut colors: Vec<u32> = (0..n).filter(|&v| inside[v]).map(|v| a.color[v]).collect();
    colors.sort_unstable();
    colors.dedup();
    for c in colors.into_iter().filter(|c| c % 2 == bad_parity) {
        let keep: Vec<bool> = (0..n).map(|v| inside[v] && a.color[v] >= c).collect();
        let comp = tarjan(&graph, &keep);
        let mut size = vec![0usize; n];
        for v in (0..n).filter(|&v| keep[v]) {
            size[comp[v]] += 1;
        }
        for v in (0..n).filter(|&v| keep[v] && a.color[v] == c) {
            if size[comp[v]] > 1 || graph[v].contains(&v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Strongly connected components of the subgraph induced by `keep`, as component ids.
pub(crate) fn tarjan(graph: &[Vec<usize>], keep: &[bool]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let n = graph.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut comp = vec![UNSEEN; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    // explicit call stack of (vertex, next edge position)
    let mut calls: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if !keep[root] || index[root] != UNSEEN {
            continue;
        }
        calls.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&(v, pos)) = calls.last() {
            if pos < graph[v].len() {
                let w = graph[v][pos];
                calls.last_mut().unwrap().1 += 1;
                if !keep[w] {
                    continue;
                }
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                calls.pop();
                if let Some(&(parent, _)) = calls.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_self_loop_verifies() {
        let a = FiniteArena::new(vec![Player::Verifier], vec![0], vec![vec![0]]);
        let r = SolveResult { winner: vec![Player::Verifier], strategy: vec![Some(0)] };
        assert_eq!(verify_strategy(&a, &r, Player::Verifier), Ok(true));
    }

    #[test]
    fn strategy_into_odd_cycle_fails() {
        // 0 (V) may go to 1 (even loop) or 2 (odd loop); the claimed strategy picks 2
        let a = FiniteArena::new(
            vec![Player::Verifier, Player::Verifier, Player::Verifier],
            vec![2, 0, 1],
            vec![vec![1, 2], vec![1], vec![2]],
        );
        let r = SolveResult {
            winner: vec![Player::Verifier; 3],
            strategy: vec![Some(2), Some(1), Some(2)],
        };
        assert_eq!(verify_strategy(&a, &r, Player::Verifier), Ok(false));
    }

    #[test]
    fn leaving_region_is_an_error() {
        let a = FiniteArena::new(vec![Player::Verifier; 2], vec![0, 1], vec![vec![0, 1], vec![1]]);
        let r = SolveResult {
            winner: vec![Player::Verifier, Player::Falsifier],
            strategy: vec![Some(1), None],
        };
        assert_eq!(
            verify_strategy(&a, &r, Player::Verifier),
            Err(StrategyError::LeavesRegion { vertex: 0, target: 1 })
        );
    }

    #[test]
    fn tarjan_components() {
        let g = vec![vec![1], vec![0, 2], vec![2], vec![0]];
        let c = tarjan(&g, &[true; 4]);
        assert_eq!(c[0], c[1]);
        assert_ne!(c[1], c[2]);
        assert_ne!(c[3], c[0]);
    }
}
