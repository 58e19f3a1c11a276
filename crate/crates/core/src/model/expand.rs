use crate::parity::{GameBuilder, OneCounterParityGame, Player};

/// Replaces every edge of weight `w` with `|w| > 1` by a chain of `|w|` unit steps.
///
/// Chain vertices belong to the mover and carry the game's maximum color. Each
/// vertex inside a decrementing chain can also escape to a trap that the mover
/// loses, which is the only way out when the counter runs dry midway. Original
/// vertices keep their ids.
pub fn expand_socg(g: &OneCounterParityGame) -> OneCounterParityGame {
    let mut b = GameBuilder::new();
    for v in g.vertices() {
        let id = b.add_vertex(v.owner, v.color, v.provenance.clone());
        b.set_labels(id, v.labels.clone());
    }
    let top = g.max_color().max(1);
    let mut traps: [Option<usize>; 2] = [None, None];
    for (s, w, t) in g.edges() {
        if w.abs() <= 1 {
            b.add_edge(s, w, t);
            continue;
        }
        let mover = g.owner(s);
        let step = w.signum();
        let mut prev = s;
        for k in 1..w.unsigned_abs() {
            let mid = b.add_vertex(mover, top, format!("chain {s}->{t} step {k}"));
            b.add_edge(prev, step, mid);
            if step < 0 {
                let trap = trap_for(&mut b, &mut traps, mover);
                b.add_edge(mid, 0, trap);
            }
            prev = mid;
        }
        b.add_edge(prev, step, t);
    }
    let mut out = b.build_unchecked(g.entry);
    out.initial_credit = g.initial_credit;
    out
}

fn trap_for(b: &mut GameBuilder, traps: &mut [Option<usize>; 2], loser: Player) -> usize {
    let slot = loser as usize;
    if let Some(t) = traps[slot] {
        return t;
    }
    let color = match loser {
        Player::Verifier => 1,
        Player::Falsifier => 0,
    };
    let t = b.add_vertex(loser, color, format!("trap lost by {loser:?}"));
    b.add_edge(t, 0, t);
    traps[slot] = Some(t);
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parity::{truncate_from, Counter, TruncationMode};

    fn drop3() -> OneCounterParityGame {
        let mut b = GameBuilder::new();
        let v = b.add_vertex(Player::Verifier, 0, "v");
        let good = b.add_vertex(Player::Verifier, 0, "good");
        let bad = b.add_vertex(Player::Verifier, 1, "bad");
        b.add_edge(v, -3, good);
        b.add_edge(v, 0, bad);
        b.add_edge(good, 0, good);
        b.add_edge(bad, 0, bad);
        b.build(v).unwrap()
    }

    #[test]
    fn chain_shape() {
        let e = expand_socg(&drop3());
        assert!(e.validate().is_ok());
        assert!(e.is_unit());
        // two chain vertices and one trap
        assert_eq!(e.vertex_count(), 6);
        let chain: Vec<usize> =
            (0..e.vertex_count()).filter(|&v| e.vertex(v).provenance.starts_with("chain")).collect();
        assert_eq!(chain.len(), 2);
        for &c in &chain {
            let non_escape: Vec<_> = e.successors(c).iter().filter(|x| x.weight != 0).collect();
            assert_eq!(non_escape.len(), 1);
            assert_eq!(e.owner(c), Player::Verifier);
        }
    }

    #[test]
    fn underfunded_chain_ends_in_trap() {
        let e = expand_socg(&drop3());
        let a = truncate_from(&e, 10, TruncationMode::Pessimistic, &[(0, 2)]).unwrap();
        // from counter 2 the chain can be entered but only the trap is reachable at its end
        let reach_good = a.node_of(1, Counter::Exact(0)).is_some() || a.node_of(1, Counter::Exact(1)).is_some();
        assert!(!reach_good);
        let trap = (0..e.vertex_count()).find(|&v| e.vertex(v).provenance.starts_with("trap")).unwrap();
        assert_eq!(e.color(trap), 1);
        assert!(a.node_of(trap, Counter::Exact(0)).is_some());
        let a = truncate_from(&e, 10, TruncationMode::Pessimistic, &[(0, 3)]).unwrap();
        assert!(a.node_of(1, Counter::Exact(0)).is_some());
    }

    #[test]
    fn unit_edges_unchanged() {
        let mut b = GameBuilder::new();
        let v = b.add_vertex(Player::Falsifier, 2, "v");
        b.add_edge(v, 1, v);
        let g = b.build(v).unwrap();
        assert_eq!(expand_socg(&g), g);
    }
}
