use std::collections::{HashMap, VecDeque};

use super::qatl::Compiler;
use super::{finish, side_of, BuildOptions, GameFragment, McError};
use crate::automata::{ltl_to_nba, AutomataError, Determinizer, Letter};
use crate::formula::{substitute_fresh, Formula};
use crate::model::{GameModel, StateId};
use crate::parity::{Player, VertexId};

/// Largest deterministic automaton a single coalition may produce.
const DPA_LIMIT: usize = 100_000;

/// Characteristic game of a desugared QATL* state formula at state `s`, before any
/// credit ramp. Every coalition is compiled through a deterministic parity automaton
/// for its path formula, run in lockstep with a copy of the model.
pub fn build_qatlstar_game(
    m: &GameModel,
    s: StateId,
    f: &Formula,
    opts: BuildOptions,
) -> Result<GameFragment, McError> {
    if s >= m.state_count() {
        return Err(McError::NoSuchState(s));
    }
    let mut c = Compiler::new(m, opts, true);
    let entries = c.entries(f)?;
    finish(c.b.build_unchecked(entries[s]), c.automata)
}

/// One proposition of the product alphabet.
enum Letterbit {
    /// Fixed by the model label unless figures are built literally.
    Original(String),
    /// Stands for the state formula at this index of the binding.
    Fresh(usize),
}

/// Entries, per model state, of the game for `<<agents>> path`.
///
/// Each model move `s -> t` passes through a Verifier vertex that picks the letter at
/// `t` and a Falsifier vertex carrying that letter, where the automaton steps and
/// Falsifier may challenge any fresh proposition of the letter. A prologue does the
/// same for the letter at the starting state.
pub(super) fn product(c: &mut Compiler<'_>, agents: &[usize], path: &Formula) -> Result<Vec<VertexId>, McError> {
    let m = c.m;
    let fresh = substitute_fresh(path);
    let names: Vec<String> = fresh.ltl.propositions().into_iter().collect();
    let bits: Vec<Letterbit> = names
        .iter()
        .map(|n| match fresh.binding.iter().position(|(q, _)| q == n) {
            Some(i) => Letterbit::Fresh(i),
            None => Letterbit::Original(n.clone()),
        })
        .collect();

    // challenge games: for each bit, the game when it is asserted and when denied
    let mut yes: Vec<Option<Vec<VertexId>>> = Vec::new();
    let mut no: Vec<Option<Vec<VertexId>>> = Vec::new();
    for b in &bits {
        let psi = match b {
            Letterbit::Fresh(i) => Some(fresh.binding[*i].1.clone()),
            Letterbit::Original(p) if c.opts.literal_figures => Some(Formula::prop(p.clone())),
            Letterbit::Original(_) => None,
        };
        match psi {
            Some(psi) => {
                yes.push(Some(c.entries(&psi)?));
                no.push(Some(c.entries(&Formula::not(psi))?));
            }
            None => {
                yes.push(None);
                no.push(None);
            }
        }
    }

    let nba = ltl_to_nba(&fresh.ltl, &names).map_err(|e| automaton_error(e, path))?;
    let mut dpa = Determinizer::new(nba, DPA_LIMIT);

    // letters Verifier may announce at model state t
    let letters_at = |t: StateId| -> Vec<Letter> {
        let mut fixed: Letter = 0;
        let mut free: Vec<usize> = Vec::new();
        for (i, b) in bits.iter().enumerate() {
            match b {
                Letterbit::Original(p) if !c.opts.literal_figures => {
                    if m.has_label(t, p) {
                        fixed |= 1 << i;
                    }
                }
                _ => free.push(i),
            }
        }
        (0..1u64 << free.len())
            .map(|mask| {
                free.iter().enumerate().fold(fixed, |acc, (j, &i)| if mask >> j & 1 == 1 { acc | 1 << i } else { acc })
            })
            .collect()
    };
    let letters: Vec<Vec<Letter>> = (0..m.state_count()).map(letters_at).collect();

    let mut main: HashMap<(StateId, usize), VertexId> = HashMap::new();
    let mut queue: VecDeque<(StateId, usize)> = VecDeque::new();
    let mut labelled: HashMap<(StateId, Letter, usize), VertexId> = HashMap::new();

    // labelled vertex: Falsifier reads `letter` at `t` from automaton state `q`
    let mut label_vertex = |c: &mut Compiler<'_>,
                            dpa: &mut Determinizer,
                            main: &mut HashMap<(StateId, usize), VertexId>,
                            queue: &mut VecDeque<(StateId, usize)>,
                            t: StateId,
                            letter: Letter,
                            q: usize|
     -> Result<VertexId, McError> {
        if let Some(&v) = labelled.get(&(t, letter, q)) {
            return Ok(v);
        }
        let q2 = dpa.step(q, letter).map_err(|e| automaton_error(e, path))?;
        let shown: Vec<String> =
            names.iter().enumerate().filter(|(i, _)| letter >> i & 1 == 1).map(|(_, n)| n.clone()).collect();
        let v = c.b.add_vertex(
            Player::Falsifier,
            dpa.color(q2),
            format!("letter {{{}}} @ {} dpa {q2}", shown.join(","), m.state_name(t)),
        );
        c.b.set_labels(v, shown);
        labelled.insert((t, letter, q), v);
        let target = match main.get(&(t, q2)) {
            Some(&x) => x,
            None => {
                let x = c.b.add_vertex(side_of(m, t, agents), dpa.color(q2), format!("product {} dpa {q2}", m.state_name(t)));
                main.insert((t, q2), x);
                queue.push_back((t, q2));
                x
            }
        };
        c.b.add_edge(v, 0, target);
        for i in 0..bits.len() {
            let side = if letter >> i & 1 == 1 { &yes[i] } else { &no[i] };
            if let Some(entries) = side {
                c.b.add_edge(v, 0, entries[t]);
            }
        }
        Ok(v)
    };

    let q0 = dpa.initial();
    let mut entries = Vec::with_capacity(m.state_count());
    for s in 0..m.state_count() {
        let start = c.b.add_vertex(Player::Verifier, dpa.color(q0), format!("product start @ {}", m.state_name(s)));
        for &a in &letters[s] {
            let v = label_vertex(c, &mut dpa, &mut main, &mut queue, s, a, q0)?;
            c.b.add_edge(start, 0, v);
        }
        entries.push(start);
    }
    while let Some((s, q)) = queue.pop_front() {
        let from = main[&(s, q)];
        for tr in m.outgoing(s) {
            let t = tr.target;
            let choose = c.b.add_vertex(
                Player::Verifier,
                dpa.color(q),
                format!("choose letter {}->{} dpa {q}", m.state_name(s), m.state_name(t)),
            );
            c.b.add_edge(from, tr.weight, choose);
            for &a in &letters[t] {
                let v = label_vertex(c, &mut dpa, &mut main, &mut queue, t, a, q)?;
                c.b.add_edge(choose, 0, v);
            }
        }
    }
    c.automata.push(dpa.state_count());
    Ok(entries)
}

fn automaton_error(e: AutomataError, path: &Formula) -> McError {
    match e {
        AutomataError::TooLarge(limit) => McError::AutomatonTooLarge { formula: path.to_string(), states: limit, limit },
        other => McError::Automata(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{desugar, parse};
    use crate::mcgame::{attach_initial_credit, build_qatl_game};
    use crate::model::ModelBuilder;
    use crate::parity::{solve_bracketed, BracketVerdict};

    fn model() -> GameModel {
        // a: Sys-owned, may stay (p) or move to b (no p); b returns to a
        let mut mb = ModelBuilder::new(&["Sys", "Env"]);
        let a = mb.state("a", 0, &["p"]);
        let b = mb.state("b", 1, &[]);
        mb.edge(a, 0, a);
        mb.edge(a, 1, b);
        mb.edge(b, -1, a);
        mb.edge(b, 0, a);
        mb.build().unwrap()
    }

    fn verdict(g: GameFragment) -> BracketVerdict {
        solve_bracketed(&attach_initial_credit(g, 0, false).game, 16).unwrap()
    }

    #[test]
    fn agrees_with_qatl_builder() {
        let m = model();
        for f in ["<<Sys>> G p", "<<Env>> G p", "<<Sys>> X !p", "<<Env>> F !p", "<<Sys>> (p U r > 0)"] {
            let f = desugar(&parse(f).unwrap());
            for s in 0..2 {
                let a = verdict(build_qatl_game(&m, s, &f, BuildOptions::default()).unwrap());
                let b = verdict(build_qatlstar_game(&m, s, &f, BuildOptions::default()).unwrap());
                assert_eq!(a, b, "{f} at {s}");
            }
        }
    }

    #[test]
    fn fairness_objective() {
        let m = model();
        let f = desugar(&parse("<<Sys>> G F !p").unwrap());
        assert_eq!(verdict(build_qatlstar_game(&m, 0, &f, BuildOptions::default()).unwrap()), BracketVerdict::VerifierWins);
        let f = desugar(&parse("<<Env>> G F !p").unwrap());
        assert_eq!(verdict(build_qatlstar_game(&m, 0, &f, BuildOptions::default()).unwrap()), BracketVerdict::FalsifierWins);
    }

    #[test]
    fn literal_alphabet_agrees() {
        let m = model();
        let f = desugar(&parse("<<Sys>> F G p").unwrap());
        let lit = BuildOptions { literal_figures: true };
        for s in 0..2 {
            let a = verdict(build_qatlstar_game(&m, s, &f, BuildOptions::default()).unwrap());
            let b = verdict(build_qatlstar_game(&m, s, &f, lit).unwrap());
            assert_eq!(a, b);
        }
    }
}
