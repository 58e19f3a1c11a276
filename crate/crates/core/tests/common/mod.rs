//! Random instances shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use qatl_core::automata::LassoWord;
use qatl_core::formula::{Constraint, Formula, Rel};
use qatl_core::model::{GameModel, ModelBuilder};
use qatl_core::parity::{FiniteArena, GameBuilder, OneCounterParityGame, Player};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const PLAYERS: [&str; 2] = ["A", "B"];
pub const PROPS: [&str; 2] = ["p", "q"];

/// Up to `max_states` states, players `A` and `B`, labels from `p`, `q`, unit weights.
pub fn random_model(r: &mut impl Rng, max_states: usize) -> GameModel {
    let n = r.gen_range(1..=max_states);
    let mut b = ModelBuilder::new(&PLAYERS).unit();
    for i in 0..n {
        let labels: Vec<&str> = PROPS.iter().copied().filter(|_| r.gen_bool(0.5)).collect();
        b.state(format!("s{i}"), r.gen_range(0..2), &labels);
    }
    for s in 0..n {
        let k = r.gen_range(1..=3);
        for e in 0..k {
            // the first edge never decrements, so no state can get stuck
            let w = if e == 0 { r.gen_range(0..=1) } else { r.gen_range(-1..=1) };
            b.edge(s, w, r.gen_range(0..n));
        }
    }
    b.build().expect("generated models are well formed")
}

fn random_atom(r: &mut impl Rng) -> Formula {
    match r.gen_range(0..9) {
        0 | 1 => Formula::prop(PROPS[r.gen_range(0..2)]),
        2 => Formula::rel(Rel::Lt, r.gen_range(0..5)),
        3 => Formula::rel(Rel::Le, r.gen_range(0..5)),
        4 => Formula::rel(Rel::Eq, r.gen_range(0..5)),
        5 => Formula::rel(Rel::Gt, r.gen_range(0..5)),
        6 => Formula::rel(Rel::Ge, r.gen_range(0..5)),
        7 => {
            let k = r.gen_range(1..=3);
            Formula::constraint(Constraint::modulo(r.gen_range(0..k as i64), k))
        }
        _ => Formula::tt(),
    }
}

fn random_agents(r: &mut impl Rng) -> Vec<&'static str> {
    match r.gen_range(0..4) {
        0 => vec![],
        1 => vec!["A"],
        2 => vec!["B"],
        _ => vec!["A", "B"],
    }
}

/// A QATL state formula of operator depth at most `depth`.
pub fn random_qatl(r: &mut impl Rng, depth: usize) -> Formula {
    if depth == 0 || r.gen_bool(0.2) {
        return random_atom(r);
    }
    let sub = |r: &mut _| random_qatl(r, depth - 1);
    match r.gen_range(0..8) {
        0 => Formula::not(sub(r)),
        1 => Formula::and(sub(r), sub(r)),
        2 => Formula::or(sub(r), sub(r)),
        3 => Formula::implies(sub(r), sub(r)),
        k => {
            let agents = random_agents(r);
            let body = match k {
                4 => Formula::next(sub(r)),
                5 => Formula::globally(sub(r)),
                6 => Formula::finally(sub(r)),
                _ => Formula::until(sub(r), sub(r)),
            };
            Formula::coalition(agents, body)
        }
    }
}

/// One instance of the QATL corpus: model, formula, state name and counter.
pub struct Instance {
    pub model: GameModel,
    pub formula: Formula,
    pub state: String,
    pub counter: u64,
}

pub fn qatl_corpus(seed: u64, count: usize) -> Vec<Instance> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let model = random_model(&mut r, 5);
            let formula = random_qatl(&mut r, 3);
            let state = format!("s{}", r.gen_range(0..model.state_count()));
            Instance { model, formula, state, counter: r.gen_range(0..=4) }
        })
        .collect()
}

/// A pure LTL formula over `p`, `q` with at most `size` nodes.
pub fn random_ltl(r: &mut impl Rng, size: usize) -> Formula {
    if size <= 1 {
        return match r.gen_range(0..5) {
            0 => Formula::tt(),
            1 => Formula::ff(),
            k => Formula::prop(PROPS[k % 2]),
        };
    }
    match r.gen_range(0..8) {
        0 => Formula::not(random_ltl(r, size - 1)),
        1 => Formula::next(random_ltl(r, size - 1)),
        2 => Formula::finally(random_ltl(r, size - 1)),
        3 => Formula::globally(random_ltl(r, size - 1)),
        k => {
            if size < 3 {
                return random_ltl(r, size - 1);
            }
            let left = r.gen_range(1..=size - 2);
            let (a, b) = (random_ltl(r, left), random_ltl(r, size - 1 - left));
            match k {
                4 => Formula::and(a, b),
                5 => Formula::or(a, b),
                6 => Formula::implies(a, b),
                _ => Formula::until(a, b),
            }
        }
    }
}

pub fn random_lasso(r: &mut impl Rng, props: usize) -> LassoWord {
    let letters = 1u64 << props;
    let u = r.gen_range(0..=5);
    let v = r.gen_range(1..=5);
    LassoWord::new((0..u).map(|_| r.gen_range(0..letters)).collect(), (0..v).map(|_| r.gen_range(0..letters)).collect())
        .expect("cycle is non-empty")
}

/// A finite parity arena with at most `max_vertices` vertices and colors below `colors`.
pub fn random_arena(r: &mut impl Rng, max_vertices: usize, colors: u32) -> FiniteArena {
    let n = r.gen_range(1..=max_vertices);
    let owner = (0..n).map(|_| if r.gen_bool(0.5) { Player::Verifier } else { Player::Falsifier }).collect();
    let color = (0..n).map(|_| r.gen_range(0..colors)).collect();
    let succ = (0..n)
        .map(|_| {
            let mut s: Vec<usize> = (0..r.gen_range(1..=3)).map(|_| r.gen_range(0..n)).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    FiniteArena::new(owner, color, succ)
}

/// A one-counter parity game with weights in `-max_weight..=max_weight`.
pub fn random_counter_game(r: &mut impl Rng, max_vertices: usize, max_weight: i64, colors: u32) -> OneCounterParityGame {
    let n = r.gen_range(1..=max_vertices);
    let mut b = GameBuilder::new();
    for i in 0..n {
        let owner = if r.gen_bool(0.5) { Player::Verifier } else { Player::Falsifier };
        b.add_vertex(owner, r.gen_range(0..colors), format!("v{i}"));
    }
    for v in 0..n {
        let k = r.gen_range(1..=3);
        for e in 0..k {
            let w = if e == 0 { r.gen_range(0..=max_weight) } else { r.gen_range(-max_weight..=max_weight) };
            b.add_edge(v, w, r.gen_range(0..n));
        }
    }
    b.build(0).expect("generated games are well formed")
}
