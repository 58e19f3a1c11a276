//! Reference evaluator for QATL: fixpoints of the controllable-predecessor operator
//! on configurations, computed without building games.
//!
//! Counter values above the cap are merged into one abstract value. Every formula is
//! evaluated twice, once resolving that abstraction against the formula and once in
//! its favour, giving a three-valued answer that is never wrong when it is certain.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::formula::{Formula, FormulaKind, Rel};
use crate::model::{eval_constraint, Configuration, GameModel, PlayerId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ThreeValued {
    True,
    False,
    Unknown,
}

impl ThreeValued {
    pub fn from_bounds(lower: bool, upper: bool) -> Self {
        match (lower, upper) {
            (true, _) => ThreeValued::True,
            (false, false) => ThreeValued::False,
            (false, true) => ThreeValued::Unknown,
        }
    }

    pub fn not(self) -> Self {
        match self {
            ThreeValued::True => ThreeValued::False,
            ThreeValued::False => ThreeValued::True,
            ThreeValued::Unknown => ThreeValued::Unknown,
        }
    }

    pub fn or(self, other: Self) -> Self {
        use ThreeValued::*;
        match (self, other) {
            (True, _) | (_, True) => True,
            (False, False) => False,
            _ => Unknown,
        }
    }

    pub fn and(self, other: Self) -> Self {
        self.not().or(other.not()).not()
    }
}

impl fmt::Display for ThreeValued {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThreeValued::True => "true",
            ThreeValued::False => "false",
            ThreeValued::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RefEvalError {
    #[error("not a QATL formula: {0}")]
    NotQatl(String),
    #[error("coalition names unknown player `{0}`")]
    UnknownAgent(String),
    #[error("cap {cap} is below the counter value {counter}")]
    CapBelowCounter { cap: u64, counter: u64 },
    #[error("cap {cap} is below the largest weight {weight}")]
    CapBelowWeight { cap: u64, weight: u64 },
    #[error("no state with id {0}")]
    NoSuchState(usize),
}

/// How moves into the abstract value above the cap are judged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pass {
    /// A move counts as reaching the target only if every concrete outcome does.
    Pessimistic,
    /// A move counts as reaching the target if some concrete outcome does.
    Optimistic,
}

/// Configurations `(s, c)` for `c` in `0..=cap`, plus `(s, above)` at index `cap + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigSpace {
    pub states: usize,
    pub cap: u64,
}

impl ConfigSpace {
    pub fn len(&self) -> usize {
        self.states * self.width()
    }

    pub fn is_empty(&self) -> bool {
        self.states == 0
    }

    fn width(&self) -> usize {
        self.cap as usize + 2
    }

    pub fn index(&self, s: usize, counter: u64) -> usize {
        s * self.width() + counter.min(self.cap + 1) as usize
    }

    fn above(&self) -> u64 {
        self.cap + 1
    }
}

/// Lower and upper approximations of a formula's truth set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub space: ConfigSpace,
    /// Surely true.
    pub lower: Vec<bool>,
    /// Possibly true.
    pub upper: Vec<bool>,
}

impl Table {
    pub fn value(&self, s: usize, counter: u64) -> ThreeValued {
        let i = self.space.index(s, counter);
        ThreeValued::from_bounds(self.lower[i], self.upper[i])
    }
}

/// Configurations from which the coalition `agents` can force the next configuration
/// into `target`.
pub fn cpre(m: &GameModel, agents: &[PlayerId], target: &[bool], space: &ConfigSpace, pass: Pass) -> Vec<bool> {
    let mut out = vec![false; space.len()];
    for s in 0..m.state_count() {
        let ours = agents.contains(&m.owner(s));
        for c in 0..=space.above() {
            let mut moves = m.outgoing(s).filter_map(|t| move_into(t.weight, t.target, c, target, space, pass));
            out[space.index(s, c)] = if ours { moves.any(|x| x) } else { moves.all(|x| x) };
        }
    }
    out
}

/// `None` if the move is disabled at `c`, otherwise whether it reaches `target`.
fn move_into(w: i64, t: usize, c: u64, target: &[bool], space: &ConfigSpace, pass: Pass) -> Option<bool> {
    let above = space.above();
    if c < above {
        let next = c as i128 + w as i128;
        if next < 0 {
            return None;
        }
        return Some(target[space.index(t, next.min(above as i128) as u64)]);
    }
    if w >= 0 {
        return Some(target[space.index(t, above)]);
    }
    // from above the cap a decrement lands anywhere in cap+1+w ..= cap, or stays above
    let low = above - w.unsigned_abs();
    let mut outcomes = (low..=above).map(|x| target[space.index(t, x)]);
    Some(match pass {
        Pass::Pessimistic => outcomes.all(|x| x),
        Pass::Optimistic => outcomes.any(|x| x),
    })
}

fn agent_ids(m: &GameModel, agents: &BTreeSet<String>) -> Result<Vec<PlayerId>, RefEvalError> {
    agents
        .iter()
        .map(|a| m.player_id(a).ok_or_else(|| RefEvalError::UnknownAgent(a.clone())))
        .collect()
}

/// Three-valued tables for a QATL state formula over all configurations up to `cap`.
pub fn eval_table(m: &GameModel, f: &Formula, cap: u64) -> Result<Table, RefEvalError> {
    if cap < m.max_abs_weight() {
        return Err(RefEvalError::CapBelowWeight { cap, weight: m.max_abs_weight() });
    }
    let space = ConfigSpace { states: m.state_count(), cap };
    let (lower, upper) = eval(m, f, &space)?;
    Ok(Table { space, lower, upper })
}

/// Truth of a QATL state formula at `config`: `True` and `False` are certain.
pub fn eval_qatl_bracket(
    m: &GameModel,
    config: Configuration,
    f: &Formula,
    cap: u64,
) -> Result<ThreeValued, RefEvalError> {
    if config.state >= m.state_count() {
        return Err(RefEvalError::NoSuchState(config.state));
    }
    if cap < config.counter {
        return Err(RefEvalError::CapBelowCounter { cap, counter: config.counter });
    }
    Ok(eval_table(m, f, cap)?.value(config.state, config.counter))
}

type Sets = (Vec<bool>, Vec<bool>);

fn eval(m: &GameModel, f: &Formula, space: &ConfigSpace) -> Result<Sets, RefEvalError> {
    let n = space.len();
    let per_config = |pred: &dyn Fn(usize, Option<u64>) -> Option<bool>| -> Sets {
        let mut lo = vec![false; n];
        let mut hi = vec![false; n];
        for s in 0..space.states {
            for c in 0..=space.above() {
                let exact = (c <= space.cap).then_some(c);
                let i = space.index(s, c);
                match pred(s, exact) {
                    Some(v) => {
                        lo[i] = v;
                        hi[i] = v;
                    }
                    None => hi[i] = true,
                }
            }
        }
        (lo, hi)
    };
    Ok(match &f.kind {
        FormulaKind::Bool(b) => (vec![*b; n], vec![*b; n]),
        FormulaKind::Prop(p) => per_config(&|s, _| Some(m.has_label(s, p))),
        FormulaKind::Constraint(c) => {
            let c = *c;
            per_config(&|_, counter| match counter {
                Some(i) => Some(eval_constraint(c.rel, c.constant, c.modulus, i)),
                None => above_cap_truth(c.rel, c.constant, c.modulus, space.cap),
            })
        }
        FormulaKind::Not(a) => {
            let (lo, hi) = eval(m, a, space)?;
            (hi.iter().map(|x| !x).collect(), lo.iter().map(|x| !x).collect())
        }
        FormulaKind::Or(a, b) | FormulaKind::And(a, b) | FormulaKind::Implies(a, b) => {
            let (mut la, mut ha) = eval(m, a, space)?;
            let (lb, hb) = eval(m, b, space)?;
            if matches!(f.kind, FormulaKind::Implies(..)) {
                (la, ha) = (ha.iter().map(|x| !x).collect(), la.iter().map(|x| !x).collect());
            }
            let op = |x: bool, y: bool| if matches!(f.kind, FormulaKind::And(..)) { x && y } else { x || y };
            (
                la.iter().zip(&lb).map(|(&x, &y)| op(x, y)).collect(),
                ha.iter().zip(&hb).map(|(&x, &y)| op(x, y)).collect(),
            )
        }
        FormulaKind::Coalition(agents, body) => {
            let agents = agent_ids(m, agents)?;
            let pair = |pass: Pass, sets: &[&Vec<bool>]| -> Vec<bool> {
                match &body.kind {
                    FormulaKind::Next(_) => cpre(m, &agents, sets[0], space, pass),
                    FormulaKind::Globally(_) => {
                        let mut z = vec![true; n];
                        loop {
                            let pre = cpre(m, &agents, &z, space, pass);
                            let next: Vec<bool> = (0..n).map(|i| sets[0][i] && pre[i]).collect();
                            if next == z {
                                return z;
                            }
                            z = next;
                        }
                    }
                    _ => {
                        // until (and eventually, with a trivially true left side)
                        let (hold, goal) = (sets[0], sets[1]);
                        let mut z = vec![false; n];
                        loop {
                            let pre = cpre(m, &agents, &z, space, pass);
                            let next: Vec<bool> = (0..n).map(|i| goal[i] || (hold[i] && pre[i])).collect();
                            if next == z {
                                return z;
                            }
                            z = next;
                        }
                    }
                }
            };
            let subs: Vec<Sets> = match &body.kind {
                FormulaKind::Next(a) | FormulaKind::Globally(a) => vec![eval(m, a, space)?],
                FormulaKind::Finally(a) => vec![(vec![true; n], vec![true; n]), eval(m, a, space)?],
                FormulaKind::Until(a, b) => vec![eval(m, a, space)?, eval(m, b, space)?],
                _ => return Err(RefEvalError::NotQatl(f.to_string())),
            };
            let lows: Vec<&Vec<bool>> = subs.iter().map(|s| &s.0).collect();
            let highs: Vec<&Vec<bool>> = subs.iter().map(|s| &s.1).collect();
            (pair(Pass::Pessimistic, &lows), pair(Pass::Optimistic, &highs))
        }
        _ => return Err(RefEvalError::NotQatl(f.to_string())),
    })
}

/// Truth of a constraint for every counter value above `cap`, if it is the same for all.
fn above_cap_truth(rel: Rel, constant: i64, modulus: Option<u64>, cap: u64) -> Option<bool> {
    let first = cap as i128 + 1;
    let c = constant as i128;
    match rel {
        Rel::Lt | Rel::Le | Rel::Eq if c < first => Some(false),
        Rel::Gt | Rel::Ge if c < first => Some(true),
        Rel::Mod if modulus == Some(1) => Some(true),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::model::ModelBuilder;

    fn one_state(labels: &[&str]) -> GameModel {
        let mut b = ModelBuilder::new(&["a"]);
        let s = b.state("s", 0, labels);
        b.edge(s, 0, s);
        b.build().unwrap()
    }

    fn at(m: &GameModel, f: &str, s: usize, i: u64, cap: u64) -> ThreeValued {
        eval_qatl_bracket(m, Configuration { state: s, counter: i }, &parse(f).unwrap(), cap).unwrap()
    }

    #[test]
    fn kleene_laws() {
        use ThreeValued::*;
        let all = [True, False, Unknown];
        for a in all {
            assert_eq!(a.not().not(), a);
            assert_eq!(a.or(False), a);
            assert_eq!(a.or(True), True);
            for b in all {
                assert_eq!(a.or(b), b.or(a));
                assert_eq!(a.and(b).not(), a.not().or(b.not()));
            }
        }
    }

    #[test]
    fn trivial_one_state_cases() {
        assert_eq!(at(&one_state(&["p"]), "<<>> G p", 0, 0, 4), ThreeValued::True);
        assert_eq!(at(&one_state(&[]), "<<>> F p", 0, 0, 4), ThreeValued::False);
    }

    fn two_way() -> GameModel {
        // s (owned by a) may move to good or bad; good is labelled p
        let mut b = ModelBuilder::new(&["a", "b"]);
        let s = b.state("s", 0, &[]);
        let good = b.state("good", 1, &["p"]);
        let bad = b.state("bad", 1, &[]);
        b.edge(s, 0, good);
        b.edge(s, 0, bad);
        b.edge(good, 0, good);
        b.edge(bad, 0, bad);
        b.build().unwrap()
    }

    #[test]
    fn cpre_ownership() {
        let m = two_way();
        let space = ConfigSpace { states: 3, cap: 2 };
        let mut target = vec![false; space.len()];
        for c in 0..=3 {
            target[space.index(1, c)] = true;
        }
        let ours = cpre(&m, &[0], &target, &space, Pass::Pessimistic);
        assert!(ours[space.index(0, 0)]);
        let theirs = cpre(&m, &[1], &target, &space, Pass::Pessimistic);
        assert!(!theirs[space.index(0, 0)]);
    }

    #[test]
    fn crossing_the_cap_splits_the_passes() {
        let mut b = ModelBuilder::new(&["a"]);
        let s = b.state("s", 0, &[]);
        let t = b.state("t", 0, &[]);
        b.edge(s, 1, t);
        b.edge(t, 0, t);
        let m = b.build().unwrap();
        let space = ConfigSpace { states: 2, cap: 2 };
        let f = parse("r < 10").unwrap();
        let (lo, hi) = eval(&m, &f, &space).unwrap();
        let lower = cpre(&m, &[0], &lo, &space, Pass::Pessimistic);
        let upper = cpre(&m, &[0], &hi, &space, Pass::Optimistic);
        let i = space.index(0, 2);
        assert!(!lower[i] && upper[i]);
        // with a larger cap the move stays below it and both passes agree
        assert_eq!(at(&m, "<<a>> X r < 10", 0, 2, 16), ThreeValued::True);
        assert_eq!(at(&m, "<<a>> X r < 10", 0, 2, 2), ThreeValued::Unknown);
    }

    #[test]
    fn errors() {
        let m = one_state(&[]);
        let c = Configuration { state: 0, counter: 5 };
        assert_eq!(
            eval_qatl_bracket(&m, c, &parse("p").unwrap(), 3),
            Err(RefEvalError::CapBelowCounter { cap: 3, counter: 5 })
        );
        let c = Configuration { state: 0, counter: 0 };
        assert!(matches!(eval_qatl_bracket(&m, c, &parse("<<a>> G F p").unwrap(), 3), Err(RefEvalError::NotQatl(_))));
        assert!(matches!(eval_qatl_bracket(&m, c, &parse("G p").unwrap(), 3), Err(RefEvalError::NotQatl(_))));
    }
}
