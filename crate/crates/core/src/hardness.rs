//! Reachability games that simulate a bounded-tape Turing machine backwards.
//!
//! Verifier first pumps the counter to the length of the run, then claims the
//! accepting configuration at cell 1 and justifies every claim by a predecessor
//! window, one step lower. Falsifier picks which cell of the window to question.
//! Claims at counter 0 are settled against the initial tape.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::formula::{parse, Formula};
use crate::model::{GameModel, ModelBuilder, ModelError, StateId};

/// Largest generated model.
pub const STATE_LIMIT: usize = 400_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Zero,
    One,
    Blank,
    /// Reading it accepts.
    Accept,
    /// Reading it rejects.
    Reject,
}

impl Symbol {
    pub const ALL: [Symbol; 5] = [Symbol::Zero, Symbol::One, Symbol::Blank, Symbol::Accept, Symbol::Reject];

    pub fn from_char(c: char) -> Option<Symbol> {
        Some(match c {
            '0' => Symbol::Zero,
            '1' => Symbol::One,
            '#' => Symbol::Blank,
            'a' => Symbol::Accept,
            'r' => Symbol::Reject,
            _ => return None,
        })
    }

    pub fn to_char(self) -> char {
        match self {
            Symbol::Zero => '0',
            Symbol::One => '1',
            Symbol::Blank => '#',
            Symbol::Accept => 'a',
            Symbol::Reject => 'r',
        }
    }

    /// Spelling inside model state names, where `#` is not allowed.
    fn tag(self) -> char {
        match self {
            Symbol::Blank => '_',
            s => s.to_char(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Left,
    Right,
}

/// Deterministic machine; `delta` is undefined on `a` and `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TuringMachine {
    pub states: Vec<String>,
    pub initial: usize,
    pub accepting: usize,
    pub delta: BTreeMap<(usize, Symbol), (usize, Symbol, Move)>,
}

/// One tape cell of a configuration: a symbol, or the head in a control state over a symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Sym(Symbol),
    Head(usize, Symbol),
}

impl Cell {
    fn symbol(self) -> Symbol {
        match self {
            Cell::Sym(s) | Cell::Head(_, s) => s,
        }
    }

    fn name(self, t: &TuringMachine) -> String {
        match self {
            Cell::Sym(s) => s.tag().to_string(),
            Cell::Head(q, s) => format!("{}'{}", t.states[q], s.tag()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TmError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown control state `{name}`")]
    UnknownState { line: usize, name: String },
    #[error("line {line}: transition for ({state},{symbol}) given twice")]
    DuplicateTransition { line: usize, state: String, symbol: char },
    #[error("line {line}: transitions on `a` and `r` are not allowed, the machine halts there")]
    DefinedOnHalt { line: usize },
    #[error("missing `{0}:` line")]
    MissingHeader(&'static str),
    #[error("input symbol `{0}` is not one of 0, 1, a, r")]
    BadWord(char),
    #[error("word of length {len} does not fit on {tape} cells")]
    WordTooLong { len: usize, tape: usize },
    #[error("the tape needs at least one cell")]
    EmptyTape,
    #[error("the game would have about {states} states, more than {limit}")]
    TooLarge { states: usize, limit: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_') && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Reads a machine description:
///
/// ```text
/// states: q0, q1, qf
/// initial: q0
/// accept: qf
/// q0,1 -> q1,a,R
/// ```
pub fn parse_tm(text: &str) -> Result<TuringMachine, TmError> {
    let mut states: Option<Vec<String>> = None;
    let mut initial: Option<(usize, String)> = None;
    let mut accept: Option<(usize, String)> = None;
    let mut rules: Vec<(usize, &str)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        // `#` is also the blank symbol, so comments take whole lines
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let syntax = |m: &str| TmError::Syntax { line, message: m.to_string() };
        if let Some(rest) = body.strip_prefix("states:") {
            let list: Vec<String> = rest.split(',').map(|s| s.trim().to_string()).collect();
            if list.iter().any(|s| !is_ident(s)) {
                return Err(syntax("control states must be identifiers"));
            }
            if list.iter().collect::<BTreeSet<_>>().len() != list.len() {
                return Err(syntax("repeated control state"));
            }
            states = Some(list);
        } else if let Some(rest) = body.strip_prefix("initial:") {
            initial = Some((line, rest.trim().to_string()));
        } else if let Some(rest) = body.strip_prefix("accept:") {
            accept = Some((line, rest.trim().to_string()));
        } else if body.contains("->") {
            rules.push((line, body));
        } else {
            return Err(syntax("expected `states:`, `initial:`, `accept:` or a transition"));
        }
    }
    let states = states.ok_or(TmError::MissingHeader("states"))?;
    let lookup = |line: usize, name: &str| {
        states.iter().position(|s| s == name).ok_or_else(|| TmError::UnknownState { line, name: name.to_string() })
    };
    let (line, name) = initial.ok_or(TmError::MissingHeader("initial"))?;
    let initial = lookup(line, &name)?;
    let (line, name) = accept.ok_or(TmError::MissingHeader("accept"))?;
    let accepting = lookup(line, &name)?;

    let mut delta = BTreeMap::new();
    for (line, body) in rules {
        let syntax = |m: &str| TmError::Syntax { line, message: m.to_string() };
        let (lhs, rhs) = body.split_once("->").expect("rule lines contain an arrow");
        let lhs: Vec<&str> = lhs.split(',').map(str::trim).collect();
        let rhs: Vec<&str> = rhs.split(',').map(str::trim).collect();
        if lhs.len() != 2 || rhs.len() != 3 {
            return Err(syntax("transitions look like `q,s -> q',s',L`"));
        }
        let symbol = |s: &str| {
            let mut cs = s.chars();
            match (cs.next().and_then(Symbol::from_char), cs.next()) {
                (Some(x), None) => Ok(x),
                _ => Err(syntax(&format!("bad tape symbol `{s}`"))),
            }
        };
        let q = lookup(line, lhs[0])?;
        let b = symbol(lhs[1])?;
        let q2 = lookup(line, rhs[0])?;
        let b2 = symbol(rhs[1])?;
        let dir = match rhs[2] {
            "L" => Move::Left,
            "R" => Move::Right,
            other => return Err(syntax(&format!("bad direction `{other}`"))),
        };
        if matches!(b, Symbol::Accept | Symbol::Reject) {
            return Err(TmError::DefinedOnHalt { line });
        }
        if delta.insert((q, b), (q2, b2, dir)).is_some() {
            return Err(TmError::DuplicateTransition { line, state: states[q].clone(), symbol: b.to_char() });
        }
    }
    Ok(TuringMachine { states, initial, accepting, delta })
}

impl fmt::Display for TuringMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "states: {}", self.states.join(", "))?;
        writeln!(f, "initial: {}", self.states[self.initial])?;
        writeln!(f, "accept: {}", self.states[self.accepting])?;
        for (&(q, b), &(q2, b2, m)) in &self.delta {
            let m = if m == Move::Left { 'L' } else { 'R' };
            writeln!(f, "{},{} -> {},{},{m}", self.states[q], b.to_char(), self.states[q2], b2.to_char())?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Outcome {
    Accept,
    Reject,
    Timeout,
}

/// Configurations of a run, from the initial one to the last one simulated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub outcome: Outcome,
    pub rows: Vec<Vec<Cell>>,
}

impl Run {
    /// Whether an accepting run halts the conventional way: head on cell 1, in the
    /// accepting state, reading `a`. Only such machines are simulated faithfully by
    /// the game.
    pub fn halts_conventionally(&self, t: &TuringMachine) -> bool {
        self.outcome != Outcome::Accept
            || self.rows.last().is_some_and(|r| r[1] == Cell::Head(t.accepting, Symbol::Accept))
    }
}

/// `a (q0,w1) w2 … # … # a` over cells `0..=tape+1`.
pub fn initial_row(t: &TuringMachine, w: &str, tape: usize) -> Result<Vec<Cell>, TmError> {
    if tape == 0 {
        return Err(TmError::EmptyTape);
    }
    let word: Vec<Symbol> = w
        .chars()
        .map(|c| match Symbol::from_char(c) {
            Some(Symbol::Blank) | None => Err(TmError::BadWord(c)),
            Some(s) => Ok(s),
        })
        .collect::<Result<_, _>>()?;
    if word.len() > tape {
        return Err(TmError::WordTooLong { len: word.len(), tape });
    }
    let mut row = vec![Cell::Sym(Symbol::Blank); tape + 2];
    row[0] = Cell::Sym(Symbol::Accept);
    row[tape + 1] = Cell::Sym(Symbol::Accept);
    for (i, &s) in word.iter().enumerate() {
        row[i + 1] = Cell::Sym(s);
    }
    row[1] = Cell::Head(t.initial, row[1].symbol());
    Ok(row)
}

/// One machine step on a stretch of tape. The head may leave the stretch. `None` if
/// the stretch has a head whose transition is undefined.
pub fn step_row(t: &TuringMachine, row: &[Cell]) -> Option<Vec<Cell>> {
    let mut out = row.to_vec();
    let Some(pos) = row.iter().position(|c| matches!(c, Cell::Head(..))) else {
        return Some(out);
    };
    let Cell::Head(q, b) = row[pos] else { unreachable!() };
    let &(q2, b2, dir) = t.delta.get(&(q, b))?;
    out[pos] = Cell::Sym(b2);
    let next = match dir {
        Move::Left => pos.checked_sub(1),
        Move::Right => Some(pos + 1).filter(|&p| p < row.len()),
    };
    if let Some(p) = next {
        out[p] = Cell::Head(q2, out[p].symbol());
    }
    Some(out)
}

/// Runs the machine on `w` with `tape` cells between the two `a` boundaries.
pub fn run_tm(t: &TuringMachine, w: &str, tape: usize, max_steps: usize) -> Result<Run, TmError> {
    let mut rows = vec![initial_row(t, w, tape)?];
    loop {
        let row = rows.last().expect("runs start with a row");
        let read = row.iter().find_map(|c| match c {
            Cell::Head(_, s) => Some(*s),
            Cell::Sym(_) => None,
        });
        let outcome = match read {
            Some(Symbol::Accept) => Some(Outcome::Accept),
            Some(Symbol::Reject) => Some(Outcome::Reject),
            _ if rows.len() > max_steps => Some(Outcome::Timeout),
            _ => None,
        };
        if let Some(outcome) = outcome {
            return Ok(Run { outcome, rows });
        }
        match step_row(t, row) {
            Some(next) => rows.push(next),
            None => return Ok(Run { outcome: Outcome::Reject, rows }),
        }
    }
}

pub fn simulate_tm(t: &TuringMachine, w: &str, tape: usize, max_steps: usize) -> Result<Outcome, TmError> {
    Ok(run_tm(t, w, tape, max_steps)?.outcome)
}

/// Every cell content: symbols, then heads in each control state over each symbol.
pub fn cells(t: &TuringMachine) -> Vec<Cell> {
    let heads = (0..t.states.len()).flat_map(|q| Symbol::ALL.map(move |s| Cell::Head(q, s)));
    Symbol::ALL.map(Cell::Sym).into_iter().chain(heads).collect()
}

/// Windows `(d1, d2, d3)` that can stand at cells `j-1, j, j+1` one step before `d`
/// stands at cell `j`.
pub fn pre_triples(t: &TuringMachine, d: Cell) -> BTreeSet<[Cell; 3]> {
    let sigma = Symbol::ALL.map(Cell::Sym);
    let mut out = BTreeSet::new();
    for (&(q, b), &(q2, b2, dir)) in &t.delta {
        let head = Cell::Head(q, b);
        for x in sigma {
            match d {
                Cell::Head(p, d2) if p == q2 => {
                    // the head arrives from the left or from the right
                    if dir == Move::Right {
                        out.insert([head, Cell::Sym(d2), x]);
                    } else {
                        out.insert([x, Cell::Sym(d2), head]);
                    }
                }
                Cell::Head(..) => {}
                Cell::Sym(_) => {
                    // the head is next door and moves away or stays off this cell
                    if dir != Move::Right {
                        out.insert([head, d, x]);
                    }
                    if dir != Move::Left {
                        out.insert([x, d, head]);
                    }
                    if d == Cell::Sym(b2) {
                        for y in sigma {
                            out.insert([x, head, y]);
                        }
                    }
                }
            }
        }
    }
    if let Cell::Sym(_) = d {
        for x in sigma {
            for y in sigma {
                out.insert([x, d, y]);
            }
        }
    }
    out
}

/// The generated model and its distinguished states.
#[derive(Clone, Debug)]
pub struct HardnessGame {
    pub model: GameModel,
    pub start: StateId,
    /// Labelled `accept`.
    pub target: StateId,
    /// Labelled `reject`.
    pub reject: StateId,
    /// Claim states `(j, d)` for every cell `j` in `0..=tape+1`.
    pub claims: HashMap<(usize, Cell), StateId>,
}

/// Verifier can force reaching the target.
pub fn hardness_formula() -> Formula {
    parse("<<Verifier>> F accept").expect("fixed formula parses")
}

/// Builds the game for machine `t` on `w` with `tape` interior cells. Verifier can
/// force reaching `target` from `(start, 0)` iff the machine accepts.
pub fn build_hardness_game(t: &TuringMachine, w: &str, tape: usize) -> Result<HardnessGame, TmError> {
    let first = initial_row(t, w, tape)?;
    let all = cells(t);
    let pre: Vec<BTreeSet<[Cell; 3]>> = all.iter().map(|&d| pre_triples(t, d)).collect();
    let estimate = (tape + 2) * all.len() + tape * pre.iter().map(BTreeSet::len).sum::<usize>() + 5;
    if estimate > STATE_LIMIT {
        return Err(TmError::TooLarge { states: estimate, limit: STATE_LIMIT });
    }

    const VERIFIER: usize = 0;
    const FALSIFIER: usize = 1;
    let mut b = ModelBuilder::new(&["Verifier", "Falsifier"]).unit();
    let start = b.state("s0", VERIFIER, &[]);
    let target = b.state("accept", FALSIFIER, &["accept"]);
    let reject = b.state("reject", FALSIFIER, &["reject"]);
    let zero = b.state("zero", FALSIFIER, &[]);
    // Falsifier escapes here from a window it cannot question for lack of counter
    let zero_check = b.state("zero_check", VERIFIER, &[]);
    b.edge(target, 0, target);
    b.edge(reject, 0, reject);
    b.edge(zero, 0, target);
    b.edge(zero, -1, reject);
    b.edge(zero_check, -1, target);
    b.edge(zero_check, 0, reject);

    let mut claims = HashMap::new();
    for j in 0..tape + 2 {
        for &d in &all {
            let s = b.state(format!("c{j}.{}", d.name(t)), VERIFIER, &[]);
            claims.insert((j, d), s);
        }
    }
    b.edge(start, 1, start);
    b.edge(start, 0, claims[&(1, Cell::Head(t.accepting, Symbol::Accept))]);

    for j in 0..tape + 2 {
        for (k, &d) in all.iter().enumerate() {
            let s = claims[&(j, d)];
            let mut moves = 0;
            if j == 0 || j == tape + 1 {
                b.edge(s, 0, if d == Cell::Sym(Symbol::Accept) { target } else { reject });
                moves += 1;
            } else {
                for window in &pre[k] {
                    let names: Vec<String> = window.iter().map(|c| c.name(t)).collect();
                    let v = b.state(format!("t{j}.{}", names.join(".")), FALSIFIER, &[]);
                    b.edge(s, 0, v);
                    b.edge(v, -1, claims[&(j - 1, window[0])]);
                    b.edge(v, -1, claims[&(j, window[1])]);
                    b.edge(v, -1, claims[&(j + 1, window[2])]);
                    b.edge(v, 0, zero_check);
                    moves += 1;
                }
            }
            if first[j] == d {
                b.edge(s, 0, zero);
                moves += 1;
            }
            if moves == 0 {
                b.edge(s, 0, s);
            }
        }
    }
    Ok(HardnessGame { model: b.build()?, start, target, reject, claims })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Marks cell 1, walks right to the first blank and back, accepting at cell 1;
    /// rejects at once if the word starts with 0.
    pub(crate) const WALKER: &str = "\
states: q0, q1, q2, qf
initial: q0
accept: qf
q0,1 -> q2,a,R
q0,0 -> q1,r,R
q1,0 -> q1,0,L
q1,1 -> q1,1,L
q1,# -> q1,#,L
q2,0 -> q2,0,R
q2,1 -> q2,1,R
q2,# -> qf,#,L
qf,0 -> qf,0,L
qf,1 -> qf,1,L
";

    /// Step relation on every window with at most one head, by running the machine.
    fn brute_pre(t: &TuringMachine, d: Cell) -> BTreeSet<[Cell; 3]> {
        let all = cells(t);
        let mut out = BTreeSet::new();
        for &x in &all {
            for &y in &all {
                for &z in &all {
                    let w = [x, y, z];
                    if w.iter().filter(|c| matches!(c, Cell::Head(..))).count() > 1 {
                        continue;
                    }
                    if step_row(t, &w).is_some_and(|next| next[1] == d) {
                        out.insert(w);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn pre_matches_brute_force() {
        let small = parse_tm("states: p, q\ninitial: p\naccept: q\np,0 -> q,1,R\np,1 -> p,#,L\nq,# -> p,0,L\n").unwrap();
        for t in [small, parse_tm(WALKER).unwrap()] {
            for d in cells(&t) {
                assert_eq!(pre_triples(&t, d), brute_pre(&t, d), "{d:?}");
            }
        }
    }

    #[test]
    fn hand_simulations() {
        let t = parse_tm("states: q0, q1, qf\ninitial: q0\naccept: qf\nq0,1 -> q1,a,R\nq1,# -> qf,#,L\n").unwrap();
        let run = run_tm(&t, "1", 3, 10).unwrap();
        assert_eq!(run.outcome, Outcome::Accept);
        assert_eq!(run.rows.len(), 3);
        assert!(run.halts_conventionally(&t));

        let left = parse_tm("states: q0\ninitial: q0\naccept: q0\nq0,1 -> q0,1,L\n").unwrap();
        assert_eq!(simulate_tm(&left, "1", 2, 10), Ok(Outcome::Accept));

        let bounce = parse_tm("states: q0, q1\ninitial: q0\naccept: q1\nq0,1 -> q1,1,R\nq1,# -> q0,#,L\n").unwrap();
        assert_eq!(simulate_tm(&bounce, "1", 3, 50), Ok(Outcome::Timeout));

        let right = parse_tm("states: q0\ninitial: q0\naccept: q0\nq0,# -> q0,#,R\nq0,1 -> q0,1,R\n").unwrap();
        assert_eq!(simulate_tm(&right, "1", 3, 50), Ok(Outcome::Accept));
    }

    #[test]
    fn walker_runs() {
        let t = parse_tm(WALKER).unwrap();
        for (w, expect) in [("1", Outcome::Accept), ("101", Outcome::Accept), ("0", Outcome::Reject), ("", Outcome::Reject)] {
            let run = run_tm(&t, w, 4, 100).unwrap();
            assert_eq!(run.outcome, expect, "{w}");
            assert!(run.halts_conventionally(&t));
        }
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_tm("initial: q\n"), Err(TmError::MissingHeader("states")));
        assert!(matches!(
            parse_tm("states: q\ninitial: q\naccept: q\nq,a -> q,a,R\n"),
            Err(TmError::DefinedOnHalt { line: 4 })
        ));
        assert!(matches!(
            parse_tm("states: q\ninitial: q\naccept: z\n"),
            Err(TmError::UnknownState { line: 3, .. })
        ));
        assert!(matches!(
            parse_tm("states: q\ninitial: q\naccept: q\nq,0 -> q,0,R\nq,0 -> q,1,L\n"),
            Err(TmError::DuplicateTransition { line: 5, .. })
        ));
        let t = parse_tm(WALKER).unwrap();
        assert_eq!(parse_tm(&t.to_string()), Ok(t.clone()));
        assert_eq!(simulate_tm(&t, "1#", 3, 5), Err(TmError::BadWord('#')));
        assert_eq!(simulate_tm(&t, "1111", 3, 5), Err(TmError::WordTooLong { len: 4, tape: 3 }));
    }

    #[test]
    fn game_shape() {
        let t = parse_tm(WALKER).unwrap();
        let g = build_hardness_game(&t, "1", 2).unwrap();
        let m = &g.model;
        assert_eq!(m.players(), ["Verifier", "Falsifier"]);
        assert!(m.has_label(g.target, "accept"));
        assert_eq!(g.claims.len(), 4 * cells(&t).len());
        let boundary = g.claims[&(0, Cell::Sym(Symbol::Accept))];
        assert!(m.outgoing(boundary).any(|tr| tr.target == g.target));
        let m2 = crate::model::load_model(&m.to_text()).unwrap();
        assert_eq!(m2.state_count(), m.state_count());
    }
}
