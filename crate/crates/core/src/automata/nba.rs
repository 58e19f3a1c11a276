use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use super::{AutomataError, LassoWord, Letter, Ltl};
use crate::formula::Formula;
use crate::parity::tarjan;

/// Letters whose bits include `pos` and exclude `neg`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Guard {
    pub pos: u64,
    pub neg: u64,
}

impl Guard {
    pub fn admits(self, letter: Letter) -> bool {
        letter & self.pos == self.pos && letter & self.neg == 0
    }
}

/// A nondeterministic Büchi automaton with state-based acceptance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nba {
    pub props: Vec<String>,
    pub initial: Vec<usize>,
    pub accepting: Vec<bool>,
    pub trans: Vec<Vec<(Guard, usize)>>,
}

impl Nba {
    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn successors(&self, q: usize, letter: Letter) -> impl Iterator<Item = usize> + '_ {
        self.trans[q].iter().filter(move |(g, _)| g.admits(letter)).map(|&(_, t)| t)
    }

    pub fn is_empty(&self) -> bool {
        self.initial.is_empty()
    }

    /// Plain-text listing of states and guarded transitions.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "props: {}", self.props.join(" "));
        let _ = writeln!(out, "states: {}", self.state_count());
        let _ = writeln!(out, "initial: {:?}", self.initial);
        for q in 0..self.state_count() {
            let _ = writeln!(out, "state {q}{}", if self.accepting[q] { " accepting" } else { "" });
            for (g, t) in &self.trans[q] {
                let _ = writeln!(out, "  [+{:#b} -{:#b}] -> {t}", g.pos, g.neg);
            }
        }
        out
    }

    /// Removes states from which no accepting cycle is reachable, renumbering the rest.
    fn prune(self) -> Nba {
        let n = self.state_count();
        let graph: Vec<Vec<usize>> = self.trans.iter().map(|ts| ts.iter().map(|&(_, t)| t).collect()).collect();
        let comp = tarjan(&graph, &vec![true; n]);
        let comps = comp.iter().copied().max().map_or(0, |c| c + 1);
        let mut size = vec![0usize; comps];
        for &c in &comp {
            size[c] += 1;
        }
        let mut live = vec![false; n];
        for q in 0..n {
            let cyclic = size[comp[q]] > 1 || graph[q].contains(&q);
            if self.accepting[q] && cyclic {
                live[q] = true;
            }
        }
        // backward closure: a state is live if it reaches a live state
        let mut pred = vec![Vec::new(); n];
        for (q, ts) in graph.iter().enumerate() {
            for &t in ts {
                pred[t].push(q);
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&q| live[q]).collect();
        while let Some(q) = stack.pop() {
            for &p in &pred[q] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        let mut map = vec![usize::MAX; n];
        let mut next = 0;
        for q in 0..n {
            if live[q] {
                map[q] = next;
                next += 1;
            }
        }
        Nba {
            props: self.props,
            initial: self.initial.iter().filter(|&&q| live[q]).map(|&q| map[q]).collect(),
            accepting: (0..n).filter(|&q| live[q]).map(|q| self.accepting[q]).collect(),
            trans: (0..n)
                .filter(|&q| live[q])
                .map(|q| {
                    self.trans[q].iter().filter(|(_, t)| live[*t]).map(|&(g, t)| (g, map[t])).collect()
                })
                .collect(),
        }
    }
}

/// One way of satisfying a set of obligations in the current step.
struct Cover {
    guard: Guard,
    next: BTreeSet<Ltl>,
    /// Until formulas postponed to the next step.
    pending: BTreeSet<Ltl>,
}

struct Expansion {
    next: BTreeSet<Ltl>,
    pending: BTreeSet<Ltl>,
    out: Vec<Cover>,
}

impl Expansion {
    fn run(&mut self, todo: &mut Vec<Ltl>, guard: Guard) {
        let Some(f) = todo.pop() else {
            self.out.push(Cover { guard, next: self.next.clone(), pending: self.pending.clone() });
            return;
        };
        match &f {
            Ltl::True => self.run(todo, guard),
            Ltl::False => {}
            Ltl::Lit(i, pol) => {
                let bit = 1u64 << i;
                let g = if *pol {
                    Guard { pos: guard.pos | bit, neg: guard.neg }
                } else {
                    Guard { pos: guard.pos, neg: guard.neg | bit }
                };
                if g.pos & g.neg == 0 {
                    self.run(todo, g);
                }
            }
            Ltl::And(a, b) => self.branch(todo, guard, &[&**a, &**b], None, false),
            Ltl::Or(a, b) => {
                self.branch(todo, guard, &[&**a], None, false);
                self.branch(todo, guard, &[&**b], None, false);
            }
            Ltl::Next(a) => self.branch(todo, guard, &[], Some(&**a), false),
            Ltl::Until(a, b) => {
                self.branch(todo, guard, &[&**b], None, false);
                self.branch(todo, guard, &[&**a], Some(&f), true);
            }
            Ltl::Release(a, b) => {
                self.branch(todo, guard, &[&**a, &**b], None, false);
                self.branch(todo, guard, &[&**b], Some(&f), false);
            }
        }
        todo.push(f);
    }

    /// Continues with `now` added to the current obligations and `later` required
    /// from the next step on; `postpone` marks `later` as a postponed until.
    fn branch(&mut self, todo: &mut Vec<Ltl>, guard: Guard, now: &[&Ltl], later: Option<&Ltl>, postpone: bool) {
        let mark = todo.len();
        todo.extend(now.iter().map(|x| (*x).clone()));
        let fresh_next = later.filter(|x| self.next.insert((*x).clone())).cloned();
        let fresh_pend = later.filter(|x| postpone && self.pending.insert((*x).clone())).cloned();
        self.run(todo, guard);
        todo.truncate(mark);
        if let Some(x) = fresh_next {
            self.next.remove(&x);
        }
        if let Some(x) = fresh_pend {
            self.pending.remove(&x);
        }
    }
}

/// Büchi automaton accepting exactly the words over `props` that satisfy `f`.
///
/// Tableau states are obligation sets; acceptance of every until is tracked on
/// transitions and then degeneralized with a level counter. States that cannot
/// reach an accepting cycle are removed.
pub fn ltl_to_nba(f: &Formula, props: &[String]) -> Result<Nba, AutomataError> {
    let root = Ltl::from_formula(f, props)?;
    let untils = root.untils();
    let k = untils.len();
    let mut ids: HashMap<(BTreeSet<Ltl>, usize), usize> = HashMap::new();
    let mut keys: Vec<(BTreeSet<Ltl>, usize)> = Vec::new();
    let mut trans: Vec<Vec<(Guard, usize)>> = Vec::new();
    let mut cover_cache: HashMap<BTreeSet<Ltl>, Vec<Cover>> = HashMap::new();

    let start: BTreeSet<Ltl> = [root].into_iter().collect();
    ids.insert((start.clone(), 0), 0);
    keys.push((start, 0));
    trans.push(Vec::new());
    let mut head = 0;
    while head < keys.len() {
        let (set, level) = keys[head].clone();
        let covers = cover_cache.entry(set.clone()).or_insert_with(|| {
            let mut x = Expansion { next: BTreeSet::new(), pending: BTreeSet::new(), out: Vec::new() };
            let mut todo: Vec<Ltl> = set.iter().cloned().collect();
            x.run(&mut todo, Guard { pos: 0, neg: 0 });
            x.out
        });
        let mut edges = Vec::new();
        for c in covers.iter() {
            let mut lvl = if level == k { 0 } else { level };
            while lvl < k && !c.pending.contains(&untils[lvl]) {
                lvl += 1;
            }
            let key = (c.next.clone(), lvl);
            let id = match ids.get(&key) {
                Some(&id) => id,
                None => {
                    let id = keys.len();
                    ids.insert(key.clone(), id);
                    keys.push(key);
                    trans.push(Vec::new());
                    id
                }
            };
            if !edges.contains(&(c.guard, id)) {
                edges.push((c.guard, id));
            }
        }
        trans[head] = edges;
        head += 1;
    }
    let accepting = keys.iter().map(|(_, lvl)| *lvl == k).collect();
    Ok(Nba { props: props.to_vec(), initial: vec![0], accepting, trans }.prune())
}

/// Exact membership of a lasso word: search the product of the automaton with the
/// word's positions for a reachable cycle through an accepting state.
pub fn nba_accepts_lasso(b: &Nba, w: &LassoWord) -> Result<bool, AutomataError> {
    w.check_alphabet(b.props.len())?;
    let len = w.len();
    let n = b.state_count();
    let node = |q: usize, i: usize| q * len + i;
    let mut graph = vec![Vec::new(); n * len];
    for q in 0..n {
        for i in 0..len {
            graph[node(q, i)] = b.successors(q, w.letter(i)).map(|t| node(t, w.succ(i))).collect();
        }
    }
    let mut reach = vec![false; n * len];
    let mut stack: Vec<usize> = b.initial.iter().map(|&q| node(q, 0)).collect();
    for &s in &stack {
        reach[s] = true;
    }
    while let Some(v) = stack.pop() {
        for &t in &graph[v] {
            if !reach[t] {
                reach[t] = true;
                stack.push(t);
            }
        }
    }
    let comp = tarjan(&graph, &reach);
    let mut size: HashMap<usize, usize> = HashMap::new();
    for v in (0..n * len).filter(|&v| reach[v]) {
        *size.entry(comp[v]).or_default() += 1;
    }
    Ok((0..n * len).any(|v| {
        reach[v] && b.accepting[v / len] && (size[&comp[v]] > 1 || graph[v].contains(&v))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn props() -> Vec<String> {
        vec!["p".into(), "q".into()]
    }

    fn accepts(f: &str, prefix: Vec<u64>, cycle: Vec<u64>) -> bool {
        let b = ltl_to_nba(&parse(f).unwrap(), &props()).unwrap();
        nba_accepts_lasso(&b, &LassoWord::new(prefix, cycle).unwrap()).unwrap()
    }

    #[test]
    fn globally_p() {
        assert!(accepts("G p", vec![], vec![1]));
        assert!(!accepts("G p", vec![1], vec![0]));
    }

    #[test]
    fn until() {
        assert!(accepts("p U q", vec![1], vec![2]));
        assert!(!accepts("p U q", vec![], vec![1]));
    }

    #[test]
    fn fairness() {
        assert!(accepts("G F p", vec![], vec![0, 1]));
        assert!(!accepts("G F p", vec![1, 1], vec![0]));
        assert!(accepts("F G p", vec![0], vec![1]));
        assert!(!accepts("F G p", vec![], vec![1, 0]));
    }

    #[test]
    fn unsatisfiable_is_empty() {
        let b = ltl_to_nba(&parse("p & !p").unwrap(), &props()).unwrap();
        assert!(b.is_empty());
        let b = ltl_to_nba(&parse("G F p & F G !p").unwrap(), &props()).unwrap();
        assert!(b.is_empty());
    }
}
