use std::collections::HashMap;
use std::fmt::Write as _;

use super::{AutomataError, LassoWord, Letter, Nba};

/// A complete deterministic automaton with min-parity acceptance on states: a run
/// is accepting iff the least color it visits infinitely often is even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dpa {
    pub props: Vec<String>,
    pub initial: usize,
    pub color: Vec<u32>,
    /// `trans[q][letter]`, one entry per letter of the alphabet.
    pub trans: Vec<Vec<usize>>,
}

impl Dpa {
    pub fn state_count(&self) -> usize {
        self.color.len()
    }

    pub fn step(&self, q: usize, letter: Letter) -> usize {
        self.trans[q][letter as usize]
    }

    pub fn color_count(&self) -> usize {
        let mut cs = self.color.clone();
        cs.sort_unstable();
        cs.dedup();
        cs.len()
    }

    /// Plain-text listing of states, colors and transitions.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "props: {}", self.props.join(" "));
        let _ = writeln!(out, "states: {}", self.state_count());
        let _ = writeln!(out, "initial: {}", self.initial);
        for q in 0..self.state_count() {
            let _ = writeln!(out, "state {q} color {}", self.color[q]);
            for (a, t) in self.trans[q].iter().enumerate() {
                let _ = writeln!(out, "  {a:#b} -> {t}");
            }
        }
        out
    }
}

type Bits = Vec<u64>;

fn bits_empty(b: &Bits) -> bool {
    b.iter().all(|&w| w == 0)
}

fn has(b: &Bits, q: usize) -> bool {
    b[q / 64] >> (q % 64) & 1 == 1
}

fn set(b: &mut Bits, q: usize) {
    b[q / 64] |= 1 << (q % 64);
}

/// A Safra tree: nodes in age order (oldest first), each with its parent's position
/// and its label. The empty tree is the rejecting sink.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Tree(Vec<(Option<usize>, Bits)>);

struct Work {
    parent: Option<usize>,
    label: Bits,
    old: bool,
    alive: bool,
    green: bool,
}

/// On-demand Safra-tree determinization of a Büchi automaton.
///
/// Nodes are named by age rank. A step is colored by its most significant event
/// among nodes that existed before it: node `k` (1-based) turning green gives
/// `2k - 2`, node `k >= 2` disappearing gives `2k - 3`, nothing gives `2m - 1`.
/// DPA states pair a tree with the color of the step that produced it.
pub struct Determinizer {
    nba: Nba,
    words: usize,
    accepting: Bits,
    states: Vec<(Tree, u32)>,
    ids: HashMap<(Tree, u32), usize>,
    steps: HashMap<(usize, Letter), usize>,
    initial: usize,
    limit: usize,
}

impl Determinizer {
    pub fn new(nba: Nba, limit: usize) -> Self {
        let m = nba.state_count();
        let words = m.div_ceil(64).max(1);
        let mut accepting = vec![0; words];
        for q in (0..m).filter(|&q| nba.accepting[q]) {
            set(&mut accepting, q);
        }
        let mut d = Determinizer {
            nba,
            words,
            accepting,
            states: Vec::new(),
            ids: HashMap::new(),
            steps: HashMap::new(),
            initial: 0,
            limit,
        };
        let mut root = vec![0; words];
        for &q in &d.nba.initial {
            set(&mut root, q);
        }
        let tree = if bits_empty(&root) { Tree(Vec::new()) } else { Tree(vec![(None, root)]) };
        let none = d.no_event();
        d.initial = d.intern(tree, none);
        d
    }

    fn no_event(&self) -> u32 {
        (2 * self.nba.state_count()).max(2) as u32 - 1
    }

    fn intern(&mut self, t: Tree, color: u32) -> usize {
        let key = (t, color);
        if let Some(&id) = self.ids.get(&key) {
            return id;
        }
        let id = self.states.len();
        self.states.push(key.clone());
        self.ids.insert(key, id);
        id
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn color(&self, q: usize) -> u32 {
        self.states[q].1
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn props(&self) -> &[String] {
        &self.nba.props
    }

    /// Successor of DPA state `q` on `letter`.
    pub fn step(&mut self, q: usize, letter: Letter) -> Result<usize, AutomataError> {
        if let Some(&t) = self.steps.get(&(q, letter)) {
            return Ok(t);
        }
        let (tree, color) = self.safra_step(&self.states[q].0, letter);
        let t = self.intern(tree, color);
        if self.states.len() > self.limit {
            return Err(AutomataError::TooLarge(self.limit));
        }
        self.steps.insert((q, letter), t);
        Ok(t)
    }

    fn post(&self, label: &Bits, letter: Letter) -> Bits {
        let mut out = vec![0; self.words];
        for q in (0..self.nba.state_count()).filter(|&q| has(label, q)) {
            for t in self.nba.successors(q, letter) {
                set(&mut out, t);
            }
        }
        out
    }

    fn safra_step(&self, tree: &Tree, letter: Letter) -> (Tree, u32) {
        let sink = self.no_event();
        if tree.0.is_empty() {
            return (Tree(Vec::new()), sink);
        }
        let mut w: Vec<Work> = tree
            .0
            .iter()
            .map(|(p, l)| Work { parent: *p, label: l.clone(), old: true, alive: true, green: false })
            .collect();
        let old_count = w.len();
        // spawn a youngest child holding the accepting part of every label
        for i in 0..old_count {
            let acc: Bits = w[i].label.iter().zip(&self.accepting).map(|(a, b)| a & b).collect();
            if !bits_empty(&acc) {
                w.push(Work { parent: Some(i), label: acc, old: false, alive: true, green: false });
            }
        }
        for node in &mut w {
            node.label = self.post(&node.label, letter);
        }
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); w.len()];
        for i in 0..w.len() {
            if let Some(p) = w[i].parent {
                children[p].push(i);
            }
        }
        // a state stays only in the oldest branch that holds it
        fn horizontal(w: &mut [Work], children: &[Vec<usize>], v: usize, blocked: &Bits) {
            for (x, b) in w[v].label.iter_mut().zip(blocked) {
                *x &= !b;
            }
            let mut seen = blocked.clone();
            for &c in &children[v] {
                horizontal(w, children, c, &seen);
                for (s, x) in seen.iter_mut().zip(&w[c].label) {
                    *s |= x;
                }
            }
        }
        horizontal(&mut w, &children, 0, &vec![0; self.words]);
        // parents precede children, so one forward pass propagates removal
        for i in 0..w.len() {
            let parent_dead = w[i].parent.is_some_and(|p| !w[p].alive);
            if parent_dead || bits_empty(&w[i].label) {
                w[i].alive = false;
            }
        }
        for i in 0..w.len() {
            if !w[i].alive {
                continue;
            }
            let live: Vec<usize> = children[i].iter().copied().filter(|&c| w[c].alive).collect();
            if live.is_empty() {
                continue;
            }
            let mut union = vec![0; self.words];
            for &c in &live {
                for (u, x) in union.iter_mut().zip(&w[c].label) {
                    *u |= x;
                }
            }
            if union == w[i].label {
                w[i].green = true;
                kill_below(&mut w, &children, i);
            }
        }
        if !w[0].alive {
            return (Tree(Vec::new()), sink);
        }
        let mut color = sink;
        for (k, node) in w.iter().enumerate().take(old_count) {
            debug_assert!(node.old);
            let rank = k as u32 + 1;
            if !node.alive {
                color = color.min(2 * rank - 3);
            } else if node.green {
                color = color.min(2 * rank - 2);
            }
        }
        let mut map = vec![usize::MAX; w.len()];
        let mut nodes = Vec::new();
        for (i, node) in w.iter().enumerate() {
            if node.alive {
                map[i] = nodes.len();
                nodes.push((node.parent.map(|p| map[p]), node.label.clone()));
            }
        }
        (Tree(nodes), color)
    }
}

fn kill_below(w: &mut [Work], children: &[Vec<usize>], v: usize) {
    for &c in &children[v] {
        if w[c].alive {
            w[c].alive = false;
            kill_below(w, children, c);
        }
    }
}

/// Upper bound `2 m^m m!` on the states of the determinized automaton.
fn state_bound(m: usize) -> u128 {
    let mut b: u128 = 2;
    for _ in 0..m {
        b = b.saturating_mul(m as u128);
    }
    for k in 1..=m as u128 {
        b = b.saturating_mul(k);
    }
    b
}

/// Deterministic parity automaton with the same language as `b`.
pub fn nba_to_dpa(b: &Nba) -> Result<Dpa, AutomataError> {
    nba_to_dpa_limited(b, 1_000_000)
}

pub(crate) fn nba_to_dpa_limited(b: &Nba, limit: usize) -> Result<Dpa, AutomataError> {
    let m = b.state_count();
    let letters = 1usize << b.props.len();
    let mut d = Determinizer::new(b.clone(), limit);
    let mut trans: Vec<Vec<usize>> = Vec::new();
    let mut q = 0;
    while q < d.state_count() {
        let row = (0..letters as Letter).map(|a| d.step(q, a)).collect::<Result<Vec<_>, _>>()?;
        trans.push(row);
        q += 1;
    }
    let mut color: Vec<u32> = (0..d.state_count()).map(|q| d.color(q)).collect();
    let mut initial = d.initial();
    // the initial pairing with "no event" is only needed when nothing re-enters the
    // initial tree; otherwise start from a state that does
    let entered = trans.iter().flatten().any(|&t| t == initial);
    let twin = (0..d.state_count()).find(|&q| q != initial && d.states[q].0 == d.states[initial].0);
    if let (false, Some(twin)) = (entered, twin) {
        let last = d.state_count() - 1;
        let remap = |x: usize| if x == last { initial } else { x };
        trans.swap(initial, last);
        color.swap(initial, last);
        trans.pop();
        color.pop();
        for row in &mut trans {
            for t in row.iter_mut() {
                *t = remap(*t);
            }
        }
        initial = remap(twin);
    }
    assert!(trans.len() as u128 <= state_bound(m), "determinization exceeded the state bound");
    let dpa = Dpa { props: b.props.clone(), initial, color, trans };
    assert!(dpa.color_count() <= (2 * m).max(1), "determinization exceeded the color bound");
    Ok(dpa)
}

/// Reads a letter only at every `factor`-th position, starting with the first, and
/// skips the letters between.
pub fn stretch_dpa(d: &Dpa, factor: usize) -> Dpa {
    assert!(factor >= 1);
    let n = d.state_count();
    let letters = d.trans.first().map_or(0, Vec::len);
    let id = |q: usize, phase: usize| q * factor + phase;
    let mut trans = vec![Vec::new(); n * factor];
    let mut color = vec![0; n * factor];
    for q in 0..n {
        for phase in 0..factor {
            let next = (phase + 1) % factor;
            trans[id(q, phase)] = (0..letters)
                .map(|a| if phase == 0 { id(d.trans[q][a], next) } else { id(q, next) })
                .collect();
            color[id(q, phase)] = d.color[q];
        }
    }
    Dpa { props: d.props.clone(), initial: id(d.initial, 0), color, trans }
}

/// Whether the unique run on `w` sees an even least color infinitely often.
pub fn dpa_accepts_lasso(d: &Dpa, w: &LassoWord) -> Result<bool, AutomataError> {
    w.check_alphabet(d.props.len())?;
    let mut q = d.initial;
    for &a in &w.prefix {
        q = d.step(q, a);
    }
    let mut block_start: HashMap<usize, usize> = HashMap::new();
    let mut block_colors: Vec<u32> = Vec::new();
    loop {
        if let Some(&first) = block_start.get(&q) {
            return Ok(block_colors[first..].iter().min().is_some_and(|c| c % 2 == 0));
        }
        block_start.insert(q, block_colors.len());
        let mut least = u32::MAX;
        for &a in &w.cycle {
            q = d.step(q, a);
            least = least.min(d.color[q]);
        }
        block_colors.push(least);
    }
}
