use super::{FiniteArena, Player, SolveResult};

/// Solves a finite min-parity arena with the recursive attractor algorithm.
pub fn solve_zielonka(a: &FiniteArena) -> SolveResult {
    let n = a.len();
    let mut z = Solver {
        a,
        pred: a.predecessors(),
        winner: vec![Player::Verifier; n],
        strategy: vec![None; n],
        count: vec![0; n],
    };
    let all: Vec<usize> = (0..n).collect();
    z.solve(all);
    SolveResult { winner: z.winner, strategy: z.strategy }
}

struct Solver<'a> {
    a: &'a FiniteArena,
    pred: Vec<Vec<usize>>,
    winner: Vec<Player>,
    strategy: Vec<Option<usize>>,
    // scratch for attractor computations
    count: Vec<u32>,
}

impl Solver<'_> {
    /// Fills `winner` and `strategy` for every vertex of `set`, which must be a
    /// subgame (every member keeps a successor inside it).
    fn solve(&mut self, mut set: Vec<usize>) {
        let n = self.a.len();
        loop {
            if set.is_empty() {
                return;
            }
            let d = set.iter().map(|&v| self.a.color[v]).min().unwrap();
            let alpha = Player::of_color(d);
            let beta = alpha.opponent();
            let mut mask = vec![false; n];
            for &v in &set {
                mask[v] = true;
            }
            let top: Vec<usize> = set.iter().copied().filter(|&v| self.a.color[v] == d).collect();
            let in_a = self.attractor(&mask, &top, alpha);
            let rest: Vec<usize> = set.iter().copied().filter(|&v| !in_a[v]).collect();
            self.solve(rest.clone());
            let lost: Vec<usize> = rest.iter().copied().filter(|&v| self.winner[v] == beta).collect();
            if lost.is_empty() {
                for &v in &set {
                    if !in_a[v] {
                        continue;
                    }
                    self.winner[v] = alpha;
                    if self.a.owner[v] != alpha {
                        self.strategy[v] = None;
                    } else if self.a.color[v] == d {
                        self.strategy[v] = self.a.succ[v].iter().copied().find(|&t| mask[t]);
                    }
                }
                return;
            }
            let in_b = self.attractor(&mask, &lost, beta);
            for &v in &set {
                if in_b[v] {
                    self.winner[v] = beta;
                    if self.a.owner[v] != beta {
                        self.strategy[v] = None;
                    }
                }
            }
            set.retain(|&v| !in_b[v]);
        }
    }

    /// Attractor of `target` for `p` inside `mask`. Records attracting moves of `p`
    /// for the vertices added (target members keep their strategy).
    fn attractor(&mut self, mask: &[bool], target: &[usize], p: Player) -> Vec<bool> {
        let a = self.a;
        let mut inside = vec![false; a.len()];
        let mut queue: Vec<usize> = Vec::with_capacity(target.len());
        for &v in target {
            if !inside[v] {
                inside[v] = true;
                queue.push(v);
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let t = queue[head];
            head += 1;
            for &u in &self.pred[t] {
                if !mask[u] || inside[u] {
                    continue;
                }
                if a.owner[u] == p {
                    inside[u] = true;
                    self.strategy[u] = Some(t);
                    queue.push(u);
                } else {
                    if self.count[u] == 0 {
                        self.count[u] = a.succ[u].iter().filter(|&&s| mask[s]).count() as u32 + 1;
                    }
                    self.count[u] -= 1;
                    if self.count[u] == 1 {
                        inside[u] = true;
                        queue.push(u);
                    }
                }
            }
        }
        // reset scratch counters touched above
        for &t in &queue {
            for &u in &self.pred[t] {
                self.count[u] = 0;
            }
        }
        inside
    }
}
