use std::cmp::Ordering;

use super::{FiniteArena, Player, SolveResult};

// A measure has one component per odd color; `None` is the top element.
type Measure = Option<Vec<u32>>;

fn cmp_measure(a: &Measure, b: &Measure) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Greater,
        (Some(_), None) => Ordering::Less,
        (Some(x), Some(y)) => x.cmp(y),
    }
}

/// Solves a finite min-parity arena with small progress measures.
///
/// Only regions are computed; the returned strategies are all `None`.
pub fn solve_spm(a: &FiniteArena) -> SolveResult {
    let n = a.len();
    let max_color = a.max_color();
    let k = (max_color as usize + 1) / 2;
    let mut bound = vec![0u32; k];
    for &c in &a.color {
        if c % 2 == 1 {
            bound[c as usize / 2] += 1;
        }
    }
    let pred = a.predecessors();
    let mut m: Vec<Measure> = vec![Some(vec![0; k]); n];
    let mut queued = vec![true; n];
    let mut work: Vec<usize> = (0..n).rev().collect();

    let prog = |mw: &Measure, p: u32| -> Measure {
        let mw = mw.as_ref()?;
        let len = if p % 2 == 0 { p as usize / 2 } else { (p as usize + 1) / 2 };
        let mut r = vec![0u32; k];
        r[..len].copy_from_slice(&mw[..len]);
        if p % 2 == 0 {
            return Some(r);
        }
        for j in (0..len).rev() {
            if r[j] < bound[j] {
                r[j] += 1;
                return Some(r);
            }
            r[j] = 0;
        }
        None
    };

    while let Some(v) = work.pop() {
        queued[v] = false;
        let p = a.color[v];
        let mut best: Option<Measure> = None;
        for &w in &a.succ[v] {
            let cand = prog(&m[w], p);
            best = Some(match best {
                None => cand,
                Some(b) => {
                    let keep_b = match a.owner[v] {
                        Player::Verifier => cmp_measure(&b, &cand) != Ordering::Greater,
                        Player::Falsifier => cmp_measure(&b, &cand) != Ordering::Less,
                    };
                    if keep_b {
                        b
                    } else {
                        cand
                    }
                }
            });
        }
        let best = best.expect("arena vertex without successor");
        if cmp_measure(&best, &m[v]) == Ordering::Greater {
            m[v] = best;
            for &u in &pred[v] {
                if !queued[u] {
                    queued[u] = true;
                    work.push(u);
                }
            }
        }
    }
    let winner = m
        .iter()
        .map(|x| if x.is_some() { Player::Verifier } else { Player::Falsifier })
        .collect();
    SolveResult { winner, strategy: vec![None; n] }
}
