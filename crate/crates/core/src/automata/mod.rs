//! Word automata for the path-formula part of QATL*: LTL to nondeterministic Büchi
//! automata by tableau, Büchi to deterministic min-parity automata by Safra trees,
//! and exact membership tests on ultimately periodic words.
//!
//! Letters are bitmasks over an ordered proposition list: bit `i` set means the
//! `i`-th proposition holds.

mod dpa;
mod ltl;
mod nba;

pub use dpa::{dpa_accepts_lasso, nba_to_dpa, stretch_dpa, Determinizer, Dpa};
pub use ltl::{ltl_eval_lasso, Ltl};
pub use nba::{ltl_to_nba, nba_accepts_lasso, Guard, Nba};

pub type Letter = u64;

/// Largest proposition list an alphabet may be built over.
pub const MAX_PROPS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AutomataError {
    #[error("`{0}` is not a pure LTL formula")]
    NotLtl(String),
    #[error("proposition `{0}` is not in the alphabet")]
    UnknownProp(String),
    #[error("alphabet over {0} propositions is too large")]
    TooManyProps(usize),
    #[error("letter {letter:#b} is outside the alphabet over {props} propositions")]
    BadLetter { letter: Letter, props: usize },
    #[error("the loop of a lasso word must be non-empty")]
    EmptyLoop,
    #[error("determinization exceeded {0} states")]
    TooLarge(usize),
}

/// The ultimately periodic word `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LassoWord {
    pub prefix: Vec<Letter>,
    pub cycle: Vec<Letter>,
}

impl LassoWord {
    pub fn new(prefix: Vec<Letter>, cycle: Vec<Letter>) -> Result<Self, AutomataError> {
        if cycle.is_empty() {
            return Err(AutomataError::EmptyLoop);
        }
        Ok(LassoWord { prefix, cycle })
    }

    /// Number of distinct positions, `|prefix| + |cycle|`.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letter(&self, i: usize) -> Letter {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Position following `i` among the `len()` distinct ones.
    pub fn succ(&self, i: usize) -> usize {
        if i + 1 == self.len() {
            self.prefix.len()
        } else {
            i + 1
        }
    }

    /// Inserts `factor - 1` empty letters after every letter.
    pub fn pad(&self, factor: usize) -> LassoWord {
        let pad = |xs: &[Letter]| {
            xs.iter()
                .flat_map(|&x| std::iter::once(x).chain(std::iter::repeat(0).take(factor - 1)))
                .collect()
        };
        LassoWord { prefix: pad(&self.prefix), cycle: pad(&self.cycle) }
    }

    pub(crate) fn check_alphabet(&self, props: usize) -> Result<(), AutomataError> {
        if self.cycle.is_empty() {
            return Err(AutomataError::EmptyLoop);
        }
        let limit = 1u64 << props;
        for &l in self.prefix.iter().chain(&self.cycle) {
            if l >= limit {
                return Err(AutomataError::BadLetter { letter: l, props });
            }
        }
        Ok(())
    }
}
