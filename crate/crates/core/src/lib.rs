//! Model checking of the quantitative alternating-time temporal logics QATL and QATL*
//! over one-counter game models with VASS semantics.
//!
//! A check compiles the formula, model, state and initial counter into a one-counter
//! parity game between Verifier and Falsifier, then decides the winner by solving
//! finite truncations that bracket the infinite game from both sides. The answer is
//! `Verified`, `Falsified`, or `Unknown` when the truncations disagree.

pub mod automata;
pub mod checker;
pub mod formula;
pub mod hardness;
pub mod mcgame;
pub mod model;
pub mod parity;
pub mod refeval;
pub mod samples;

pub use checker::{check, CheckError, CheckRequest, Engine, Pipeline, Report, Verdict};
pub use formula::{parse, Formula};
pub use model::GameModel;
pub use parity::{OneCounterParityGame, Player};
