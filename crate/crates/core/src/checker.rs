//! End-to-end checking: parse, build the game, attach the initial credit and solve
//! with growing caps until the bracket is certain.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::formula::{classify, desugar, parse, Fragment, ParseError};
use crate::mcgame::{
    attach_initial_credit, binary_ramp, build_qatl_game, build_qatlstar_game, BuildOptions, GameFragment, McError,
};
use crate::model::{expand_socg, Configuration, GameModel};
use crate::parity::{default_cap, dump_game, solve_bracketed, BracketVerdict, GameError};
use crate::refeval::{eval_qatl_bracket, RefEvalError, ThreeValued};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Parity-game reduction.
    #[default]
    Game,
    /// Direct fixpoint evaluation, QATL only.
    Refeval,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Verified,
    Falsified,
    Unknown,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Verified => 0,
            Verdict::Falsified => 1,
            Verdict::Unknown => 2,
        }
    }

    pub fn is_certain(self) -> bool {
        self != Verdict::Unknown
    }
}

impl From<BracketVerdict> for Verdict {
    fn from(v: BracketVerdict) -> Self {
        match v {
            BracketVerdict::VerifierWins => Verdict::Verified,
            BracketVerdict::FalsifierWins => Verdict::Falsified,
            BracketVerdict::Unknown => Verdict::Unknown,
        }
    }
}

impl From<ThreeValued> for Verdict {
    fn from(v: ThreeValued) -> Self {
        match v {
            ThreeValued::True => Verdict::Verified,
            ThreeValued::False => Verdict::Falsified,
            ThreeValued::Unknown => Verdict::Unknown,
        }
    }
}

/// Which builder produced the game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pipeline {
    Qatl,
    QatlStar,
    Refeval,
}

#[derive(Clone, Debug)]
pub struct CheckRequest<'m> {
    pub model: &'m GameModel,
    pub formula: String,
    pub state: String,
    pub counter: u64,
    /// First cap tried; chosen from the game when absent.
    pub cap: Option<u64>,
    /// Largest cap tried.
    pub cap_limit: Option<u64>,
    pub engine: Engine,
    pub literal_figures: bool,
    pub dump_game: bool,
    /// Replace weights above 1 by chains before solving.
    pub expand_succinct: bool,
}

impl<'m> CheckRequest<'m> {
    pub fn new(model: &'m GameModel, formula: impl Into<String>, state: impl Into<String>, counter: u64) -> Self {
        CheckRequest {
            model,
            formula: formula.into(),
            state: state.into(),
            counter,
            cap: None,
            cap_limit: None,
            engine: Engine::Game,
            literal_figures: false,
            dump_game: false,
            expand_succinct: false,
        }
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = Some(cap);
        self
    }

    pub fn with_cap_limit(mut self, limit: u64) -> Self {
        self.cap_limit = Some(limit);
        self
    }

    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GameStats {
    pub vertices: usize,
    pub edges: usize,
    pub colors: usize,
    /// States of each deterministic automaton built.
    pub automata: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub verdict: Verdict,
    pub fragment: Fragment,
    pub pipeline: Pipeline,
    /// Cap of the last solve.
    pub cap: u64,
    pub game: Option<GameStats>,
    pub wall_ms: f64,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dump: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("formula: {0}")]
    Parse(#[from] ParseError),
    #[error("`{0}` is a path formula; wrap it in a coalition")]
    NotStateFormula(String),
    #[error("no state named `{0}`")]
    NoSuchState(String),
    #[error("cap {cap} is below the initial counter {counter}")]
    CapBelowCounter { cap: u64, counter: u64 },
    #[error("the reference evaluator only handles QATL formulas")]
    RefevalNeedsQatl,
    #[error(transparent)]
    Build(#[from] McError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Refeval(#[from] RefEvalError),
}

struct Prepared {
    fragment: Fragment,
    state: usize,
    formula: crate::formula::Formula,
}

fn prepare(req: &CheckRequest<'_>) -> Result<Prepared, CheckError> {
    let f = parse(&req.formula)?;
    let info = classify(&f);
    if !info.is_state_formula {
        return Err(CheckError::NotStateFormula(req.formula.clone()));
    }
    let state = req.model.state_id(&req.state).ok_or_else(|| CheckError::NoSuchState(req.state.clone()))?;
    if let Some(cap) = req.cap {
        if cap < req.counter {
            return Err(CheckError::CapBelowCounter { cap, counter: req.counter });
        }
    }
    Ok(Prepared { fragment: info.fragment, state, formula: f })
}

fn build(req: &CheckRequest<'_>, p: &Prepared) -> Result<(GameFragment, Pipeline), CheckError> {
    let opts = BuildOptions { literal_figures: req.literal_figures };
    let f = desugar(&p.formula);
    let (frag, pipeline) = match p.fragment {
        Fragment::Qatl => (build_qatl_game(req.model, p.state, &f, opts)?, Pipeline::Qatl),
        Fragment::QatlStar => (build_qatlstar_game(req.model, p.state, &f, opts)?, Pipeline::QatlStar),
    };
    let mut frag = attach_initial_credit(frag, req.counter, binary_ramp(req.model));
    if req.expand_succinct {
        frag.game = expand_socg(&frag.game);
    }
    Ok((frag, pipeline))
}

/// The game `check` would solve, with the credit ramp, in dump format.
pub fn dump_request(req: &CheckRequest<'_>) -> Result<String, CheckError> {
    let p = prepare(req)?;
    if req.engine == Engine::Refeval {
        return Err(CheckError::RefevalNeedsQatl);
    }
    Ok(dump_game(&build(req, &p)?.0.game))
}

/// Decides `M, (state, counter) |= formula`. `Verified` and `Falsified` are certain.
pub fn check(req: &CheckRequest<'_>) -> Result<Report, CheckError> {
    let clock = Instant::now();
    let p = prepare(req)?;
    let mut warnings = Vec::new();
    let report = match req.engine {
        Engine::Refeval => {
            if p.fragment != Fragment::Qatl {
                return Err(CheckError::RefevalNeedsQatl);
            }
            let info = classify(&p.formula);
            let start = req.cap.unwrap_or_else(|| {
                64.max(req.counter + 8).max(info.max_constraint_constant + 2).max(req.model.max_abs_weight())
            });
            let limit = req.cap_limit.unwrap_or(start * 16).max(start);
            let config = Configuration { state: p.state, counter: req.counter };
            let mut cap = start;
            let verdict = loop {
                let v: Verdict = eval_qatl_bracket(req.model, config, &p.formula, cap)?.into();
                if v.is_certain() || cap >= limit {
                    break v;
                }
                cap = (cap * 2).min(limit);
            };
            if !verdict.is_certain() {
                warnings.push(format!("cap limit {limit} reached without a certain verdict"));
            }
            Report {
                verdict,
                fragment: p.fragment,
                pipeline: Pipeline::Refeval,
                cap,
                game: None,
                wall_ms: 0.0,
                warnings,
                dump: None,
            }
        }
        Engine::Game => {
            let (frag, pipeline) = build(req, &p)?;
            let g = &frag.game;
            let (auto_start, auto_limit) = default_cap(g);
            let start = req.cap.unwrap_or(auto_start).max(g.initial_credit);
            let limit = req.cap_limit.unwrap_or(auto_limit).max(start);
            let mut cap = start;
            let verdict = loop {
                let v: Verdict = solve_bracketed(g, cap)?.into();
                if v.is_certain() || cap >= limit {
                    break v;
                }
                cap = cap.saturating_mul(2).min(limit);
            };
            if !verdict.is_certain() {
                warnings.push(format!("cap limit {limit} reached without a certain verdict"));
            }
            Report {
                verdict,
                fragment: p.fragment,
                pipeline,
                cap,
                game: Some(GameStats {
                    vertices: g.vertex_count(),
                    edges: g.edge_count(),
                    colors: g.color_count(),
                    automata: frag.automata.clone(),
                }),
                wall_ms: 0.0,
                warnings,
                dump: req.dump_game.then(|| dump_game(g)),
            }
        }
    };
    Ok(Report { wall_ms: clock.elapsed().as_secs_f64() * 1000.0, ..report })
}

/// Checks independent requests in parallel; results are in request order.
pub fn check_all(reqs: &[CheckRequest<'_>]) -> Vec<Result<Report, CheckError>> {
    reqs.par_iter().map(check).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelBuilder;

    fn model() -> GameModel {
        let mut b = ModelBuilder::new(&["Sys", "Env"]);
        let a = b.state("a", 0, &["p"]);
        let c = b.state("b", 1, &[]);
        b.edge(a, 0, a);
        b.edge(a, 1, c);
        b.edge(c, -1, a);
        b.edge(c, 0, c);
        b.build().unwrap()
    }

    #[test]
    fn engines_agree() {
        let m = model();
        for f in ["<<Sys>> G p", "<<Env>> F !p", "<<Sys>> X r > 0", "p & r = 0", "<<Env>> (p U r >= 1)"] {
            for i in 0..3 {
                let game = check(&CheckRequest::new(&m, f, "a", i)).unwrap();
                let reference = check(&CheckRequest::new(&m, f, "a", i).with_engine(Engine::Refeval)).unwrap();
                assert!(game.verdict.is_certain() && reference.verdict.is_certain(), "{f} at {i}");
                assert_eq!(game.verdict, reference.verdict, "{f} at {i}");
            }
        }
    }

    #[test]
    fn request_errors() {
        let m = model();
        assert!(matches!(check(&CheckRequest::new(&m, "G p", "a", 0)), Err(CheckError::NotStateFormula(_))));
        assert!(matches!(check(&CheckRequest::new(&m, "p", "zz", 0)), Err(CheckError::NoSuchState(_))));
        assert!(matches!(check(&CheckRequest::new(&m, "p &", "a", 0)), Err(CheckError::Parse(_))));
        assert_eq!(
            check(&CheckRequest::new(&m, "p", "a", 9).with_cap(4)).unwrap_err(),
            CheckError::CapBelowCounter { cap: 4, counter: 9 }
        );
        assert_eq!(
            check(&CheckRequest::new(&m, "<<Sys>> G F p", "a", 0).with_engine(Engine::Refeval)).unwrap_err(),
            CheckError::RefevalNeedsQatl
        );
    }

    #[test]
    fn dumps_are_deterministic() {
        let m = model();
        let req = CheckRequest::new(&m, "<<Sys>> G (p | r < 2)", "a", 1);
        assert_eq!(dump_request(&req).unwrap(), dump_request(&req).unwrap());
    }

    #[test]
    fn star_formulas_report_automata() {
        let m = model();
        let r = check(&CheckRequest::new(&m, "<<Sys>> G F p", "a", 0)).unwrap();
        assert_eq!(r.pipeline, Pipeline::QatlStar);
        assert_eq!(r.verdict, Verdict::Verified);
        assert_eq!(r.game.unwrap().automata.len(), 1);
    }
}
