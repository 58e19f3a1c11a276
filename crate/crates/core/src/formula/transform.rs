use std::collections::BTreeSet;

use serde::Serialize;

use super::{Constraint, Formula, FormulaKind, Rel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Fragment {
    #[serde(rename = "QATL")]
    Qatl,
    #[serde(rename = "QATL*")]
    QatlStar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FragmentInfo {
    pub fragment: Fragment,
    pub is_state_formula: bool,
    pub proposition_set: BTreeSet<String>,
    pub coalition_count: usize,
    /// Largest absolute constraint constant, 0 when there are none.
    pub max_constraint_constant: u64,
    /// Largest modulus, 0 when there are none.
    pub max_modulus: u64,
}

fn neg(f: Formula) -> Formula {
    Formula::not(f)
}

fn desugar_constraint(c: Constraint) -> Formula {
    let lt = Formula::rel(Rel::Lt, c.constant);
    let le = Formula::rel(Rel::Le, c.constant);
    match c.rel {
        Rel::Lt | Rel::Le | Rel::Mod => Formula::constraint(c),
        // r = c  ==  r <= c & !(r < c)  ==  !(!(r <= c) | r < c)
        Rel::Eq => neg(Formula::or(neg(le), lt)),
        Rel::Gt => neg(le),
        Rel::Ge => neg(lt),
    }
}

/// Rewrites into the core connectives: propositions, `<`/`<=`/`mod` constraints, `!`, `|`,
/// `X`, `U` and coalitions. `G` survives only directly beneath a coalition, where it is a
/// primitive of the QATL fragment; every other `G φ` becomes `!(true U !φ)`.
pub fn desugar(f: &Formula) -> Formula {
    use FormulaKind::*;
    let d = |x: &Formula| Box::new(desugar(x));
    let kind = match &f.kind {
        Bool(b) => Bool(*b),
        Prop(p) => Prop(p.clone()),
        Constraint(c) => return with_span(desugar_constraint(*c), f),
        Not(a) => Not(d(a)),
        Or(a, b) => Or(d(a), d(b)),
        And(a, b) => {
            return with_span(neg(Formula::or(neg(desugar(a)), neg(desugar(b)))), f);
        }
        Implies(a, b) => Or(Box::new(neg(desugar(a))), d(b)),
        Next(a) => Next(d(a)),
        Until(a, b) => Until(d(a), d(b)),
        Finally(a) => Until(Box::new(Formula::tt()), d(a)),
        Globally(a) => {
            return with_span(neg(Formula::until(Formula::tt(), neg(desugar(a)))), f);
        }
        Coalition(agents, body) => match &body.kind {
            Globally(a) => Coalition(agents.clone(), Box::new(with_span(Formula::globally(desugar(a)), body))),
            _ => Coalition(agents.clone(), d(body)),
        },
    };
    Formula::with_span(kind, f.span)
}

fn with_span(mut g: Formula, f: &Formula) -> Formula {
    g.span = f.span;
    g
}

/// QATL membership of an already desugared formula.
pub(crate) fn is_qatl_core(f: &Formula) -> bool {
    use FormulaKind::*;
    match &f.kind {
        Bool(_) | Prop(_) | Constraint(_) => true,
        Not(a) => is_qatl_core(a),
        Or(a, b) => is_qatl_core(a) && is_qatl_core(b),
        Coalition(_, body) => match &body.kind {
            Next(a) | Globally(a) => is_qatl_core(a),
            Until(a, b) => is_qatl_core(a) && is_qatl_core(b),
            _ => false,
        },
        _ => false,
    }
}

/// True if every temporal operator lies beneath some coalition.
fn is_state(f: &Formula) -> bool {
    if f.is_temporal() {
        return false;
    }
    match &f.kind {
        FormulaKind::Coalition(..) => true,
        _ => f.children().into_iter().all(is_state),
    }
}

pub fn classify(f: &Formula) -> FragmentInfo {
    let state = is_state(f);
    let fragment = if state && is_qatl_core(&desugar(f)) { Fragment::Qatl } else { Fragment::QatlStar };
    let mut coalition_count = 0;
    let mut max_constraint_constant = 0;
    let mut max_modulus = 0;
    f.visit(&mut |g| match &g.kind {
        FormulaKind::Coalition(..) => coalition_count += 1,
        FormulaKind::Constraint(c) => {
            max_constraint_constant = max_constraint_constant.max(c.constant.unsigned_abs());
            max_modulus = max_modulus.max(c.modulus.unwrap_or(0));
        }
        _ => {}
    });
    FragmentInfo {
        fragment,
        is_state_formula: state,
        proposition_set: f.propositions(),
        coalition_count,
        max_constraint_constant,
        max_modulus,
    }
}

/// Result of replacing state subformulas of a path formula by fresh propositions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreshBinding {
    /// The path formula over original and fresh propositions.
    pub ltl: Formula,
    /// `(fresh name, replaced subformula)` in discovery order.
    pub binding: Vec<(String, Formula)>,
}

impl FreshBinding {
    /// Substitutes the bound subformulas back in.
    pub fn restore(&self) -> Formula {
        fn go(f: &Formula, b: &[(String, Formula)]) -> Formula {
            if let FormulaKind::Prop(p) = &f.kind {
                if let Some((_, g)) = b.iter().find(|(n, _)| n == p) {
                    return g.clone();
                }
            }
            map_children(f, |c| go(c, b))
        }
        go(&self.ltl, &self.binding)
    }

    pub fn fresh_names(&self) -> impl Iterator<Item = &str> {
        self.binding.iter().map(|(n, _)| n.as_str())
    }
}

pub(crate) fn map_children(f: &Formula, mut g: impl FnMut(&Formula) -> Formula) -> Formula {
    use FormulaKind::*;
    let mut b = |x: &Formula| Box::new(g(x));
    let kind = match &f.kind {
        Bool(_) | Prop(_) | Constraint(_) => f.kind.clone(),
        Not(a) => Not(b(a)),
        Next(a) => Next(b(a)),
        Finally(a) => Finally(b(a)),
        Globally(a) => Globally(b(a)),
        Coalition(ag, a) => Coalition(ag.clone(), b(a)),
        Or(x, y) => {
            let x = b(x);
            Or(x, b(y))
        }
        And(x, y) => {
            let x = b(x);
            And(x, b(y))
        }
        Implies(x, y) => {
            let x = b(x);
            Implies(x, b(y))
        }
        Until(x, y) => {
            let x = b(x);
            Until(x, b(y))
        }
    };
    Formula::with_span(kind, f.span)
}

/// Replaces the outermost coalition and constraint subformulas of `path` by fresh
/// propositions `q1, q2, …` (skipping names already used in `path`), leaving a pure
/// LTL formula. Structurally equal subformulas share one fresh proposition.
pub fn substitute_fresh(path: &Formula) -> FreshBinding {
    let used = path.propositions();
    let mut binding: Vec<(String, Formula)> = Vec::new();
    let mut counter = 0usize;
    fn go(
        f: &Formula,
        used: &BTreeSet<String>,
        binding: &mut Vec<(String, Formula)>,
        counter: &mut usize,
    ) -> Formula {
        if matches!(f.kind, FormulaKind::Coalition(..) | FormulaKind::Constraint(_)) {
            if let Some((name, _)) = binding.iter().find(|(_, g)| g == f) {
                return Formula::with_span(FormulaKind::Prop(name.clone()), f.span);
            }
            let name = loop {
                *counter += 1;
                let cand = format!("q{counter}");
                if !used.contains(&cand) {
                    break cand;
                }
            };
            binding.push((name.clone(), f.clone()));
            return Formula::with_span(FormulaKind::Prop(name), f.span);
        }
        map_children(f, |c| go(c, used, binding, counter))
    }
    let ltl = go(path, &used, &mut binding, &mut counter);
    FreshBinding { ltl, binding }
}
