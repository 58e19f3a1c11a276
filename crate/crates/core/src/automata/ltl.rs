use std::fmt;

use super::{AutomataError, LassoWord, MAX_PROPS};
use crate::formula::{Formula, FormulaKind};

/// LTL in negation normal form over proposition indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ltl {
    True,
    False,
    /// Proposition index and polarity.
    Lit(usize, bool),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    Release(Box<Ltl>, Box<Ltl>),
}

impl Ltl {
    /// Negation normal form of a pure LTL formula over `props`.
    pub fn from_formula(f: &Formula, props: &[String]) -> Result<Ltl, AutomataError> {
        if props.len() > MAX_PROPS {
            return Err(AutomataError::TooManyProps(props.len()));
        }
        nnf(f, false, props)
    }

    /// Every `Until` subformula, each once, in first-visit order.
    pub fn untils(&self) -> Vec<Ltl> {
        let mut out = Vec::new();
        self.collect_untils(&mut out);
        out
    }

    fn collect_untils(&self, out: &mut Vec<Ltl>) {
        match self {
            Ltl::True | Ltl::False | Ltl::Lit(..) => {}
            Ltl::Next(a) => a.collect_untils(out),
            Ltl::And(a, b) | Ltl::Or(a, b) | Ltl::Release(a, b) => {
                a.collect_untils(out);
                b.collect_untils(out);
            }
            Ltl::Until(a, b) => {
                if !out.contains(self) {
                    out.push(self.clone());
                }
                a.collect_untils(out);
                b.collect_untils(out);
            }
        }
    }
}

impl fmt::Display for Ltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ltl::True => write!(f, "true"),
            Ltl::False => write!(f, "false"),
            Ltl::Lit(i, true) => write!(f, "p{i}"),
            Ltl::Lit(i, false) => write!(f, "!p{i}"),
            Ltl::And(a, b) => write!(f, "({a} & {b})"),
            Ltl::Or(a, b) => write!(f, "({a} | {b})"),
            Ltl::Next(a) => write!(f, "X {a}"),
            Ltl::Until(a, b) => write!(f, "({a} U {b})"),
            Ltl::Release(a, b) => write!(f, "({a} R {b})"),
        }
    }
}

fn bx(l: Ltl) -> Box<Ltl> {
    Box::new(l)
}

fn nnf(f: &Formula, neg: bool, props: &[String]) -> Result<Ltl, AutomataError> {
    let rec = |g: &Formula, n: bool| nnf(g, n, props);
    let and_or = |a: Ltl, b: Ltl, conj: bool| {
        if conj {
            Ltl::And(bx(a), bx(b))
        } else {
            Ltl::Or(bx(a), bx(b))
        }
    };
    Ok(match &f.kind {
        FormulaKind::Bool(b) => {
            if *b != neg {
                Ltl::True
            } else {
                Ltl::False
            }
        }
        FormulaKind::Prop(p) => {
            let i = props.iter().position(|q| q == p).ok_or_else(|| AutomataError::UnknownProp(p.clone()))?;
            Ltl::Lit(i, !neg)
        }
        FormulaKind::Not(a) => rec(a, !neg)?,
        FormulaKind::Or(a, b) => and_or(rec(a, neg)?, rec(b, neg)?, neg),
        FormulaKind::And(a, b) => and_or(rec(a, neg)?, rec(b, neg)?, !neg),
        FormulaKind::Implies(a, b) => and_or(rec(a, !neg)?, rec(b, neg)?, neg),
        FormulaKind::Next(a) => Ltl::Next(bx(rec(a, neg)?)),
        FormulaKind::Until(a, b) => {
            if neg {
                Ltl::Release(bx(rec(a, true)?), bx(rec(b, true)?))
            } else {
                Ltl::Until(bx(rec(a, false)?), bx(rec(b, false)?))
            }
        }
        FormulaKind::Finally(a) => {
            if neg {
                Ltl::Release(bx(Ltl::False), bx(rec(a, true)?))
            } else {
                Ltl::Until(bx(Ltl::True), bx(rec(a, false)?))
            }
        }
        FormulaKind::Globally(a) => {
            if neg {
                Ltl::Until(bx(Ltl::True), bx(rec(a, true)?))
            } else {
                Ltl::Release(bx(Ltl::False), bx(rec(a, false)?))
            }
        }
        FormulaKind::Constraint(_) | FormulaKind::Coalition(..) => {
            return Err(AutomataError::NotLtl(f.to_string()));
        }
    })
}

/// Truth of a pure LTL formula on `w`, by fixpoints over the distinct positions.
pub fn ltl_eval_lasso(f: &Formula, props: &[String], w: &LassoWord) -> Result<bool, AutomataError> {
    w.check_alphabet(props.len())?;
    let l = Ltl::from_formula(f, props)?;
    Ok(eval(&l, w)[0])
}

fn eval(f: &Ltl, w: &LassoWord) -> Vec<bool> {
    let n = w.len();
    match f {
        Ltl::True => vec![true; n],
        Ltl::False => vec![false; n],
        Ltl::Lit(i, pol) => (0..n).map(|k| (w.letter(k) >> i & 1 == 1) == *pol).collect(),
        Ltl::And(a, b) => zip(eval(a, w), eval(b, w), |x, y| x && y),
        Ltl::Or(a, b) => zip(eval(a, w), eval(b, w), |x, y| x || y),
        Ltl::Next(a) => {
            let va = eval(a, w);
            (0..n).map(|k| va[w.succ(k)]).collect()
        }
        Ltl::Until(a, b) => fixpoint(&eval(a, w), &eval(b, w), w, false),
        Ltl::Release(a, b) => fixpoint(&eval(a, w), &eval(b, w), w, true),
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

/// Least fixpoint of `b | (a & X r)` for until, greatest fixpoint of
/// `b & (a | X r)` for release.
fn fixpoint(a: &[bool], b: &[bool], w: &LassoWord, release: bool) -> Vec<bool> {
    let n = w.len();
    let mut r = vec![release; n];
    loop {
        let mut changed = false;
        for k in (0..n).rev() {
            let next = r[w.succ(k)];
            let v = if release { b[k] && (a[k] || next) } else { b[k] || (a[k] && next) };
            if v != r[k] {
                r[k] = v;
                changed = true;
            }
        }
        if !changed {
            return r;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn props() -> Vec<String> {
        vec!["p".into(), "q".into()]
    }

    fn holds(f: &str, prefix: Vec<u64>, cycle: Vec<u64>) -> bool {
        ltl_eval_lasso(&parse(f).unwrap(), &props(), &LassoWord::new(prefix, cycle).unwrap()).unwrap()
    }

    #[test]
    fn basic_semantics() {
        assert!(holds("G p", vec![], vec![1]));
        assert!(!holds("G p", vec![1], vec![0]));
        assert!(holds("X p", vec![0], vec![1]));
        assert!(holds("p U q", vec![1], vec![2]));
        assert!(!holds("p U q", vec![1], vec![1]));
        assert!(holds("G F p", vec![], vec![0, 1]));
        assert!(!holds("F G p", vec![], vec![0, 1]));
        assert!(holds("F G p", vec![0, 0], vec![1]));
    }

    #[test]
    fn nnf_pushes_negation() {
        let l = Ltl::from_formula(&parse("!(p U q)").unwrap(), &props()).unwrap();
        assert_eq!(l, Ltl::Release(bx(Ltl::Lit(0, false)), bx(Ltl::Lit(1, false))));
        assert!(Ltl::from_formula(&parse("r < 2").unwrap(), &props()).is_err());
        assert_eq!(
            Ltl::from_formula(&parse("z").unwrap(), &props()),
            Err(AutomataError::UnknownProp("z".into()))
        );
    }
}
