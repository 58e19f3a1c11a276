//! QATL / QATL* formulas: syntax tree, concrete syntax, and syntactic transformations.

mod parse;
mod render;
mod transform;

use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};

pub(crate) use parse::KEYWORDS;
pub use parse::{parse, ParseError, ParseErrorKind};
pub(crate) use transform::is_qatl_core;
pub use transform::{classify, desugar, substitute_fresh, Fragment, FragmentInfo, FreshBinding};

/// Byte range in the source text a node was parsed from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

/// Relation of a counter constraint `r ⋈ c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Gt,
    Ge,
    /// `r ≡ c (mod k)`
    Mod,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq | Rel::Mod => "=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        }
    }
}

/// A counter constraint. `modulus` is `Some(k)` with `k >= 1` exactly when `rel` is [`Rel::Mod`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Constraint {
    pub rel: Rel,
    pub constant: i64,
    pub modulus: Option<u64>,
}

impl Constraint {
    pub fn new(rel: Rel, constant: i64) -> Self {
        assert!(rel != Rel::Mod, "modulo constraints need a modulus");
        Constraint { rel, constant, modulus: None }
    }

    pub fn modulo(constant: i64, modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        Constraint { rel: Rel::Mod, constant, modulus: Some(modulus) }
    }

    /// Truth of the constraint at a concrete counter value.
    pub fn holds(&self, counter: u64) -> bool {
        crate::model::eval_constraint(self.rel, self.constant, self.modulus, counter)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FormulaKind {
    /// `true` / `false`, holding in every / no configuration.
    Bool(bool),
    Prop(String),
    Constraint(Constraint),
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Finally(Box<Formula>),
    Globally(Box<Formula>),
    Coalition(BTreeSet<String>, Box<Formula>),
}

/// A formula node. Equality and hashing ignore source spans.
#[derive(Clone, Debug)]
pub struct Formula {
    pub kind: FormulaKind,
    pub span: Span,
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.kind.hash(state)
    }
}

impl From<FormulaKind> for Formula {
    fn from(kind: FormulaKind) -> Self {
        Formula { kind, span: Span::default() }
    }
}

impl Formula {
    pub fn with_span(kind: FormulaKind, span: Span) -> Self {
        Formula { kind, span }
    }

    pub fn tt() -> Self {
        FormulaKind::Bool(true).into()
    }

    pub fn ff() -> Self {
        FormulaKind::Bool(false).into()
    }

    pub fn prop(name: impl Into<String>) -> Self {
        FormulaKind::Prop(name.into()).into()
    }

    pub fn constraint(c: Constraint) -> Self {
        FormulaKind::Constraint(c).into()
    }

    pub fn rel(rel: Rel, constant: i64) -> Self {
        Self::constraint(Constraint::new(rel, constant))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        FormulaKind::Not(Box::new(f)).into()
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        FormulaKind::Or(Box::new(a), Box::new(b)).into()
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        FormulaKind::And(Box::new(a), Box::new(b)).into()
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        FormulaKind::Implies(Box::new(a), Box::new(b)).into()
    }

    pub fn next(f: Formula) -> Self {
        FormulaKind::Next(Box::new(f)).into()
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        FormulaKind::Until(Box::new(a), Box::new(b)).into()
    }

    pub fn finally(f: Formula) -> Self {
        FormulaKind::Finally(Box::new(f)).into()
    }

    pub fn globally(f: Formula) -> Self {
        FormulaKind::Globally(Box::new(f)).into()
    }

    pub fn coalition<I, S>(agents: I, f: Formula) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let agents = agents.into_iter().map(Into::into).collect();
        FormulaKind::Coalition(agents, Box::new(f)).into()
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        use FormulaKind::*;
        match &self.kind {
            Bool(_) | Prop(_) | Constraint(_) => vec![],
            Not(a) | Next(a) | Finally(a) | Globally(a) | Coalition(_, a) => vec![a],
            Or(a, b) | And(a, b) | Implies(a, b) | Until(a, b) => vec![a, b],
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }

    /// Proposition names occurring anywhere in the formula.
    pub fn propositions(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let FormulaKind::Prop(p) = &f.kind {
                out.insert(p.clone());
            }
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    pub fn is_temporal(&self) -> bool {
        use FormulaKind::*;
        matches!(self.kind, Next(_) | Until(..) | Finally(_) | Globally(_))
    }

    /// True if the formula mentions no coalition and no counter constraint.
    pub fn is_pure_ltl(&self) -> bool {
        let mut pure = true;
        self.visit(&mut |f| {
            if matches!(f.kind, FormulaKind::Coalition(..) | FormulaKind::Constraint(_)) {
                pure = false;
            }
        });
        pure
    }
}
