use std::collections::BTreeSet;
use std::fmt;

use super::{BinOp, Formula, Shape, UnOp};

/// A schematic metavariable such as `PHI`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Meta(pub String);

impl fmt::Display for Meta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A formula with metavariables. `Bar(m)` stands for the bar of whatever
/// `m` is bound to.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pattern {
    Atom(String),
    Meta(Meta),
    Bar(Meta),
    Unary(UnOp, Box<Pattern>),
    Binary(BinOp, Box<Pattern>, Box<Pattern>),
}

impl Pattern {
    pub fn unary(op: UnOp, p: Pattern) -> Self {
        Pattern::Unary(op, Box::new(p))
    }

    pub fn binary(op: BinOp, a: Pattern, b: Pattern) -> Self {
        Pattern::Binary(op, Box::new(a), Box::new(b))
    }

    /// Metavariables occurring in the pattern, including under `Bar`.
    pub fn metas(&self) -> BTreeSet<Meta> {
        let mut out = BTreeSet::new();
        self.collect_metas(&mut out);
        out
    }

    fn collect_metas(&self, out: &mut BTreeSet<Meta>) {
        match self {
            Pattern::Atom(_) => {}
            Pattern::Meta(m) | Pattern::Bar(m) => {
                out.insert(m.clone());
            }
            Pattern::Unary(_, p) => p.collect_metas(out),
            Pattern::Binary(_, a, b) => {
                a.collect_metas(out);
                b.collect_metas(out);
            }
        }
    }

    /// The formula this pattern denotes when it has no metavariables.
    pub fn to_formula(&self) -> Option<Formula> {
        Some(match self {
            Pattern::Atom(p) => Formula::Atom(p.clone()),
            Pattern::Meta(_) | Pattern::Bar(_) => return None,
            Pattern::Unary(op, p) => Formula::unary(*op, p.to_formula()?),
            Pattern::Binary(op, a, b) => Formula::binary(*op, a.to_formula()?, b.to_formula()?),
        })
    }

    pub fn from_formula(f: &Formula) -> Self {
        match f.shape() {
            Shape::Atom(p) => Pattern::Atom(p.to_string()),
            Shape::Unary(op, g) => Pattern::unary(op, Pattern::from_formula(g)),
            Shape::Binary(op, a, b) => {
                Pattern::binary(op, Pattern::from_formula(a), Pattern::from_formula(b))
            }
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Atom(p) => f.write_str(p),
            Pattern::Meta(m) => write!(f, "{m}"),
            Pattern::Bar(m) => write!(f, "BAR({m})"),
            Pattern::Unary(UnOp::Not, p) => write!(f, "~{p}"),
            Pattern::Unary(op, p) => write!(f, "{} {p}", op.symbol()),
            Pattern::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}
