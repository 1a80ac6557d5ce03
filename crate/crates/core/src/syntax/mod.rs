//! Formulas of the ignorance languages: AST, canonical printing, `Var`, and
//! the excluded-middle conjunction ("bar") that shares a formula's topic.

mod parser;
mod pattern;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use parser::{parse, parse_pattern};
pub use pattern::{Meta, Pattern};

/// Unary connectives. Every one of them is topic-transparent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnOp {
    Not,
    Box,
    IgnW,
    IgnU,
    IgnD,
    Grasp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    And,
    Or,
    Imp,
    Iff,
}

/// Any connective, used for language membership checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operator {
    Unary(UnOp),
    Binary(BinOp),
}

impl UnOp {
    pub fn symbol(self) -> &'static str {
        match self {
            UnOp::Not => "~",
            UnOp::Box => "[]",
            UnOp::IgnW => "Iw",
            UnOp::IgnU => "Iu",
            UnOp::IgnD => "Id",
            UnOp::Grasp => "G",
        }
    }

    /// True for the operators whose truth is not settled by the Boolean
    /// value of their argument at the current world.
    pub fn is_modal(self) -> bool {
        !matches!(self, UnOp::Not)
    }
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::And => "&",
            BinOp::Or => "|",
            BinOp::Imp => "->",
            BinOp::Iff => "<->",
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operator::Unary(op) => f.write_str(op.symbol()),
            Operator::Binary(op) => f.write_str(op.symbol()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    IgnW(Box<Formula>),
    IgnU(Box<Formula>),
    IgnD(Box<Formula>),
    Grasp(Box<Formula>),
}

/// Borrowed view of a formula node that groups connectives by arity.
#[derive(Debug, Clone, Copy)]
pub enum Shape<'a> {
    Atom(&'a str),
    Unary(UnOp, &'a Formula),
    Binary(BinOp, &'a Formula, &'a Formula),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn unary(op: UnOp, f: Formula) -> Self {
        let f = Box::new(f);
        match op {
            UnOp::Not => Formula::Not(f),
            UnOp::Box => Formula::Box(f),
            UnOp::IgnW => Formula::IgnW(f),
            UnOp::IgnU => Formula::IgnU(f),
            UnOp::IgnD => Formula::IgnD(f),
            UnOp::Grasp => Formula::Grasp(f),
        }
    }

    pub fn binary(op: BinOp, a: Formula, b: Formula) -> Self {
        let (a, b) = (Box::new(a), Box::new(b));
        match op {
            BinOp::And => Formula::And(a, b),
            BinOp::Or => Formula::Or(a, b),
            BinOp::Imp => Formula::Imp(a, b),
            BinOp::Iff => Formula::Iff(a, b),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::unary(UnOp::Not, f)
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::binary(BinOp::And, a, b)
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::binary(BinOp::Or, a, b)
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::binary(BinOp::Imp, a, b)
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::binary(BinOp::Iff, a, b)
    }

    pub fn shape(&self) -> Shape<'_> {
        match self {
            Formula::Atom(p) => Shape::Atom(p),
            Formula::Not(f) => Shape::Unary(UnOp::Not, f),
            Formula::Box(f) => Shape::Unary(UnOp::Box, f),
            Formula::IgnW(f) => Shape::Unary(UnOp::IgnW, f),
            Formula::IgnU(f) => Shape::Unary(UnOp::IgnU, f),
            Formula::IgnD(f) => Shape::Unary(UnOp::IgnD, f),
            Formula::Grasp(f) => Shape::Unary(UnOp::Grasp, f),
            Formula::And(a, b) => Shape::Binary(BinOp::And, a, b),
            Formula::Or(a, b) => Shape::Binary(BinOp::Or, a, b),
            Formula::Imp(a, b) => Shape::Binary(BinOp::Imp, a, b),
            Formula::Iff(a, b) => Shape::Binary(BinOp::Iff, a, b),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self.shape() {
            Shape::Atom(_) => 1,
            Shape::Unary(_, f) => 1 + f.size(),
            Shape::Binary(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self.shape() {
            Shape::Atom(_) => 0,
            Shape::Unary(_, f) => 1 + f.depth(),
            Shape::Binary(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Calls `visit` on every atom occurrence, left to right.
    pub fn for_each_atom<'a>(&'a self, visit: &mut impl FnMut(&'a str)) {
        match self.shape() {
            Shape::Atom(p) => visit(p),
            Shape::Unary(_, f) => f.for_each_atom(visit),
            Shape::Binary(_, a, b) => {
                a.for_each_atom(visit);
                b.for_each_atom(visit);
            }
        }
    }

    /// `Var(f)`: the atom names occurring in `f`, in lexicographic order.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.for_each_atom(&mut |p| {
            if !out.contains(p) {
                out.insert(p.to_string());
            }
        });
        out
    }

    /// The set of connectives used anywhere in the formula.
    pub fn operators(&self) -> BTreeSet<Operator> {
        fn walk(f: &Formula, out: &mut BTreeSet<Operator>) {
            match f.shape() {
                Shape::Atom(_) => {}
                Shape::Unary(op, g) => {
                    out.insert(Operator::Unary(op));
                    walk(g, out);
                }
                Shape::Binary(op, a, b) => {
                    out.insert(Operator::Binary(op));
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut out);
        out
    }

    /// Fails with the first operator the language does not admit.
    pub fn check_language(&self, lang: LanguageTag) -> Result<(), SyntaxError> {
        match self.operators().into_iter().find(|op| !lang.admits(*op)) {
            Some(op) => Err(SyntaxError::Language {
                operator: op.to_string(),
                lang,
            }),
            None => Ok(()),
        }
    }
}

/// Conjunction of `x | ~x` over `Var(f)`, atoms in lexicographic order and
/// conjunction associated to the left. Formulas with equal `Var` get
/// structurally identical bars.
pub fn bar(f: &Formula) -> Result<Formula, SyntaxError> {
    bar_of_vars(&f.vars())
}

pub fn bar_of_vars(vars: &BTreeSet<String>) -> Result<Formula, SyntaxError> {
    vars.iter()
        .map(|x| {
            Formula::or(
                Formula::atom(x.clone()),
                Formula::not(Formula::atom(x.clone())),
            )
        })
        .reduce(Formula::and)
        .ok_or(SyntaxError::EmptyVars)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.shape() {
            Shape::Atom(p) => f.write_str(p),
            Shape::Unary(UnOp::Not, g) => write!(f, "~{g}"),
            Shape::Unary(op, g) => write!(f, "{} {g}", op.symbol()),
            Shape::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
        }
    }
}

/// Which object language a formula is read in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LanguageTag {
    /// Hyperintensional ignorance whether, with the global box.
    LIw,
    /// Hyperintensional unknown truth, with the global box.
    LIu,
    /// Hyperintensional disbelieving ignorance with grasping and the box.
    LIdG,
    ClassicIw,
    ClassicIu,
    ClassicId,
}

impl LanguageTag {
    pub const ALL: [LanguageTag; 6] = [
        LanguageTag::LIw,
        LanguageTag::LIu,
        LanguageTag::LIdG,
        LanguageTag::ClassicIw,
        LanguageTag::ClassicIu,
        LanguageTag::ClassicId,
    ];

    /// The unary operators available besides negation.
    pub fn modal_ops(self) -> &'static [UnOp] {
        match self {
            LanguageTag::LIw => &[UnOp::Box, UnOp::IgnW],
            LanguageTag::LIu => &[UnOp::Box, UnOp::IgnU],
            LanguageTag::LIdG => &[UnOp::Box, UnOp::IgnD, UnOp::Grasp],
            LanguageTag::ClassicIw => &[UnOp::IgnW],
            LanguageTag::ClassicIu => &[UnOp::IgnU],
            LanguageTag::ClassicId => &[UnOp::IgnD],
        }
    }

    pub fn admits(self, op: Operator) -> bool {
        match op {
            Operator::Binary(_) | Operator::Unary(UnOp::Not) => true,
            Operator::Unary(u) => self.modal_ops().contains(&u),
        }
    }
}

impl fmt::Display for LanguageTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LanguageTag::LIw => "L_IW",
            LanguageTag::LIu => "L_IU",
            LanguageTag::LIdG => "L_IDG",
            LanguageTag::ClassicIw => "L_CLASSIC_IW",
            LanguageTag::ClassicIu => "L_CLASSIC_IU",
            LanguageTag::ClassicId => "L_CLASSIC_ID",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("syntax error at byte {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    #[error("operator `{operator}` is not part of {lang}")]
    Language { operator: String, lang: LanguageTag },
    #[error("formula has no propositional variables")]
    EmptyVars,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn prints_canonical_forms() {
        assert_eq!(Formula::IgnW(Box::new(p())).to_string(), "Iw p");
        assert_eq!(Formula::and(p(), q()).to_string(), "(p & q)");
        assert_eq!(
            Formula::not(Formula::Box(Box::new(p()))).to_string(),
            "~[] p"
        );
    }

    #[test]
    fn vars_examples() {
        let f = Formula::and(p(), Formula::or(q(), Formula::not(q())));
        assert_eq!(f.vars(), BTreeSet::from(["p".into(), "q".into()]));
        assert_eq!(
            Formula::IgnW(Box::new(p())).vars(),
            BTreeSet::from(["p".into()])
        );
        assert_eq!(
            Formula::not(Formula::not(p())).vars(),
            BTreeSet::from(["p".into()])
        );
    }

    #[test]
    fn bar_examples() {
        let em = |x: Formula| Formula::or(x.clone(), Formula::not(x));
        assert_eq!(bar(&p()).unwrap(), em(p()));
        let expected = Formula::and(em(p()), em(q()));
        assert_eq!(bar(&Formula::and(q(), p())).unwrap(), expected);
        assert_eq!(
            bar(&Formula::IgnW(Box::new(Formula::imp(p(), q())))).unwrap(),
            expected
        );
    }

    #[test]
    fn bar_of_nothing_is_an_error() {
        assert_eq!(bar_of_vars(&BTreeSet::new()), Err(SyntaxError::EmptyVars));
    }

    #[test]
    fn language_membership() {
        let f = Formula::Grasp(Box::new(p()));
        assert!(f.check_language(LanguageTag::LIdG).is_ok());
        assert!(matches!(
            f.check_language(LanguageTag::LIw),
            Err(SyntaxError::Language { .. })
        ));
        let boxed = Formula::Box(Box::new(p()));
        assert!(boxed.check_language(LanguageTag::ClassicIw).is_err());
        assert!(boxed.check_language(LanguageTag::LIu).is_ok());
    }
}
