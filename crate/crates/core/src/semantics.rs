//! Truth at a pointed model for the six systems.
//!
//! The classic systems read `Iw`, `Iu`, `Id` on plain Kripke models. The
//! hyperintensional ones add the grasp condition `t(φ) ⊑ 𝔎`: failing it
//! makes `Iw`/`Iu` true outright, while `Id` requires it. `[]` is the
//! global modality: it ranges over every world and ignores `R`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{AsModel, KripkeModel};
use crate::syntax::{bar, Formula, LanguageTag, Shape, SyntaxError, UnOp};
use crate::topic::{TopicError, Topics};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum System {
    IW,
    IU,
    DI,
    HIW,
    HIU,
    HDI,
}

impl System {
    pub const ALL: [System; 6] = [
        System::IW,
        System::IU,
        System::DI,
        System::HIW,
        System::HIU,
        System::HDI,
    ];

    pub fn language(self) -> LanguageTag {
        match self {
            System::IW => LanguageTag::ClassicIw,
            System::IU => LanguageTag::ClassicIu,
            System::DI => LanguageTag::ClassicId,
            System::HIW => LanguageTag::LIw,
            System::HIU => LanguageTag::LIu,
            System::HDI => LanguageTag::LIdG,
        }
    }

    /// Whether models of this system carry topics.
    pub fn is_topical(self) -> bool {
        matches!(self, System::HIW | System::HIU | System::HDI)
    }

    /// The system's ignorance operator.
    pub fn ignorance(self) -> UnOp {
        match self {
            System::IW | System::HIW => UnOp::IgnW,
            System::IU | System::HIU => UnOp::IgnU,
            System::DI | System::HDI => UnOp::IgnD,
        }
    }

    pub fn ignorance_of(self, f: Formula) -> Formula {
        Formula::unary(self.ignorance(), f)
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for System {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        System::ALL
            .into_iter()
            .find(|sys| sys.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown system `{s}` (expected iw, iu, di, hiw, hiu or hdi)"))
    }
}

/// Deliberately wrong readings of two clauses, used to check that the
/// fixture suite notices when the semantics drift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    #[default]
    Standard,
    /// `[]` quantifies over `R`-successors instead of all worlds.
    RelationalBox,
    /// The `Id` clause also looks at `w` itself when `Rww`.
    IdIncludesSelf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalConfig {
    pub system: System,
    pub variant: Variant,
}

impl EvalConfig {
    pub fn new(system: System) -> Self {
        EvalConfig {
            system,
            variant: Variant::Standard,
        }
    }

    pub fn with_variant(self, variant: Variant) -> Self {
        EvalConfig { variant, ..self }
    }
}

impl From<System> for EvalConfig {
    fn from(system: System) -> Self {
        EvalConfig::new(system)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("world `{0}` not found")]
    WorldNotFound(String),
    #[error("formula is not in the language of {system}: {source}")]
    LanguageMismatch { system: System, source: SyntaxError },
    #[error("{0} needs a model with topics")]
    MissingTopics(System),
    #[error(transparent)]
    Topic(#[from] TopicError),
    #[error("{0} has no grasp formula")]
    NoGraspReading(System),
}

/// A model, formula and configuration that passed the preconditions, so
/// evaluation itself cannot fail.
pub struct Evaluator<'a> {
    kripke: &'a KripkeModel,
    topics: Option<&'a Topics>,
    cfg: EvalConfig,
}

impl<'a> Evaluator<'a> {
    pub fn new<M: AsModel + ?Sized>(
        m: &'a M,
        f: &Formula,
        cfg: EvalConfig,
    ) -> Result<Self, EvalError> {
        f.check_language(cfg.system.language())
            .map_err(|source| EvalError::LanguageMismatch {
                system: cfg.system,
                source,
            })?;
        let topics = if cfg.system.is_topical() {
            let topics = m.topics().ok_or(EvalError::MissingTopics(cfg.system))?;
            topics.check_covers(f)?;
            Some(topics)
        } else {
            None
        };
        Ok(Evaluator {
            kripke: m.kripke(),
            topics,
            cfg,
        })
    }

    fn grasps(&self, f: &Formula) -> bool {
        self.topics
            .expect("topical system has topics")
            .grasps(f)
            .expect("atoms were checked on construction")
    }

    /// Truth of `f` at world index `w`. `f` must be a formula the
    /// evaluator was built for or a subformula of it.
    pub fn truth(&self, f: &Formula, w: usize) -> bool {
        let k = self.kripke;
        match f.shape() {
            Shape::Atom(p) => k.holds(p, w),
            Shape::Unary(UnOp::Not, g) => !self.truth(g, w),
            Shape::Binary(op, a, b) => {
                use crate::syntax::BinOp::*;
                let x = self.truth(a, w);
                match op {
                    And => x && self.truth(b, w),
                    Or => x || self.truth(b, w),
                    Imp => !x || self.truth(b, w),
                    Iff => x == self.truth(b, w),
                }
            }
            Shape::Unary(UnOp::Box, g) => match self.cfg.variant {
                Variant::RelationalBox => k.successors(w).iter().all(|&v| self.truth(g, v)),
                _ => (0..k.world_count()).all(|v| self.truth(g, v)),
            },
            Shape::Unary(UnOp::IgnW, g) => {
                if self.cfg.system.is_topical() && !self.grasps(g) {
                    return true;
                }
                let succ = k.successors(w);
                succ.iter().any(|&v| self.truth(g, v)) && succ.iter().any(|&v| !self.truth(g, v))
            }
            Shape::Unary(UnOp::IgnU, g) => {
                if self.cfg.system.is_topical() && !self.grasps(g) {
                    return true;
                }
                self.truth(g, w) && k.successors(w).iter().any(|&v| !self.truth(g, v))
            }
            Shape::Unary(UnOp::IgnD, g) => {
                if self.cfg.system.is_topical() && !self.grasps(g) {
                    return false;
                }
                let include_self = self.cfg.variant == Variant::IdIncludesSelf;
                self.truth(g, w)
                    && k.successors(w)
                        .iter()
                        .filter(|&&v| include_self || v != w)
                        .all(|&v| !self.truth(g, v))
            }
            Shape::Unary(UnOp::Grasp, g) => self.grasps(g),
        }
    }

    /// Whether `f` holds at every world.
    pub fn valid_in_model(&self, f: &Formula) -> bool {
        (0..self.kripke.world_count()).all(|w| self.truth(f, w))
    }

    /// First world where `f` fails.
    pub fn first_failure(&self, f: &Formula) -> Option<usize> {
        (0..self.kripke.world_count()).find(|&w| !self.truth(f, w))
    }
}

fn world_index<M: AsModel + ?Sized>(m: &M, w: &str) -> Result<usize, EvalError> {
    m.kripke()
        .world_index(w)
        .ok_or_else(|| EvalError::WorldNotFound(w.to_string()))
}

/// `M, w ⊨ f` under the semantics of `cfg.system`.
pub fn eval<M: AsModel + ?Sized>(
    m: &M,
    w: &str,
    f: &Formula,
    cfg: impl Into<EvalConfig>,
) -> Result<bool, EvalError> {
    let w = world_index(m, w)?;
    Ok(Evaluator::new(m, f, cfg.into())?.truth(f, w))
}

/// Truth of every distinct subformula at `w`, innermost first.
pub fn trace<M: AsModel + ?Sized>(
    m: &M,
    w: &str,
    f: &Formula,
    cfg: impl Into<EvalConfig>,
) -> Result<Vec<(Formula, bool)>, EvalError> {
    fn collect<'f>(f: &'f Formula, out: &mut Vec<&'f Formula>) {
        match f.shape() {
            Shape::Atom(_) => {}
            Shape::Unary(_, g) => collect(g, out),
            Shape::Binary(_, a, b) => {
                collect(a, out);
                collect(b, out);
            }
        }
        if !out.contains(&f) {
            out.push(f);
        }
    }
    let w = world_index(m, w)?;
    let ev = Evaluator::new(m, f, cfg.into())?;
    let mut subs = Vec::new();
    collect(f, &mut subs);
    Ok(subs
        .into_iter()
        .map(|g| (g.clone(), ev.truth(g, w)))
        .collect())
}

/// The object-language formula expressing "the agent grasps the topic of
/// `f`": `~Iw bar(f)`, `~Iu bar(f)`, or `G f`.
pub fn grasp_formula(f: &Formula, system: System) -> Result<Formula, EvalError> {
    let barred = || bar(f).expect("formulas always contain an atom");
    match system {
        System::HIW => Ok(Formula::not(Formula::IgnW(Box::new(barred())))),
        System::HIU => Ok(Formula::not(Formula::IgnU(Box::new(barred())))),
        System::HDI => Ok(Formula::Grasp(Box::new(f.clone()))),
        other => Err(EvalError::NoGraspReading(other)),
    }
}

/// Evaluates the grasp formula for `f` at `w`.
pub fn grasp_formula_truth<M: AsModel + ?Sized>(
    m: &M,
    w: &str,
    f: &Formula,
    cfg: impl Into<EvalConfig>,
) -> Result<bool, EvalError> {
    let cfg = cfg.into();
    eval(m, w, &grasp_formula(f, cfg.system)?, cfg)
}
