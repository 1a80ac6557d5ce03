//! Axiom catalogs, schema matching, the tautology oracle and the Hilbert
//! proof checker.
//!
//! Every system has classical propositional logic available: `TAUT` lines,
//! modus ponens, and the `CPL` rule, which accepts a line when the
//! conjunction of the cited lines tautologically implies it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::semantics::System;
use crate::syntax::{
    bar, parse, parse_pattern, BinOp, Formula, Meta, Pattern, Shape, SyntaxError, UnOp,
};

pub type Subst = BTreeMap<Meta, Formula>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SideCondition {
    /// `Var(sub) ⊆ Var(sup)`.
    VarsSubset { sub: Meta, sup: Meta },
}

impl SideCondition {
    pub fn holds(&self, s: &Subst) -> bool {
        match self {
            SideCondition::VarsSubset { sub, sup } => match (s.get(sub), s.get(sup)) {
                (Some(a), Some(b)) => a.vars().is_subset(&b.vars()),
                _ => false,
            },
        }
    }
}

impl fmt::Display for SideCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SideCondition::VarsSubset { sub, sup } => write!(f, "Var({sub}) ⊆ Var({sup})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    pub name: String,
    pub pattern: Pattern,
    pub side: Option<SideCondition>,
}

impl Schema {
    pub fn new(name: &str, pattern: &str) -> Self {
        Schema {
            name: name.to_string(),
            pattern: parse_pattern(pattern).unwrap_or_else(|e| panic!("schema {name}: {e}")),
            side: None,
        }
    }

    fn with_vars_subset(mut self, sub: &str, sup: &str) -> Self {
        self.side = Some(SideCondition::VarsSubset {
            sub: Meta(sub.into()),
            sup: Meta(sup.into()),
        });
        self
    }

    /// Matches `f` against the pattern and checks the side condition.
    pub fn matches(&self, f: &Formula) -> Option<Subst> {
        let s = match_pattern(&self.pattern, f)?;
        self.side_holds(&s).then_some(s)
    }

    pub fn side_holds(&self, s: &Subst) -> bool {
        self.side.as_ref().is_none_or(|c| c.holds(s))
    }

    /// The instance under `s`, if `s` binds every metavariable and meets the
    /// side condition.
    pub fn instantiate(&self, s: &Subst) -> Option<Formula> {
        if !self.side_holds(s) {
            return None;
        }
        instantiate(&self.pattern, s)
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, self.pattern)?;
        if let Some(side) = &self.side {
            write!(f, ", if {side}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleKind {
    /// From instances of `premises` infer the instance of `conclusion`.
    Schematic {
        premises: Vec<Pattern>,
        conclusion: Pattern,
    },
    /// From a theorem infer any result of substituting formulas for its
    /// atoms.
    UniformSubstitution,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub kind: RuleKind,
}

impl Rule {
    fn schematic(name: &str, premises: &[&str], conclusion: &str) -> Self {
        let p = |t: &str| parse_pattern(t).unwrap_or_else(|e| panic!("rule {name}: {e}"));
        Rule {
            name: name.to_string(),
            kind: RuleKind::Schematic {
                premises: premises.iter().map(|t| p(t)).collect(),
                conclusion: p(conclusion),
            },
        }
    }

    pub fn arity(&self) -> usize {
        match &self.kind {
            RuleKind::Schematic { premises, .. } => premises.len(),
            RuleKind::UniformSubstitution => 1,
        }
    }

    /// The conclusion this rule draws from `premises`, for schematic rules.
    pub fn apply(&self, premises: &[Formula]) -> Option<Formula> {
        let RuleKind::Schematic {
            premises: pats,
            conclusion,
        } = &self.kind
        else {
            return None;
        };
        if pats.len() != premises.len() {
            return None;
        }
        let mut s = Subst::new();
        let mut bars = Vec::new();
        for (p, f) in pats.iter().zip(premises) {
            if !match_into(p, f, &mut s, &mut bars) {
                return None;
            }
        }
        if !resolve_bars(&mut s, bars) {
            return None;
        }
        instantiate(conclusion, &s)
    }

    /// Whether `conclusion` follows from `premises` by this rule.
    pub fn licenses(&self, premises: &[Formula], conclusion: &Formula) -> bool {
        match &self.kind {
            RuleKind::Schematic { .. } => self.apply(premises).as_ref() == Some(conclusion),
            RuleKind::UniformSubstitution => {
                premises.len() == 1 && substitution_instance(&premises[0], conclusion)
            }
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RuleKind::Schematic {
                premises,
                conclusion,
            } => {
                let ps: Vec<String> = premises.iter().map(|p| format!("⊢ {p}")).collect();
                write!(
                    f,
                    "{}: from {} infer ⊢ {conclusion}",
                    self.name,
                    ps.join(", ")
                )
            }
            RuleKind::UniformSubstitution => write!(f, "{}: uniform substitution", self.name),
        }
    }
}

/// An item of a system's axiom list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomEntry {
    /// All classical tautologies, with modus ponens.
    Tautologies,
    Schema(Schema),
    /// A named family such as the S5 axioms and rules for `[]`.
    Group {
        name: String,
        schemata: Vec<Schema>,
        rules: Vec<Rule>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    pub system: System,
    pub axioms: Vec<AxiomEntry>,
    pub rules: Vec<Rule>,
}

impl Catalog {
    /// All schemata, with groups flattened.
    pub fn schemata(&self) -> Vec<&Schema> {
        let mut out = Vec::new();
        for entry in &self.axioms {
            match entry {
                AxiomEntry::Tautologies => {}
                AxiomEntry::Schema(s) => out.push(s),
                AxiomEntry::Group { schemata, .. } => out.extend(schemata),
            }
        }
        out
    }

    pub fn schema(&self, name: &str) -> Option<&Schema> {
        self.schemata().into_iter().find(|s| s.name == name)
    }

    /// Rules of the system, including those of axiom groups.
    pub fn all_rules(&self) -> Vec<&Rule> {
        let mut out: Vec<&Rule> = self.rules.iter().collect();
        for entry in &self.axioms {
            if let AxiomEntry::Group { rules, .. } = entry {
                out.extend(rules);
            }
        }
        out
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.all_rules().into_iter().find(|r| r.name == name)
    }
}

impl fmt::Display for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "system {}", self.system)?;
        for entry in &self.axioms {
            match entry {
                AxiomEntry::Tautologies => {
                    writeln!(f, "  CPL: all classical tautologies, modus ponens")?
                }
                AxiomEntry::Schema(s) => writeln!(f, "  {s}")?,
                AxiomEntry::Group {
                    name,
                    schemata,
                    rules,
                } => {
                    writeln!(f, "  {name}:")?;
                    for s in schemata {
                        writeln!(f, "    {s}")?;
                    }
                    for r in rules {
                        writeln!(f, "    {r}")?;
                    }
                }
            }
        }
        for r in &self.rules {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

fn s5_group() -> AxiomEntry {
    AxiomEntry::Group {
        name: "S5".into(),
        schemata: vec![
            Schema::new("K_box", "[] (PHI -> PSI) -> ([] PHI -> [] PSI)"),
            Schema::new("T_box", "[] PHI -> PHI"),
            Schema::new("4_box", "[] PHI -> [] [] PHI"),
            Schema::new("5_box", "~[] PHI -> [] ~[] PHI"),
        ],
        rules: vec![Rule::schematic("NEC_box", &["PHI"], "[] PHI")],
    }
}

fn us() -> Rule {
    Rule {
        name: "US".into(),
        kind: RuleKind::UniformSubstitution,
    }
}

/// The axioms and rules of `system`.
pub fn catalog(system: System) -> Catalog {
    use AxiomEntry::Schema as S;
    let (axioms, rules) = match system {
        System::IW => (
            vec![
                AxiomEntry::Tautologies,
                S(Schema::new("A1_IW", "(~Iw (PHI -> PSI) & ~Iw (~PHI -> PSI)) -> ~Iw PSI")),
                S(Schema::new("A2_IW", "~Iw PHI -> (~Iw (PHI -> PSI) | ~Iw (~PHI -> CHI))")),
                S(Schema::new("A3_IW", "~Iw PHI <-> ~Iw ~PHI")),
            ],
            vec![
                Rule::schematic("NEC_IW", &["PHI"], "~Iw PHI"),
                Rule::schematic("RE_IW", &["PHI <-> PSI"], "~Iw PHI <-> ~Iw PSI"),
            ],
        ),
        System::IU => (
            vec![
                AxiomEntry::Tautologies,
                // The constant truth is written as the bar of an arbitrary formula.
                S(Schema::new("A1_IU", "~Iu BAR(PHI)")),
                S(Schema::new("A2_IU", "~PHI -> ~Iu PHI")),
                S(Schema::new("A3_IU", "(~Iu PHI & ~Iu PSI) -> ~Iu (PHI & PSI)")),
            ],
            vec![
                Rule::schematic("R_IU", &["PHI -> PSI"], "(~Iu PHI & PHI) -> ~Iu PSI"),
                us(),
            ],
        ),
        System::DI => (
            vec![
                AxiomEntry::Tautologies,
                S(Schema::new("A1_DI", "Id PHI -> PHI")),
                S(Schema::new("A2_DI", "(Id PHI & Id PSI) -> Id (PHI | PSI)")),
            ],
            vec![
                Rule::schematic("IR_DI", &["PHI -> PSI"], "PHI -> (Id PSI -> Id PHI)"),
                us(),
            ],
        ),
        System::HIW => (
            vec![
                AxiomEntry::Tautologies,
                s5_group(),
                S(Schema::new("Iw_iff", "Iw PHI <-> Iw ~PHI")),
                S(Schema::new(
                    "A1_Iw",
                    "(~Iw PHI & ~Iw BAR(PSI) & ~Iw BAR(CHI)) -> (~Iw (PHI -> PSI) | ~Iw (~PHI -> CHI))",
                )),
                S(Schema::new("A2_Iw", "~Iw BAR(PHI) -> ~Iw (PHI | ~PHI)")),
                S(Schema::new("A3_Iw", "(~Iw PHI & ~Iw PSI) -> ~Iw (PHI & PSI)")),
                S(Schema::new("A4_Iw", "~Iw BAR(PHI) -> [] ~Iw BAR(PHI)")),
                S(Schema::new("A5_Iw", "Iw BAR(PHI) -> Iw PHI")),
                S(Schema::new(
                    "A6_Iw",
                    "(~Iw (PHI -> ~PSI) & ~Iw PHI & ~Iw (PSI -> PHI)) -> ~Iw PSI",
                )),
                S(Schema::new("A7_Iw", "~Iw BAR(PHI) -> ~Iw BAR(PSI)").with_vars_subset("PSI", "PHI")),
            ],
            vec![
                Rule::schematic("NEC_Iw", &["PHI"], "~Iw BAR(PHI) -> ~Iw PHI"),
                Rule::schematic(
                    "RE_Iw",
                    &["PHI <-> PSI"],
                    "(~Iw BAR(PHI) & ~Iw BAR(PSI)) -> (~Iw PHI <-> ~Iw PSI)",
                ),
            ],
        ),
        System::HIU => (
            vec![
                AxiomEntry::Tautologies,
                s5_group(),
                S(Schema::new("A1_Iu", "(Iu PHI & ~Iu BAR(PHI)) -> PHI")),
                S(Schema::new("A2_Iu", "~Iu BAR(PHI) -> ~Iu (PHI | ~PHI)")),
                S(Schema::new("A3_Iu", "(~Iu PHI & ~Iu PSI) -> ~Iu (PHI & PSI)")),
                S(Schema::new("A4_Iu", "~Iu BAR(PHI) -> [] ~Iu BAR(PHI)")),
                S(Schema::new("A5_Iu", "Iu BAR(PHI) -> Iu PHI")),
                S(Schema::new(
                    "A6_Iu",
                    "(PHI & ~Iu BAR(PHI) & ~Iu BAR(PSI) & Iu (PHI | PSI)) -> Iu PHI",
                )),
                S(Schema::new("A7_Iu", "(~Iu (PHI | PSI) & ~Iu (PHI -> PSI)) -> ~Iu PSI")),
                S(Schema::new("A8_Iu", "~Iu BAR(PHI) -> ~Iu BAR(PSI)").with_vars_subset("PSI", "PHI")),
            ],
            vec![
                Rule::schematic("NEC_Iu", &["PHI"], "~Iu BAR(PHI) -> ~Iu PHI"),
                Rule::schematic(
                    "RE_Iu",
                    &["PHI <-> PSI"],
                    "(~Iu BAR(PHI) & ~Iu BAR(PSI)) -> (~Iu PHI <-> ~Iu PSI)",
                ),
            ],
        ),
        System::HDI => (
            vec![
                AxiomEntry::Tautologies,
                s5_group(),
                S(Schema::new("G1", "G PHI <-> G ~PHI")),
                S(Schema::new("G2", "G PHI <-> G Id PHI")),
                S(Schema::new("G3", "G PHI <-> G [] PHI")),
                S(Schema::new("G4", "(G PHI & G PSI) <-> G (PHI & PSI)")),
                S(Schema::new("G5", "G PHI -> [] G PHI")),
                S(Schema::new("A1_Id", "Id PHI -> PHI")),
                S(Schema::new("A2_Id", "(Id PHI & Id PSI) -> Id (PHI | PSI)")),
                S(Schema::new("A3_Id", "Id PHI -> G PHI")),
            ],
            vec![Rule::schematic(
                "HIR",
                &["PHI -> PSI"],
                "PHI -> (Id PSI -> (G PHI -> Id PHI))",
            )],
        ),
    };
    Catalog {
        system,
        axioms,
        rules,
    }
}

/// Same as [`catalog`].
pub fn list_schemata(system: System) -> Catalog {
    catalog(system)
}

fn match_into<'f>(
    p: &Pattern,
    f: &'f Formula,
    s: &mut Subst,
    bars: &mut Vec<(Meta, &'f Formula)>,
) -> bool {
    match (p, f.shape()) {
        (Pattern::Meta(m), _) => match s.get(m) {
            Some(g) => g == f,
            None => {
                s.insert(m.clone(), f.clone());
                true
            }
        },
        (Pattern::Bar(m), _) => {
            bars.push((m.clone(), f));
            true
        }
        (Pattern::Atom(a), Shape::Atom(b)) => a == b,
        (Pattern::Unary(op, q), Shape::Unary(op2, g)) => *op == op2 && match_into(q, g, s, bars),
        (Pattern::Binary(op, a, b), Shape::Binary(op2, x, y)) => {
            *op == op2 && match_into(a, x, s, bars) && match_into(b, y, s, bars)
        }
        _ => false,
    }
}

/// Checks `BAR(m)` positions once the ordinary positions are bound. A
/// metavariable that only occurs under `BAR` is bound to the matched bar
/// itself, which has the same atoms as any formula it could stand for.
fn resolve_bars(s: &mut Subst, bars: Vec<(Meta, &Formula)>) -> bool {
    for (m, g) in bars {
        match s.get(&m) {
            Some(bound) => {
                if bar(bound).ok().as_ref() != Some(g) {
                    return false;
                }
            }
            None => {
                if bar(g).ok().as_ref() != Some(g) {
                    return false;
                }
                s.insert(m, g.clone());
            }
        }
    }
    true
}

/// Structural match of `f` against `p`, leftmost-outermost.
pub fn match_pattern(p: &Pattern, f: &Formula) -> Option<Subst> {
    let mut s = Subst::new();
    let mut bars = Vec::new();
    (match_into(p, f, &mut s, &mut bars) && resolve_bars(&mut s, bars)).then_some(s)
}

/// Same as [`Schema::matches`].
pub fn match_schema(schema: &Schema, f: &Formula) -> Option<Subst> {
    schema.matches(f)
}

/// Replaces metavariables by their bindings; `BAR(m)` becomes the bar of
/// the binding. `None` if a metavariable is unbound.
pub fn instantiate(p: &Pattern, s: &Subst) -> Option<Formula> {
    Some(match p {
        Pattern::Atom(a) => Formula::atom(a.as_str()),
        Pattern::Meta(m) => s.get(m)?.clone(),
        Pattern::Bar(m) => bar(s.get(m)?).ok()?,
        Pattern::Unary(op, q) => Formula::unary(*op, instantiate(q, s)?),
        Pattern::Binary(op, a, b) => Formula::binary(*op, instantiate(a, s)?, instantiate(b, s)?),
    })
}

/// Whether `instance` results from `theorem` by substituting formulas for
/// atoms.
pub fn substitution_instance(theorem: &Formula, instance: &Formula) -> bool {
    fn lift(f: &Formula) -> Pattern {
        match f.shape() {
            Shape::Atom(p) => Pattern::Meta(Meta(format!("'{p}"))),
            Shape::Unary(op, g) => Pattern::unary(op, lift(g)),
            Shape::Binary(op, a, b) => Pattern::binary(op, lift(a), lift(b)),
        }
    }
    match_pattern(&lift(theorem), instance).is_some()
}

pub const MAX_TAUT_ATOMS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TautError {
    #[error("{count} distinct propositional atoms after abstraction, more than {MAX_TAUT_ATOMS}")]
    TooManyAtoms { count: usize },
}

enum Prop {
    Var(usize),
    Not(Box<Prop>),
    Bin(BinOp, Box<Prop>, Box<Prop>),
}

impl Prop {
    fn eval(&self, bits: u32) -> bool {
        match self {
            Prop::Var(i) => bits >> i & 1 == 1,
            Prop::Not(p) => !p.eval(bits),
            Prop::Bin(op, a, b) => {
                let x = a.eval(bits);
                match op {
                    BinOp::And => x && b.eval(bits),
                    BinOp::Or => x || b.eval(bits),
                    BinOp::Imp => !x || b.eval(bits),
                    BinOp::Iff => x == b.eval(bits),
                }
            }
        }
    }
}

fn abstract_prop<'f>(f: &'f Formula, leaves: &mut Vec<&'f Formula>) -> Prop {
    match f.shape() {
        Shape::Unary(UnOp::Not, g) => Prop::Not(Box::new(abstract_prop(g, leaves))),
        Shape::Binary(op, a, b) => Prop::Bin(
            op,
            Box::new(abstract_prop(a, leaves)),
            Box::new(abstract_prop(b, leaves)),
        ),
        _ => {
            let i = leaves.iter().position(|l| *l == f).unwrap_or_else(|| {
                leaves.push(f);
                leaves.len() - 1
            });
            Prop::Var(i)
        }
    }
}

/// The propositional skeleton leaves of `f`: atoms and maximal subformulas
/// headed by `[]`, an ignorance operator or `G`, without duplicates.
pub fn skeleton_leaves(f: &Formula) -> Vec<&Formula> {
    let mut leaves = Vec::new();
    abstract_prop(f, &mut leaves);
    leaves
}

/// Whether `f` is a substitution instance of a classical tautology, decided
/// by truth table over its skeleton leaves.
pub fn taut(f: &Formula) -> Result<bool, TautError> {
    let mut leaves = Vec::new();
    let prop = abstract_prop(f, &mut leaves);
    if leaves.len() > MAX_TAUT_ATOMS {
        return Err(TautError::TooManyAtoms {
            count: leaves.len(),
        });
    }
    Ok((0..1u32 << leaves.len()).all(|bits| prop.eval(bits)))
}

/// How a proof line is justified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ByRepr", into = "ByRepr")]
pub enum Justification {
    /// An instance of the named schema. `sub` may give bindings as formula
    /// text; when `contra` is set the line is the contrapositive
    /// `~B -> ~A` of the instance `A -> B`.
    Axiom {
        name: String,
        sub: BTreeMap<String, String>,
        contra: bool,
    },
    Taut,
    /// `Mp(i, j)`: line `j` is line `i` implying this line.
    Mp(usize, usize),
    Rule {
        name: String,
        from: Vec<usize>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ByRepr {
    Tag(String),
    Axiom {
        axiom: String,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        sub: BTreeMap<String, String>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        contra: bool,
    },
    Mp {
        mp: [usize; 2],
    },
    Rule {
        rule: String,
        from: Vec<usize>,
    },
}

impl TryFrom<ByRepr> for Justification {
    type Error = String;

    fn try_from(r: ByRepr) -> Result<Self, String> {
        Ok(match r {
            ByRepr::Tag(t) if t == "TAUT" => Justification::Taut,
            ByRepr::Tag(t) => return Err(format!("unknown justification `{t}`")),
            ByRepr::Axiom { axiom, sub, contra } => Justification::Axiom {
                name: axiom,
                sub,
                contra,
            },
            ByRepr::Mp { mp: [i, j] } => Justification::Mp(i, j),
            ByRepr::Rule { rule, from } => Justification::Rule { name: rule, from },
        })
    }
}

impl From<Justification> for ByRepr {
    fn from(j: Justification) -> Self {
        match j {
            Justification::Taut => ByRepr::Tag("TAUT".into()),
            Justification::Axiom { name, sub, contra } => ByRepr::Axiom {
                axiom: name,
                sub,
                contra,
            },
            Justification::Mp(i, j) => ByRepr::Mp { mp: [i, j] },
            Justification::Rule { name, from } => ByRepr::Rule { rule: name, from },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProofLine {
    #[serde(rename = "i")]
    pub index: usize,
    #[serde(rename = "f")]
    pub formula: String,
    pub by: Justification,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Proof {
    pub lines: Vec<ProofLine>,
}

impl Proof {
    pub fn from_json(text: &str) -> Result<Self, ProofError> {
        serde_json::from_str(text).map_err(|e| ProofError::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let lines: Vec<String> = self
            .lines
            .iter()
            .map(|l| serde_json::to_string(l).expect("proof line serializes"))
            .collect();
        format!("[\n  {}\n]\n", lines.join(",\n  "))
    }

    /// The proof with the line labelled `index` removed.
    pub fn without_line(&self, index: usize) -> Proof {
        Proof {
            lines: self
                .lines
                .iter()
                .filter(|l| l.index != index)
                .cloned()
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("malformed proof file: {0}")]
    Format(String),
    #[error("the proof has no lines")]
    Empty,
    #[error("line {line}: {source}")]
    Parse { line: usize, source: SyntaxError },
    #[error("line {line}: label does not follow line {previous}")]
    OutOfOrder { line: usize, previous: usize },
    #[error("line {line}: bad axiom instance: {reason}")]
    BadAxiomInstance { line: usize, reason: String },
    #[error("line {line}: not a tautology")]
    NotTaut { line: usize },
    #[error("line {line}: {source}")]
    TooManyAtoms { line: usize, source: TautError },
    #[error("line {line}: bad modus ponens: {reason}")]
    BadMP { line: usize, reason: String },
    #[error("line {line}: bad rule application: {reason}")]
    BadRuleApplication { line: usize, reason: String },
    #[error("line {line}: cites line {cited}, which does not come earlier")]
    ForwardReference { line: usize, cited: usize },
    #[error("line {line}: the last line is not the goal {goal}")]
    GoalNotReached { line: usize, goal: String },
}

impl ProofError {
    /// The label of the offending line, if the error is local to one.
    pub fn line(&self) -> Option<usize> {
        use ProofError::*;
        match self {
            Format(_) | Empty => None,
            Parse { line, .. }
            | OutOfOrder { line, .. }
            | BadAxiomInstance { line, .. }
            | NotTaut { line }
            | TooManyAtoms { line, .. }
            | BadMP { line, .. }
            | BadRuleApplication { line, .. }
            | ForwardReference { line, .. }
            | GoalNotReached { line, .. } => Some(*line),
        }
    }
}

struct Checker<'a> {
    system: System,
    catalog: &'a Catalog,
    proved: BTreeMap<usize, Formula>,
}

impl Checker<'_> {
    fn cited(
        &self,
        line: usize,
        cited: usize,
        missing: impl Fn(String) -> ProofError,
    ) -> Result<&Formula, ProofError> {
        if cited >= line {
            return Err(ProofError::ForwardReference { line, cited });
        }
        self.proved
            .get(&cited)
            .ok_or_else(|| missing(format!("line {cited} does not exist")))
    }

    fn axiom(
        &self,
        line: usize,
        f: &Formula,
        name: &str,
        sub: &BTreeMap<String, String>,
        contra: bool,
    ) -> Result<(), ProofError> {
        let bad = |reason: String| ProofError::BadAxiomInstance { line, reason };
        let schema = self
            .catalog
            .schema(name)
            .ok_or_else(|| bad(format!("{} has no axiom {name}", self.system)))?;
        let target = if contra {
            match f.shape() {
                Shape::Binary(BinOp::Imp, Formula::Not(nb), Formula::Not(na)) => {
                    Formula::imp((**na).clone(), (**nb).clone())
                }
                _ => return Err(bad("a contrapositive must have the form ~B -> ~A".into())),
            }
        } else {
            f.clone()
        };
        let metas = schema.pattern.metas();
        let given: Subst = sub
            .iter()
            .map(|(m, text)| {
                parse(text, self.system.language())
                    .map(|g| (Meta(m.clone()), g))
                    .map_err(|source| ProofError::Parse { line, source })
            })
            .collect::<Result<_, _>>()?;
        if let Some(extra) = given.keys().find(|m| !metas.contains(m)) {
            return Err(bad(format!("{name} has no metavariable {extra}")));
        }
        let ok = if given.len() == metas.len() {
            schema.instantiate(&given).as_ref() == Some(&target)
        } else {
            match schema.matches(&target) {
                Some(found) => given.iter().all(|(m, g)| {
                    let bound = &found[m];
                    bound == g || (only_under_bar(&schema.pattern, m) && bound.vars() == g.vars())
                }),
                None => false,
            }
        };
        if ok {
            Ok(())
        } else {
            Err(bad(format!("not an instance of {schema}")))
        }
    }

    fn line(&mut self, l: &ProofLine) -> Result<Formula, ProofError> {
        let i = l.index;
        let f = parse(&l.formula, self.system.language())
            .map_err(|source| ProofError::Parse { line: i, source })?;
        match &l.by {
            Justification::Taut => match taut(&f) {
                Ok(true) => {}
                Ok(false) => return Err(ProofError::NotTaut { line: i }),
                Err(source) => return Err(ProofError::TooManyAtoms { line: i, source }),
            },
            Justification::Axiom { name, sub, contra } => self.axiom(i, &f, name, sub, *contra)?,
            Justification::Mp(a, b) => {
                let bad = |reason: String| ProofError::BadMP { line: i, reason };
                let ant = self.cited(i, *a, bad)?;
                let imp = self.cited(i, *b, bad)?;
                let expected = Formula::imp(ant.clone(), f.clone());
                if *imp != expected {
                    return Err(bad(format!("line {b} is not `{expected}`")));
                }
            }
            Justification::Rule { name, from } => {
                let bad = |reason: String| ProofError::BadRuleApplication { line: i, reason };
                let premises = from
                    .iter()
                    .map(|&c| self.cited(i, c, bad).cloned())
                    .collect::<Result<Vec<_>, _>>()?;
                if name == "CPL" {
                    let conj = premises.iter().cloned().reduce(Formula::and);
                    let whole = match conj {
                        Some(c) => Formula::imp(c, f.clone()),
                        None => f.clone(),
                    };
                    match taut(&whole) {
                        Ok(true) => {}
                        Ok(false) => {
                            return Err(
                                bad("the cited lines do not tautologically imply it".into()),
                            )
                        }
                        Err(source) => return Err(ProofError::TooManyAtoms { line: i, source }),
                    }
                } else {
                    let rule = self
                        .catalog
                        .rule(name)
                        .ok_or_else(|| bad(format!("{} has no rule {name}", self.system)))?;
                    if rule.arity() != premises.len() {
                        return Err(bad(format!(
                            "{name} takes {} premise(s), {} cited",
                            rule.arity(),
                            premises.len()
                        )));
                    }
                    if !rule.licenses(&premises, &f) {
                        return Err(bad(format!("does not follow by {rule}")));
                    }
                }
            }
        }
        Ok(f)
    }
}

fn only_under_bar(p: &Pattern, m: &Meta) -> bool {
    fn bare(p: &Pattern, m: &Meta) -> bool {
        match p {
            Pattern::Meta(x) => x == m,
            Pattern::Atom(_) | Pattern::Bar(_) => false,
            Pattern::Unary(_, q) => bare(q, m),
            Pattern::Binary(_, a, b) => bare(a, m) || bare(b, m),
        }
    }
    !bare(p, m)
}

/// Checks every line of `proof` in `system` and returns the formulas proved,
/// in order.
pub fn check_proof(proof: &Proof, system: System) -> Result<Vec<Formula>, ProofError> {
    let catalog = catalog(system);
    let mut checker = Checker {
        system,
        catalog: &catalog,
        proved: BTreeMap::new(),
    };
    let mut out = Vec::with_capacity(proof.lines.len());
    let mut previous: Option<usize> = None;
    for l in &proof.lines {
        if let Some(p) = previous {
            if l.index <= p {
                return Err(ProofError::OutOfOrder {
                    line: l.index,
                    previous: p,
                });
            }
        }
        previous = Some(l.index);
        let f = checker.line(l)?;
        checker.proved.insert(l.index, f.clone());
        out.push(f);
    }
    Ok(out)
}

/// As [`check_proof`], and the last line must be `goal`.
pub fn check_proof_with_goal(
    proof: &Proof,
    system: System,
    goal: &Formula,
) -> Result<Vec<Formula>, ProofError> {
    let proved = check_proof(proof, system)?;
    match (proved.last(), proof.lines.last()) {
        (Some(last), _) if last == goal => Ok(proved),
        (_, Some(l)) => Err(ProofError::GoalNotReached {
            line: l.index,
            goal: goal.to_string(),
        }),
        _ => Err(ProofError::Empty),
    }
}

/// Metavariables of a schema, in name order.
pub fn schema_metas(schema: &Schema) -> BTreeSet<Meta> {
    schema.pattern.metas()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::LanguageTag;

    fn f(s: &str) -> Formula {
        parse(s, LanguageTag::LIw).unwrap()
    }

    #[test]
    fn catalog_sizes() {
        let hiw = catalog(System::HIW);
        assert_eq!(hiw.axioms.len(), 10);
        assert_eq!(hiw.rules.len(), 2);
        let hdi = catalog(System::HDI);
        let names: Vec<&str> = hdi.schemata().iter().map(|s| s.name.as_str()).collect();
        for n in [
            "G1", "G2", "G3", "G4", "G5", "A1_Id", "A2_Id", "A3_Id", "K_box", "5_box",
        ] {
            assert!(names.contains(&n), "{n}");
        }
        assert!(hdi.rule("HIR").is_some() && hdi.rule("NEC_box").is_some());
        let iu = catalog(System::IU);
        assert_eq!(iu.schemata().len(), 3);
        let rules: Vec<&str> = iu.rules.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(rules, ["R_IU", "US"]);
    }

    #[test]
    fn matches_a5_with_bar() {
        let a5 = catalog(System::HIW).schema("A5_Iw").unwrap().clone();
        let g = f("Iw ((p | ~p) & (q | ~q)) -> Iw (p -> q)");
        let s = a5.matches(&g).unwrap();
        assert_eq!(s[&Meta("PHI".into())], f("p -> q"));
        assert_eq!(a5.instantiate(&s).unwrap(), g);
        assert!(a5.matches(&f("Iw (p | ~p) -> Iw (p -> q)")).is_none());
    }

    #[test]
    fn side_condition_on_a7() {
        let a7 = catalog(System::HIW).schema("A7_Iw").unwrap().clone();
        let bpq = bar(&f("p & q")).unwrap();
        let bp = bar(&f("p")).unwrap();
        let bq = bar(&f("q")).unwrap();
        let inst = |a: &Formula, b: &Formula| {
            Formula::imp(
                Formula::not(Formula::IgnW(Box::new(a.clone()))),
                Formula::not(Formula::IgnW(Box::new(b.clone()))),
            )
        };
        assert!(a7.matches(&inst(&bpq, &bp)).is_some());
        assert!(a7.matches(&inst(&bp, &bq)).is_none());
    }

    #[test]
    fn matches_a1_di() {
        let a1 = catalog(System::DI).schema("A1_DI").unwrap().clone();
        let g = parse("Id p -> p", LanguageTag::ClassicId).unwrap();
        assert_eq!(
            a1.matches(&g).unwrap()[&Meta("PHI".into())],
            Formula::atom("p")
        );
    }

    #[test]
    fn taut_examples() {
        assert!(taut(&f("((r -> p) & (r -> q)) <-> (r -> (p & q))")).unwrap());
        assert!(!taut(&f("p -> q")).unwrap());
        assert!(taut(&f("Iw p | ~Iw p")).unwrap());
        assert!(!taut(&f("Iw p | ~Iw q")).unwrap());
        assert!(taut(&bar(&f("p & q & r")).unwrap()).unwrap());
        let wide = (0..21)
            .map(|i| Formula::atom(format!("p{i}")))
            .reduce(Formula::or)
            .unwrap();
        assert_eq!(taut(&wide), Err(TautError::TooManyAtoms { count: 21 }));
    }

    #[test]
    fn rules_apply() {
        let hiw = catalog(System::HIW);
        let nec = hiw.rule("NEC_Iw").unwrap();
        assert_eq!(
            nec.apply(&[f("p | ~p")]).unwrap(),
            f("~Iw (p | ~p) -> ~Iw (p | ~p)")
        );
        let re = hiw.rule("RE_Iw").unwrap();
        assert!(re.apply(&[f("p -> p")]).is_none());
        let us = catalog(System::IU).rule("US").unwrap().clone();
        let l = LanguageTag::ClassicIu;
        let thm = parse("~p -> ~Iu p", l).unwrap();
        assert!(us.licenses(
            std::slice::from_ref(&thm),
            &parse("~(q & r) -> ~Iu (q & r)", l).unwrap()
        ));
        assert!(!us.licenses(&[thm], &parse("~q -> ~Iu r", l).unwrap()));
    }

    fn line(i: usize, text: &str, by: Justification) -> ProofLine {
        ProofLine {
            index: i,
            formula: text.into(),
            by,
            note: None,
        }
    }

    #[test]
    fn small_proof_and_errors() {
        let proof = Proof {
            lines: vec![
                line(1, "p | ~p", Justification::Taut),
                line(
                    2,
                    "~Iw (p | ~p) -> ~Iw (p | ~p)",
                    Justification::Rule {
                        name: "NEC_Iw".into(),
                        from: vec![1],
                    },
                ),
                line(
                    3,
                    "Iw (p | ~p) -> Iw (p | ~p)",
                    Justification::Axiom {
                        name: "A5_Iw".into(),
                        sub: BTreeMap::new(),
                        contra: false,
                    },
                ),
                line(4, "(p | ~p) -> (q -> (p | ~p))", Justification::Taut),
                line(5, "q -> (p | ~p)", Justification::Mp(1, 4)),
            ],
        };
        assert_eq!(check_proof(&proof, System::HIW).unwrap().len(), 5);

        let mut bad = proof.clone();
        bad.lines[4].by = Justification::Mp(4, 1);
        assert!(matches!(
            check_proof(&bad, System::HIW),
            Err(ProofError::BadMP { line: 5, .. })
        ));
        bad.lines[4].by = Justification::Mp(1, 7);
        assert!(matches!(
            check_proof(&bad, System::HIW),
            Err(ProofError::ForwardReference { line: 5, cited: 7 })
        ));
        bad.lines[4].by = Justification::Taut;
        bad.lines[4].formula = "q -> p".into();
        assert_eq!(
            check_proof(&bad, System::HIW),
            Err(ProofError::NotTaut { line: 5 })
        );
        assert!(matches!(
            check_proof(&proof, System::HIU),
            Err(ProofError::Parse { line: 2, .. })
        ));
        let mut swapped = proof.clone();
        swapped.lines.swap(2, 3);
        assert!(matches!(
            check_proof(&swapped, System::HIW),
            Err(ProofError::OutOfOrder {
                line: 3,
                previous: 4
            })
        ));
        assert!(matches!(
            check_proof(&proof.without_line(1), System::HIW),
            Err(ProofError::BadRuleApplication { line: 2, .. })
        ));
        let goal = f("p | ~p");
        assert!(matches!(
            check_proof_with_goal(&proof, System::HIW, &goal),
            Err(ProofError::GoalNotReached { line: 5, .. })
        ));
    }

    #[test]
    fn axiom_lines_with_substitutions() {
        let mut sub = BTreeMap::new();
        sub.insert("PHI".to_string(), "p -> q".to_string());
        let ok = Proof {
            lines: vec![line(
                1,
                "~Iw (p -> q) -> ~Iw ((p | ~p) & (q | ~q))",
                Justification::Axiom {
                    name: "A5_Iw".into(),
                    sub: sub.clone(),
                    contra: true,
                },
            )],
        };
        assert!(check_proof(&ok, System::HIW).is_ok());
        sub.insert("PHI".to_string(), "q".to_string());
        let wrong = Proof {
            lines: vec![line(
                1,
                "~Iw (p -> q) -> ~Iw ((p | ~p) & (q | ~q))",
                Justification::Axiom {
                    name: "A5_Iw".into(),
                    sub,
                    contra: true,
                },
            )],
        };
        assert!(matches!(
            check_proof(&wrong, System::HIW),
            Err(ProofError::BadAxiomInstance { line: 1, .. })
        ));
    }

    #[test]
    fn json_format() {
        let text = r#"[
            {"i":1, "f":"Iw ((p | ~p) & (q | ~q)) -> Iw (p -> q)", "by":{"axiom":"A5_Iw","sub":{"PHI":"p->q"}}},
            {"i":2, "f":"p | ~p", "by":"TAUT", "note":"excluded middle"},
            {"i":3, "f":"(p | ~p) -> (p | ~p)", "by":"TAUT"},
            {"i":4, "f":"p | ~p", "by":{"mp":[2,3]}},
            {"i":5, "f":"~Iw (p | ~p) -> ~Iw (p | ~p)", "by":{"rule":"NEC_Iw","from":[4]}}
        ]"#;
        let proof = Proof::from_json(text).unwrap();
        assert_eq!(proof.lines[3].by, Justification::Mp(2, 3));
        assert!(check_proof(&proof, System::HIW).is_ok());
        assert_eq!(Proof::from_json(&proof.to_json()).unwrap(), proof);
        assert!(matches!(
            Proof::from_json(r#"[{"i":1,"f":"p","by":"MAGIC"}]"#),
            Err(ProofError::Format(_))
        ));
    }
}
