//! Bounded validity, countermodel search, soundness fuzzing of the axiom
//! catalogs and refutation of logical omniscience.
//!
//! Exhaustive search runs on a bit-parallel evaluator over the encoded
//! models of a [`ModelSpace`]; every witness it reports is rebuilt as an
//! ordinary model and re-checked with [`crate::semantics::eval`].

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::gen::{atom_names, random_formula, random_model, TopicChoice};
use crate::model::{
    AsModel, EncodedModel, KripkeModel, Model, ModelError, ModelFile, ModelSpace, TopicMode,
    TopicSensitiveModel,
};
use crate::proofsys::{catalog, instantiate, taut, Schema, SideCondition, Subst};
use crate::semantics::{eval, EvalConfig, EvalError, Evaluator, System, Variant};
use crate::syntax::{BinOp, Formula, Pattern, Shape, UnOp};
use crate::topic::Topics;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecisionError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("bounds: {0}")]
    Bounds(String),
    #[error("premise `{premise}` is neither a tautology nor valid up to the bound")]
    PremiseNotCertified { premise: String },
    #[error("{system} has no rule {rule}")]
    UnknownRule { rule: String, system: System },
    #[error("rule {rule} does not apply to the given premises")]
    RuleShape { rule: String },
    #[error("witness for `{formula}` does not falsify it when re-evaluated")]
    WitnessMismatch { formula: String },
}

impl From<ModelError> for DecisionError {
    fn from(e: ModelError) -> Self {
        DecisionError::Bounds(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_worlds: usize,
    /// Atoms the enumerated models interpret; the query's atoms if `None`.
    pub atoms: Option<BTreeSet<String>>,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_worlds: 3,
            atoms: None,
        }
    }
}

impl SearchBounds {
    pub fn worlds(max_worlds: usize) -> Self {
        SearchBounds {
            max_worlds,
            atoms: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    ValidUpToBound,
    Countermodel,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ValidUpToBound => "VALID_UP_TO_BOUND",
            Verdict::Countermodel => "COUNTERMODEL",
        })
    }
}

/// A pointed model falsifying a query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub model: Model,
    pub world: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountermodelReport {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Models examined, the witness included.
    pub models_checked: u64,
}

impl CountermodelReport {
    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::ValidUpToBound
    }

    /// The verdict header followed by the witness as a model file.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            verdict: Verdict,
            models_checked: u64,
            #[serde(skip_serializing_if = "Option::is_none")]
            world: Option<&'a str>,
            #[serde(skip_serializing_if = "Option::is_none")]
            model: Option<ModelFile>,
        }
        let out = Out {
            verdict: self.verdict,
            models_checked: self.models_checked,
            world: self.witness.as_ref().map(|w| w.world.as_str()),
            model: self
                .witness
                .as_ref()
                .map(|w| ModelFile::from_model(&w.model)),
        };
        serde_json::to_string_pretty(&out).expect("report serializes")
    }
}

/// Post-order program computing the extension of a formula as a world
/// bitset.
enum Node {
    Atom(usize),
    Not(usize),
    Bin(BinOp, usize, usize),
    Box(usize),
    /// Ignorance operator, argument node and the argument's atoms as a mask.
    Ign(UnOp, usize, u64),
    Grasp(u64),
}

struct Compiled {
    nodes: Vec<Node>,
    system: System,
    variant: Variant,
}

impl Compiled {
    fn new(f: &Formula, atoms: &[String], cfg: EvalConfig) -> Self {
        fn mask(f: &Formula, atoms: &[String]) -> u64 {
            f.vars()
                .iter()
                .map(|p| 1u64 << atoms.iter().position(|a| a == p).expect("atom in bounds"))
                .fold(0, |a, b| a | b)
        }
        fn go(f: &Formula, atoms: &[String], out: &mut Vec<Node>) -> usize {
            let node = match f.shape() {
                Shape::Atom(p) => {
                    Node::Atom(atoms.iter().position(|a| a == p).expect("atom in bounds"))
                }
                Shape::Unary(UnOp::Not, g) => Node::Not(go(g, atoms, out)),
                Shape::Unary(UnOp::Box, g) => Node::Box(go(g, atoms, out)),
                Shape::Unary(UnOp::Grasp, g) => Node::Grasp(mask(g, atoms)),
                Shape::Unary(op, g) => {
                    let m = mask(g, atoms);
                    Node::Ign(op, go(g, atoms, out), m)
                }
                Shape::Binary(op, a, b) => {
                    let x = go(a, atoms, out);
                    Node::Bin(op, x, go(b, atoms, out))
                }
            };
            out.push(node);
            out.len() - 1
        }
        let mut nodes = Vec::with_capacity(f.size());
        go(f, atoms, &mut nodes);
        Compiled {
            nodes,
            system: cfg.system,
            variant: cfg.variant,
        }
    }

    /// Worlds of `m` where the formula holds.
    fn extension(&self, m: &EncodedModel, ext: &mut Vec<u64>) -> u64 {
        let n = m.worlds;
        let all = (1u64 << n) - 1;
        let succ = |w: usize| (m.relation >> (w * n)) & all;
        let hyper = self.system.is_topical();
        ext.clear();
        for node in &self.nodes {
            let v = match *node {
                Node::Atom(i) => (m.valuation >> (i * n)) & all,
                Node::Not(a) => !ext[a] & all,
                Node::Bin(op, a, b) => {
                    let (x, y) = (ext[a], ext[b]);
                    match op {
                        BinOp::And => x & y,
                        BinOp::Or => x | y,
                        BinOp::Imp => (!x | y) & all,
                        BinOp::Iff => !(x ^ y) & all,
                    }
                }
                Node::Box(a) => match self.variant {
                    Variant::RelationalBox => (0..n)
                        .filter(|&w| succ(w) & !ext[a] == 0)
                        .fold(0, |acc, w| acc | 1 << w),
                    _ => {
                        if ext[a] == all {
                            all
                        } else {
                            0
                        }
                    }
                },
                Node::Grasp(vars) => {
                    if vars & !m.grasp == 0 {
                        all
                    } else {
                        0
                    }
                }
                Node::Ign(op, a, vars) => {
                    let x = ext[a];
                    let grasped = vars & !m.grasp == 0;
                    match op {
                        UnOp::IgnW if hyper && !grasped => all,
                        UnOp::IgnU if hyper && !grasped => all,
                        UnOp::IgnD if hyper && !grasped => 0,
                        UnOp::IgnW => (0..n)
                            .filter(|&w| succ(w) & x != 0 && succ(w) & !x != 0)
                            .fold(0, |acc, w| acc | 1 << w),
                        UnOp::IgnU => (0..n)
                            .filter(|&w| x >> w & 1 == 1 && succ(w) & !x != 0)
                            .fold(0, |acc, w| acc | 1 << w),
                        UnOp::IgnD => (0..n)
                            .filter(|&w| {
                                let others = if self.variant == Variant::IdIncludesSelf {
                                    succ(w)
                                } else {
                                    succ(w) & !(1 << w)
                                };
                                x >> w & 1 == 1 && others & x == 0
                            })
                            .fold(0, |acc, w| acc | 1 << w),
                        _ => unreachable!("not an ignorance operator"),
                    }
                }
            };
            ext.push(v);
        }
        *ext.last().expect("formula has a node")
    }
}

fn topic_mode(system: System) -> TopicMode {
    if system.is_topical() {
        TopicMode::Grasp
    } else {
        TopicMode::None
    }
}

/// Searches every model up to the bound, smallest first, for a world where
/// `f` fails.
pub fn bounded_valid(
    f: &Formula,
    cfg: impl Into<EvalConfig>,
    b: &SearchBounds,
) -> Result<CountermodelReport, DecisionError> {
    let cfg = cfg.into();
    f.check_language(cfg.system.language())
        .map_err(|source| EvalError::LanguageMismatch {
            system: cfg.system,
            source,
        })?;
    let vars = f.vars();
    let atoms = match &b.atoms {
        Some(atoms) => {
            if !vars.is_subset(atoms) {
                return Err(DecisionError::Bounds(
                    "the atom set must contain every atom of the query".into(),
                ));
            }
            atoms.clone()
        }
        None => vars,
    };
    let space = ModelSpace::new(&atoms, b.max_worlds, topic_mode(cfg.system))?;
    let program = Compiled::new(f, space.atoms(), cfg);
    let mut scratch = Vec::new();
    for index in 0..space.len() {
        let enc = space.decode(index);
        let all = (1u64 << enc.worlds) - 1;
        let ext = program.extension(&enc, &mut scratch);
        if ext != all {
            let w = (!ext & all).trailing_zeros() as usize;
            let model = space.get(index);
            let world = model.kripke().world_name(w).to_string();
            if eval(&model, &world, f, cfg)? {
                return Err(DecisionError::WitnessMismatch {
                    formula: f.to_string(),
                });
            }
            return Ok(CountermodelReport {
                verdict: Verdict::Countermodel,
                witness: Some(Witness { model, world }),
                models_checked: index + 1,
            });
        }
    }
    Ok(CountermodelReport {
        verdict: Verdict::ValidUpToBound,
        witness: None,
        models_checked: space.len(),
    })
}

/// Settings for the randomized soundness check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzConfig {
    /// Instances tried per schema.
    pub trials: usize,
    pub max_worlds: usize,
    pub atoms: usize,
    /// Depth of the formulas substituted for metavariables.
    pub depth: usize,
    pub seed: u64,
    pub variant: Variant,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            trials: 1000,
            max_worlds: 4,
            atoms: 3,
            depth: 2,
            seed: 0,
            variant: Variant::Standard,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub instance: Formula,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzRow {
    pub schema: String,
    /// Instances evaluated, up to and including the first violation.
    pub instances: usize,
    pub violation: Option<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzReport {
    pub system: System,
    pub rows: Vec<FuzzRow>,
}

impl FuzzReport {
    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| r.violation.is_some()).count()
    }

    pub fn row(&self, schema: &str) -> Option<&FuzzRow> {
        self.rows.iter().find(|r| r.schema == schema)
    }
}

const TAUTOLOGIES: [&str; 6] = [
    "PHI -> (PSI -> PHI)",
    "(PHI -> (PSI -> CHI)) -> ((PHI -> PSI) -> (PHI -> CHI))",
    "(~PHI -> ~PSI) -> (PSI -> PHI)",
    "PHI | ~PHI",
    "~(PHI & PSI) <-> (~PHI | ~PSI)",
    "((PHI -> PSI) & (PSI -> CHI)) -> (PHI -> CHI)",
];

fn random_subst<R: Rng>(
    rng: &mut R,
    schema: &Schema,
    system: System,
    atoms: &[String],
    depth: usize,
) -> Subst {
    let lang = system.language();
    let mut s = Subst::new();
    let constrained = schema
        .side
        .as_ref()
        .map(|SideCondition::VarsSubset { sub, .. }| sub.clone());
    for m in schema.pattern.metas() {
        if Some(&m) != constrained.as_ref() {
            let d = rng.gen_range(0..=depth);
            s.insert(m, random_formula(rng, lang, atoms, d));
        }
    }
    if let Some(SideCondition::VarsSubset { sub, sup }) = &schema.side {
        let allowed: Vec<String> = s[sup].vars().into_iter().collect();
        let d = rng.gen_range(0..=depth);
        s.insert(sub.clone(), random_formula(rng, lang, &allowed, d));
    }
    s
}

fn with_base(m: &Model, base: KripkeModel) -> Model {
    match m {
        Model::Kripke(_) => Model::Kripke(base),
        Model::Topical(t) => Model::Topical(TopicSensitiveModel {
            base,
            topics: t.topics.clone(),
        }),
    }
}

fn failing_world(m: &Model, f: &Formula, cfg: EvalConfig) -> Option<usize> {
    Evaluator::new(m, f, cfg).ok()?.first_failure(f)
}

/// Shrinks a falsifying model: collapse a lattice to its grasp set, then
/// drop worlds and edges while the formula still fails somewhere.
pub fn minimize(model: Model, f: &Formula, cfg: impl Into<EvalConfig>) -> Witness {
    let cfg = cfg.into();
    let mut m = model;
    if let Model::Topical(t) = &m {
        if matches!(t.topics, Topics::Lattice(_)) {
            let c = Model::Topical(t.collapsed());
            if failing_world(&c, f, cfg).is_some() {
                m = c;
            }
        }
    }
    loop {
        let k = m.kripke();
        let smaller_world = (0..k.world_count())
            .rev()
            .filter_map(|w| k.without_world(w))
            .map(|base| with_base(&m, base))
            .find(|c| failing_world(c, f, cfg).is_some());
        if let Some(c) = smaller_world {
            m = c;
            continue;
        }
        let edges: Vec<(usize, usize)> = k.edges().collect();
        let fewer_edges = edges
            .into_iter()
            .map(|(a, b)| with_base(&m, k.without_edge(a, b)))
            .find(|c| failing_world(c, f, cfg).is_some());
        match fewer_edges {
            Some(c) => m = c,
            None => break,
        }
    }
    let w = failing_world(&m, f, cfg).expect("minimization keeps a failure");
    let world = m.kripke().world_name(w).to_string();
    Witness { model: m, world }
}

fn fuzz_schema<R: Rng>(rng: &mut R, schema: &Schema, system: System, fc: &FuzzConfig) -> FuzzRow {
    let cfg = EvalConfig::new(system).with_variant(fc.variant);
    let atoms = atom_names(fc.atoms);
    let topics = if system.is_topical() {
        TopicChoice::Mixed { max_elements: 5 }
    } else {
        TopicChoice::None
    };
    for trial in 1..=fc.trials {
        let s = random_subst(rng, schema, system, &atoms, fc.depth);
        let instance = instantiate(&schema.pattern, &s).expect("every metavariable is bound");
        let vars: Vec<String> = instance.vars().into_iter().collect();
        let model = random_model(rng, &vars, fc.max_worlds, topics);
        if failing_world(&model, &instance, cfg).is_some() {
            let witness = minimize(model, &instance, cfg);
            return FuzzRow {
                schema: schema.name.clone(),
                instances: trial,
                violation: Some(Violation { instance, witness }),
            };
        }
    }
    FuzzRow {
        schema: schema.name.clone(),
        instances: fc.trials,
        violation: None,
    }
}

/// Tries `fc.trials` random instances of every schema of `system`, each on
/// a fresh random model, and checks truth at every world. A `CPL` row does
/// the same for instances of a few classical tautologies.
pub fn check_axiom_instances(system: System, fc: &FuzzConfig) -> FuzzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(fc.seed);
    let cat = catalog(system);
    let mut rows = Vec::new();
    let cpl: Vec<Schema> = TAUTOLOGIES
        .iter()
        .enumerate()
        .map(|(i, t)| Schema::new(&format!("CPL{}", i + 1), t))
        .collect();
    let mut cpl_row = FuzzRow {
        schema: "CPL".into(),
        instances: 0,
        violation: None,
    };
    let per = fc.trials.div_ceil(cpl.len()).max(1);
    for schema in &cpl {
        let row = fuzz_schema(&mut rng, schema, system, &FuzzConfig { trials: per, ..*fc });
        cpl_row.instances += row.instances;
        if let Some(v) = row.violation {
            debug_assert!(taut(&v.instance).unwrap_or(false));
            cpl_row.violation = Some(v);
            break;
        }
    }
    rows.push(cpl_row);
    for schema in cat.schemata() {
        rows.push(fuzz_schema(&mut rng, schema, system, fc));
    }
    FuzzReport { system, rows }
}

/// Same as [`check_axiom_instances`] restricted to the given schemata.
pub fn check_schemata(schemata: &[Schema], system: System, fc: &FuzzConfig) -> Vec<FuzzRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(fc.seed);
    schemata
        .iter()
        .map(|s| fuzz_schema(&mut rng, s, system, fc))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mutant {
    pub original: String,
    pub operator: String,
    pub schema: Schema,
}

type Path = Vec<u8>;

fn child(p: &Pattern, i: u8) -> &Pattern {
    match (p, i) {
        (Pattern::Unary(_, q), 0) => q,
        (Pattern::Binary(_, a, _), 0) => a,
        (Pattern::Binary(_, _, b), 1) => b,
        _ => unreachable!("bad pattern path"),
    }
}

fn at<'p>(p: &'p Pattern, path: &[u8]) -> &'p Pattern {
    path.iter().fold(p, |q, &i| child(q, i))
}

fn replace(p: &Pattern, path: &[u8], edit: &dyn Fn(&Pattern) -> Pattern) -> Pattern {
    match path.split_first() {
        None => edit(p),
        Some((&i, rest)) => match p {
            Pattern::Unary(op, q) => Pattern::unary(*op, replace(q, rest, edit)),
            Pattern::Binary(op, a, b) if i == 0 => {
                Pattern::binary(*op, replace(a, rest, edit), (**b).clone())
            }
            Pattern::Binary(op, a, b) => {
                Pattern::binary(*op, (**a).clone(), replace(b, rest, edit))
            }
            _ => unreachable!("bad pattern path"),
        },
    }
}

fn paths(p: &Pattern, here: &mut Path, out: &mut Vec<Path>) {
    out.push(here.clone());
    let arity = match p {
        Pattern::Unary(..) => 1,
        Pattern::Binary(..) => 2,
        _ => 0,
    };
    for i in 0..arity {
        here.push(i);
        paths(child(p, i), here, out);
        here.pop();
    }
}

/// Single operator flips of a schema: negation toggled at each modal
/// occurrence (an enclosing `~` is removed, otherwise one is added), the
/// main implication reversed, and `&`/`|` swapped at each occurrence.
pub fn mutants(schema: &Schema) -> Vec<Mutant> {
    let pat = &schema.pattern;
    let mut all = Vec::new();
    paths(pat, &mut Vec::new(), &mut all);
    let mut out: Vec<Mutant> = Vec::new();
    let mut push = |operator: String, pattern: Pattern| {
        if pattern != *pat && !out.iter().any(|m| m.schema.pattern == pattern) {
            out.push(Mutant {
                original: schema.name.clone(),
                operator,
                schema: Schema {
                    name: format!("{}~{}", schema.name, out.len() + 1),
                    pattern,
                    side: schema.side.clone(),
                },
            });
        }
    };
    for path in &all {
        match at(pat, path) {
            Pattern::Unary(op, _) if op.is_modal() => {
                let parent_is_not = !path.is_empty()
                    && matches!(
                        at(pat, &path[..path.len() - 1]),
                        Pattern::Unary(UnOp::Not, _)
                    );
                let mutated = if parent_is_not {
                    replace(pat, &path[..path.len() - 1], &|p| child(p, 0).clone())
                } else {
                    replace(pat, path, &|p| Pattern::unary(UnOp::Not, p.clone()))
                };
                push(
                    format!("toggle negation on {} at {:?}", op.symbol(), path),
                    mutated,
                );
            }
            Pattern::Binary(op @ (BinOp::And | BinOp::Or), _, _) => {
                let flipped = if *op == BinOp::And {
                    BinOp::Or
                } else {
                    BinOp::And
                };
                let mutated = replace(pat, path, &|p| match p {
                    Pattern::Binary(_, a, b) => Pattern::Binary(flipped, a.clone(), b.clone()),
                    _ => unreachable!(),
                });
                push(format!("swap {} at {:?}", op.symbol(), path), mutated);
            }
            _ => {}
        }
    }
    if let Pattern::Binary(BinOp::Imp, a, b) = pat {
        push(
            "reverse implication".into(),
            Pattern::binary(BinOp::Imp, (**b).clone(), (**a).clone()),
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutantRow {
    pub mutant: Mutant,
    pub killed: bool,
    pub instances: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationReport {
    pub system: System,
    pub rows: Vec<MutantRow>,
}

impl MutationReport {
    pub fn killed(&self) -> usize {
        self.rows.iter().filter(|r| r.killed).count()
    }

    pub fn kill_rate(&self) -> f64 {
        if self.rows.is_empty() {
            return 1.0;
        }
        self.killed() as f64 / self.rows.len() as f64
    }
}

/// Runs every mutant of every schema of `system` through the soundness
/// fuzzer with the same budget as the unmutated catalog.
pub fn mutation_campaign(system: System, fc: &FuzzConfig) -> MutationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(fc.seed);
    let mut rows = Vec::new();
    for schema in catalog(system).schemata() {
        for mutant in mutants(schema) {
            let row = fuzz_schema(&mut rng, &mutant.schema, system, fc);
            rows.push(MutantRow {
                killed: row.violation.is_some(),
                instances: row.instances,
                mutant,
            });
        }
    }
    MutationReport { system, rows }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleRow {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
    pub report: CountermodelReport,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleReport {
    pub rule: String,
    pub system: System,
    pub rows: Vec<RuleRow>,
}

impl RuleReport {
    pub fn preserved(&self) -> bool {
        self.rows.iter().all(|r| r.report.is_valid())
    }
}

/// Applies `rule` to each instance's premises, which must be tautologies
/// or valid up to the bound, and searches for a countermodel to the
/// conclusion.
pub fn check_rule_preservation(
    rule: &str,
    system: System,
    instances: &[Vec<Formula>],
    b: &SearchBounds,
) -> Result<RuleReport, DecisionError> {
    let cat = catalog(system);
    let r = cat.rule(rule).ok_or_else(|| DecisionError::UnknownRule {
        rule: rule.into(),
        system,
    })?;
    let mut rows = Vec::new();
    for premises in instances {
        for p in premises {
            let certified = taut(p).unwrap_or(false) || bounded_valid(p, system, b)?.is_valid();
            if !certified {
                return Err(DecisionError::PremiseNotCertified {
                    premise: p.to_string(),
                });
            }
        }
        let conclusion = r
            .apply(premises)
            .ok_or_else(|| DecisionError::RuleShape { rule: rule.into() })?;
        let report = bounded_valid(&conclusion, system, b)?;
        rows.push(RuleRow {
            premises: premises.clone(),
            conclusion,
            report,
        });
    }
    Ok(RuleReport {
        rule: rule.into(),
        system,
        rows,
    })
}

/// Closure principles whose failure separates the hyperintensional
/// systems from the classic ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Principle {
    /// If `φ -> ψ` is valid, `~I φ -> ~I ψ` is valid.
    LoImp,
    /// If `φ` is valid, `~I φ` is valid.
    LoNec,
    /// If `φ <-> ψ` is valid, `~I φ <-> ~I ψ` is valid.
    LoRe,
}

impl Principle {
    pub const ALL: [Principle; 3] = [Principle::LoImp, Principle::LoNec, Principle::LoRe];

    /// The valid premise and the conclusion tested, for `system`'s
    /// ignorance operator.
    pub fn instance(self, system: System) -> (Formula, Formula) {
        let (p, q) = (Formula::atom("p"), Formula::atom("q"));
        let lem = |a: &Formula| Formula::or(a.clone(), Formula::not(a.clone()));
        let known = |f: Formula| Formula::not(system.ignorance_of(f));
        match self {
            Principle::LoImp => {
                let contra = Formula::and(p.clone(), Formula::not(p));
                (
                    Formula::imp(contra.clone(), q.clone()),
                    Formula::imp(known(contra), known(q)),
                )
            }
            Principle::LoNec => (lem(&p), known(lem(&p))),
            Principle::LoRe => (
                Formula::iff(lem(&p), lem(&q)),
                Formula::iff(known(lem(&p)), known(lem(&q))),
            ),
        }
    }

    /// Whether the principle holds in `system`.
    pub fn expected(self, system: System) -> Verdict {
        use System::*;
        let valid = match self {
            Principle::LoImp => false,
            Principle::LoNec => matches!(system, IW | IU),
            Principle::LoRe => matches!(system, IW | IU | DI),
        };
        if valid {
            Verdict::ValidUpToBound
        } else {
            Verdict::Countermodel
        }
    }
}

impl fmt::Display for Principle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Principle::LoImp => "LO_IMP",
            Principle::LoNec => "LO_NEC",
            Principle::LoRe => "LO_RE",
        })
    }
}

impl FromStr for Principle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Principle::ALL
            .into_iter()
            .find(|p| p.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown principle `{s}` (expected LO_IMP, LO_NEC or LO_RE)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmniscienceReport {
    pub principle: Principle,
    pub system: System,
    pub premise: Formula,
    pub conclusion: Formula,
    pub report: CountermodelReport,
    pub expected: Verdict,
}

impl OmniscienceReport {
    pub fn as_expected(&self) -> bool {
        self.report.verdict == self.expected
    }
}

/// Certifies the principle's premise as a tautology and searches for a
/// countermodel to its conclusion.
pub fn refute_omniscience(
    principle: Principle,
    system: System,
    b: &SearchBounds,
) -> Result<OmniscienceReport, DecisionError> {
    let (premise, conclusion) = principle.instance(system);
    if !taut(&premise).unwrap_or(false) {
        return Err(DecisionError::PremiseNotCertified {
            premise: premise.to_string(),
        });
    }
    let report = bounded_valid(&conclusion, system, b)?;
    Ok(OmniscienceReport {
        principle,
        system,
        premise,
        conclusion,
        report,
        expected: principle.expected(system),
    })
}
