//! Finite topic models: a join semilattice of topics under fusion, the
//! agent's designated topic, and the atom-to-topic assignment.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::syntax::Formula;

/// Index of a topic inside its [`TopicModel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TopicId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopicError {
    #[error("topic model has no elements")]
    Empty,
    #[error("duplicate topic `{0}`")]
    DuplicateTopic(String),
    #[error("unknown topic `{0}`")]
    UnknownTopic(String),
    #[error("fusion table must be {n}x{n}")]
    TableShape { n: usize },
    #[error("formula has no propositional variables")]
    EmptyVars,
    #[error("atom `{0}` has no topic")]
    UnassignedAtom(String),
}

/// A failed semilattice law, named by topic ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawViolation {
    Idempotence(String),
    Commutativity(String, String),
    Associativity(String, String, String),
}

impl fmt::Display for LawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawViolation::Idempotence(a) => write!(f, "idempotence fails at {a}"),
            LawViolation::Commutativity(a, b) => write!(f, "commutativity fails at ({a}, {b})"),
            LawViolation::Associativity(a, b, c) => {
                write!(f, "associativity fails at ({a}, {b}, {c})")
            }
        }
    }
}

/// `(T, ⊕, 𝔎, t)` over a finite `T`, with the fusion table stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopicModel {
    elements: Vec<String>,
    fusion: Vec<Vec<TopicId>>,
    kappa: TopicId,
    assign: BTreeMap<String, TopicId>,
}

impl TopicModel {
    /// Builds a topic model from names. Only shape is checked here; the
    /// semilattice laws are checked by [`TopicModel::validate`].
    pub fn new(
        elements: Vec<String>,
        fusion: Vec<Vec<String>>,
        kappa: &str,
        assign: BTreeMap<String, String>,
    ) -> Result<Self, TopicError> {
        if elements.is_empty() {
            return Err(TopicError::Empty);
        }
        let mut index = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.as_str(), TopicId(i)).is_some() {
                return Err(TopicError::DuplicateTopic(e.clone()));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| TopicError::UnknownTopic(name.to_string()))
        };
        let n = elements.len();
        if fusion.len() != n || fusion.iter().any(|row| row.len() != n) {
            return Err(TopicError::TableShape { n });
        }
        let fusion = fusion
            .iter()
            .map(|row| row.iter().map(|x| lookup(x)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let kappa = lookup(kappa)?;
        let assign = assign
            .iter()
            .map(|(atom, topic)| Ok((atom.clone(), lookup(topic)?)))
            .collect::<Result<BTreeMap<_, _>, TopicError>>()?;
        Ok(TopicModel {
            elements,
            fusion,
            kappa,
            assign,
        })
    }

    /// Index-based constructor for generated lattices.
    pub fn from_table(
        elements: Vec<String>,
        fusion: Vec<Vec<usize>>,
        kappa: usize,
        assign: BTreeMap<String, usize>,
    ) -> Result<Self, TopicError> {
        let name = |i: usize| {
            elements
                .get(i)
                .cloned()
                .ok_or_else(|| TopicError::UnknownTopic(i.to_string()))
        };
        let fusion = fusion
            .iter()
            .map(|row| row.iter().map(|&i| name(i)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let kappa = name(kappa)?;
        let assign = assign
            .into_iter()
            .map(|(a, i)| Ok((a, name(i)?)))
            .collect::<Result<BTreeMap<_, _>, TopicError>>()?;
        TopicModel::new(elements.clone(), fusion, &kappa, assign)
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, t: TopicId) -> &str {
        &self.elements[t.0]
    }

    pub fn id(&self, name: &str) -> Result<TopicId, TopicError> {
        self.elements
            .iter()
            .position(|e| e == name)
            .map(TopicId)
            .ok_or_else(|| TopicError::UnknownTopic(name.to_string()))
    }

    pub fn kappa(&self) -> TopicId {
        self.kappa
    }

    pub fn assignment(&self) -> &BTreeMap<String, TopicId> {
        &self.assign
    }

    /// The fusion table as names, row-major in element order.
    pub fn fusion_names(&self) -> Vec<Vec<String>> {
        self.fusion
            .iter()
            .map(|row| row.iter().map(|t| self.name(*t).to_string()).collect())
            .collect()
    }

    pub fn fuse(&self, a: TopicId, b: TopicId) -> TopicId {
        self.fusion[a.0][b.0]
    }

    /// `a ⊑ b` iff `a ⊕ b = b`.
    pub fn le(&self, a: TopicId, b: TopicId) -> bool {
        self.fuse(a, b) == b
    }

    pub fn parthood(&self, a: &str, b: &str) -> Result<bool, TopicError> {
        Ok(self.le(self.id(a)?, self.id(b)?))
    }

    pub fn topic_of_atom(&self, atom: &str) -> Result<TopicId, TopicError> {
        self.assign
            .get(atom)
            .copied()
            .ok_or_else(|| TopicError::UnassignedAtom(atom.to_string()))
    }

    /// Fusion of the topics of `Var(f)`.
    pub fn topic_of(&self, f: &Formula) -> Result<TopicId, TopicError> {
        let mut acc: Option<TopicId> = None;
        let mut missing = None;
        f.for_each_atom(&mut |p| match self.assign.get(p) {
            Some(&t) => acc = Some(acc.map_or(t, |a| self.fuse(a, t))),
            None => {
                missing.get_or_insert_with(|| p.to_string());
            }
        });
        if let Some(p) = missing {
            return Err(TopicError::UnassignedAtom(p));
        }
        acc.ok_or(TopicError::EmptyVars)
    }

    /// Whether the agent grasps the topic of `f`, i.e. `t(f) ⊑ 𝔎`.
    pub fn grasps(&self, f: &Formula) -> Result<bool, TopicError> {
        Ok(self.le(self.topic_of(f)?, self.kappa))
    }

    /// All semilattice law violations, exhaustively over pairs and triples.
    pub fn validate(&self) -> Vec<LawViolation> {
        let n = self.elements.len();
        let ids = || (0..n).map(TopicId);
        let mut out = Vec::new();
        for a in ids() {
            if self.fuse(a, a) != a {
                out.push(LawViolation::Idempotence(self.name(a).into()));
            }
        }
        for a in ids() {
            for b in ids().filter(|b| b.0 > a.0) {
                if self.fuse(a, b) != self.fuse(b, a) {
                    out.push(LawViolation::Commutativity(
                        self.name(a).into(),
                        self.name(b).into(),
                    ));
                }
            }
        }
        for a in ids() {
            for b in ids() {
                for c in ids() {
                    if self.fuse(self.fuse(a, b), c) != self.fuse(a, self.fuse(b, c)) {
                        out.push(LawViolation::Associativity(
                            self.name(a).into(),
                            self.name(b).into(),
                            self.name(c).into(),
                        ));
                    }
                }
            }
        }
        out
    }

    /// The atoms whose topic is part of 𝔎. For a lawful model, a formula
    /// over assigned atoms is grasped exactly when all its atoms are in
    /// this set: parts of 𝔎 join to a part of 𝔎, and any non-part pushes
    /// the join outside.
    pub fn grasp_collapse(&self) -> GraspSet {
        GraspSet::new(
            self.assign
                .iter()
                .filter(|(_, &t)| self.le(t, self.kappa))
                .map(|(a, _)| a.clone()),
        )
    }
}

/// Shorthand for the two-point lattice `b ⊏ a` with `𝔎 = b`: the listed
/// atoms have topic `b`, every other atom has topic `a`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraspSet {
    grasped: BTreeSet<String>,
}

impl GraspSet {
    pub fn new(atoms: impl IntoIterator<Item = String>) -> Self {
        GraspSet {
            grasped: atoms.into_iter().collect(),
        }
    }

    pub fn atoms(&self) -> &BTreeSet<String> {
        &self.grasped
    }

    pub fn contains(&self, atom: &str) -> bool {
        self.grasped.contains(atom)
    }

    /// `Var(f) ⊆ grasped`.
    pub fn grasps(&self, f: &Formula) -> bool {
        let mut all = true;
        f.for_each_atom(&mut |p| all &= self.grasped.contains(p));
        all
    }

    /// The two-point lattice this set abbreviates, assigning every atom in
    /// `atoms` (plus the grasped ones).
    pub fn to_lattice<'a>(&self, atoms: impl IntoIterator<Item = &'a String>) -> TopicModel {
        let mut assign: BTreeMap<String, usize> = atoms
            .into_iter()
            .map(|p| (p.clone(), if self.contains(p) { 1 } else { 0 }))
            .collect();
        for p in &self.grasped {
            assign.insert(p.clone(), 1);
        }
        TopicModel::from_table(
            vec!["a".into(), "b".into()],
            vec![vec![0, 0], vec![0, 1]],
            1,
            assign,
        )
        .expect("two-point lattice is well formed")
    }
}

/// The topic component of a topic-sensitive model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Topics {
    Lattice(TopicModel),
    Grasp(GraspSet),
}

impl Topics {
    pub fn grasps(&self, f: &Formula) -> Result<bool, TopicError> {
        match self {
            Topics::Lattice(tm) => tm.grasps(f),
            Topics::Grasp(g) => Ok(g.grasps(f)),
        }
    }

    /// Fails if some atom of `f` has no topic.
    pub fn check_covers(&self, f: &Formula) -> Result<(), TopicError> {
        if let Topics::Lattice(tm) = self {
            for p in f.vars() {
                tm.topic_of_atom(&p)?;
            }
        }
        Ok(())
    }

    pub fn collapse(&self) -> GraspSet {
        match self {
            Topics::Lattice(tm) => tm.grasp_collapse(),
            Topics::Grasp(g) => g.clone(),
        }
    }
}
