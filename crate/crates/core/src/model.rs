//! Kripke models, topic-sensitive models, the JSON model file format, and
//! exhaustive enumeration of small models.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::topic::{GraspSet, LawViolation, TopicError, TopicModel, Topics};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("malformed model file: {0}")]
    Format(String),
    #[error("invalid model: {0}")]
    Validation(String),
    #[error("invalid topic model: {0}")]
    Topic(#[from] TopicError),
    #[error("topic fusion is not a semilattice: {}", fmt_violations(.0))]
    Laws(Vec<LawViolation>),
    #[error("enumeration bounds: {0}")]
    Bounds(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

fn fmt_violations(v: &[LawViolation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// `(W, R, v)` with no frame conditions. Worlds are referred to by index
/// internally and by their string id at the edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    worlds: Vec<String>,
    succ: Vec<Vec<usize>>,
    valuation: BTreeMap<String, BTreeSet<usize>>,
}

impl KripkeModel {
    pub fn new(
        worlds: Vec<String>,
        relation: &[(String, String)],
        valuation: &BTreeMap<String, Vec<String>>,
    ) -> Result<Self, ModelError> {
        if worlds.is_empty() {
            return Err(ModelError::Validation("model has no worlds".into()));
        }
        let mut index = HashMap::new();
        for (i, w) in worlds.iter().enumerate() {
            if index.insert(w.as_str(), i).is_some() {
                return Err(ModelError::Validation(format!("duplicate world `{w}`")));
            }
        }
        let lookup = |w: &str| {
            index
                .get(w)
                .copied()
                .ok_or_else(|| ModelError::Validation(format!("unknown world `{w}`")))
        };
        let mut succ = vec![Vec::new(); worlds.len()];
        for (a, b) in relation {
            succ[lookup(a)?].push(lookup(b)?);
        }
        let mut val = BTreeMap::new();
        for (atom, ws) in valuation {
            let set = ws
                .iter()
                .map(|w| lookup(w))
                .collect::<Result<BTreeSet<_>, _>>()?;
            val.insert(atom.clone(), set);
        }
        Ok(Self::from_indices(worlds, succ, val))
    }

    /// Builds a model from index-based parts; successor lists are sorted
    /// and deduplicated, empty valuation entries dropped.
    pub fn from_indices(
        worlds: Vec<String>,
        mut succ: Vec<Vec<usize>>,
        mut valuation: BTreeMap<String, BTreeSet<usize>>,
    ) -> Self {
        assert_eq!(worlds.len(), succ.len());
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        valuation.retain(|_, ws| !ws.is_empty());
        KripkeModel {
            worlds,
            succ,
            valuation,
        }
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn worlds(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_name(&self, w: usize) -> &str {
        &self.worlds[w]
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    pub fn successors(&self, w: usize) -> &[usize] {
        &self.succ[w]
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.succ[a].binary_search(&b).is_ok()
    }

    pub fn holds(&self, atom: &str, w: usize) -> bool {
        self.valuation.get(atom).is_some_and(|ws| ws.contains(&w))
    }

    pub fn valuation(&self) -> &BTreeMap<String, BTreeSet<usize>> {
        &self.valuation
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(a, bs)| bs.iter().map(move |&b| (a, b)))
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// The submodel without world `w`; remaining worlds keep their names.
    pub fn without_world(&self, w: usize) -> Option<Self> {
        if self.worlds.len() <= 1 {
            return None;
        }
        let remap = |x: usize| if x > w { x - 1 } else { x };
        let worlds = self
            .worlds
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != w)
            .map(|(_, n)| n.clone())
            .collect();
        let succ = self
            .succ
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != w)
            .map(|(_, bs)| bs.iter().filter(|&&b| b != w).map(|&b| remap(b)).collect())
            .collect();
        let valuation = self
            .valuation
            .iter()
            .map(|(a, ws)| {
                let ws = ws.iter().filter(|&&x| x != w).map(|&x| remap(x)).collect();
                (a.clone(), ws)
            })
            .collect();
        Some(Self::from_indices(worlds, succ, valuation))
    }

    pub fn without_edge(&self, a: usize, b: usize) -> Self {
        let mut succ = self.succ.clone();
        succ[a].retain(|&x| x != b);
        Self::from_indices(self.worlds.clone(), succ, self.valuation.clone())
    }
}

/// `(W, R, v, 𝒯)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopicSensitiveModel {
    pub base: KripkeModel,
    pub topics: Topics,
}

impl TopicSensitiveModel {
    /// The same frame and valuation with the topic part replaced by its
    /// grasp collapse.
    pub fn collapsed(&self) -> Self {
        TopicSensitiveModel {
            base: self.base.clone(),
            topics: Topics::Grasp(self.topics.collapse()),
        }
    }
}

/// Anything the evaluator can run on.
pub trait AsModel {
    fn kripke(&self) -> &KripkeModel;
    fn topics(&self) -> Option<&Topics>;
}

impl AsModel for KripkeModel {
    fn kripke(&self) -> &KripkeModel {
        self
    }
    fn topics(&self) -> Option<&Topics> {
        None
    }
}

impl AsModel for TopicSensitiveModel {
    fn kripke(&self) -> &KripkeModel {
        &self.base
    }
    fn topics(&self) -> Option<&Topics> {
        Some(&self.topics)
    }
}

/// Result of loading a model file: with or without a `topics` section.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    Kripke(KripkeModel),
    Topical(TopicSensitiveModel),
}

impl AsModel for Model {
    fn kripke(&self) -> &KripkeModel {
        match self {
            Model::Kripke(m) => m,
            Model::Topical(m) => &m.base,
        }
    }
    fn topics(&self) -> Option<&Topics> {
        match self {
            Model::Kripke(_) => None,
            Model::Topical(m) => Some(&m.topics),
        }
    }
}

impl From<KripkeModel> for Model {
    fn from(m: KripkeModel) -> Self {
        Model::Kripke(m)
    }
}

impl From<TopicSensitiveModel> for Model {
    fn from(m: TopicSensitiveModel) -> Self {
        Model::Topical(m)
    }
}

/// On-disk shape of a model.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub worlds: Vec<String>,
    #[serde(default)]
    pub relation: Vec<(String, String)>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topics: Option<TopicsFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TopicsFile {
    Grasped {
        grasped: Vec<String>,
    },
    Lattice {
        elements: Vec<String>,
        fusion: Vec<Vec<String>>,
        kappa: String,
        assign: BTreeMap<String, String>,
    },
}

impl ModelFile {
    pub fn into_model(self) -> Result<Model, ModelError> {
        let base = KripkeModel::new(self.worlds, &self.relation, &self.valuation)?;
        let topics = match self.topics {
            None => return Ok(Model::Kripke(base)),
            Some(TopicsFile::Grasped { grasped }) => Topics::Grasp(GraspSet::new(grasped)),
            Some(TopicsFile::Lattice {
                elements,
                fusion,
                kappa,
                assign,
            }) => {
                let tm = TopicModel::new(elements, fusion, &kappa, assign)?;
                let violations = tm.validate();
                if !violations.is_empty() {
                    return Err(ModelError::Laws(violations));
                }
                if let Some(atom) = base
                    .valuation
                    .keys()
                    .find(|a| !tm.assignment().contains_key(*a))
                {
                    return Err(TopicError::UnassignedAtom(atom.clone()).into());
                }
                Topics::Lattice(tm)
            }
        };
        Ok(Model::Topical(TopicSensitiveModel { base, topics }))
    }

    pub fn from_model(m: &Model) -> Self {
        let k = m.kripke();
        let name = |w: usize| k.world_name(w).to_string();
        let topics = m.topics().map(|t| match t {
            Topics::Grasp(g) => TopicsFile::Grasped {
                grasped: g.atoms().iter().cloned().collect(),
            },
            Topics::Lattice(tm) => TopicsFile::Lattice {
                elements: tm.elements().to_vec(),
                fusion: tm.fusion_names(),
                kappa: tm.name(tm.kappa()).to_string(),
                assign: tm
                    .assignment()
                    .iter()
                    .map(|(a, t)| (a.clone(), tm.name(*t).to_string()))
                    .collect(),
            },
        });
        ModelFile {
            worlds: k.worlds().to_vec(),
            relation: k.edges().map(|(a, b)| (name(a), name(b))).collect(),
            valuation: k
                .valuation()
                .iter()
                .map(|(a, ws)| (a.clone(), ws.iter().map(|&w| name(w)).collect()))
                .collect(),
            topics,
        }
    }
}

/// Parses and validates a model from JSON text.
pub fn load(text: &str) -> Result<Model, ModelError> {
    let file: ModelFile =
        serde_json::from_str(text).map_err(|e| ModelError::Format(e.to_string()))?;
    file.into_model()
}

pub fn load_path(path: impl AsRef<Path>) -> Result<Model, ModelError> {
    load(&std::fs::read_to_string(path)?)
}

pub fn save(m: &Model) -> String {
    serde_json::to_string_pretty(&ModelFile::from_model(m)).expect("model file serializes")
}

/// Whether enumerated models carry a grasp set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopicMode {
    None,
    Grasp,
}

/// A model of a [`ModelSpace`] as bit fields: `Rab` is bit `a*n+b` of
/// `relation`, atom `i` holds at `w` iff bit `i*n+w` of `valuation` is set,
/// and atom `i` is grasped iff bit `i` of `grasp` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodedModel {
    pub worlds: usize,
    pub relation: u64,
    pub valuation: u64,
    pub grasp: u64,
}

/// Every model over `atoms` with `1..=max_worlds` worlds named `w1..wn`,
/// addressable by index. Order: world count, then relation bits, then
/// valuation bits, then grasp bits (fastest).
#[derive(Debug, Clone)]
pub struct ModelSpace {
    atoms: Vec<String>,
    max_worlds: usize,
    mode: TopicMode,
    /// Cumulative model counts, one entry per world count.
    offsets: Vec<u64>,
}

impl ModelSpace {
    pub fn new(
        atoms: &BTreeSet<String>,
        max_worlds: usize,
        mode: TopicMode,
    ) -> Result<Self, ModelError> {
        if max_worlds == 0 {
            return Err(ModelError::Bounds("max_worlds must be at least 1".into()));
        }
        if atoms.is_empty() {
            return Err(ModelError::Bounds("at least one atom is required".into()));
        }
        let k = atoms.len() as u32;
        let mut offsets = vec![0u64];
        for n in 1..=max_worlds as u32 {
            let bits = n
                .checked_mul(n)
                .and_then(|r| r.checked_add(n.checked_mul(k)?))
                .and_then(|b| b.checked_add(if mode == TopicMode::Grasp { k } else { 0 }))
                .filter(|&b| b < 63)
                .ok_or_else(|| {
                    ModelError::Bounds(format!("{n} worlds over {k} atoms is too many models"))
                })?;
            let total = offsets.last().unwrap().checked_add(1u64 << bits);
            offsets.push(total.ok_or_else(|| ModelError::Bounds("model count overflows".into()))?);
        }
        Ok(ModelSpace {
            atoms: atoms.iter().cloned().collect(),
            max_worlds,
            mode,
            offsets,
        })
    }

    pub fn len(&self) -> u64 {
        *self.offsets.last().unwrap()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_worlds(&self) -> usize {
        self.max_worlds
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn mode(&self) -> TopicMode {
        self.mode
    }

    /// The raw bits of the model at `index`.
    pub fn decode(&self, index: u64) -> EncodedModel {
        assert!(index < self.len(), "model index out of range");
        let n = self.offsets.iter().rposition(|&o| o <= index).unwrap() + 1;
        let mut code = index - self.offsets[n - 1];
        let k = self.atoms.len();
        let mut take = |bits: usize| {
            let v = code & ((1u64 << bits) - 1);
            code >>= bits;
            v
        };
        let grasp = if self.mode == TopicMode::Grasp {
            take(k)
        } else {
            0
        };
        let valuation = take(n * k);
        let relation = take(n * n);
        EncodedModel {
            worlds: n,
            relation,
            valuation,
            grasp,
        }
    }

    /// The model at `index` in enumeration order.
    pub fn get(&self, index: u64) -> Model {
        let EncodedModel {
            worlds: n,
            relation: rel,
            valuation: val,
            grasp,
        } = self.decode(index);

        let worlds = (1..=n).map(|i| format!("w{i}")).collect();
        let succ = (0..n)
            .map(|a| (0..n).filter(|b| rel >> (a * n + b) & 1 == 1).collect())
            .collect();
        let valuation = self
            .atoms
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let ws = (0..n).filter(|w| val >> (i * n + w) & 1 == 1).collect();
                (p.clone(), ws)
            })
            .collect();
        let base = KripkeModel::from_indices(worlds, succ, valuation);
        match self.mode {
            TopicMode::None => Model::Kripke(base),
            TopicMode::Grasp => {
                let grasped = self
                    .atoms
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| grasp >> i & 1 == 1)
                    .map(|(_, p)| p.clone());
                Model::Topical(TopicSensitiveModel {
                    base,
                    topics: Topics::Grasp(GraspSet::new(grasped)),
                })
            }
        }
    }

    /// Models in the index range, for splitting the scan across workers.
    pub fn slice(&self, range: std::ops::Range<u64>) -> impl Iterator<Item = Model> + '_ {
        range.map(move |i| self.get(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = Model> + '_ {
        self.slice(0..self.len())
    }
}

/// Streams every model up to the bound.
pub fn enumerate_models(
    atoms: &BTreeSet<String>,
    max_worlds: usize,
    mode: TopicMode,
) -> Result<impl Iterator<Item = Model>, ModelError> {
    let space = ModelSpace::new(atoms, max_worlds, mode)?;
    Ok((0..space.len()).map(move |i| space.get(i)))
}
