//! Random formulas, models and topic lattices for fuzzing and property
//! tests.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::model::{KripkeModel, Model, TopicSensitiveModel};
use crate::syntax::{BinOp, Formula, LanguageTag, UnOp};
use crate::topic::{GraspSet, TopicModel, Topics};

const BINOPS: [BinOp; 4] = [BinOp::And, BinOp::Or, BinOp::Imp, BinOp::Iff];

/// A formula of `lang` over `atoms` with nesting depth at most `depth`.
pub fn random_formula<R: Rng + ?Sized>(
    rng: &mut R,
    lang: LanguageTag,
    atoms: &[String],
    depth: usize,
) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return Formula::atom(atoms.choose(rng).expect("at least one atom").as_str());
    }
    let modal = lang.modal_ops();
    match rng.gen_range(0..10) {
        0..=1 => Formula::not(random_formula(rng, lang, atoms, depth - 1)),
        2..=4 => {
            let op = *modal
                .choose(rng)
                .expect("every language has a modal operator");
            Formula::unary(op, random_formula(rng, lang, atoms, depth - 1))
        }
        _ => {
            let op = *BINOPS.choose(rng).unwrap();
            Formula::binary(
                op,
                random_formula(rng, lang, atoms, depth - 1),
                random_formula(rng, lang, atoms, depth - 1),
            )
        }
    }
}

/// Names `p`, `q`, `r`, then `p3`, `p4`, ...
pub fn atom_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| match i {
            0 => "p".to_string(),
            1 => "q".to_string(),
            2 => "r".to_string(),
            _ => format!("p{i}"),
        })
        .collect()
}

/// A finite join semilattice of at most `max_elements` elements, realized
/// as a union-closed family of subsets of a four-element set, with random
/// `𝔎` and a random assignment of `atoms`.
pub fn random_topic_model<R: Rng + ?Sized>(
    rng: &mut R,
    atoms: &[String],
    max_elements: usize,
) -> TopicModel {
    assert!(max_elements >= 1);
    let target = rng.gen_range(1..=max_elements);
    let mut family: BTreeSet<u8> = BTreeSet::new();
    family.insert(rng.gen_range(0..16));
    for _ in 0..20 {
        if family.len() >= target {
            break;
        }
        let mut next = family.clone();
        let fresh = rng.gen_range(0..16u8);
        next.insert(fresh);
        loop {
            let joins: Vec<u8> = next
                .iter()
                .flat_map(|a| next.iter().map(move |b| a | b))
                .filter(|j| !next.contains(j))
                .collect();
            if joins.is_empty() {
                break;
            }
            next.extend(joins);
        }
        if next.len() <= target {
            family = next;
        }
    }
    let members: Vec<u8> = family.into_iter().collect();
    let index: BTreeMap<u8, usize> = members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let fusion = members
        .iter()
        .map(|a| members.iter().map(|b| index[&(a | b)]).collect())
        .collect();
    let names = (0..members.len()).map(|i| format!("t{i}")).collect();
    let assign = atoms
        .iter()
        .map(|p| (p.clone(), rng.gen_range(0..members.len())))
        .collect();
    TopicModel::from_table(names, fusion, rng.gen_range(0..members.len()), assign)
        .expect("union-closed family is a semilattice")
}

pub fn random_grasp_set<R: Rng + ?Sized>(rng: &mut R, atoms: &[String]) -> GraspSet {
    GraspSet::new(atoms.iter().filter(|_| rng.gen_bool(0.6)).cloned())
}

/// Which topic component random models get.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopicChoice {
    None,
    Grasp,
    Lattice {
        max_elements: usize,
    },
    /// Either of the two above, with equal odds.
    Mixed {
        max_elements: usize,
    },
}

pub fn random_kripke<R: Rng + ?Sized>(
    rng: &mut R,
    atoms: &[String],
    max_worlds: usize,
) -> KripkeModel {
    let n = rng.gen_range(1..=max_worlds);
    let density = rng.gen_range(0.2..0.8);
    let worlds = (1..=n).map(|i| format!("w{i}")).collect();
    let succ = (0..n)
        .map(|_| (0..n).filter(|_| rng.gen_bool(density)).collect())
        .collect();
    let valuation = atoms
        .iter()
        .map(|p| (p.clone(), (0..n).filter(|_| rng.gen_bool(0.5)).collect()))
        .collect();
    KripkeModel::from_indices(worlds, succ, valuation)
}

pub fn random_model<R: Rng + ?Sized>(
    rng: &mut R,
    atoms: &[String],
    max_worlds: usize,
    topics: TopicChoice,
) -> Model {
    let base = random_kripke(rng, atoms, max_worlds);
    let topics = match topics {
        TopicChoice::None => return Model::Kripke(base),
        TopicChoice::Grasp => Topics::Grasp(random_grasp_set(rng, atoms)),
        TopicChoice::Lattice { max_elements } => {
            Topics::Lattice(random_topic_model(rng, atoms, max_elements))
        }
        TopicChoice::Mixed { max_elements } => {
            if rng.gen_bool(0.5) {
                Topics::Grasp(random_grasp_set(rng, atoms))
            } else {
                Topics::Lattice(random_topic_model(rng, atoms, max_elements))
            }
        }
    };
    Model::Topical(TopicSensitiveModel { base, topics })
}

/// The unary operators a language admits, negation included.
pub fn unary_ops(lang: LanguageTag) -> Vec<UnOp> {
    let mut ops = vec![UnOp::Not];
    ops.extend_from_slice(lang.modal_ops());
    ops
}
