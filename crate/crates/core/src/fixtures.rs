//! Worked models and proof scripts shipped with the crate.

use crate::model::{load, Model};
use crate::proofsys::Proof;
use crate::semantics::System;
use crate::syntax::{parse, Formula};

/// William III does not grasp the topic of `q`: `t(p) = b = 𝔎`,
/// `t(q) = a`, `b ⊏ a`, with `Rww` and `Rww'` and both atoms true
/// everywhere.
pub const WILLIAM3_HIW: &str = include_str!("../fixtures/william3_hiw.json");

/// The same topics over `R = {(w, w')}` with `p` and `q` true only at `w`.
pub const WILLIAM3_HDI: &str = include_str!("../fixtures/william3_hdi.json");

/// One reflexive world where `p` holds and is grasped. `Id p` is true here
/// only because the `Id` clause skips `w` itself.
pub const HDI_SELF_LOOP: &str = include_str!("../fixtures/hdi_self_loop.json");

pub fn william3_hiw() -> Model {
    load(WILLIAM3_HIW).expect("bundled model loads")
}

pub fn william3_hdi() -> Model {
    load(WILLIAM3_HDI).expect("bundled model loads")
}

pub fn hdi_self_loop() -> Model {
    load(HDI_SELF_LOOP).expect("bundled model loads")
}

/// A proof script together with the system it is checked in and the
/// theorem it must end with.
#[derive(Debug, Clone, Copy)]
pub struct BundledProof {
    pub name: &'static str,
    pub system: System,
    pub goal: &'static str,
    pub json: &'static str,
}

impl BundledProof {
    pub fn proof(&self) -> Proof {
        Proof::from_json(self.json).expect("bundled proof parses")
    }

    pub fn goal(&self) -> Formula {
        parse(self.goal, self.system.language()).expect("bundled goal parses")
    }
}

/// Generalized `A6_Iw`, `A7_Iu` and `A2_Id`, each at `k = 2`.
pub const BUNDLED_PROOFS: [BundledProof; 3] = [
    BundledProof {
        name: "gen_a6_iw",
        system: System::HIW,
        goal: "((~Iw ((p & q) -> ~r) & (~Iw p & ~Iw q)) & (~Iw (r -> p) & ~Iw (r -> q))) -> ~Iw r",
        json: include_str!("../fixtures/proofs/gen_a6_iw_k2.json"),
    },
    BundledProof {
        name: "gen_a7_iu",
        system: System::HIU,
        goal: "((~Iu (p | r) & ~Iu (q | r)) & ~Iu ((p & q) -> r)) -> ~Iu r",
        json: include_str!("../fixtures/proofs/gen_a7_iu_k2.json"),
    },
    BundledProof {
        name: "gen_a2_id",
        system: System::HDI,
        goal: "(Id p & Id q) -> Id (p | q)",
        json: include_str!("../fixtures/proofs/gen_a2_id_k2.json"),
    },
];

pub fn bundled(name: &str) -> Option<&'static BundledProof> {
    BUNDLED_PROOFS.iter().find(|b| b.name == name)
}
