//! Local-automorphism verdicts.
//!
//! A map is a local automorphism if at every single point it agrees with some
//! automorphism (which may change from point to point). Only refutations are
//! conclusive here: a `LOCAL_SAMPLED` verdict is evidence over the sampled
//! points, a `REFUTED` verdict carries a concrete witness.

mod equiv;
mod l2;
mod lp;

use serde::Serialize;

pub use equiv::{
    complete_family, counterexample_matrix, decide, find_witness, spanning_words, unitary_equivalent,
    EquivDecision, EquivDecisionJson, EquivOptions, Letter, TraceMismatch, WitnessUnitary, Word,
    DEFAULT_EQUIV_TOL,
};
pub use l2::{
    counterexample_embedding, is_local_automorphism_l2, local_at_point_l2, refute_blockwise_transpose,
    sample_idempotents, structured_points_l2, Obstruction, PointDecision, Refutation,
};
pub use lp::{local_check_lp, separating_function, LP_MATCH_TOL};

use crate::conv::{AlgebraElement, TupleJson};
use crate::json::{vec_to_json, JsonComplex};

/// Which structured points are sampled in addition to random ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructuredPoints {
    pub algebra_unit: bool,
    pub minimal_ideal_units: bool,
    pub idempotents: bool,
    pub counterexample_embeddings: bool,
    pub separating_function: bool,
}

impl StructuredPoints {
    pub const ALL: StructuredPoints = StructuredPoints {
        algebra_unit: true,
        minimal_ideal_units: true,
        idempotents: true,
        counterexample_embeddings: true,
        separating_function: true,
    };
    pub const NONE: StructuredPoints = StructuredPoints {
        algebra_unit: false,
        minimal_ideal_units: false,
        idempotents: false,
        counterexample_embeddings: false,
        separating_function: false,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplingPlan {
    pub seed: u64,
    pub n_random: usize,
    pub structured: StructuredPoints,
}

impl SamplingPlan {
    pub fn new(seed: u64, n_random: usize) -> Self {
        SamplingPlan {
            seed,
            n_random: n_random.max(1),
            structured: StructuredPoints::ALL,
        }
    }
}

/// The point at which a map was refuted.
#[derive(Debug, Clone, PartialEq)]
pub enum WitnessPoint {
    Tuple(crate::conv::BlockTuple),
    Function(AlgebraElement),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    LocalSampled {
        samples: usize,
        seed: u64,
    },
    Refuted {
        /// Points evaluated up to and including the witness.
        samples: usize,
        seed: u64,
        /// Label of the sampled point, e.g. `random[12]`.
        point: String,
        witness: WitnessPoint,
        obstruction: Option<Obstruction>,
    },
}

impl Verdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::LocalSampled { .. } => "LOCAL_SAMPLED",
            Verdict::Refuted { .. } => "REFUTED",
        }
    }

    /// Report form `{"map", "verdict", "samples", "seed", "witness"?, "obstruction"?}`.
    pub fn report(&self, map: &str, dual_name: &str) -> VerdictReport {
        match self {
            Verdict::LocalSampled { samples, seed } => VerdictReport {
                map: map.to_string(),
                verdict: self.label(),
                samples: *samples,
                seed: *seed,
                point: None,
                witness: None,
                obstruction: None,
            },
            Verdict::Refuted {
                samples,
                seed,
                point,
                witness,
                obstruction,
            } => VerdictReport {
                map: map.to_string(),
                verdict: self.label(),
                samples: *samples,
                seed: *seed,
                point: Some(point.clone()),
                witness: Some(match witness {
                    WitnessPoint::Tuple(t) => WitnessJson::Tuple(t.to_json_value(dual_name)),
                    WitnessPoint::Function(f) => WitnessJson::Function {
                        group: dual_name.to_string(),
                        values: vec_to_json(f.values()),
                    },
                }),
                obstruction: obstruction.as_ref().map(|o| ObstructionJson {
                    dim_class: o.dim_class,
                    block: o.block,
                    word: o.word.clone(),
                }),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictReport {
    pub map: String,
    pub verdict: &'static str,
    pub samples: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionJson>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum WitnessJson {
    Tuple(TupleJson),
    Function { group: String, values: Vec<JsonComplex> },
}

#[derive(Debug, Clone, Serialize)]
pub struct ObstructionJson {
    pub dim_class: usize,
    pub block: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
}
