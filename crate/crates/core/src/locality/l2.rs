//! Locality on the Fourier side (`p = 2`).
//!
//! A point `f` passes when the image blocks can be matched to the input
//! blocks by a dimension-preserving bijection `α` with `ψ(f)_σ ~ f_{α(σ)}`:
//! then the block map `(A_σ) ↦ (U_σ A_{α(σ)} U_σ*)` is an automorphism that
//! agrees with `ψ` at `f`.

use super::equiv::{counterexample_matrix, decide, EquivOptions, DEFAULT_EQUIV_TOL};
use super::{SamplingPlan, Verdict, WitnessPoint};
use crate::autolab::{random_tuple, BlockMap, TupleMap};
use crate::conv::{fourier, BlockTuple};
use crate::linalg::identity;
use crate::repr::DualObject;
use crate::rng::{complex_normal_matrix, random_unitary, stream, stream_rng, Rng};
use crate::{CMat, Complex64, Error, Result};

/// Idempotent tuples sampled when the plan asks for them.
const IDEMPOTENT_SAMPLES: usize = 8;
const FILLER_ATTEMPTS: usize = 64;

/// Why a point fails: a dimension class with no perfect matching.
#[derive(Debug, Clone, PartialEq)]
pub struct Obstruction {
    pub dim_class: usize,
    /// First image block left unmatched.
    pub block: usize,
    /// Trace word separating that image block from the input block at the
    /// same index, when they are not equivalent.
    pub word: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointDecision {
    pub local: bool,
    /// `matching[σ] = α(σ)` when local.
    pub matching: Option<Vec<usize>>,
    pub obstruction: Option<Obstruction>,
}

/// Per-point locality test. Matching inside each dimension class is a
/// deterministic augmenting-path search with edges from the oracle.
pub fn local_at_point_l2(
    map: &dyn TupleMap,
    f: &BlockTuple,
    dual: &DualObject,
    tol: f64,
) -> Result<PointDecision> {
    f.check_shape(dual)?;
    let image = map.apply_tuple(f)?;
    image.check_shape(dual)?;
    let opts = EquivOptions {
        tol,
        witness: false,
        ..EquivOptions::default()
    };
    let mut matching = vec![usize::MAX; dual.len()];
    for (dim, members) in dual.dim_classes() {
        let k = members.len();
        let mut edges = vec![vec![false; k]; k];
        for (i, &s) in members.iter().enumerate() {
            for (j, &t) in members.iter().enumerate() {
                edges[i][j] = decide(image.block(s), f.block(t), &opts)?.equivalent;
            }
        }
        let assignment = bipartite_matching(&edges);
        if let Some(i) = assignment.iter().position(Option::is_none) {
            let s = members[i];
            let d = decide(image.block(s), f.block(s), &opts)?;
            return Ok(PointDecision {
                local: false,
                matching: None,
                obstruction: Some(Obstruction {
                    dim_class: dim,
                    block: s,
                    word: d.mismatch.map(|m| m.word.to_string()),
                }),
            });
        }
        for (i, j) in assignment.into_iter().enumerate() {
            matching[members[i]] = members[j.expect("complete")];
        }
    }
    Ok(PointDecision {
        local: true,
        matching: Some(matching),
        obstruction: None,
    })
}

/// Kuhn's augmenting paths; left vertices and edges are scanned in index
/// order so the result is deterministic. Entry `i` is the right partner of
/// left vertex `i`, `None` where the maximum matching leaves it out.
fn bipartite_matching(edges: &[Vec<bool>]) -> Vec<Option<usize>> {
    fn augment(i: usize, edges: &[Vec<bool>], seen: &mut [bool], right_of: &mut [Option<usize>]) -> bool {
        for j in 0..edges[i].len() {
            if edges[i][j] && !seen[j] {
                seen[j] = true;
                if right_of[j].is_none_or(|other| augment(other, edges, seen, right_of)) {
                    right_of[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    let k = edges.len();
    let mut right_of: Vec<Option<usize>> = vec![None; k];
    for i in 0..k {
        let mut seen = vec![false; k];
        augment(i, edges, &mut seen, &mut right_of);
    }
    let mut left_of = vec![None; k];
    for (j, i) in right_of.into_iter().enumerate() {
        if let Some(i) = i {
            left_of[i] = Some(j);
        }
    }
    left_of
}

/// Random idempotent tuples: per block a random rank, alternately an
/// orthogonal projection `Q E Q*` and an oblique idempotent `S E S⁻¹`.
pub fn sample_idempotents(dual: &DualObject, count: usize, seed: u64) -> Vec<BlockTuple> {
    let mut rng = stream_rng(seed, stream::SAMPLING ^ 0x1d);
    (0..count)
        .map(|k| {
            BlockTuple::new(
                dual.dims()
                    .into_iter()
                    .map(|d| random_idempotent(&mut rng, d, k % 2 == 1))
                    .collect(),
            )
        })
        .collect()
}

fn random_idempotent(rng: &mut Rng, d: usize, oblique: bool) -> CMat {
    use rand::Rng as _;
    let rank = rng.random_range(0..=d);
    let e = CMat::from_fn(d, d, |i, j| {
        if i == j && i < rank {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    if oblique {
        // shift keeps the similarity well conditioned
        let s = complex_normal_matrix(rng, d, d) + identity(d) * Complex64::new(3.0, 0.0);
        match s.clone().try_inverse() {
            Some(s_inv) => s * e * s_inv,
            None => e,
        }
    } else {
        let q = random_unitary(rng, d);
        &q * e * q.adjoint()
    }
}

/// Tuple with `counterexample_matrix(d)` in block `index` and, in every other
/// block of the same dimension, a filler that is not equivalent to the
/// counterexample, to its transpose, or to any other filler. Blocks of other
/// dimensions are zero.
pub fn counterexample_embedding(dual: &DualObject, index: usize) -> Result<BlockTuple> {
    dual.check_index(index)?;
    let d = dual.irrep(index).dim();
    let c = counterexample_matrix(d.max(2))?;
    let c = if d == 1 { CMat::zeros(1, 1) } else { c };
    let mut blocks: Vec<CMat> = dual.dims().into_iter().map(|k| CMat::zeros(k, k)).collect();
    blocks[index] = c.clone();
    let opts = EquivOptions {
        witness: false,
        ..EquivOptions::default()
    };
    let mut rng = stream_rng(index as u64, stream::FILLER);
    let mut placed = vec![c.clone(), c.transpose()];
    for t in (0..dual.len()).filter(|&t| t != index && dual.irrep(t).dim() == d) {
        let filler = (0..FILLER_ATTEMPTS)
            .map(|_| complex_normal_matrix(&mut rng, d, d))
            .find(|cand| {
                placed
                    .iter()
                    .all(|p| decide(cand, p, &opts).is_ok_and(|r| !r.equivalent))
            })
            .ok_or_else(|| Error::NumericalCheck(format!("no pinning filler found for block {t}")))?;
        placed.push(filler.clone());
        blocks[t] = filler;
    }
    Ok(BlockTuple::new(blocks))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Refutation {
    /// A point at which the blockwise transpose of the chosen block is not
    /// local, together with the failing decision.
    Witness {
        tuple: BlockTuple,
        decision: PointDecision,
    },
    /// Blocks of dimension `≤ 2` cannot be refuted this way: every such matrix
    /// is unitarily equivalent to its transpose.
    NoRefutation,
}

/// Witness against the map that transposes block `index` and fixes the rest.
pub fn refute_blockwise_transpose(dual: &DualObject, index: usize) -> Result<Refutation> {
    dual.check_index(index)?;
    if dual.irrep(index).dim() <= 2 {
        return Ok(Refutation::NoRefutation);
    }
    let tuple = counterexample_embedding(dual, index)?;
    let map = BlockMap::transpose_block(dual, index)?;
    let decision = local_at_point_l2(&map, &tuple, dual, DEFAULT_EQUIV_TOL)?;
    if decision.local {
        return Err(Error::NumericalCheck(format!(
            "counterexample embedding for block {index} did not refute the transpose"
        )));
    }
    Ok(Refutation::Witness { tuple, decision })
}

/// Structured points in sampling order, with labels.
pub fn structured_points_l2(dual: &DualObject, plan: &SamplingPlan) -> Result<Vec<(String, BlockTuple)>> {
    let s = plan.structured;
    let mut points = Vec::new();
    if s.algebra_unit {
        points.push(("algebra_unit".to_string(), BlockTuple::identity(dual)));
    }
    if s.minimal_ideal_units {
        for i in 0..dual.len() {
            let mut blocks = BlockTuple::zeros(dual).into_blocks();
            blocks[i] = identity(dual.irrep(i).dim());
            points.push((format!("minimal_ideal_unit[{i}]"), BlockTuple::new(blocks)));
        }
    }
    if s.idempotents {
        for (k, e) in sample_idempotents(dual, IDEMPOTENT_SAMPLES, plan.seed).into_iter().enumerate() {
            points.push((format!("idempotent[{k}]"), e));
        }
    }
    if s.counterexample_embeddings {
        for i in (0..dual.len()).filter(|&i| dual.irrep(i).dim() >= 2) {
            points.push((format!("counterexample_embedding[{i}]"), counterexample_embedding(dual, i)?));
        }
    }
    if s.separating_function {
        let f = super::lp::separating_function(dual.group());
        points.push(("separating_function".to_string(), fourier(&f, dual)?));
    }
    Ok(points)
}

/// Sampled locality verdict: structured points first, then `n_random`
/// Gaussian tuples. Stops at the first failing point.
pub fn is_local_automorphism_l2(map: &dyn TupleMap, dual: &DualObject, plan: &SamplingPlan) -> Result<Verdict> {
    let mut evaluated = 0;
    let mut check = |label: String, point: BlockTuple| -> Result<Option<Verdict>> {
        evaluated += 1;
        let decision = local_at_point_l2(map, &point, dual, DEFAULT_EQUIV_TOL)?;
        Ok((!decision.local).then_some(Verdict::Refuted {
            samples: evaluated,
            seed: plan.seed,
            point: label,
            witness: WitnessPoint::Tuple(point),
            obstruction: decision.obstruction,
        }))
    };
    for (label, point) in structured_points_l2(dual, plan)? {
        if let Some(v) = check(label, point)? {
            return Ok(v);
        }
    }
    let mut rng = stream_rng(plan.seed, stream::SAMPLING);
    for k in 0..plan.n_random {
        if let Some(v) = check(format!("random[{k}]"), random_tuple(dual, &mut rng))? {
            return Ok(v);
        }
    }
    Ok(Verdict::LocalSampled {
        samples: evaluated,
        seed: plan.seed,
    })
}
