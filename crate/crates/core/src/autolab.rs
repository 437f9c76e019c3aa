//! The two families of isometric automorphisms.
//!
//! * [`WeightedComposition`]: `f ↦ τ·(f ∘ φ)` with `τ` a character and `φ` a
//!   group automorphism or antiautomorphism. These are exactly the isometric
//!   automorphisms of `L^p(G)` for `p ≠ 2` (and their antiautomorphic
//!   counterparts).
//! * [`BlockMap`]: `(A_σ)_σ ↦ (U_{α(σ)} A_{α(σ)}^{[T]} U_{α(σ)}*)_σ` on the Fourier
//!   side, with a transpose wherever a flag is set. These are the isometric
//!   Jordan automorphisms of the `C₂` block algebra.

use serde::{Deserialize, Serialize};

use crate::conv::{convolve, fourier, inverse_fourier, p_norm, AlgebraElement, BlockTuple};
use crate::group::{
    enumerate_automorphisms, enumerate_characters, Character, FiniteGroup, GroupMap, MapKind,
};
use crate::json::{matrix_from_json, matrix_to_json, vec_from_json, vec_to_json, JsonComplex, JsonMatrix};
use crate::linalg::{hs_norm, identity, unitarity_defect};
use crate::repr::DualObject;
use crate::rng::{complex_normal_matrix, complex_normal_vec, stream, stream_rng};
use crate::{CMat, Complex64, Error, Result};

pub const UNITARY_TOL: f64 = 1e-9;
/// Residual bound for the numeric (anti)multiplicativity and Jordan checks.
pub const IDENTITY_TOL: f64 = 1e-9;
pub const ISOMETRY_TOL: f64 = 1e-9;
/// Random pairs used to back the structural classification.
pub const CLASSIFY_PAIRS: usize = 50;

/// A linear map on functions over the group.
pub trait FunctionMap {
    fn apply_fn(&self, f: &AlgebraElement) -> Result<AlgebraElement>;
}

/// A linear map on Fourier-side block tuples.
pub trait TupleMap {
    fn apply_tuple(&self, a: &BlockTuple) -> Result<BlockTuple>;
}

impl<F> TupleMap for F
where
    F: Fn(&BlockTuple) -> Result<BlockTuple>,
{
    fn apply_tuple(&self, a: &BlockTuple) -> Result<BlockTuple> {
        self(a)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedComposition {
    weight: Character,
    motion: GroupMap,
}

impl WeightedComposition {
    pub fn new(group: &FiniteGroup, weight: Character, motion: GroupMap) -> Result<Self> {
        if weight.values().len() != group.order() {
            return Err(Error::SizeMismatch {
                expected: group.order(),
                found: weight.values().len(),
            });
        }
        motion.validate(group)?;
        Ok(WeightedComposition { weight, motion })
    }

    pub fn identity(group: &FiniteGroup) -> Self {
        WeightedComposition {
            weight: Character::trivial(group),
            motion: GroupMap::identity(group),
        }
    }

    pub fn weight(&self) -> &Character {
        &self.weight
    }

    pub fn motion(&self) -> &GroupMap {
        &self.motion
    }

    /// `x ↦ weight(x)·f(motion(x))`.
    pub fn apply(&self, f: &AlgebraElement) -> Result<AlgebraElement> {
        let n = self.motion.perm().len();
        if f.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: f.len(),
            });
        }
        AlgebraElement::new(
            (0..n)
                .map(|x| self.weight.at(x) * f.at(self.motion.apply(x)))
                .collect(),
        )
    }

    pub fn to_json_value(&self) -> WeightedCompositionJson {
        WeightedCompositionJson {
            character: vec_to_json(self.weight.values()),
            motion: self.motion.perm().to_vec(),
            kind: self.motion.kind(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("map serializes")
    }

    pub fn from_json(text: &str, group: &FiniteGroup) -> Result<Self> {
        let parsed: WeightedCompositionJson = serde_json::from_str(text)?;
        let weight = Character::new(group, vec_from_json(&parsed.character))?;
        let motion = GroupMap::new(group, parsed.motion, parsed.kind)?;
        WeightedComposition::new(group, weight, motion)
    }
}

impl FunctionMap for WeightedComposition {
    fn apply_fn(&self, f: &AlgebraElement) -> Result<AlgebraElement> {
        self.apply(f)
    }
}

/// `{"character": [[re,im]], "motion": [int], "kind": "auto"|"antiauto"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightedCompositionJson {
    pub character: Vec<JsonComplex>,
    pub motion: Vec<usize>,
    pub kind: MapKind,
}

/// Every `(character, automorphism)` pair, character-major.
pub fn enumerate_isometric_automorphisms_lp(group: &FiniteGroup) -> Result<Vec<WeightedComposition>> {
    let characters = enumerate_characters(group)?;
    let automorphisms = enumerate_automorphisms(group)?;
    Ok(characters
        .iter()
        .flat_map(|c| {
            automorphisms.iter().map(move |a| WeightedComposition {
                weight: c.clone(),
                motion: a.clone(),
            })
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockMap {
    perm: Vec<usize>,
    unitaries: Vec<CMat>,
    flags: Vec<bool>,
}

impl BlockMap {
    /// Validated constructor: `perm` is a dimension-preserving bijection of the
    /// dual indices and `unitaries[σ]` is a `d_σ × d_σ` unitary.
    pub fn new(dual: &DualObject, perm: Vec<usize>, unitaries: Vec<CMat>, flags: Vec<bool>) -> Result<Self> {
        let map = BlockMap::new_unchecked(perm, unitaries, flags);
        map.validate(dual)?;
        Ok(map)
    }

    /// No validation at all; exists for fault-injection experiments.
    pub fn new_unchecked(perm: Vec<usize>, unitaries: Vec<CMat>, flags: Vec<bool>) -> Self {
        BlockMap {
            perm,
            unitaries,
            flags,
        }
    }

    pub fn identity(dual: &DualObject) -> Self {
        Self::transposing(dual, vec![false; dual.len()])
    }

    /// Identity permutation and unitaries, transposing where flagged.
    pub fn transposing(dual: &DualObject, flags: Vec<bool>) -> Self {
        BlockMap {
            perm: (0..dual.len()).collect(),
            unitaries: dual.dims().into_iter().map(identity).collect(),
            flags,
        }
    }

    /// Transpose exactly the block `index`.
    pub fn transpose_block(dual: &DualObject, index: usize) -> Result<Self> {
        dual.check_index(index)?;
        let mut flags = vec![false; dual.len()];
        flags[index] = true;
        Ok(Self::transposing(dual, flags))
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn unitaries(&self) -> &[CMat] {
        &self.unitaries
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    pub fn validate(&self, dual: &DualObject) -> Result<()> {
        let k = dual.len();
        if self.perm.len() != k || self.unitaries.len() != k || self.flags.len() != k {
            return Err(Error::ShapeMismatch(format!(
                "block map sizes ({}, {}, {}) do not match {k} irreps",
                self.perm.len(),
                self.unitaries.len(),
                self.flags.len()
            )));
        }
        let dims = dual.dims();
        let mut seen = vec![false; k];
        for (s, &t) in self.perm.iter().enumerate() {
            if t >= k || std::mem::replace(&mut seen[t], true) {
                return Err(Error::InvalidMap("block permutation is not a bijection".into()));
            }
            if dims[s] != dims[t] {
                return Err(Error::InvalidMap(format!(
                    "block permutation sends dim {} to dim {}",
                    dims[s], dims[t]
                )));
            }
        }
        for (s, u) in self.unitaries.iter().enumerate() {
            if u.nrows() != dims[s] || u.ncols() != dims[s] {
                return Err(Error::ShapeMismatch(format!("unitary {s} has the wrong shape")));
            }
            let defect = unitarity_defect(u);
            if defect > UNITARY_TOL {
                return Err(Error::InvalidMap(format!("matrix {s} is not unitary (defect {defect:e})")));
            }
        }
        Ok(())
    }

    /// `self ∘ first`: apply `first`, then `self`. Flags compose by XOR on the
    /// source block and the permutations compose.
    pub fn compose(&self, first: &BlockMap) -> BlockMap {
        let k = self.perm.len();
        let mut first_inv = vec![0; k];
        for (t, &r) in first.perm.iter().enumerate() {
            first_inv[r] = t;
        }
        let perm = self.perm.iter().map(|&t| first.perm[t]).collect();
        let unitaries = (0..k)
            .map(|r| {
                let t = first_inv[r];
                let inner = if self.flags[t] {
                    first.unitaries[r].map(|z| z.conj())
                } else {
                    first.unitaries[r].clone()
                };
                &self.unitaries[t] * inner
            })
            .collect();
        let flags = (0..k).map(|r| first.flags[r] ^ self.flags[first_inv[r]]).collect();
        BlockMap {
            perm,
            unitaries,
            flags,
        }
    }

    pub fn to_json_value(&self) -> BlockMapJson {
        BlockMapJson {
            perm: self.perm.clone(),
            flags: self.flags.clone(),
            unitaries: self.unitaries.iter().map(matrix_to_json).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("block map serializes")
    }

    pub fn from_json(text: &str, dual: &DualObject) -> Result<Self> {
        let parsed: BlockMapJson = serde_json::from_str(text)?;
        let unitaries = parsed
            .unitaries
            .iter()
            .map(matrix_from_json)
            .collect::<Result<Vec<_>>>()?;
        BlockMap::new(dual, parsed.perm, unitaries, parsed.flags)
    }
}

/// `{"perm": [int], "flags": [bool], "unitaries": [matrix]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockMapJson {
    pub perm: Vec<usize>,
    pub flags: Vec<bool>,
    pub unitaries: Vec<JsonMatrix>,
}

/// Block `σ` of the result is `U_{α(σ)} A_{α(σ)}^{[T]} U_{α(σ)}*`.
pub fn apply_block_map(map: &BlockMap, a: &BlockTuple) -> Result<BlockTuple> {
    let k = map.perm.len();
    if a.len() != k || map.unitaries.len() != k || map.flags.len() != k {
        return Err(Error::ShapeMismatch(format!(
            "tuple has {} blocks, map expects {k}",
            a.len()
        )));
    }
    let blocks = map
        .perm
        .iter()
        .map(|&t| {
            let (u, src) = (&map.unitaries[t], a.block(t));
            if src.nrows() != u.nrows() || src.ncols() != u.ncols() {
                return Err(Error::ShapeMismatch(format!("block {t} does not match its unitary")));
            }
            let src = if map.flags[t] { src.transpose() } else { src.clone() };
            Ok(u * src * u.adjoint())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BlockTuple::new(blocks))
}

impl TupleMap for BlockMap {
    fn apply_tuple(&self, a: &BlockTuple) -> Result<BlockTuple> {
        apply_block_map(self, a)
    }
}

/// A block map transported to functions by conjugation with the Fourier
/// transform.
#[derive(Debug, Clone, Copy)]
pub struct LiftedBlockMap<'a> {
    pub map: &'a BlockMap,
    pub dual: &'a DualObject,
}

impl FunctionMap for LiftedBlockMap<'_> {
    fn apply_fn(&self, f: &AlgebraElement) -> Result<AlgebraElement> {
        let image = apply_block_map(self.map, &fourier(f, self.dual)?)?;
        inverse_fourier(&image, self.dual)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JordanKind {
    Automorphism,
    Antiautomorphism,
    ProperJordan,
}

/// A pair of tuples at which a product identity fails.
#[derive(Debug, Clone, PartialEq)]
pub struct TupleWitness {
    pub left: BlockTuple,
    pub right: BlockTuple,
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub kind: JordanKind,
    /// Largest `‖b(AB) − b(A)b(B)‖` over the sampled pairs.
    pub multiplicative_residual: f64,
    /// Largest `‖b(AB) − b(B)b(A)‖`.
    pub antimultiplicative_residual: f64,
    /// Largest `‖b(AB+BA) − b(A)b(B) − b(B)b(A)‖`.
    pub jordan_residual: f64,
    pub multiplicativity_witness: Option<TupleWitness>,
    pub antimultiplicativity_witness: Option<TupleWitness>,
}

/// Structural classification by transpose flags on blocks of dimension
/// `≥ 2`, cross-validated on random pairs.
pub fn classify_block_map(map: &BlockMap, dual: &DualObject, seed: u64) -> Result<Classification> {
    map.validate(dual)?;
    let relevant: Vec<bool> = dual
        .dims()
        .iter()
        .zip(&map.flags)
        .filter(|(&d, _)| d >= 2)
        .map(|(_, &f)| f)
        .collect();
    let kind = if relevant.iter().all(|&f| !f) {
        JordanKind::Automorphism
    } else if relevant.iter().all(|&f| f) {
        JordanKind::Antiautomorphism
    } else {
        JordanKind::ProperJordan
    };

    let mut rng = stream_rng(seed, stream::CLASSIFY);
    let mut mult: f64 = 0.0;
    let mut anti: f64 = 0.0;
    let mut jordan: f64 = 0.0;
    let mut mult_witness: Option<TupleWitness> = None;
    let mut anti_witness: Option<TupleWitness> = None;
    for _ in 0..CLASSIFY_PAIRS {
        let a = random_tuple(dual, &mut rng);
        let b = random_tuple(dual, &mut rng);
        let (ia, ib) = (apply_block_map(map, &a)?, apply_block_map(map, &b)?);
        let ab = apply_block_map(map, &a.mul(&b))?;
        let ba = apply_block_map(map, &b.mul(&a))?;
        let m = ab.max_block_distance(&ia.mul(&ib));
        let r = ab.max_block_distance(&ib.mul(&ia));
        let j = ab.add(&ba).max_block_distance(&ia.mul(&ib).add(&ib.mul(&ia)));
        if mult_witness.as_ref().is_none_or(|w| m > w.violation) && m > IDENTITY_TOL {
            mult_witness = Some(TupleWitness {
                left: a.clone(),
                right: b.clone(),
                violation: m,
            });
        }
        if anti_witness.as_ref().is_none_or(|w| r > w.violation) && r > IDENTITY_TOL {
            anti_witness = Some(TupleWitness {
                left: a,
                right: b,
                violation: r,
            });
        }
        mult = mult.max(m);
        anti = anti.max(r);
        jordan = jordan.max(j);
    }
    let consistent = jordan <= IDENTITY_TOL
        && match kind {
            JordanKind::Automorphism => mult <= IDENTITY_TOL,
            JordanKind::Antiautomorphism => anti <= IDENTITY_TOL,
            JordanKind::ProperJordan => mult > IDENTITY_TOL && anti > IDENTITY_TOL,
        };
    if !consistent {
        return Err(Error::NumericalCheck(format!(
            "structural class {kind:?} not confirmed: mult {mult:e}, anti {anti:e}, jordan {jordan:e}"
        )));
    }
    Ok(Classification {
        kind,
        multiplicative_residual: mult,
        antimultiplicative_residual: anti,
        jordan_residual: jordan,
        multiplicativity_witness: mult_witness,
        antimultiplicativity_witness: anti_witness,
    })
}

/// Tuple with independent standard complex normal entries.
pub fn random_tuple(dual: &DualObject, rng: &mut crate::rng::Rng) -> BlockTuple {
    BlockTuple::new(dual.dims().into_iter().map(|d| complex_normal_matrix(rng, d, d)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsometryReport {
    pub p: f64,
    pub trials: usize,
    /// Largest `|‖map(f)‖_p / ‖f‖_p − 1|`.
    pub max_deviation: f64,
    pub passes: bool,
}

/// Randomized isometry check in the `p`-norm over `trials` Gaussian functions.
pub fn is_isometry(
    map: &dyn FunctionMap,
    p: f64,
    group: &FiniteGroup,
    trials: usize,
    seed: u64,
) -> Result<IsometryReport> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidP(p));
    }
    let mut rng = stream_rng(seed, stream::ISOMETRY);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let f = AlgebraElement::new(complex_normal_vec(&mut rng, group.order()))?;
        let before = p_norm(&f, p, group)?;
        let after = p_norm(&map.apply_fn(&f)?, p, group)?;
        worst = worst.max((after / before - 1.0).abs());
    }
    Ok(IsometryReport {
        p,
        trials,
        max_deviation: worst,
        passes: worst <= ISOMETRY_TOL,
    })
}

/// A pair of functions at which a product identity fails.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionWitness {
    pub left: AlgebraElement,
    pub right: AlgebraElement,
    /// `‖map(f∗g) − map(f)∗map(g)‖₂` (factors swapped when reversed).
    pub violation: f64,
}

/// Search for `(f, g)` with `map(f∗g) ≠ map(f)∗map(g)` (or `map(g)∗map(f)`
/// when `reversed`). Tries all pairs of point masses first, then `trials`
/// Gaussian pairs; returns the largest violation above `threshold`.
pub fn find_product_violation(
    map: &dyn FunctionMap,
    group: &FiniteGroup,
    reversed: bool,
    threshold: f64,
    trials: usize,
    seed: u64,
) -> Result<Option<FunctionWitness>> {
    let n = group.order();
    let violation = |f: &AlgebraElement, g: &AlgebraElement| -> Result<f64> {
        let lhs = map.apply_fn(&convolve(f, g, group)?)?;
        let (mf, mg) = (map.apply_fn(f)?, map.apply_fn(g)?);
        let rhs = if reversed {
            convolve(&mg, &mf, group)?
        } else {
            convolve(&mf, &mg, group)?
        };
        p_norm(&lhs.sub(&rhs), 2.0, group)
    };
    let mut best: Option<FunctionWitness> = None;
    let mut consider = |f: AlgebraElement, g: AlgebraElement, v: f64| {
        if v > threshold && best.as_ref().is_none_or(|w| v > w.violation) {
            best = Some(FunctionWitness {
                left: f,
                right: g,
                violation: v,
            });
        }
    };
    for x in 0..n {
        for y in 0..n {
            let (f, g) = (AlgebraElement::delta(n, x), AlgebraElement::delta(n, y));
            let v = violation(&f, &g)?;
            consider(f, g, v);
        }
    }
    let mut rng = stream_rng(seed, stream::SEARCH);
    for _ in 0..trials {
        let f = AlgebraElement::new(complex_normal_vec(&mut rng, n))?;
        let g = AlgebraElement::new(complex_normal_vec(&mut rng, n))?;
        let v = violation(&f, &g)?;
        consider(f, g, v);
    }
    Ok(best)
}

/// The block map induced on the Fourier side by a weighted composition.
///
/// With `σ'(y) = τ(φ⁻¹y)·σ(φ⁻¹y)` one has `(ψf)^(σ) = (1/|G|) Σ_y f(y) σ'(y)`.
/// For an automorphism motion `σ'` is an irrep `U ρ U*` of the dual; for an
/// antiautomorphism motion `σ'ᵀ` is, and the block gets a transpose flag.
/// The intertwiner `U` is the normalized group average of `σ'(y) X ρ(y)*`.
pub fn block_map_of(w: &WeightedComposition, dual: &DualObject, seed: u64) -> Result<BlockMap> {
    let group = dual.group();
    let n = group.order();
    if w.motion.perm().len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: w.motion.perm().len(),
        });
    }
    let anti = w.motion.kind() == MapKind::Antiautomorphism;
    let back = w.motion.inverse();
    let k = dual.len();
    let mut perm = vec![0; k];
    let mut unitaries: Vec<Option<CMat>> = vec![None; k];
    let mut flags = vec![false; k];
    let mut rng = stream_rng(seed, stream::INTERTWINER);
    for (s, irrep) in dual.irreps().iter().enumerate() {
        // twisted representation, transposed in the anti case so it is a homomorphism
        let twisted: Vec<CMat> = group
            .elements()
            .map(|y| {
                let x = back.apply(y);
                let m = irrep.at(x) * w.weight.at(x);
                if anti {
                    m.transpose()
                } else {
                    m
                }
            })
            .collect();
        let row: Vec<Complex64> = twisted.iter().map(CMat::trace).collect();
        let r = dual
            .find_by_character(&row)
            .ok_or_else(|| Error::NumericalCheck(format!("twisted irrep {s} matches no class")))?;
        let target = dual.irrep(r);
        let d = irrep.dim();
        let x = complex_normal_matrix(&mut rng, d, d);
        let mut m = CMat::zeros(d, d);
        for y in group.elements() {
            m += &twisted[y] * &x * target.at(y).adjoint();
        }
        // m is a nonzero multiple of a unitary by Schur's lemma
        let norm = hs_norm(&m) / (d as f64).sqrt();
        if norm < 1e-8 {
            return Err(Error::NumericalCheck("degenerate intertwiner average".into()));
        }
        let u = m / Complex64::new(norm, 0.0);
        perm[s] = r;
        unitaries[r] = Some(if anti { u.map(|z| z.conj()) } else { u });
        flags[r] = anti;
    }
    let unitaries = unitaries
        .into_iter()
        .map(|u| u.ok_or_else(|| Error::NumericalCheck("twisted irreps are not a bijection".into())))
        .collect::<Result<Vec<_>>>()?;
    BlockMap::new(dual, perm, unitaries, flags)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{by_name, cyclic, enumerate_antiautomorphisms, symmetric};
    use crate::repr::decompose_regular;

    fn random_fn(n: usize, seed: u64) -> AlgebraElement {
        AlgebraElement::new(complex_normal_vec(&mut stream_rng(seed, 0), n)).unwrap()
    }

    fn dual(name: &str) -> DualObject {
        decompose_regular(&by_name(name).unwrap(), 11, 1e-8).unwrap()
    }

    #[test]
    fn identity_weighted_composition() {
        let g = symmetric(3);
        let f = random_fn(6, 1);
        assert_eq!(WeightedComposition::identity(&g).apply(&f).unwrap(), f);
    }

    #[test]
    fn z4_weighted_composition_preserves_p_norms() {
        let g = cyclic(4);
        let i = Complex64::new(0.0, 1.0);
        let weight = Character::new(&g, vec![1.0.into(), i, (-1.0).into(), -i]).unwrap();
        let motion = GroupMap::new(&g, vec![0, 3, 2, 1], MapKind::Automorphism).unwrap();
        let w = WeightedComposition::new(&g, weight, motion).unwrap();
        for seed in 0..5 {
            let f = random_fn(4, seed);
            let image = w.apply(&f).unwrap();
            for p in [1.0, 2.0, 3.0, f64::INFINITY] {
                let (a, b) = (p_norm(&f, p, &g).unwrap(), p_norm(&image, p, &g).unwrap());
                assert!((a - b).abs() <= 1e-12 * a, "p={p}");
            }
        }
    }

    #[test]
    fn weighted_compositions_respect_products() {
        let g = symmetric(3);
        let (f, h) = (random_fn(6, 3), random_fn(6, 4));
        let fh = convolve(&f, &h, &g).unwrap();
        for w in enumerate_isometric_automorphisms_lp(&g).unwrap() {
            let lhs = w.apply(&fh).unwrap();
            let rhs = convolve(&w.apply(&f).unwrap(), &w.apply(&h).unwrap(), &g).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-10);
        }
        let sign = enumerate_characters(&g).unwrap()[1].clone();
        for anti in enumerate_antiautomorphisms(&g).unwrap() {
            let w = WeightedComposition::new(&g, sign.clone(), anti).unwrap();
            let lhs = w.apply(&fh).unwrap();
            let swapped = convolve(&w.apply(&h).unwrap(), &w.apply(&f).unwrap(), &g).unwrap();
            assert!(lhs.max_abs_diff(&swapped) < 1e-10);
            let witness = find_product_violation(&w, &g, false, 1e-6, 0, 0).unwrap();
            assert!(witness.is_some(), "proper antiautomorphism must break multiplicativity");
        }
    }

    #[test]
    fn lp_automorphism_counts() {
        assert_eq!(enumerate_isometric_automorphisms_lp(&cyclic(4)).unwrap().len(), 8);
        assert_eq!(enumerate_isometric_automorphisms_lp(&symmetric(3)).unwrap().len(), 12);
        assert_eq!(enumerate_isometric_automorphisms_lp(&cyclic(1)).unwrap().len(), 1);
    }

    #[test]
    fn lp_automorphisms_are_distinct_maps() {
        let g = by_name("Q8").unwrap();
        let maps = enumerate_isometric_automorphisms_lp(&g).unwrap();
        let images: Vec<Vec<AlgebraElement>> = maps
            .iter()
            .map(|w| g.elements().map(|x| w.apply(&AlgebraElement::delta(8, x)).unwrap()).collect())
            .collect();
        for i in 0..images.len() {
            for j in 0..i {
                let differ = images[i].iter().zip(&images[j]).any(|(a, b)| a.max_abs_diff(b) > 1e-9);
                assert!(differ, "maps {i} and {j} coincide");
            }
        }
    }

    #[test]
    fn identity_block_map_is_identity() {
        let d = dual("S3");
        let a = random_tuple(&d, &mut stream_rng(1, 0));
        assert_eq!(apply_block_map(&BlockMap::identity(&d), &a).unwrap(), a);
    }

    #[test]
    fn transposing_the_two_dimensional_block_of_s3() {
        let d = dual("S3");
        let two = d.dims().iter().position(|&x| x == 2).unwrap();
        let map = BlockMap::transpose_block(&d, two).unwrap();
        let a = random_tuple(&d, &mut stream_rng(2, 0));
        let image = apply_block_map(&map, &a).unwrap();
        for i in 0..d.len() {
            let expected = if i == two { a.block(i).transpose() } else { a.block(i).clone() };
            assert_eq!(image.block(i), &expected);
        }
        let class = classify_block_map(&map, &d, 0).unwrap();
        assert_eq!(class.kind, JordanKind::Antiautomorphism);
        assert!(class.antimultiplicative_residual < 1e-9);
        assert!(class.multiplicativity_witness.is_some());
    }

    #[test]
    fn random_block_maps_are_c2_isometric() {
        let d = dual("Q8");
        let mut rng = stream_rng(3, 0);
        // Q8 dual: four 1-dim blocks and one 2-dim block; permute the 1-dim ones.
        let ones: Vec<usize> = (0..d.len()).filter(|&i| d.irrep(i).dim() == 1).collect();
        let mut perm: Vec<usize> = (0..d.len()).collect();
        perm[ones[0]] = ones[1];
        perm[ones[1]] = ones[2];
        perm[ones[2]] = ones[0];
        let unitaries = d.dims().into_iter().map(|k| crate::rng::random_unitary(&mut rng, k)).collect();
        let flags = (0..d.len()).map(|i| i % 2 == 0).collect();
        let map = BlockMap::new(&d, perm, unitaries, flags).unwrap();
        for _ in 0..100 {
            let a = random_tuple(&d, &mut rng);
            let image = apply_block_map(&map, &a).unwrap();
            assert!((image.c2_norm() - a.c2_norm()).abs() <= 1e-10 * a.c2_norm());
        }
    }

    #[test]
    fn classification_cases() {
        let s3 = dual("S3");
        assert_eq!(
            classify_block_map(&BlockMap::identity(&s3), &s3, 0).unwrap().kind,
            JordanKind::Automorphism
        );
        let all = BlockMap::transposing(&s3, vec![true; s3.len()]);
        assert_eq!(classify_block_map(&all, &s3, 0).unwrap().kind, JordanKind::Antiautomorphism);

        let s4 = dual("S4");
        let mut dims = s4.dims();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 1, 2, 3, 3]);
        let three = s4.dims().iter().position(|&x| x == 3).unwrap();
        let map = BlockMap::transpose_block(&s4, three).unwrap();
        let class = classify_block_map(&map, &s4, 0).unwrap();
        assert_eq!(class.kind, JordanKind::ProperJordan);
        assert!(class.multiplicativity_witness.unwrap().violation > 1e-3);
        assert!(class.antimultiplicativity_witness.is_some());
        assert!(class.jordan_residual < 1e-9);
    }

    #[test]
    fn flags_on_one_dimensional_blocks_are_ignored() {
        let d = dual("S3");
        let flags = d.dims().iter().map(|&k| k == 1).collect();
        let class = classify_block_map(&BlockMap::transposing(&d, flags), &d, 0).unwrap();
        assert_eq!(class.kind, JordanKind::Automorphism);
    }

    #[test]
    fn block_map_validation() {
        let d = dual("S3");
        let two = d.dims().iter().position(|&x| x == 2).unwrap();
        let one = (two + 1) % 3;
        let mut perm: Vec<usize> = (0..3).collect();
        perm.swap(two, one);
        let unitaries: Vec<CMat> = d.dims().into_iter().map(identity).collect();
        assert!(BlockMap::new(&d, perm, unitaries.clone(), vec![false; 3]).is_err());
        let mut scaled = unitaries.clone();
        scaled[two] *= Complex64::new(1.1, 0.0);
        assert!(BlockMap::new(&d, (0..3).collect(), scaled, vec![false; 3]).is_err());
        let short = BlockTuple::new(vec![CMat::zeros(1, 1)]);
        assert!(matches!(
            apply_block_map(&BlockMap::identity(&d), &short),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn isometry_reports() {
        let g = symmetric(3);
        for w in enumerate_isometric_automorphisms_lp(&g).unwrap() {
            for p in [1.0, 2.0, 4.5, f64::INFINITY] {
                assert!(is_isometry(&w, p, &g, 10, 1).unwrap().passes);
            }
        }
        let d = dual("S3");
        let two = d.dims().iter().position(|&x| x == 2).unwrap();
        let map = BlockMap::transpose_block(&d, two).unwrap();
        let lifted = LiftedBlockMap { map: &map, dual: &d };
        assert!(is_isometry(&lifted, 2.0, &g, 20, 2).unwrap().passes);

        let mut unitaries = map.unitaries().to_vec();
        unitaries[two] *= Complex64::new(1.1, 0.0);
        let faulty = BlockMap::new_unchecked(map.perm().to_vec(), unitaries, map.flags().to_vec());
        let report = is_isometry(&LiftedBlockMap { map: &faulty, dual: &d }, 2.0, &g, 20, 2).unwrap();
        assert!(!report.passes);
        // ‖·‖ grows by at most 1.21 on the 2-dim block
        assert!(report.max_deviation > 1e-3 && report.max_deviation <= 0.21 + 1e-12);
        assert!(matches!(is_isometry(&lifted, 0.5, &g, 1, 0), Err(Error::InvalidP(_))));
    }

    #[test]
    fn block_map_composition() {
        let d = dual("S4");
        let mut rng = stream_rng(8, 0);
        let make = |rng: &mut crate::rng::Rng, flag_seed: usize| {
            let classes = d.dim_classes();
            let mut perm: Vec<usize> = (0..d.len()).collect();
            for (_, idx) in &classes {
                if idx.len() == 2 {
                    perm.swap(idx[0], idx[1]);
                }
            }
            let unitaries = d.dims().into_iter().map(|k| crate::rng::random_unitary(rng, k)).collect();
            let flags = (0..d.len()).map(|i| (i + flag_seed).is_multiple_of(2)).collect();
            BlockMap::new(&d, perm, unitaries, flags).unwrap()
        };
        let (b1, b2) = (make(&mut rng, 0), make(&mut rng, 1));
        let composed = b2.compose(&b1);
        composed.validate(&d).unwrap();
        for _ in 0..10 {
            let a = random_tuple(&d, &mut rng);
            let seq = apply_block_map(&b2, &apply_block_map(&b1, &a).unwrap()).unwrap();
            let one = apply_block_map(&composed, &a).unwrap();
            assert!(seq.max_block_distance(&one) < 1e-10);
        }
    }

    #[test]
    fn weighted_compositions_are_block_maps_on_the_fourier_side() {
        for name in ["S3", "Q8", "A4", "Z4"] {
            let d = dual(name);
            let g = d.group();
            let n = g.order();
            let chars = enumerate_characters(g).unwrap();
            let mut maps = enumerate_isometric_automorphisms_lp(g).unwrap();
            for anti in enumerate_antiautomorphisms(g).unwrap().into_iter().take(3) {
                maps.push(WeightedComposition::new(g, chars[chars.len() - 1].clone(), anti).unwrap());
            }
            for w in &maps {
                let b = block_map_of(w, &d, 5).unwrap();
                let expected = if w.motion().kind() == MapKind::Automorphism || g.is_commutative() {
                    JordanKind::Automorphism
                } else {
                    JordanKind::Antiautomorphism
                };
                assert_eq!(classify_block_map(&b, &d, 1).unwrap().kind, expected, "{name}");
                for x in 0..n {
                    let delta = AlgebraElement::delta(n, x);
                    let lhs = fourier(&w.apply(&delta).unwrap(), &d).unwrap();
                    let rhs = apply_block_map(&b, &fourier(&delta, &d).unwrap()).unwrap();
                    assert!(lhs.c2_distance(&rhs) <= 1e-8, "{name}");
                }
            }
        }
    }

    #[test]
    fn json_round_trips() {
        let d = dual("S3");
        let g = d.group();
        let w = &enumerate_isometric_automorphisms_lp(g).unwrap()[7];
        assert_eq!(&WeightedComposition::from_json(&w.to_json(), g).unwrap(), w);
        let b = block_map_of(w, &d, 0).unwrap();
        assert_eq!(BlockMap::from_json(&b.to_json(), &d).unwrap(), b);
        let bad = w.to_json().replace("\"auto\"", "\"antiauto\"");
        assert!(WeightedComposition::from_json(&bad, g).is_err());
    }
}
