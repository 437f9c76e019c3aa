//! The convolution algebra of functions on a finite group.
//!
//! Conventions (fixed jointly, see the round-trip tests):
//!
//! * `(f∗g)(x) = (1/|G|) Σ_y f(y) g(y⁻¹x)`
//! * `f̂(σ) = (1/|G|) Σ_x f(x) σ(x)`, so that `(f∗g)^ = f̂ ĝ`
//! * `f(x) = Σ_σ d_σ tr(f̂(σ) σ(x⁻¹))`
//! * `‖f‖_p = ((1/|G|) Σ_x |f(x)|^p)^{1/p}` and `‖A‖_{C₂} = (Σ_σ d_σ ‖A_σ‖_HS²)^{1/2}`

use serde::{Deserialize, Serialize};

use crate::group::FiniteGroup;
use crate::json::{matrix_from_json, matrix_to_json, vec_from_json, vec_to_json, JsonComplex, JsonMatrix};
use crate::linalg::{hs_norm, identity};
use crate::repr::DualObject;
use crate::{CMat, Complex64, Error, Result};

/// A complex-valued function on the group.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    values: Vec<Complex64>,
}

impl AlgebraElement {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMap("algebra element has non-finite entries".into()));
        }
        Ok(AlgebraElement { values })
    }

    pub fn from_real(values: &[f64]) -> Self {
        AlgebraElement {
            values: values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    pub fn zeros(n: usize) -> Self {
        AlgebraElement {
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        AlgebraElement { values: vec![c; n] }
    }

    /// Indicator of a single element.
    pub fn delta(n: usize, x: usize) -> Self {
        let mut f = Self::zeros(n);
        f.values[x] = Complex64::new(1.0, 0.0);
        f
    }

    /// The convolution unit `|G|·δ_e`.
    pub fn unit(group: &FiniteGroup) -> Self {
        let n = group.order();
        let mut f = Self::zeros(n);
        f.values[group.identity()] = Complex64::new(n as f64, 0.0);
        f
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn at(&self, x: usize) -> Complex64 {
        self.values[x]
    }

    pub fn scale(&self, c: Complex64) -> Self {
        AlgebraElement {
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        AlgebraElement {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        AlgebraElement {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        }
    }

    /// Pointwise sup-distance.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub(crate) fn check_len(&self, group: &FiniteGroup) -> Result<()> {
        if self.len() == group.order() {
            Ok(())
        } else {
            Err(Error::SizeMismatch {
                expected: group.order(),
                found: self.len(),
            })
        }
    }

    pub fn to_json(&self, group: &FiniteGroup) -> String {
        serde_json::to_string(&ElementJson {
            group: group.name().to_string(),
            values: vec_to_json(&self.values),
        })
        .expect("element serializes")
    }

    pub fn from_json(text: &str, group: &FiniteGroup) -> Result<Self> {
        let parsed: ElementJson = serde_json::from_str(text)?;
        if parsed.group != group.name() {
            return Err(Error::Json(format!("element is for group {:?}", parsed.group)));
        }
        let f = AlgebraElement::new(vec_from_json(&parsed.values))?;
        f.check_len(group)?;
        Ok(f)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct ElementJson {
    group: String,
    values: Vec<JsonComplex>,
}

/// Fourier-side element: one `d_σ × d_σ` block per irrep of a dual.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTuple {
    blocks: Vec<CMat>,
}

impl BlockTuple {
    pub fn new(blocks: Vec<CMat>) -> Self {
        BlockTuple { blocks }
    }

    /// Build and check shapes against `dual`.
    pub fn for_dual(blocks: Vec<CMat>, dual: &DualObject) -> Result<Self> {
        let t = BlockTuple { blocks };
        t.check_shape(dual)?;
        Ok(t)
    }

    pub fn zeros(dual: &DualObject) -> Self {
        BlockTuple {
            blocks: dual.dims().into_iter().map(|d| CMat::zeros(d, d)).collect(),
        }
    }

    pub fn identity(dual: &DualObject) -> Self {
        BlockTuple {
            blocks: dual.dims().into_iter().map(identity).collect(),
        }
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMat {
        &self.blocks[i]
    }

    pub fn into_blocks(self) -> Vec<CMat> {
        self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn check_shape(&self, dual: &DualObject) -> Result<()> {
        if self.blocks.len() != dual.len() {
            return Err(Error::ShapeMismatch(format!(
                "tuple has {} blocks, dual has {}",
                self.blocks.len(),
                dual.len()
            )));
        }
        for (i, (b, d)) in self.blocks.iter().zip(dual.dims()).enumerate() {
            if b.nrows() != d || b.ncols() != d {
                return Err(Error::ShapeMismatch(format!(
                    "block {i} is {}x{}, expected {d}x{d}",
                    b.nrows(),
                    b.ncols()
                )));
            }
        }
        Ok(())
    }

    /// Blockwise product.
    pub fn mul(&self, other: &Self) -> Self {
        BlockTuple {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        BlockTuple {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        BlockTuple {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        BlockTuple {
            blocks: self.blocks.iter().map(|b| b * c).collect(),
        }
    }

    /// `(Σ_σ d_σ ‖A_σ‖_HS²)^{1/2}`.
    pub fn c2_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.nrows() as f64 * hs_norm(b).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn c2_distance(&self, other: &Self) -> f64 {
        self.sub(other).c2_norm()
    }

    /// Largest blockwise Hilbert-Schmidt distance.
    pub fn max_block_distance(&self, other: &Self) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| hs_norm(&(a - b)))
            .fold(0.0, f64::max)
    }

    pub fn to_json_value(&self, dual_name: &str) -> TupleJson {
        TupleJson {
            dual: dual_name.to_string(),
            blocks: self.blocks.iter().map(matrix_to_json).collect(),
        }
    }

    pub fn to_json(&self, dual: &DualObject) -> String {
        serde_json::to_string(&self.to_json_value(dual.group().name())).expect("tuple serializes")
    }

    pub fn from_json(text: &str, dual: &DualObject) -> Result<Self> {
        let parsed: TupleJson = serde_json::from_str(text)?;
        if parsed.dual != dual.group().name() {
            return Err(Error::Json(format!("tuple is for dual {:?}", parsed.dual)));
        }
        let blocks = parsed
            .blocks
            .iter()
            .map(matrix_from_json)
            .collect::<Result<Vec<_>>>()?;
        BlockTuple::for_dual(blocks, dual)
    }
}

/// `{"dual": name, "blocks": [matrix, ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TupleJson {
    pub dual: String,
    pub blocks: Vec<JsonMatrix>,
}

/// `(f∗g)(x) = (1/|G|) Σ_y f(y) g(y⁻¹x)`.
pub fn convolve(f: &AlgebraElement, g: &AlgebraElement, group: &FiniteGroup) -> Result<AlgebraElement> {
    f.check_len(group)?;
    g.check_len(group)?;
    let n = group.order();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for y in group.elements() {
        let fy = f.at(y);
        if fy == Complex64::new(0.0, 0.0) {
            continue;
        }
        // x = y·z ranges over G as z does
        for z in group.elements() {
            out[group.mul(y, z)] += fy * g.at(z);
        }
    }
    let scale = 1.0 / n as f64;
    Ok(AlgebraElement {
        values: out.into_iter().map(|v| v * scale).collect(),
    })
}

/// Normalized-Haar `p`-norm; `p = f64::INFINITY` gives the exact max.
pub fn p_norm(f: &AlgebraElement, p: f64, group: &FiniteGroup) -> Result<f64> {
    f.check_len(group)?;
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidP(p));
    }
    if p.is_infinite() {
        return Ok(f.max_abs());
    }
    let n = group.order() as f64;
    let sum: f64 = f.values.iter().map(|z| z.norm().powf(p)).sum();
    Ok((sum / n).powf(1.0 / p))
}

/// `f̂(σ) = (1/|G|) Σ_x f(x) σ(x)` for every irrep of `dual`.
pub fn fourier(f: &AlgebraElement, dual: &DualObject) -> Result<BlockTuple> {
    let group = dual.group();
    f.check_len(group)?;
    let scale = Complex64::new(1.0 / group.order() as f64, 0.0);
    let blocks = dual
        .irreps()
        .iter()
        .map(|irrep| {
            let mut acc = CMat::zeros(irrep.dim(), irrep.dim());
            for x in group.elements() {
                acc += irrep.at(x) * f.at(x);
            }
            acc * scale
        })
        .collect();
    Ok(BlockTuple { blocks })
}

/// `f(x) = Σ_σ d_σ tr(A_σ σ(x⁻¹))`.
pub fn inverse_fourier(tuple: &BlockTuple, dual: &DualObject) -> Result<AlgebraElement> {
    tuple.check_shape(dual)?;
    let group = dual.group();
    let values = group
        .elements()
        .map(|x| {
            let xinv = group.inv(x);
            dual.irreps()
                .iter()
                .zip(&tuple.blocks)
                .map(|(irrep, a)| {
                    let m = irrep.at(xinv);
                    // tr(A M) without forming the product
                    let tr: Complex64 = (0..irrep.dim())
                        .flat_map(|i| (0..irrep.dim()).map(move |j| (i, j)))
                        .map(|(i, j)| a[(i, j)] * m[(j, i)])
                        .sum();
                    tr * irrep.dim() as f64
                })
                .sum()
        })
        .collect();
    Ok(AlgebraElement { values })
}

/// Unit of the minimal ideal of block `index`: the element whose transform is
/// the identity in that block and zero elsewhere. Equals `d_σ·conj(χ_σ)`.
pub fn minimal_ideal_unit(dual: &DualObject, index: usize) -> Result<AlgebraElement> {
    dual.check_index(index)?;
    let mut blocks = BlockTuple::zeros(dual).into_blocks();
    blocks[index] = identity(dual.irrep(index).dim());
    inverse_fourier(&BlockTuple { blocks }, dual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, quaternion, symmetric};
    use crate::repr::decompose_regular;
    use crate::rng::{complex_normal_vec, stream_rng};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn random_element(n: usize, seed: u64) -> AlgebraElement {
        AlgebraElement::new(complex_normal_vec(&mut stream_rng(seed, 0), n)).unwrap()
    }

    #[test]
    fn z2_hand_convolution() {
        let z2 = cyclic(2);
        let f = AlgebraElement::from_real(&[1.0, 2.0]);
        let g = AlgebraElement::from_real(&[3.0, 4.0]);
        let h = convolve(&f, &g, &z2).unwrap();
        assert_eq!(h.values(), &[c(5.5), c(5.0)]);
    }

    #[test]
    fn unit_is_neutral() {
        let s3 = symmetric(3);
        let u = AlgebraElement::unit(&s3);
        let f = random_element(6, 1);
        assert!(convolve(&u, &f, &s3).unwrap().max_abs_diff(&f) < 1e-14);
        assert!(convolve(&f, &u, &s3).unwrap().max_abs_diff(&f) < 1e-14);
    }

    #[test]
    fn s3_convolution_is_noncommutative() {
        let s3 = symmetric(3);
        let witness = (0..10).find(|&s| {
            let (f, g) = (random_element(6, 2 * s), random_element(6, 2 * s + 1));
            convolve(&f, &g, &s3).unwrap().max_abs_diff(&convolve(&g, &f, &s3).unwrap()) > 1e-3
        });
        assert!(witness.is_some());
    }

    #[test]
    fn size_mismatch() {
        let z3 = cyclic(3);
        let f = AlgebraElement::zeros(2);
        assert!(matches!(convolve(&f, &f, &z3), Err(Error::SizeMismatch { .. })));
        assert!(matches!(p_norm(&f, 2.0, &z3), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn p_norms_of_unit_on_z4() {
        let z4 = cyclic(4);
        let u = AlgebraElement::unit(&z4);
        assert!((p_norm(&u, 1.0, &z4).unwrap() - 1.0).abs() < 1e-15);
        assert!((p_norm(&u, 2.0, &z4).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(p_norm(&u, f64::INFINITY, &z4).unwrap(), 4.0);
        let one = AlgebraElement::constant(4, c(1.0));
        for p in [1.0, 1.5, 2.0, 3.0, 7.0, f64::INFINITY] {
            assert!((p_norm(&one, p, &z4).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!(matches!(p_norm(&one, 0.5, &z4), Err(Error::InvalidP(_))));
        assert!(matches!(p_norm(&one, f64::NAN, &z4), Err(Error::InvalidP(_))));
    }

    #[test]
    fn unit_transforms_to_identity() {
        let dual = decompose_regular(&symmetric(3), 1, 1e-8).unwrap();
        let hat = fourier(&AlgebraElement::unit(dual.group()), &dual).unwrap();
        assert!(hat.max_block_distance(&BlockTuple::identity(&dual)) < 1e-12);
        let back = inverse_fourier(&BlockTuple::identity(&dual), &dual).unwrap();
        assert!(back.max_abs_diff(&AlgebraElement::unit(dual.group())) < 1e-12);
    }

    #[test]
    fn constant_one_hits_only_the_trivial_block() {
        let dual = decompose_regular(&symmetric(3), 1, 1e-8).unwrap();
        let hat = fourier(&AlgebraElement::constant(6, c(1.0)), &dual).unwrap();
        for (i, b) in hat.blocks().iter().enumerate() {
            let expected = if i == 0 { identity(1) } else { CMat::zeros(b.nrows(), b.ncols()) };
            assert!(hs_norm(&(b - expected)) < 1e-12, "block {i}");
        }
    }

    #[test]
    fn plancherel_on_z6() {
        let dual = decompose_regular(&cyclic(6), 4, 1e-8).unwrap();
        let f = random_element(6, 9);
        let lhs = p_norm(&f, 2.0, dual.group()).unwrap();
        let rhs = fourier(&f, &dual).unwrap().c2_norm();
        assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn round_trip_on_q8() {
        let dual = decompose_regular(&quaternion(), 2, 1e-8).unwrap();
        let f = random_element(8, 3);
        let back = inverse_fourier(&fourier(&f, &dual).unwrap(), &dual).unwrap();
        assert!(back.max_abs_diff(&f) <= 1e-10);
        assert_eq!(
            inverse_fourier(&BlockTuple::zeros(&dual), &dual).unwrap(),
            AlgebraElement::zeros(8)
        );
    }

    #[test]
    fn minimal_ideal_units() {
        let z2 = decompose_regular(&cyclic(2), 1, 1e-8).unwrap();
        let e0 = minimal_ideal_unit(&z2, 0).unwrap();
        assert!(e0.max_abs_diff(&AlgebraElement::constant(2, c(1.0))) < 1e-14);

        let dual = decompose_regular(&symmetric(3), 1, 1e-8).unwrap();
        let g = dual.group();
        let two = dual.dims().iter().position(|&d| d == 2).unwrap();
        let e = minimal_ideal_unit(&dual, two).unwrap();
        assert!(convolve(&e, &e, g).unwrap().max_abs_diff(&e) < 1e-10);
        let hat = fourier(&e, &dual).unwrap();
        for (i, b) in hat.blocks().iter().enumerate() {
            let expected = if i == two { identity(2) } else { CMat::zeros(b.nrows(), b.ncols()) };
            assert!(hs_norm(&(b - expected)) < 1e-10);
        }
        let sum = (0..dual.len())
            .map(|i| minimal_ideal_unit(&dual, i).unwrap())
            .fold(AlgebraElement::zeros(6), |acc, e| acc.add(&e));
        assert!(sum.max_abs_diff(&AlgebraElement::unit(g)) < 1e-10);
        assert!(matches!(minimal_ideal_unit(&dual, 3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn shape_mismatch_on_inverse() {
        let dual = decompose_regular(&symmetric(3), 1, 1e-8).unwrap();
        let bad = BlockTuple::new(vec![CMat::zeros(1, 1); 3]);
        assert!(matches!(inverse_fourier(&bad, &dual), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn json_round_trips() {
        let dual = decompose_regular(&symmetric(3), 1, 1e-8).unwrap();
        let f = random_element(6, 5);
        let g = dual.group();
        assert_eq!(AlgebraElement::from_json(&f.to_json(g), g).unwrap(), f);
        let t = fourier(&f, &dual).unwrap();
        assert_eq!(BlockTuple::from_json(&t.to_json(&dual), &dual).unwrap(), t);
        assert!(AlgebraElement::from_json(&f.to_json(g), &cyclic(6)).is_err());
    }
}
