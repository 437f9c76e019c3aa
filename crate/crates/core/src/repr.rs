//! Numerical dual object: one unitary irreducible representation per
//! equivalence class.
//!
//! The regular representation is split by eigen-decomposing random elements
//! of its commutant. Each piece lives on an orthonormal basis of an invariant
//! subspace, so restricted matrices are unitary without any re-averaging.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::group::{FiniteGroup, DEFAULT_ORDER_BOUND};
use crate::json::{matrix_from_json, matrix_to_json, JsonMatrix};
use crate::linalg::{hermitian_eigen, hs_norm, identity, unitarity_defect};
use crate::rng::{random_hermitian, stream, stream_rng, Rng};
use crate::{CMat, Complex64, Error, Result};

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;
/// Character rows closer than this (max-norm) are the same class.
pub const CHARACTER_MATCH_TOL: f64 = 1e-6;
pub const UNITARITY_TOL: f64 = 1e-9;
pub const HOMOMORPHISM_TOL: f64 = 1e-8;
pub const SCHUR_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Irrep {
    dim: usize,
    matrices: Vec<CMat>,
    character_row: Vec<Complex64>,
}

impl Irrep {
    pub fn new(matrices: Vec<CMat>) -> Result<Self> {
        let dim = matrices.first().map_or(0, CMat::nrows);
        if dim == 0 || matrices.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::ShapeMismatch("irrep matrices must share a square shape".into()));
        }
        let character_row = matrices.iter().map(CMat::trace).collect();
        Ok(Irrep {
            dim,
            matrices,
            character_row,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    #[inline]
    pub fn at(&self, x: usize) -> &CMat {
        &self.matrices[x]
    }

    pub fn character_row(&self) -> &[Complex64] {
        &self.character_row
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualObject {
    group: FiniteGroup,
    irreps: Vec<Irrep>,
}

impl DualObject {
    /// Assemble a dual from explicit irreps; nothing is validated here, use
    /// [`check_dual`] for that.
    pub fn from_parts(group: FiniteGroup, irreps: Vec<Irrep>) -> Self {
        DualObject { group, irreps }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    pub fn irrep(&self, i: usize) -> &Irrep {
        &self.irreps[i]
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(Irrep::dim).collect()
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index,
                len: self.len(),
            })
        }
    }

    /// Indices grouped by dimension, ascending in both.
    pub fn dim_classes(&self) -> Vec<(usize, Vec<usize>)> {
        let mut dims = self.dims();
        dims.sort_unstable();
        dims.dedup();
        dims.into_iter()
            .map(|d| (d, (0..self.len()).filter(|&i| self.irreps[i].dim == d).collect()))
            .collect()
    }

    /// Index of the irrep whose character row matches `row`.
    pub fn find_by_character(&self, row: &[Complex64]) -> Option<usize> {
        self.irreps
            .iter()
            .position(|irrep| character_distance(irrep.character_row(), row) <= CHARACTER_MATCH_TOL)
    }

    pub fn to_json(&self) -> String {
        let cache = DualCache {
            group: self.group.name().to_string(),
            irreps: self
                .irreps
                .iter()
                .map(|irrep| IrrepJson {
                    dim: irrep.dim,
                    matrices: irrep.matrices.iter().map(matrix_to_json).collect(),
                })
                .collect(),
        };
        serde_json::to_string(&cache).expect("dual serializes")
    }

    /// Read a dual cache for `group` and revalidate it with [`check_dual`].
    pub fn from_json(text: &str, group: &FiniteGroup) -> Result<Self> {
        let cache: DualCache = serde_json::from_str(text)?;
        if cache.group != group.name() {
            return Err(Error::Json(format!(
                "dual is for group {:?}, not {:?}",
                cache.group,
                group.name()
            )));
        }
        let mut irreps = Vec::with_capacity(cache.irreps.len());
        for entry in &cache.irreps {
            if entry.matrices.len() != group.order() {
                return Err(Error::SizeMismatch {
                    expected: group.order(),
                    found: entry.matrices.len(),
                });
            }
            let matrices = entry
                .matrices
                .iter()
                .map(matrix_from_json)
                .collect::<Result<Vec<_>>>()?;
            let irrep = Irrep::new(matrices)?;
            if irrep.dim != entry.dim {
                return Err(Error::ShapeMismatch(format!(
                    "declared dim {} but matrices are {}x{}",
                    entry.dim, irrep.dim, irrep.dim
                )));
            }
            irreps.push(irrep);
        }
        let dual = DualObject::from_parts(group.clone(), irreps);
        let report = check_dual(&dual);
        if !report.passes {
            return Err(Error::NumericalCheck(format!("dual cache fails validation: {report:?}")));
        }
        Ok(dual)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct DualCache {
    group: String,
    irreps: Vec<IrrepJson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct IrrepJson {
    dim: usize,
    matrices: Vec<JsonMatrix>,
}

fn character_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Deterministic class order: by dimension, then by character row with larger
/// real (then imaginary) parts first, which puts the trivial irrep at index 0.
fn class_order(a: &Irrep, b: &Irrep) -> Ordering {
    a.dim.cmp(&b.dim).then_with(|| {
        for (x, y) in a.character_row.iter().zip(&b.character_row) {
            if (x.re - y.re).abs() > CHARACTER_MATCH_TOL {
                return y.re.total_cmp(&x.re);
            }
            if (x.im - y.im).abs() > CHARACTER_MATCH_TOL {
                return y.im.total_cmp(&x.im);
            }
        }
        Ordering::Equal
    })
}

/// Compute the dual object of `group`. Deterministic in `(group, seed, tol)`.
pub fn decompose_regular(group: &FiniteGroup, seed: u64, tol: f64) -> Result<DualObject> {
    group.check_bound(DEFAULT_ORDER_BOUND)?;
    if !(tol > 0.0 && tol <= 1e-4) {
        return Err(Error::InvalidTolerance(tol));
    }
    let n = group.order();
    let mut rng = stream_rng(seed, stream::DECOMPOSE);

    // left regular representation: λ(g) e_x = e_{gx}
    let regular: Vec<CMat> = group
        .elements()
        .map(|g| {
            let mut m = CMat::zeros(n, n);
            for x in group.elements() {
                m[(group.mul(g, x), x)] = Complex64::new(1.0, 0.0);
            }
            m
        })
        .collect();

    let mut pending = vec![regular];
    let mut irreducible: Vec<Irrep> = Vec::new();
    while let Some(rep) = pending.pop() {
        let pieces = split(&rep, tol, &mut rng)?;
        if pieces.len() == 1 {
            irreducible.push(Irrep::new(rep)?);
        } else {
            // reversed so pieces are finalized in eigenvalue order
            pending.extend(pieces.into_iter().rev());
        }
    }

    let mut classes: Vec<(Irrep, usize)> = Vec::new();
    for irrep in irreducible {
        match classes
            .iter_mut()
            .find(|(rep, _)| character_distance(&rep.character_row, &irrep.character_row) <= CHARACTER_MATCH_TOL)
        {
            Some((_, count)) => *count += 1,
            None => classes.push((irrep, 1)),
        }
    }
    let dim_sum: usize = classes.iter().map(|(irrep, _)| irrep.dim * irrep.dim).sum();
    if dim_sum != n || classes.iter().any(|(irrep, count)| irrep.dim != *count) {
        return Err(Error::NumericalCheck(format!(
            "regular representation split into inconsistent pieces (sum of d^2 = {dim_sum}, |G| = {n})"
        )));
    }
    let mut irreps: Vec<Irrep> = classes.into_iter().map(|(irrep, _)| irrep).collect();
    irreps.sort_by(class_order);
    Ok(DualObject::from_parts(group.clone(), irreps))
}

/// [`decompose_regular`] with the default tolerance, retrying with the next
/// seeds when a split is degenerate.
pub fn decompose_with_retries(group: &FiniteGroup, seed: u64, attempts: u64) -> Result<DualObject> {
    let mut last = None;
    for k in 0..attempts.max(1) {
        match decompose_regular(group, seed.wrapping_add(k), DEFAULT_CLUSTER_TOL) {
            Err(e @ Error::DegenerateSplit { .. }) => last = Some(e),
            other => return other,
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Split a unitary representation along the eigenspaces of a random element
/// of its commutant. A single cluster certifies irreducibility.
fn split(rep: &[CMat], tol: f64, rng: &mut Rng) -> Result<Vec<Vec<CMat>>> {
    let dim = rep[0].nrows();
    if dim == 1 {
        return Ok(vec![rep.to_vec()]);
    }
    let h = random_hermitian(rng, dim);
    let mut t = CMat::zeros(dim, dim);
    for m in rep {
        t += m * &h * m.adjoint();
    }
    t /= Complex64::new(rep.len() as f64, 0.0);
    // exact Hermitian symmetry for the eigensolver
    let t = (&t + t.adjoint()).scale(0.5);
    let (values, vectors) = hermitian_eigen(&t);

    let scale = values.iter().map(|v| v.abs()).fold(1.0, f64::max);
    let mut clusters: Vec<Vec<usize>> = vec![vec![0]];
    for i in 1..dim {
        let gap = values[i] - values[i - 1];
        if gap <= tol * scale {
            clusters.last_mut().expect("nonempty").push(i);
        } else if gap <= 10.0 * tol * scale {
            return Err(Error::DegenerateSplit { gap, tol: tol * scale });
        } else {
            clusters.push(vec![i]);
        }
    }
    if clusters.len() == 1 {
        return Ok(vec![rep.to_vec()]);
    }
    Ok(clusters
        .into_iter()
        .map(|cols| {
            let basis = CMat::from_fn(dim, cols.len(), |r, c| vectors[(r, cols[c])]);
            let basis_adj = basis.adjoint();
            rep.iter().map(|m| &basis_adj * m * &basis).collect()
        })
        .collect())
}

/// Residuals of every defining property of a dual object.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualReport {
    pub dims: Vec<usize>,
    pub dimension_identity: bool,
    pub unitarity: f64,
    pub homomorphism: f64,
    pub schur_orthogonality: f64,
    pub character_orthogonality: f64,
    /// Smallest max-norm distance between two character rows.
    pub min_character_separation: f64,
    pub passes: bool,
}

pub fn check_dual(dual: &DualObject) -> DualReport {
    let group = dual.group();
    let n = group.order();
    let nf = n as f64;
    let dims = dual.dims();
    let shapes_ok = dual
        .irreps
        .iter()
        .all(|irrep| irrep.matrices.len() == n && irrep.matrices.iter().all(|m| m.nrows() == irrep.dim && m.ncols() == irrep.dim));
    let dimension_identity = shapes_ok && dims.iter().map(|d| d * d).sum::<usize>() == n;
    if !shapes_ok {
        return DualReport {
            dims,
            dimension_identity,
            unitarity: f64::INFINITY,
            homomorphism: f64::INFINITY,
            schur_orthogonality: f64::INFINITY,
            character_orthogonality: f64::INFINITY,
            min_character_separation: 0.0,
            passes: false,
        };
    }

    let mut unitarity: f64 = 0.0;
    let mut homomorphism: f64 = 0.0;
    for irrep in &dual.irreps {
        for m in &irrep.matrices {
            unitarity = unitarity.max(unitarity_defect(m));
        }
        for x in group.elements() {
            for y in group.elements() {
                let r = hs_norm(&(irrep.at(group.mul(x, y)) - irrep.at(x) * irrep.at(y)));
                homomorphism = homomorphism.max(r);
            }
        }
    }

    let mut schur: f64 = 0.0;
    let mut chars: f64 = 0.0;
    let mut separation = f64::INFINITY;
    for (a, sa) in dual.irreps.iter().enumerate() {
        for (b, sb) in dual.irreps.iter().enumerate() {
            let same = a == b;
            for i in 0..sa.dim {
                for j in 0..sa.dim {
                    for k in 0..sb.dim {
                        for l in 0..sb.dim {
                            let s: Complex64 = group
                                .elements()
                                .map(|x| sa.at(x)[(i, j)] * sb.at(x)[(k, l)].conj())
                                .sum::<Complex64>()
                                / nf;
                            let expected = if same && i == k && j == l { 1.0 / sa.dim as f64 } else { 0.0 };
                            schur = schur.max((s - expected).norm());
                        }
                    }
                }
            }
            let c: Complex64 = group
                .elements()
                .map(|x| sa.character_row[x] * sb.character_row[x].conj())
                .sum::<Complex64>()
                / nf;
            chars = chars.max((c - if same { 1.0 } else { 0.0 }).norm());
            if a < b {
                separation = separation.min(character_distance(&sa.character_row, &sb.character_row));
            }
        }
    }
    let trace_consistent = dual
        .irreps
        .iter()
        .all(|irrep| irrep.matrices.iter().zip(&irrep.character_row).all(|(m, c)| (m.trace() - c).norm() <= 1e-12));

    let passes = dimension_identity
        && trace_consistent
        && unitarity <= UNITARITY_TOL
        && homomorphism <= HOMOMORPHISM_TOL
        && schur <= SCHUR_TOL
        && chars <= SCHUR_TOL
        && separation > CHARACTER_MATCH_TOL;
    DualReport {
        dims,
        dimension_identity,
        unitarity,
        homomorphism,
        schur_orthogonality: schur,
        character_orthogonality: chars,
        min_character_separation: separation,
        passes,
    }
}

/// Identity tuple helper used by callers that build block data per irrep.
pub fn identity_blocks(dual: &DualObject) -> Vec<CMat> {
    dual.irreps.iter().map(|irrep| identity(irrep.dim)).collect()
}
