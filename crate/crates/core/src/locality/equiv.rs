//! Unitary equivalence of square matrices via trace invariants.
//!
//! `A ~ B` iff `tr w(A, A*) = tr w(B, B*)` for every word `w` in two letters.
//! For `n ≤ 3` a fixed complete family of words suffices. For larger `n` the
//! words are explored breadth first on the pair `(A, B)` jointly, keeping only
//! words whose pair of matrices is linearly independent of the words kept so
//! far; the kept words span every word of any length, so comparing traces on
//! them is the same as comparing all words of length `≤ 2n²`.

use std::fmt;

use serde::Serialize;

use crate::json::{complex_to_json, matrix_to_json, JsonComplex, JsonMatrix};
use crate::linalg::{hs_norm, identity, null_space, polar_unitary, unitarity_defect};
use crate::rng::{complex_normal, random_unitary, stream, stream_rng};
use crate::{CMat, Complex64, Error, Result};

pub const DEFAULT_EQUIV_TOL: f64 = 1e-8;
pub const WITNESS_RESIDUAL_TOL: f64 = 1e-8;
pub const WITNESS_UNITARITY_TOL: f64 = 1e-10;
const WITNESS_RESTARTS: usize = 20;
const WITNESS_ITERATIONS: usize = 10_000;
/// Relative residual below which a word is treated as linearly dependent.
const INDEPENDENCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    M,
    Adj,
}

/// A word in `M` and `M*`, evaluated left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn parse(text: &str) -> Option<Word> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            let (base, power) = match token.split_once('^') {
                Some((b, p)) => (b, p.parse::<usize>().ok()?),
                None => (token, 1),
            };
            let letter = match base {
                "M" => Letter::M,
                "M*" => Letter::Adj,
                "I" if power == 1 => continue,
                _ => return None,
            };
            letters.extend(std::iter::repeat_n(letter, power));
        }
        Some(Word(letters))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eval(&self, m: &CMat, m_adj: &CMat) -> CMat {
        let mut acc = identity(m.nrows());
        for l in &self.0 {
            acc = match l {
                Letter::M => acc * m,
                Letter::Adj => acc * m_adj,
            };
        }
        acc
    }

    pub fn trace(&self, m: &CMat) -> Complex64 {
        self.eval(m, &m.adjoint()).trace()
    }

    fn with(&self, l: Letter) -> Word {
        let mut v = self.0.clone();
        v.push(l);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "I");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let run = self.0[i..].iter().take_while(|&&x| x == l).count();
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}", if l == Letter::M { "M" } else { "M*" })?;
            if run > 1 {
                write!(f, "^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// The complete trace family for `n ≤ 3`.
pub fn complete_family(n: usize) -> Option<Vec<Word>> {
    let parse = |list: &[&str]| list.iter().map(|w| Word::parse(w).expect("valid word")).collect();
    match n {
        1 => Some(parse(&["M"])),
        2 => Some(parse(&["M", "M^2", "M* M"])),
        3 => Some(parse(&[
            "M",
            "M^2",
            "M^3",
            "M* M",
            "M* M^2",
            "M*^2 M^2",
            "M*^2 M^2 M* M",
        ])),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceMismatch {
    pub word: Word,
    /// Traces on the original (unnormalized) inputs.
    pub trace_a: Complex64,
    pub trace_b: Complex64,
    /// Trace gap after scaling both inputs by `1/max(‖A‖_F, ‖B‖_F)`.
    pub gap: f64,
    /// The threshold the gap exceeded.
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessUnitary {
    pub unitary: CMat,
    /// `‖U A U* − B‖_F`.
    pub residual: f64,
    pub unitarity_defect: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivDecision {
    pub equivalent: bool,
    pub mismatch: Option<TraceMismatch>,
    pub witness: Option<WitnessUnitary>,
    pub words_compared: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivDecisionJson {
    pub equivalent: bool,
    pub words_compared: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mismatch_word: Option<MismatchJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_unitary: Option<WitnessJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MismatchJson {
    pub word: String,
    pub trace_a: JsonComplex,
    pub trace_b: JsonComplex,
    pub gap: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessJson {
    pub matrix: JsonMatrix,
    pub residual: f64,
    pub unitarity_defect: f64,
}

impl EquivDecision {
    pub fn to_json_value(&self) -> EquivDecisionJson {
        EquivDecisionJson {
            equivalent: self.equivalent,
            words_compared: self.words_compared,
            mismatch_word: self.mismatch.as_ref().map(|m| MismatchJson {
                word: m.word.to_string(),
                trace_a: complex_to_json(m.trace_a),
                trace_b: complex_to_json(m.trace_b),
                gap: m.gap,
                threshold: m.threshold,
            }),
            witness_unitary: self.witness.as_ref().map(|w| WitnessJson {
                matrix: matrix_to_json(&w.unitary),
                residual: w.residual,
                unitarity_defect: w.unitarity_defect,
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivOptions {
    pub tol: f64,
    /// Attempt a constructive witness when the traces agree.
    pub witness: bool,
    pub seed: u64,
    /// Word length cap for `n ≥ 4`; `None` means `2n²`.
    pub max_word_len: Option<usize>,
}

impl Default for EquivOptions {
    fn default() -> Self {
        EquivOptions {
            tol: DEFAULT_EQUIV_TOL,
            witness: true,
            seed: 0,
            max_word_len: None,
        }
    }
}

/// Decide `A ~ B` with a witness attempt when equivalent.
pub fn unitary_equivalent(a: &CMat, b: &CMat, tol: f64) -> Result<EquivDecision> {
    decide(
        a,
        b,
        &EquivOptions {
            tol,
            ..EquivOptions::default()
        },
    )
}

pub fn decide(a: &CMat, b: &CMat, opts: &EquivOptions) -> Result<EquivDecision> {
    if !a.is_square() || !b.is_square() {
        return Err(Error::ShapeMismatch("unitary equivalence needs square matrices".into()));
    }
    if a.nrows() != b.nrows() {
        return Err(Error::SizeMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    let n = a.nrows();
    let scale = hs_norm(a).max(hs_norm(b));
    if n == 0 || scale == 0.0 {
        return Ok(EquivDecision {
            equivalent: true,
            mismatch: None,
            witness: opts.witness.then(|| WitnessUnitary {
                unitary: identity(n),
                residual: 0.0,
                unitarity_defect: 0.0,
            }),
            words_compared: 0,
        });
    }
    let inv = Complex64::new(1.0 / scale, 0.0);
    let (na, nb) = (a * inv, b * inv);
    let words = match complete_family(n) {
        Some(words) => words,
        None => spanning_words(&na, &nb, opts.max_word_len.unwrap_or(2 * n * n)),
    };

    let mut mismatch = None;
    for word in &words {
        let ta = word.trace(&na);
        let tb = word.trace(&nb);
        let gap = (ta - tb).norm();
        let threshold = 10.0 * opts.tol * ta.norm().max(tb.norm()).max(1.0);
        if gap > threshold {
            let s = scale.powi(word.len() as i32);
            mismatch = Some(TraceMismatch {
                word: word.clone(),
                trace_a: ta * s,
                trace_b: tb * s,
                gap,
                threshold,
            });
            break;
        }
    }
    let equivalent = mismatch.is_none();
    let witness = if equivalent && opts.witness {
        find_witness(a, b, opts.seed)
    } else {
        None
    };
    Ok(EquivDecision {
        equivalent,
        mismatch,
        witness,
        words_compared: words.len(),
    })
}

/// Breadth-first words whose joint values `(w(A), w(B))` are linearly
/// independent, up to `max_len` letters. The empty word comes first.
pub fn spanning_words(a: &CMat, b: &CMat, max_len: usize) -> Vec<Word> {
    let n = a.nrows();
    let dim_cap = 2 * n * n;
    let (aa, ba) = (a.adjoint(), b.adjoint());
    let flatten = |x: &CMat, y: &CMat| -> Vec<Complex64> { x.iter().chain(y.iter()).copied().collect() };
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut kept: Vec<(Word, CMat, CMat)> = Vec::new();

    let try_keep = |word: Word, x: CMat, y: CMat, basis: &mut Vec<Vec<Complex64>>| -> Option<(Word, CMat, CMat)> {
        let v = flatten(&x, &y);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-13 {
            return None;
        }
        let mut r = v;
        // two passes of Gram-Schmidt
        for _ in 0..2 {
            for q in basis.iter() {
                let c: Complex64 = q.iter().zip(&r).map(|(qi, ri)| qi.conj() * ri).sum();
                for (ri, qi) in r.iter_mut().zip(q) {
                    *ri -= c * qi;
                }
            }
        }
        let rn = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if rn <= INDEPENDENCE_TOL * norm {
            return None;
        }
        basis.push(r.into_iter().map(|z| z / rn).collect());
        Some((word, x, y))
    };

    let start = try_keep(Word::default(), identity(n), identity(n), &mut basis).expect("identity is nonzero");
    kept.push(start);
    let mut head = 0;
    while head < kept.len() && basis.len() < dim_cap {
        let (word, x, y) = kept[head].clone();
        head += 1;
        if word.len() >= max_len {
            continue;
        }
        for (letter, ma, mb) in [(Letter::M, a, b), (Letter::Adj, &aa, &ba)] {
            if let Some(entry) = try_keep(word.with(letter), &x * ma, &y * mb, &mut basis) {
                kept.push(entry);
            }
        }
    }
    kept.into_iter().map(|(w, _, _)| w).collect()
}

/// Constructive witness for `U A U* = B`.
///
/// First a random element of the intertwiner space
/// `{X : XA = BX, XA* = B*X}` is polar-decomposed; when `A ~ B` its unitary
/// factor is an exact witness. Should that fail numerically, the alternating
/// polar-factor iteration `U ← polar(B U A* + B* U A)` is run from random
/// starts.
pub fn find_witness(a: &CMat, b: &CMat, seed: u64) -> Option<WitnessUnitary> {
    let n = a.nrows();
    let mut rng = stream_rng(seed, stream::WITNESS);
    let evaluate = |u: CMat| -> WitnessUnitary {
        let residual = hs_norm(&(&u * a * u.adjoint() - b));
        let unitarity_defect = unitarity_defect(&u);
        WitnessUnitary {
            unitary: u,
            residual,
            unitarity_defect,
        }
    };
    let accept = |w: &WitnessUnitary| w.residual <= WITNESS_RESIDUAL_TOL && w.unitarity_defect <= WITNESS_UNITARITY_TOL;

    let (aa, ba) = (a.adjoint(), b.adjoint());
    let mut op = CMat::zeros(2 * n * n, n * n);
    for col in 0..n * n {
        let mut x = CMat::zeros(n, n);
        x[(col % n, col / n)] = Complex64::new(1.0, 0.0);
        let r1 = &x * a - b * &x;
        let r2 = &x * &aa - &ba * &x;
        for (k, z) in r1.iter().chain(r2.iter()).enumerate() {
            op[(k, col)] = *z;
        }
    }
    let kernel = null_space(&op, 1e-7);
    let mut best: Option<WitnessUnitary> = None;
    for _ in 0..3 {
        let mut x = CMat::zeros(n, n);
        for v in &kernel {
            let c = complex_normal(&mut rng);
            for (k, z) in v.iter().enumerate() {
                x[(k % n, k / n)] += c * z;
            }
        }
        let w = evaluate(polar_unitary(&x));
        if accept(&w) {
            return Some(w);
        }
        if best.as_ref().is_none_or(|b| w.residual < b.residual) {
            best = Some(w);
        }
    }

    for _ in 0..WITNESS_RESTARTS {
        let mut u = random_unitary(&mut rng, n);
        for _ in 0..WITNESS_ITERATIONS {
            let next = polar_unitary(&(b * &u * &aa + &ba * &u * a));
            let step = hs_norm(&(&next - &u));
            u = next;
            if step < 1e-14 {
                break;
            }
        }
        let w = evaluate(u);
        if accept(&w) {
            return Some(w);
        }
    }
    None
}

/// `d × d` matrix with subdiagonal `1, 2, …, d−1` and zeros elsewhere.
pub fn counterexample_matrix(d: usize) -> Result<CMat> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let mut m = CMat::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(i as f64, 0.0);
    }
    Ok(m)
}
