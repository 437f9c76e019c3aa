//! End-to-end scenarios with their expected outcomes built in.

use grouplab::autolab::{
    apply_block_map, classify_block_map, enumerate_isometric_automorphisms_lp, find_product_violation, random_tuple,
    BlockMap, JordanKind, LiftedBlockMap, WeightedComposition,
};
use grouplab::conv::{convolve, fourier, minimal_ideal_unit, p_norm, AlgebraElement};
use grouplab::group::{by_name, cyclic, enumerate_antiautomorphisms, enumerate_characters, FiniteGroup};
use grouplab::locality::{
    counterexample_matrix, is_local_automorphism_l2, local_at_point_l2, local_check_lp, refute_blockwise_transpose,
    Refutation, SamplingPlan, Verdict, DEFAULT_EQUIV_TOL,
};
use grouplab::repr::{check_dual, decompose_with_retries, DualObject};
use grouplab::rng::{complex_normal_vec, stream, stream_rng};
use grouplab::{Error, Result};
use serde::Serialize;

pub const SCENARIOS: [&str; 4] = [
    "s3-l2-counterexample",
    "a4-l2-refutation",
    "lp-antiauto-refutation",
    "plancherel-suite",
];

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_SAMPLES: usize = 1000;
/// Random points per weighted composition in the `L^p` scenario.
const LP_SAMPLES: usize = 20;
const PLANCHEREL_TRIALS: usize = 100;
pub const PLANCHEREL_GROUPS: [&str; 7] = ["Z6", "S3", "D4", "Q8", "D5", "A4", "S4"];
pub const IDEAL_GROUPS: [&str; 3] = ["S3", "A4", "Q8"];

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<Check>,
    pub result: &'static str,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.result == "PASS"
    }
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        pass,
        detail: detail.into(),
    }
}

pub fn run_scenario(name: &str, seed: u64, samples: usize) -> Result<ScenarioReport> {
    let checks = match name {
        "s3-l2-counterexample" => s3_l2_counterexample(seed, samples)?,
        "a4-l2-refutation" => a4_l2_refutation(seed, samples)?,
        "lp-antiauto-refutation" => lp_antiauto_refutation(seed)?,
        "plancherel-suite" => plancherel_suite(seed)?,
        other => return Err(Error::InvalidMap(format!("unknown scenario `{other}`"))),
    };
    let result = if checks.iter().all(|c| c.pass) { "PASS" } else { "FAIL" };
    Ok(ScenarioReport {
        scenario: name.to_string(),
        seed,
        samples,
        checks,
        result,
    })
}

fn dual_of(name: &str, seed: u64) -> Result<DualObject> {
    decompose_with_retries(&by_name(name)?, seed, 5)
}

fn first_block_of_dim(dual: &DualObject, d: usize) -> Result<usize> {
    dual.dims()
        .iter()
        .position(|&k| k == d)
        .ok_or_else(|| Error::InvalidMap(format!("no block of dimension {d}")))
}

/// Largest `|‖ψ(A)‖_C2 / ‖A‖_C2 − 1|` over random tuples.
pub fn c2_isometry_deviation(map: &BlockMap, dual: &DualObject, trials: usize, seed: u64) -> Result<f64> {
    let mut rng = stream_rng(seed, stream::ISOMETRY);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let a = random_tuple(dual, &mut rng);
        let image = apply_block_map(map, &a)?;
        worst = worst.max((image.c2_norm() / a.c2_norm() - 1.0).abs());
    }
    Ok(worst)
}

fn s3_l2_counterexample(seed: u64, samples: usize) -> Result<Vec<Check>> {
    let dual = dual_of("S3", seed)?;
    let two = first_block_of_dim(&dual, 2)?;
    let map = BlockMap::transpose_block(&dual, two)?;
    let mut checks = vec![check("dual_dims", dual.dims() == [1, 1, 2], format!("{:?}", dual.dims()))];

    let deviation = c2_isometry_deviation(&map, &dual, 100, seed)?;
    checks.push(check("c2_isometry", deviation <= 1e-9, format!("max deviation {deviation:e}")));

    let verdict = is_local_automorphism_l2(&map, &dual, &SamplingPlan::new(seed, samples))?;
    let detail = match &verdict {
        Verdict::LocalSampled { samples, .. } => format!("LOCAL_SAMPLED over {samples} points"),
        Verdict::Refuted { point, .. } => format!("REFUTED at {point}"),
    };
    checks.push(check("local_sampled", !verdict.is_refuted(), detail));

    let class = classify_block_map(&map, &dual, seed)?;
    checks.push(check(
        "classify_antiautomorphism",
        class.kind == JordanKind::Antiautomorphism,
        format!("{:?}, antimultiplicative residual {:e}", class.kind, class.antimultiplicative_residual),
    ));

    let lifted = LiftedBlockMap { map: &map, dual: &dual };
    let witness = find_product_violation(&lifted, dual.group(), false, 1e-2, 0, seed)?;
    checks.push(match witness {
        Some(w) => {
            let support = |f: &AlgebraElement| f.values().iter().position(|z| z.norm() > 0.5).unwrap_or(0);
            check(
                "not_multiplicative",
                w.violation >= 1e-2,
                format!(
                    "point masses at {} and {}: violation {:e}",
                    support(&w.left),
                    support(&w.right),
                    w.violation
                ),
            )
        }
        None => check("not_multiplicative", false, "no violating pair found"),
    });
    Ok(checks)
}

fn a4_l2_refutation(seed: u64, samples: usize) -> Result<Vec<Check>> {
    let dual = dual_of("A4", seed)?;
    let three = first_block_of_dim(&dual, 3)?;
    let map = BlockMap::transpose_block(&dual, three)?;
    let mut checks = vec![check("dual_dims", dual.dims() == [1, 1, 1, 3], format!("{:?}", dual.dims()))];

    match refute_blockwise_transpose(&dual, three)? {
        Refutation::Witness { tuple, decision } => {
            let c = counterexample_matrix(3)?;
            checks.push(check(
                "witness_contains_counterexample",
                tuple.block(three) == &c,
                format!("block {three} holds the subdiagonal (1, 2) matrix"),
            ));
            let again = local_at_point_l2(&map, &tuple, &dual, DEFAULT_EQUIV_TOL)?;
            let word = decision
                .obstruction
                .as_ref()
                .and_then(|o| o.word.clone())
                .unwrap_or_else(|| "-".into());
            checks.push(check(
                "local_at_point_fails",
                !again.local,
                format!("obstruction in dimension class 3, word {word}"),
            ));
        }
        Refutation::NoRefutation => checks.push(check("witness_contains_counterexample", false, "no refutation")),
    }

    let verdict = is_local_automorphism_l2(&map, &dual, &SamplingPlan::new(seed, samples))?;
    let detail = match &verdict {
        Verdict::Refuted { point, samples, .. } => format!("REFUTED at {point} after {samples} points"),
        Verdict::LocalSampled { samples, .. } => format!("LOCAL_SAMPLED over {samples} points"),
    };
    checks.push(check("verdict_refuted", verdict.is_refuted(), detail));
    Ok(checks)
}

/// Counts of `(refuted, total)` over weighted compositions with the given motions.
fn lp_counts(group: &FiniteGroup, anti: bool, seed: u64) -> Result<(usize, usize, bool)> {
    let plan = SamplingPlan::new(seed, LP_SAMPLES);
    let maps: Vec<WeightedComposition> = if anti {
        let characters = enumerate_characters(group)?;
        let antis = enumerate_antiautomorphisms(group)?;
        let mut out = Vec::new();
        for c in &characters {
            for a in &antis {
                out.push(WeightedComposition::new(group, c.clone(), a.clone())?);
            }
        }
        out
    } else {
        enumerate_isometric_automorphisms_lp(group)?
    };
    let mut refuted = 0;
    let mut all_at_separating = true;
    for w in &maps {
        if let Verdict::Refuted { point, .. } = local_check_lp(w, group, &plan)? {
            refuted += 1;
            all_at_separating &= point == "separating_function";
        }
    }
    Ok((refuted, maps.len(), all_at_separating))
}

fn lp_antiauto_refutation(seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for name in ["S3", "Q8"] {
        let g = by_name(name)?;
        let (refuted, total, at_sep) = lp_counts(&g, true, seed)?;
        checks.push(check(
            format!("{name}_antiautomorphisms_refuted"),
            refuted == total && total > 0 && at_sep,
            format!("{refuted}/{total} refuted at the separating function"),
        ));
        let (refuted, total, _) = lp_counts(&g, false, seed)?;
        checks.push(check(
            format!("{name}_automorphisms_local"),
            refuted == 0 && total > 0,
            format!("{}/{total} LOCAL_SAMPLED", total - refuted),
        ));
    }
    let z4 = cyclic(4);
    let (refuted, total, _) = lp_counts(&z4, true, seed)?;
    checks.push(check(
        "Z4_antiautomorphisms_local",
        refuted == 0 && total > 0,
        format!("{}/{total} LOCAL_SAMPLED", total - refuted),
    ));
    Ok(checks)
}

fn random_function(group: &FiniteGroup, rng: &mut grouplab::rng::Rng) -> Result<AlgebraElement> {
    AlgebraElement::new(complex_normal_vec(rng, group.order()))
}

/// Largest relative Plancherel error and Fourier homomorphism residual.
pub fn plancherel_residuals(dual: &DualObject, trials: usize, seed: u64) -> Result<(f64, f64)> {
    let group = dual.group();
    let mut rng = stream_rng(seed, stream::SCENARIO);
    let mut plancherel: f64 = 0.0;
    let mut homomorphism: f64 = 0.0;
    for _ in 0..trials {
        let f = random_function(group, &mut rng)?;
        let l2 = p_norm(&f, 2.0, group)?;
        plancherel = plancherel.max((l2 - fourier(&f, dual)?.c2_norm()).abs() / l2);
    }
    for _ in 0..trials {
        let f = random_function(group, &mut rng)?;
        let g = random_function(group, &mut rng)?;
        let lhs = fourier(&convolve(&f, &g, group)?, dual)?;
        let rhs = fourier(&f, dual)?.mul(&fourier(&g, dual)?);
        homomorphism = homomorphism.max(lhs.max_block_distance(&rhs));
    }
    Ok((plancherel, homomorphism))
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IdealResiduals {
    pub idempotent: f64,
    pub central: f64,
    pub self_adjoint: f64,
    pub orthogonal: f64,
    pub sum_to_unit: f64,
}

impl IdealResiduals {
    pub fn max(&self) -> f64 {
        [self.idempotent, self.central, self.self_adjoint, self.orthogonal, self.sum_to_unit]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// Residuals of the minimal-ideal unit identities, in the max norm.
pub fn minimal_ideal_residuals(dual: &DualObject) -> Result<IdealResiduals> {
    let group = dual.group();
    let n = group.order();
    let units: Vec<AlgebraElement> = (0..dual.len())
        .map(|i| minimal_ideal_unit(dual, i))
        .collect::<Result<_>>()?;
    let mut r = IdealResiduals::default();
    let mut sum = AlgebraElement::zeros(n);
    for (i, e) in units.iter().enumerate() {
        r.idempotent = r.idempotent.max(convolve(e, e, group)?.max_abs_diff(e));
        for x in group.elements() {
            let delta = AlgebraElement::delta(n, x);
            r.central = r
                .central
                .max(convolve(e, &delta, group)?.max_abs_diff(&convolve(&delta, e, group)?));
        }
        let star = AlgebraElement::new(group.elements().map(|x| e.at(group.inv(x)).conj()).collect())?;
        r.self_adjoint = r.self_adjoint.max(star.max_abs_diff(e));
        for (j, other) in units.iter().enumerate() {
            if i != j {
                r.orthogonal = r.orthogonal.max(convolve(e, other, group)?.max_abs());
            }
        }
        sum = sum.add(e);
    }
    r.sum_to_unit = sum.max_abs_diff(&AlgebraElement::unit(group));
    Ok(r)
}

fn plancherel_suite(seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for name in PLANCHEREL_GROUPS {
        let dual = dual_of(name, seed)?;
        let report = check_dual(&dual);
        checks.push(check(
            format!("{name}_dual"),
            report.passes,
            format!("dims {:?}, homomorphism residual {:e}", report.dims, report.homomorphism),
        ));
        let (plancherel, homomorphism) = plancherel_residuals(&dual, PLANCHEREL_TRIALS, seed)?;
        checks.push(check(
            format!("{name}_plancherel"),
            plancherel <= 1e-10,
            format!("max relative error {plancherel:e}"),
        ));
        checks.push(check(
            format!("{name}_fourier_homomorphism"),
            homomorphism <= 1e-9,
            format!("max residual {homomorphism:e}"),
        ));
        if IDEAL_GROUPS.contains(&name) {
            let r = minimal_ideal_residuals(&dual)?;
            checks.push(check(
                format!("{name}_minimal_ideals"),
                r.max() <= 1e-10,
                format!("max residual {:e}", r.max()),
            ));
        }
    }
    Ok(checks)
}
