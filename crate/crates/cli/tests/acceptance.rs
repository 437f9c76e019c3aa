//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use grouplab::autolab::{
    apply_block_map, classify_block_map, enumerate_isometric_automorphisms_lp, find_product_violation, random_tuple,
    BlockMap, JordanKind, LiftedBlockMap, WeightedComposition,
};
use grouplab::conv::{fourier, minimal_ideal_unit, AlgebraElement, BlockTuple};
use grouplab::group::{
    builtin_names, by_name, cyclic, direct_product, enumerate_antiautomorphisms, enumerate_characters, FiniteGroup,
};
use grouplab::locality::{
    counterexample_matrix, is_local_automorphism_l2, local_at_point_l2, local_check_lp, refute_blockwise_transpose,
    structured_points_l2, unitary_equivalent, Refutation, SamplingPlan, Verdict, Word,
};
use grouplab::repr::{check_dual, decompose_regular, DualObject};
use grouplab::rng::{complex_normal_matrix, complex_normal_vec, stream_rng};
use grouplab::{CMat, Complex64};

const SEED: u64 = 1;
const DUAL_TOL: f64 = 1e-8;
const PLANCHEREL_TOL: f64 = 1e-10;
const HOMOMORPHISM_TOL: f64 = 1e-9;
const IDEAL_TOL: f64 = 1e-10;
const WITNESS_TOL: f64 = 1e-8;
const WITNESS_RATE: f64 = 0.99;
const EQUIV_TOL: f64 = 1e-8;
const ISOMETRY_TOL: f64 = 1e-9;
const VIOLATION_MIN: f64 = 1e-2;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn dual(group: &FiniteGroup) -> DualObject {
    decompose_regular(group, SEED, 1e-8).expect("decomposition")
}

fn groups_up_to_24() -> Vec<FiniteGroup> {
    builtin_names()
        .iter()
        .map(|n| by_name(n).unwrap())
        .filter(|g| g.order() <= 24)
        .collect()
}

// Test-side oracles, independent of the library's conventions code.

fn conv(f: &[Complex64], g: &[Complex64], group: &FiniteGroup) -> Vec<Complex64> {
    let n = group.order();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for y in 0..n {
        for z in 0..n {
            // x = y z, so g is evaluated at y⁻¹x = z
            out[group.mul(y, z)] += f[y] * g[z] / n as f64;
        }
    }
    out
}

fn l2(f: &[Complex64]) -> f64 {
    (f.iter().map(|z| z.norm_sqr()).sum::<f64>() / f.len() as f64).sqrt()
}

fn c2(t: &BlockTuple) -> f64 {
    t.blocks()
        .iter()
        .map(|b| b.nrows() as f64 * b.iter().map(|z| z.norm_sqr()).sum::<f64>())
        .sum::<f64>()
        .sqrt()
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn criterion_1() -> Outcome {
    let mut worst_time = Duration::ZERO;
    let mut failures = Vec::new();
    let mut count = 0;
    for g in groups_up_to_24() {
        count += 1;
        let start = Instant::now();
        let d = match decompose_regular(&g, SEED, 1e-8) {
            Ok(d) => d,
            Err(e) => {
                failures.push(format!("{}: {e}", g.name()));
                continue;
            }
        };
        let r = check_dual(&d);
        worst_time = worst_time.max(start.elapsed());
        let sum: usize = r.dims.iter().map(|k| k * k).sum();
        let residual = [r.unitarity, r.homomorphism, r.schur_orthogonality, r.character_orthogonality]
            .into_iter()
            .fold(0.0, f64::max);
        if sum != g.order() || residual > DUAL_TOL || !r.passes {
            failures.push(format!("{}: sum {sum}, residual {residual:e}", g.name()));
        }
        let expected: Option<&[usize]> = match g.name() {
            "S3" => Some(&[1, 1, 2]),
            "A4" => Some(&[1, 1, 1, 3]),
            _ => None,
        };
        if expected.is_some_and(|e| r.dims != e) {
            failures.push(format!("{}: dims {:?}", g.name(), r.dims));
        }
    }
    let pass = failures.is_empty() && worst_time <= Duration::from_secs(5);
    outcome(
        pass,
        format!("{count} groups, slowest {worst_time:.2?}, failures {failures:?}"),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut plancherel: f64 = 0.0;
    let mut homomorphism: f64 = 0.0;
    for g in groups_up_to_24() {
        let d = dual(&g);
        let mut rng = stream_rng(SEED, 100 + g.order() as u64);
        let n = g.order();
        for _ in 0..100 {
            let f = complex_normal_vec(&mut rng, n);
            let t = fourier(&AlgebraElement::new(f.clone()).unwrap(), &d).unwrap();
            plancherel = plancherel.max((l2(&f) - c2(&t)).abs() / l2(&f));
        }
        for _ in 0..100 {
            let f = complex_normal_vec(&mut rng, n);
            let h = complex_normal_vec(&mut rng, n);
            let fe = AlgebraElement::new(f.clone()).unwrap();
            let he = AlgebraElement::new(h.clone()).unwrap();
            let lhs = fourier(&AlgebraElement::new(conv(&f, &h, &g)).unwrap(), &d).unwrap();
            let rhs = fourier(&fe, &d).unwrap().mul(&fourier(&he, &d).unwrap());
            homomorphism = homomorphism.max(lhs.max_block_distance(&rhs));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        plancherel <= PLANCHEREL_TOL && homomorphism <= HOMOMORPHISM_TOL && elapsed <= Duration::from_secs(10),
        format!("Plancherel {plancherel:e}, homomorphism {homomorphism:e}, {elapsed:.2?}"),
    )
}

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    for name in ["S3", "A4", "Q8"] {
        let g = by_name(name).unwrap();
        let d = dual(&g);
        let n = g.order();
        let units: Vec<Vec<Complex64>> = (0..d.len())
            .map(|i| minimal_ideal_unit(&d, i).unwrap().values().to_vec())
            .collect();
        let mut sum = vec![Complex64::new(0.0, 0.0); n];
        for (i, e) in units.iter().enumerate() {
            worst = worst.max(max_diff(&conv(e, e, &g), e));
            for x in 0..n {
                let mut delta = vec![Complex64::new(0.0, 0.0); n];
                delta[x] = Complex64::new(1.0, 0.0);
                worst = worst.max(max_diff(&conv(e, &delta, &g), &conv(&delta, e, &g)));
            }
            let star: Vec<Complex64> = (0..n).map(|x| e[g.inv(x)].conj()).collect();
            worst = worst.max(max_diff(&star, e));
            for (j, other) in units.iter().enumerate() {
                if i != j {
                    worst = worst.max(conv(e, other, &g).iter().map(|z| z.norm()).fold(0.0, f64::max));
                }
            }
            for x in 0..n {
                sum[x] += e[x];
            }
        }
        // the convolution unit is |G|·δ_e under the normalized product
        let mut unit = vec![Complex64::new(0.0, 0.0); n];
        unit[g.identity()] = Complex64::new(n as f64, 0.0);
        worst = worst.max(max_diff(&sum, &unit));
    }
    outcome(worst <= IDEAL_TOL, format!("max residual {worst:e} over S3, A4, Q8"))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut rng = stream_rng(SEED, 400);
    let mut equivalent = 0;
    let mut witnessed = 0;
    let trials = 1000;
    for _ in 0..trials {
        let a = complex_normal_matrix(&mut rng, 2, 2);
        let at = a.transpose();
        let d = unitary_equivalent(&a, &at, EQUIV_TOL).unwrap();
        if d.equivalent {
            equivalent += 1;
        }
        if let Some(w) = d.witness {
            let u = &w.unitary;
            let residual = (u * &a * u.adjoint() - &at).norm();
            let defect = (u.adjoint() * u - CMat::identity(2, 2)).norm();
            if residual <= WITNESS_TOL && defect <= 1e-10 {
                witnessed += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let rate = witnessed as f64 / trials as f64;
    outcome(
        equivalent == trials && rate >= WITNESS_RATE && elapsed <= Duration::from_secs(30),
        format!("{equivalent}/{trials} equivalent, witness rate {rate}, {elapsed:.2?}"),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut words = Vec::new();
    for d in [3, 4, 5] {
        let c = counterexample_matrix(d).unwrap();
        let decision = unitary_equivalent(&c, &c.transpose(), EQUIV_TOL).unwrap();
        let Some(m) = decision.mismatch.filter(|_| !decision.equivalent) else {
            pass = false;
            words.push(format!("d={d}: declared equivalent"));
            continue;
        };
        // recompute both traces from the recorded word
        let word = Word::parse(&m.word.to_string()).unwrap();
        let ta = word.trace(&c);
        let tb = word.trace(&c.transpose());
        let gap = (ta - tb).norm();
        pass &= gap > 10.0 * EQUIV_TOL && m.gap > m.threshold && m.threshold >= 10.0 * EQUIV_TOL;
        words.push(format!("d={d}: {} ({:.1} vs {:.1})", m.word, ta.re, tb.re));
    }
    let elapsed = start.elapsed();
    outcome(pass && elapsed <= Duration::from_secs(60), format!("{words:?}, {elapsed:.2?}"))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let g = by_name("S3").unwrap();
    let d = dual(&g);
    let two = d.dims().iter().position(|&k| k == 2).unwrap();
    let map = BlockMap::transpose_block(&d, two).unwrap();

    let mut rng = stream_rng(SEED, 600);
    let mut deviation: f64 = 0.0;
    for _ in 0..100 {
        let a = random_tuple(&d, &mut rng);
        deviation = deviation.max((c2(&apply_block_map(&map, &a).unwrap()) / c2(&a) - 1.0).abs());
    }

    let plan = SamplingPlan::new(SEED, 1000);
    let mut points: Vec<BlockTuple> = structured_points_l2(&d, &plan).unwrap().into_iter().map(|(_, p)| p).collect();
    let structured = points.len();
    points.extend((0..1000).map(|_| random_tuple(&d, &mut rng)));
    let failing = points
        .iter()
        .filter(|p| !local_at_point_l2(&map, p, &d, EQUIV_TOL).unwrap().local)
        .count();
    let verdict = is_local_automorphism_l2(&map, &d, &plan).unwrap();

    let kind = classify_block_map(&map, &d, SEED).unwrap().kind;
    let lifted = LiftedBlockMap { map: &map, dual: &d };
    let violation = find_product_violation(&lifted, &g, false, VIOLATION_MIN, 0, SEED)
        .unwrap()
        .map_or(0.0, |w| w.violation);
    let elapsed = start.elapsed();
    outcome(
        deviation <= ISOMETRY_TOL
            && failing == 0
            && !verdict.is_refuted()
            && kind == JordanKind::Antiautomorphism
            && violation >= VIOLATION_MIN
            && elapsed <= Duration::from_secs(60),
        format!(
            "isometry {deviation:e}, {failing} failing of {} points ({structured} structured), {kind:?}, violation {violation:.4}, {elapsed:.2?}",
            points.len()
        ),
    )
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let g = by_name("A4").unwrap();
    let d = dual(&g);
    let three = d.dims().iter().position(|&k| k == 3).unwrap();
    let map = BlockMap::transpose_block(&d, three).unwrap();
    let witness_fails = match refute_blockwise_transpose(&d, three).unwrap() {
        Refutation::Witness { tuple, .. } => {
            tuple.block(three) == &counterexample_matrix(3).unwrap()
                && !local_at_point_l2(&map, &tuple, &d, EQUIV_TOL).unwrap().local
        }
        Refutation::NoRefutation => false,
    };
    let verdict = is_local_automorphism_l2(&map, &d, &SamplingPlan::new(SEED, 100)).unwrap();
    let elapsed = start.elapsed();
    outcome(
        witness_fails && verdict.is_refuted() && elapsed <= Duration::from_secs(30),
        format!("witness fails locally: {witness_fails}, verdict {}, {elapsed:.2?}", verdict.label()),
    )
}

fn weighted(group: &FiniteGroup, anti: bool) -> Vec<WeightedComposition> {
    if !anti {
        return enumerate_isometric_automorphisms_lp(group).unwrap();
    }
    let mut out = Vec::new();
    for c in enumerate_characters(group).unwrap() {
        for a in enumerate_antiautomorphisms(group).unwrap() {
            out.push(WeightedComposition::new(group, c.clone(), a).unwrap());
        }
    }
    out
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let plan = SamplingPlan::new(SEED, 20);
    let mut pass = true;
    let mut notes = Vec::new();
    for name in ["S3", "Q8"] {
        let g = by_name(name).unwrap();
        let antis = weighted(&g, true);
        let refuted_at_sep = antis
            .iter()
            .filter(|w| {
                matches!(local_check_lp(w, &g, &plan).unwrap(),
                    Verdict::Refuted { ref point, .. } if point == "separating_function")
            })
            .count();
        let autos = weighted(&g, false);
        let local = autos
            .iter()
            .filter(|w| !local_check_lp(w, &g, &plan).unwrap().is_refuted())
            .count();
        pass &= refuted_at_sep == antis.len() && !antis.is_empty() && local == autos.len();
        notes.push(format!("{name}: anti {refuted_at_sep}/{} refuted, auto {local}/{} local", antis.len(), autos.len()));
    }
    for g in [cyclic(4), cyclic(6), direct_product(&cyclic(2), &cyclic(2))] {
        let all: Vec<WeightedComposition> = weighted(&g, true).into_iter().chain(weighted(&g, false)).collect();
        let local = all
            .iter()
            .filter(|w| !local_check_lp(w, &g, &plan).unwrap().is_refuted())
            .count();
        pass &= local == all.len();
        notes.push(format!("{}: {local}/{} local", g.name(), all.len()));
    }
    let elapsed = start.elapsed();
    outcome(pass && elapsed <= Duration::from_secs(60), format!("{notes:?}, {elapsed:.2?}"))
}

fn criterion_9() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_grouplab");
    let mut pass = true;
    let mut notes = Vec::new();
    for scenario in grouplab_cli::scenarios::SCENARIOS {
        let run = || {
            Command::new(bin)
                .args(["reproduce", scenario, "--seed", "1"])
                .output()
                .expect("run binary")
        };
        let (a, b) = (run(), run());
        let same = a.stdout == b.stdout && !a.stdout.is_empty();
        let ok = a.status.code() == Some(0);
        pass &= same && ok;
        notes.push(format!("{scenario}: identical={same} exit={:?}", a.status.code()));
    }
    outcome(pass, format!("{notes:?}"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 dual correctness", criterion_1),
        ("2 Plancherel and Fourier homomorphism", criterion_2),
        ("3 minimal-ideal structure", criterion_3),
        ("4 2x2 transpose equivalence", criterion_4),
        ("5 counterexample matrices d=3,4,5", criterion_5),
        ("6 S3 local non-automorphism", criterion_6),
        ("7 A4 refutation", criterion_7),
        ("8 L^p weighted compositions", criterion_8),
        ("9 determinism of reproduce", criterion_9),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let o = check();
        println!("{} criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
