//! Locality for weighted compositions (`p ≠ 2`).

use super::{SamplingPlan, Verdict, WitnessPoint};
use crate::autolab::{enumerate_isometric_automorphisms_lp, WeightedComposition};
use crate::conv::AlgebraElement;
use crate::group::FiniteGroup;
use crate::rng::{complex_normal_vec, stream, stream_rng};
use crate::Result;

/// Pointwise agreement tolerance, relative to `max(1, ‖ψ(f)‖_∞)`.
pub const LP_MATCH_TOL: f64 = 1e-9;

/// `f(x_i) = i` for the `i`-th element, counting from 1: nonnegative and
/// injective.
pub fn separating_function(group: &FiniteGroup) -> AlgebraElement {
    let values: Vec<f64> = (1..=group.order()).map(|i| i as f64).collect();
    AlgebraElement::from_real(&values)
}

/// Sampled locality verdict for a weighted composition against every
/// isometric automorphism `τ·(f ∘ φ)` of `L^p(G)`. The separating function is
/// always the first point.
pub fn local_check_lp(map: &WeightedComposition, group: &FiniteGroup, plan: &SamplingPlan) -> Result<Verdict> {
    let candidates = enumerate_isometric_automorphisms_lp(group)?;
    let mut points = vec![("separating_function".to_string(), separating_function(group))];
    if plan.structured.algebra_unit {
        points.push(("algebra_unit".to_string(), AlgebraElement::unit(group)));
    }
    let mut rng = stream_rng(plan.seed, stream::SAMPLING);
    for k in 0..plan.n_random {
        points.push((
            format!("random[{k}]"),
            AlgebraElement::new(complex_normal_vec(&mut rng, group.order()))?,
        ));
    }

    for (evaluated, (label, f)) in points.into_iter().enumerate() {
        let image = map.apply(&f)?;
        let tol = LP_MATCH_TOL * image.max_abs().max(1.0);
        let mut matched = false;
        for c in &candidates {
            if c.apply(&f)?.max_abs_diff(&image) <= tol {
                matched = true;
                break;
            }
        }
        if !matched {
            return Ok(Verdict::Refuted {
                samples: evaluated + 1,
                seed: plan.seed,
                point: label,
                witness: WitnessPoint::Function(f),
                obstruction: None,
            });
        }
    }
    Ok(Verdict::LocalSampled {
        samples: 1 + usize::from(plan.structured.algebra_unit) + plan.n_random,
        seed: plan.seed,
    })
}
