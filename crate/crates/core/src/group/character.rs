//! One-dimensional unitary characters `G → 𝕋`.

use std::collections::VecDeque;

use super::{FiniteGroup, DEFAULT_ORDER_BOUND};
use crate::{Complex64, Error, Result};

/// Tolerance for accepting externally supplied character values.
const CHARACTER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Character {
    values: Vec<Complex64>,
}

impl Character {
    pub fn new(group: &FiniteGroup, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::SizeMismatch {
                expected: group.order(),
                found: values.len(),
            });
        }
        if let Some(x) = values.iter().position(|z| (z.norm() - 1.0).abs() > CHARACTER_TOL) {
            return Err(Error::InvalidMap(format!("character value at {x} is not unimodular")));
        }
        for x in group.elements() {
            for y in group.elements() {
                if (values[group.mul(x, y)] - values[x] * values[y]).norm() > CHARACTER_TOL {
                    return Err(Error::InvalidMap(format!(
                        "character is not multiplicative at ({x}, {y})"
                    )));
                }
            }
        }
        Ok(Character { values })
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        Character {
            values: vec![Complex64::new(1.0, 0.0); group.order()],
        }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn at(&self, x: usize) -> Complex64 {
        self.values[x]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() <= CHARACTER_TOL)
    }
}

/// `exp(2πi k / m)`, exact on quarter turns.
fn root_of_unity(k: usize, m: usize) -> Complex64 {
    let k = k % m;
    if (4 * k).is_multiple_of(m) {
        return match 4 * k / m {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / m as f64)
}

pub fn enumerate_characters(group: &FiniteGroup) -> Result<Vec<Character>> {
    enumerate_characters_bounded(group, DEFAULT_ORDER_BOUND)
}

/// All characters. Values are roots of unity of order dividing the group
/// exponent `L`; the search runs over exponents in `ℤ/L` so every
/// consistency check is exact. Sorted lexicographically by exponent vector,
/// trivial character first.
pub fn enumerate_characters_bounded(group: &FiniteGroup, bound: usize) -> Result<Vec<Character>> {
    group.check_bound(bound)?;
    let l = group.exponent();
    let gens = group.generating_set();
    let mut found = Vec::new();
    let mut assignment = Vec::with_capacity(gens.len());
    search(group, l, &gens, &mut assignment, &mut found);
    found.sort();
    Ok(found
        .into_iter()
        .map(|exps| Character {
            values: exps.into_iter().map(|k| root_of_unity(k, l)).collect(),
        })
        .collect())
}

fn search(
    group: &FiniteGroup,
    l: usize,
    gens: &[usize],
    assignment: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) {
    let depth = assignment.len();
    if depth == gens.len() {
        if let Some(exps) = propagate(group, l, gens, assignment) {
            found.push(exps);
        }
        return;
    }
    // the image of a generator of order o is an o-th root of unity
    let step = l / group.element_order(gens[depth]);
    for k in (0..l).step_by(step) {
        assignment.push(k);
        if propagate(group, l, &gens[..=depth], assignment).is_some() {
            search(group, l, gens, assignment, found);
        }
        assignment.pop();
    }
}

fn propagate(group: &FiniteGroup, l: usize, gens: &[usize], exps: &[usize]) -> Option<Vec<usize>> {
    let mut chi = vec![usize::MAX; group.order()];
    chi[group.identity()] = 0;
    let mut queue = VecDeque::from([group.identity()]);
    while let Some(x) = queue.pop_front() {
        for (&g, &k) in gens.iter().zip(exps) {
            let y = group.mul(x, g);
            let v = (chi[x] + k) % l;
            if chi[y] == usize::MAX {
                chi[y] = v;
                queue.push_back(y);
            } else if chi[y] != v {
                return None;
            }
        }
    }
    Some(chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{by_name, cyclic, symmetric};

    #[test]
    fn z4_characters_are_powers_of_i() {
        let chars = enumerate_characters(&cyclic(4)).unwrap();
        assert_eq!(chars.len(), 4);
        let i = Complex64::new(0.0, 1.0);
        for (k, c) in chars.iter().enumerate() {
            for x in 0..4 {
                assert_eq!(c.at(x), i.powu((k * x) as u32));
            }
        }
    }

    #[test]
    fn s3_has_trivial_and_sign() {
        let s3 = symmetric(3);
        let chars = enumerate_characters(&s3).unwrap();
        assert_eq!(chars.len(), 2);
        assert!(chars[0].is_trivial());
        let sign = &chars[1];
        assert!(sign.values().iter().all(|z| (z.re.abs() - 1.0).abs() < 1e-15 && z.im == 0.0));
    }

    #[test]
    fn trivial_group_single_character() {
        assert_eq!(enumerate_characters(&cyclic(1)).unwrap().len(), 1);
    }

    #[test]
    fn count_is_abelianization_order() {
        for name in crate::group::builtin_names().into_iter().chain(["Z2xS3".into(), "Z4xQ8".into()]) {
            let g = by_name(&name).unwrap();
            let chars = enumerate_characters(&g).unwrap();
            assert_eq!(chars.len(), g.order() / g.commutator_subgroup_order(), "{name}");
            assert_eq!(g.order() % chars.len(), 0);
            assert_eq!(chars.len() == g.order(), g.is_commutative(), "{name}");
            for c in &chars {
                Character::new(&g, c.values().to_vec()).unwrap();
            }
        }
    }

    #[test]
    fn rejects_non_characters() {
        let z3 = cyclic(3);
        let one = Complex64::new(1.0, 0.0);
        assert!(Character::new(&z3, vec![one, one.scale(2.0), one]).is_err());
        assert!(Character::new(&z3, vec![one, -one, one]).is_err());
        assert!(Character::new(&z3, vec![one, one]).is_err());
    }
}
