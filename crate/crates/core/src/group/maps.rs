//! Automorphisms and antiautomorphisms of a finite group.

use serde::{Deserialize, Serialize};

use super::{FiniteGroup, DEFAULT_ORDER_BOUND};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MapKind {
    #[serde(rename = "auto")]
    Automorphism,
    #[serde(rename = "antiauto")]
    Antiautomorphism,
}

/// A bijection of the elements that is an automorphism or antiautomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupMap {
    perm: Vec<usize>,
    kind: MapKind,
}

impl GroupMap {
    /// Checks bijectivity and the defining identity of `kind` exactly.
    pub fn new(group: &FiniteGroup, perm: Vec<usize>, kind: MapKind) -> Result<Self> {
        let map = GroupMap { perm, kind };
        map.validate(group)?;
        Ok(map)
    }

    pub fn identity(group: &FiniteGroup) -> Self {
        GroupMap {
            perm: group.elements().collect(),
            kind: MapKind::Automorphism,
        }
    }

    /// `x ↦ x⁻¹`, an antiautomorphism of every group.
    pub fn inversion(group: &FiniteGroup) -> Self {
        GroupMap {
            perm: group.elements().map(|x| group.inv(x)).collect(),
            kind: MapKind::Antiautomorphism,
        }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.perm[x]
    }

    /// Relabels the kind; used for commutative groups where both identities hold.
    pub fn with_kind(&self, group: &FiniteGroup, kind: MapKind) -> Result<Self> {
        GroupMap::new(group, self.perm.clone(), kind)
    }

    pub fn validate(&self, group: &FiniteGroup) -> Result<()> {
        let n = group.order();
        if self.perm.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: self.perm.len(),
            });
        }
        let mut seen = vec![false; n];
        for &p in &self.perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidMap("group map is not a bijection".into()));
            }
        }
        if let Some((x, y)) = self.violation(group, self.kind) {
            return Err(Error::InvalidMap(format!(
                "{:?} identity fails at ({x}, {y})",
                self.kind
            )));
        }
        Ok(())
    }

    /// First pair violating the identity of `kind`, if any.
    pub fn violation(&self, group: &FiniteGroup, kind: MapKind) -> Option<(usize, usize)> {
        let p = &self.perm;
        group
            .elements()
            .flat_map(|x| group.elements().map(move |y| (x, y)))
            .find(|&(x, y)| {
                let lhs = p[group.mul(x, y)];
                let rhs = match kind {
                    MapKind::Automorphism => group.mul(p[x], p[y]),
                    MapKind::Antiautomorphism => group.mul(p[y], p[x]),
                };
                lhs != rhs
            })
    }

    pub fn satisfies(&self, group: &FiniteGroup, kind: MapKind) -> bool {
        self.violation(group, kind).is_none()
    }

    /// `self ∘ other`; the kind follows the parity of antiautomorphisms.
    pub fn compose(&self, other: &GroupMap) -> GroupMap {
        let kind = if self.kind == other.kind {
            MapKind::Automorphism
        } else {
            MapKind::Antiautomorphism
        };
        GroupMap {
            perm: other.perm.iter().map(|&x| self.perm[x]).collect(),
            kind,
        }
    }

    pub fn inverse(&self) -> GroupMap {
        let mut perm = vec![0; self.perm.len()];
        for (x, &y) in self.perm.iter().enumerate() {
            perm[y] = x;
        }
        GroupMap {
            perm,
            kind: self.kind,
        }
    }
}

pub fn enumerate_automorphisms(group: &FiniteGroup) -> Result<Vec<GroupMap>> {
    enumerate_automorphisms_bounded(group, DEFAULT_ORDER_BOUND)
}

/// All automorphisms, sorted lexicographically by permutation.
///
/// Backtracks over images of a greedy generating set; after each generator
/// is assigned the partial map is propagated along the Cayley graph of the
/// subgroup generated so far and rejected on the first conflict.
pub fn enumerate_automorphisms_bounded(group: &FiniteGroup, bound: usize) -> Result<Vec<GroupMap>> {
    group.check_bound(bound)?;
    let gens = group.generating_set();
    let orders: Vec<usize> = group.elements().map(|x| group.element_order(x)).collect();
    let mut images = Vec::with_capacity(gens.len());
    let mut found = Vec::new();
    search(group, &gens, &orders, &mut images, &mut found);
    found.sort();
    Ok(found
        .into_iter()
        .map(|perm| GroupMap {
            perm,
            kind: MapKind::Automorphism,
        })
        .collect())
}

fn search(
    group: &FiniteGroup,
    gens: &[usize],
    orders: &[usize],
    images: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) {
    let depth = images.len();
    if depth == gens.len() {
        if let Some(perm) = propagate(group, gens, images) {
            if perm.iter().all(|&v| v != usize::MAX) {
                found.push(perm);
            }
        }
        return;
    }
    for candidate in group.elements().filter(|&y| orders[y] == orders[gens[depth]]) {
        images.push(candidate);
        if propagate(group, &gens[..=depth], images).is_some() {
            search(group, gens, orders, images, found);
        }
        images.pop();
    }
}

/// Extend `gens[i] ↦ images[i]` to the subgroup they generate. Returns `None`
/// on an inconsistency or a non-injective image; unreached entries are
/// `usize::MAX`.
fn propagate(group: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let n = group.order();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let e = group.identity();
    map[e] = e;
    used[e] = true;
    let mut queue = std::collections::VecDeque::from([e]);
    while let Some(x) = queue.pop_front() {
        for (&g, &img) in gens.iter().zip(images) {
            let y = group.mul(x, g);
            let target = group.mul(map[x], img);
            if map[y] == usize::MAX {
                if std::mem::replace(&mut used[target], true) {
                    return None;
                }
                map[y] = target;
                queue.push_back(y);
            } else if map[y] != target {
                return None;
            }
        }
    }
    Some(map)
}

pub fn enumerate_antiautomorphisms(group: &FiniteGroup) -> Result<Vec<GroupMap>> {
    enumerate_antiautomorphisms_bounded(group, DEFAULT_ORDER_BOUND)
}

/// All antiautomorphisms, generated as `a ∘ inversion` for each automorphism
/// `a`, sorted lexicographically by permutation.
pub fn enumerate_antiautomorphisms_bounded(
    group: &FiniteGroup,
    bound: usize,
) -> Result<Vec<GroupMap>> {
    let inversion = GroupMap::inversion(group);
    let mut out: Vec<GroupMap> = enumerate_automorphisms_bounded(group, bound)?
        .iter()
        .map(|a| a.compose(&inversion))
        .collect();
    out.sort_by(|a, b| a.perm.cmp(&b.perm));
    Ok(out)
}

impl PartialOrd for GroupMap {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupMap {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.perm.cmp(&other.perm).then(self.kind.cmp(&other.kind))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{alternating4, cyclic, direct_product, quaternion, symmetric};

    /// Independent oracle: every bijection fixing the identity, checked
    /// against the full table.
    fn brute_force(group: &FiniteGroup, kind: MapKind) -> Vec<Vec<usize>> {
        fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
            if k == items.len() {
                out.push(items.clone());
                return;
            }
            for i in k..items.len() {
                items.swap(k, i);
                permutations(items, k + 1, out);
                items.swap(k, i);
            }
        }
        let mut all = Vec::new();
        permutations(&mut group.elements().collect(), 0, &mut all);
        let mut ok: Vec<Vec<usize>> = all
            .into_iter()
            .filter(|p| GroupMap { perm: p.clone(), kind }.satisfies(group, kind))
            .collect();
        ok.sort();
        ok
    }

    fn perms(maps: &[GroupMap]) -> Vec<Vec<usize>> {
        maps.iter().map(|m| m.perm.clone()).collect()
    }

    #[test]
    fn z3_has_two_automorphisms() {
        let autos = enumerate_automorphisms(&cyclic(3)).unwrap();
        assert_eq!(perms(&autos), vec![vec![0, 1, 2], vec![0, 2, 1]]);
        assert_eq!(perms(&autos), brute_force(&cyclic(3), MapKind::Automorphism));
    }

    #[test]
    fn s3_automorphisms_match_brute_force() {
        let s3 = symmetric(3);
        let autos = enumerate_automorphisms(&s3).unwrap();
        assert_eq!(autos.len(), 6);
        assert_eq!(perms(&autos), brute_force(&s3, MapKind::Automorphism));
        let antis = enumerate_antiautomorphisms(&s3).unwrap();
        assert_eq!(perms(&antis), brute_force(&s3, MapKind::Antiautomorphism));
    }

    #[test]
    fn small_groups_match_brute_force() {
        for g in [cyclic(6), crate::group::dihedral(4), quaternion(), cyclic(2), cyclic(7)] {
            let autos = enumerate_automorphisms(&g).unwrap();
            assert_eq!(perms(&autos), brute_force(&g, MapKind::Automorphism), "{}", g.name());
        }
    }

    #[test]
    fn trivial_group_has_only_identity() {
        let autos = enumerate_automorphisms(&cyclic(1)).unwrap();
        assert_eq!(perms(&autos), vec![vec![0]]);
    }

    #[test]
    fn commutative_antiautomorphisms_coincide_with_automorphisms() {
        let z4 = cyclic(4);
        let autos = enumerate_automorphisms(&z4).unwrap();
        let antis = enumerate_antiautomorphisms(&z4).unwrap();
        assert_eq!(antis.len(), 2);
        assert_eq!(perms(&autos), perms(&antis));
    }

    #[test]
    fn noncommutative_antiautomorphisms_are_disjoint_from_automorphisms() {
        let s3 = symmetric(3);
        let antis = enumerate_antiautomorphisms(&s3).unwrap();
        assert_eq!(antis.len(), 6);
        assert!(antis.iter().all(|a| !a.satisfies(&s3, MapKind::Automorphism)));
    }

    #[test]
    fn quaternion_counts() {
        let q = quaternion();
        assert_eq!(enumerate_automorphisms(&q).unwrap().len(), 24);
        let antis = enumerate_antiautomorphisms(&q).unwrap();
        assert_eq!(antis.len(), 24);
        let inversion = GroupMap::inversion(&q);
        let autos = enumerate_automorphisms(&q).unwrap();
        for anti in &antis {
            let auto = anti.compose(&inversion);
            assert_eq!(auto.kind(), MapKind::Automorphism);
            assert!(autos.iter().any(|a| a.perm == auto.perm));
        }
    }

    #[test]
    fn automorphism_groups_of_larger_groups() {
        // |Aut(S4)| = 24, |Aut(A4)| = 24, |Aut(Z2×Z2)| = 6, |Aut(D4)| = 8
        assert_eq!(enumerate_automorphisms(&symmetric(4)).unwrap().len(), 24);
        assert_eq!(enumerate_automorphisms(&alternating4()).unwrap().len(), 24);
        let klein = direct_product(&cyclic(2), &cyclic(2));
        assert_eq!(enumerate_automorphisms(&klein).unwrap().len(), 6);
        assert_eq!(enumerate_automorphisms(&crate::group::dihedral(4)).unwrap().len(), 8);
    }

    #[test]
    fn automorphisms_form_a_group() {
        let g = direct_product(&cyclic(2), &symmetric(3));
        let autos = enumerate_automorphisms(&g).unwrap();
        for a in &autos {
            assert!(autos.contains(&a.inverse()));
            for b in &autos {
                assert!(autos.contains(&a.compose(b)));
            }
        }
        assert!(autos.contains(&GroupMap::identity(&g)));
    }

    #[test]
    fn bound_is_enforced() {
        let big = cyclic(50);
        assert!(matches!(
            enumerate_automorphisms(&big),
            Err(Error::OrderBoundExceeded { order: 50, bound: 48 })
        ));
        assert_eq!(enumerate_automorphisms_bounded(&big, 64).unwrap().len(), 20);
    }

    #[test]
    fn construction_rejects_bad_maps() {
        let s3 = symmetric(3);
        assert!(GroupMap::new(&s3, vec![0, 0, 1, 2, 3, 4], MapKind::Automorphism).is_err());
        let inv = GroupMap::inversion(&s3);
        assert!(GroupMap::new(&s3, inv.perm().to_vec(), MapKind::Automorphism).is_err());
        assert!(GroupMap::new(&s3, inv.perm().to_vec(), MapKind::Antiautomorphism).is_ok());
    }
}
