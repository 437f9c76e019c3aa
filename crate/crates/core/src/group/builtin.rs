//! Built-in groups used throughout the tests and the command line.

use std::collections::BTreeSet;

use super::{direct_product, FiniteGroup};
use crate::{Error, Result};

pub fn cyclic(n: usize) -> FiniteGroup {
    assert!(n >= 1, "cyclic group needs n >= 1");
    let table = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
    FiniteGroup::build(format!("Z{n}"), table, Some(0)).expect("cyclic table is a group")
}

/// Dihedral group of order `2n`; `r^k s^b` has index `k + n·b`.
pub fn dihedral(n: usize) -> FiniteGroup {
    assert!(n >= 1, "dihedral group needs n >= 1");
    let elem = |x: usize| (x % n, x / n);
    let table = (0..2 * n)
        .map(|x| {
            (0..2 * n)
                .map(|y| {
                    let ((a, b), (c, d)) = (elem(x), elem(y));
                    let k = if b == 0 { a + c } else { a + n - c };
                    k % n + n * ((b + d) % 2)
                })
                .collect()
        })
        .collect();
    FiniteGroup::build(format!("D{n}"), table, Some(0)).expect("dihedral table is a group")
}

/// Closure of a set of permutations under composition, elements sorted
/// lexicographically (identity first); `x·y = x ∘ y`.
fn permutation_group(name: String, degree: usize, gens: &[Vec<usize>]) -> FiniteGroup {
    let id: Vec<usize> = (0..degree).collect();
    let mut set = BTreeSet::from([id]);
    let mut frontier: Vec<Vec<usize>> = set.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for p in &frontier {
            for g in gens {
                let q: Vec<usize> = g.iter().map(|&i| p[i]).collect();
                if set.insert(q.clone()) {
                    next.push(q);
                }
            }
        }
        frontier = next;
    }
    let elems: Vec<Vec<usize>> = set.into_iter().collect();
    let index = |p: &Vec<usize>| elems.binary_search(p).expect("closed under composition");
    let table = elems
        .iter()
        .map(|x| {
            elems
                .iter()
                .map(|y| index(&y.iter().map(|&i| x[i]).collect()))
                .collect()
        })
        .collect();
    FiniteGroup::build(name, table, Some(0)).expect("permutation table is a group")
}

/// Symmetric group on `n` points.
pub fn symmetric(n: usize) -> FiniteGroup {
    assert!((1..=6).contains(&n), "symmetric group supported for 1 <= n <= 6");
    let mut gens = Vec::new();
    if n >= 2 {
        let mut transposition: Vec<usize> = (0..n).collect();
        transposition.swap(0, 1);
        gens.push(transposition);
        gens.push((0..n).map(|i| (i + 1) % n).collect());
    }
    permutation_group(format!("S{n}"), n, &gens)
}

/// Alternating group on 4 points.
pub fn alternating4() -> FiniteGroup {
    let gens = vec![vec![1, 2, 0, 3], vec![0, 2, 3, 1]];
    permutation_group("A4".into(), 4, &gens)
}

/// Quaternion group; index `2u + s` stands for `(−1)^s·u` with
/// `u ∈ {1, i, j, k}`.
pub fn quaternion() -> FiniteGroup {
    // unit products as (sign, unit)
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let table = (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let (s, u) = UNIT[x / 2][y / 2];
                    2 * u + (s + x % 2 + y % 2) % 2
                })
                .collect()
        })
        .collect();
    FiniteGroup::build("Q8", table, Some(0)).expect("quaternion table is a group")
}

/// Names accepted by [`by_name`] for single (non-product) groups up to order 24.
pub fn builtin_names() -> Vec<String> {
    let mut names: Vec<String> = (1..=12).map(|n| format!("Z{n}")).collect();
    names.extend(["S3", "S4", "A4", "D4", "D5", "D6", "Q8"].map(String::from));
    names
}

/// Resolve a group name: `Zn`/`Cn`, `Dn`, `Sn`, `A4`, `Q8`, `trivial`, and
/// direct products joined by `x`, e.g. `Z2xS3`.
pub fn by_name(name: &str) -> Result<FiniteGroup> {
    let name = name.trim();
    if name.contains('x') {
        let mut parts = name.split('x');
        let first = by_name(parts.next().unwrap_or_default())?;
        return parts.try_fold(first, |acc, p| Ok(direct_product(&acc, &by_name(p)?)));
    }
    let unknown = || Error::UnknownGroup(name.to_string());
    if name.eq_ignore_ascii_case("trivial") {
        return Ok(cyclic(1).with_name("trivial"));
    }
    let (head, tail) = name.split_at(name.char_indices().nth(1).map_or(name.len(), |(i, _)| i));
    let n: usize = tail.parse().map_err(|_| unknown())?;
    match (head, n) {
        ("Z" | "C", 1..=96) => Ok(cyclic(n)),
        ("D", 1..=48) => Ok(dihedral(n)),
        ("S", 1..=5) => Ok(symmetric(n)),
        ("A", 4) => Ok(alternating4()),
        ("Q", 8) => Ok(quaternion()),
        _ => Err(unknown()),
    }
}
