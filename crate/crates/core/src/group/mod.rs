//! Finite groups as validated Cayley tables.
//!
//! Elements are the dense indices `0..order`; `table[x][y] = x·y` with the row
//! acting on the left.

mod builtin;
mod character;
mod maps;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use builtin::{alternating4, builtin_names, by_name, cyclic, dihedral, quaternion, symmetric};
pub use character::{enumerate_characters, enumerate_characters_bounded, Character};
pub use maps::{
    enumerate_antiautomorphisms, enumerate_antiautomorphisms_bounded, enumerate_automorphisms,
    enumerate_automorphisms_bounded, GroupMap, MapKind,
};

/// Default bound on `|G|` for the enumeration routines.
pub const DEFAULT_ORDER_BOUND: usize = 48;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

/// On-disk form of a group: `{"name": .., "order": n, "table": [[..]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupSpec {
    pub name: String,
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Validate a raw Cayley table. The optional identity hint is tried first;
    /// otherwise the identity is searched for.
    pub fn build(
        name: impl Into<String>,
        table: Vec<Vec<usize>>,
        identity_hint: Option<usize>,
    ) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        for (x, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!(
                    "row {x} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidTable(format!("entry {bad} in row {x} out of range")));
            }
        }
        check_latin(&table)?;

        let is_identity = |e: usize| (0..n).all(|x| table[e][x] == x && table[x][e] == x);
        let identity = identity_hint
            .filter(|&e| e < n && is_identity(e))
            .or_else(|| (0..n).find(|&e| is_identity(e)))
            .ok_or(Error::NoIdentity)?;

        let mut inverse = vec![0; n];
        for x in 0..n {
            // Latin property gives exactly one right inverse.
            let y = (0..n).find(|&y| table[x][y] == identity).ok_or(Error::NoInverse(x))?;
            if table[y][x] != identity {
                return Err(Error::NoInverse(x));
            }
            inverse[x] = y;
        }

        for x in 0..n {
            for y in 0..n {
                let xy = table[x][y];
                for z in 0..n {
                    if table[xy][z] != table[x][table[y][z]] {
                        return Err(Error::NonAssociative(x, y, z));
                    }
                }
            }
        }

        Ok(FiniteGroup {
            name: name.into(),
            order: n,
            table: table.into_iter().flatten().collect(),
            identity,
            inverse,
        })
    }

    pub fn from_spec(spec: GroupSpec) -> Result<Self> {
        if spec.order != spec.table.len() {
            return Err(Error::InvalidTable(format!(
                "declared order {} but table has {} rows",
                spec.order,
                spec.table.len()
            )));
        }
        Self::build(spec.name, spec.table, None)
    }

    pub fn to_spec(&self) -> GroupSpec {
        GroupSpec {
            name: self.name.clone(),
            order: self.order,
            table: self.table.chunks(self.order).map(<[usize]>::to_vec).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_spec(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_spec()).expect("group spec serializes")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order + y]
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn is_commutative(&self) -> bool {
        self.elements()
            .all(|x| (0..x).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut p = x;
        while p != self.identity {
            p = self.mul(p, x);
            k += 1;
        }
        k
    }

    /// Exponent of the group: lcm of the element orders.
    pub fn exponent(&self) -> usize {
        self.elements().map(|x| self.element_order(x)).fold(1, lcm)
    }

    /// Subgroup generated by `gens`, as a membership mask.
    pub fn generated(&self, gens: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.order];
        mask[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !mask[y] {
                    mask[y] = true;
                    queue.push_back(y);
                }
            }
        }
        mask
    }

    /// Greedy generating set: repeatedly add the element of largest order
    /// (lowest index on ties) outside the subgroup generated so far.
    pub fn generating_set(&self) -> Vec<usize> {
        let orders: Vec<usize> = self.elements().map(|x| self.element_order(x)).collect();
        let mut gens = Vec::new();
        let mut mask = self.generated(&gens);
        while let Some(next) = self
            .elements()
            .filter(|&x| !mask[x])
            .max_by(|&a, &b| orders[a].cmp(&orders[b]).then(b.cmp(&a)))
        {
            gens.push(next);
            mask = self.generated(&gens);
        }
        gens
    }

    /// Order of the commutator subgroup `[G, G]`.
    pub fn commutator_subgroup_order(&self) -> usize {
        let comms: Vec<usize> = self
            .elements()
            .flat_map(|x| self.elements().map(move |y| (x, y)))
            .map(|(x, y)| self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y)))
            .collect();
        self.generated(&comms).iter().filter(|&&b| b).count()
    }

    pub(crate) fn check_bound(&self, bound: usize) -> Result<()> {
        if self.order > bound {
            Err(Error::OrderBoundExceeded {
                order: self.order,
                bound,
            })
        } else {
            Ok(())
        }
    }
}

fn check_latin(table: &[Vec<usize>]) -> Result<()> {
    let n = table.len();
    for (x, row) in table.iter().enumerate() {
        let mut seen = vec![false; n];
        for &v in row {
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::NotLatinSquare {
                    axis: "row",
                    index: x,
                    element: v,
                });
            }
        }
    }
    for y in 0..n {
        let mut seen = vec![false; n];
        for row in table {
            let v = row[y];
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::NotLatinSquare {
                    axis: "column",
                    index: y,
                    element: v,
                });
            }
        }
    }
    Ok(())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Direct product `G × H`; the pair `(g, h)` has index `g·|H| + h`.
pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> FiniteGroup {
    let (n, m) = (g.order(), h.order());
    let table: Vec<usize> = (0..n * m)
        .flat_map(|a| (0..n * m).map(move |b| (a, b)))
        .map(|(a, b)| g.mul(a / m, b / m) * m + h.mul(a % m, b % m))
        .collect();
    let inverse = (0..n * m).map(|a| g.inv(a / m) * m + h.inv(a % m)).collect();
    FiniteGroup {
        name: format!("{}x{}", g.name(), h.name()),
        order: n * m,
        table,
        identity: g.identity() * m + h.identity(),
        inverse,
    }
}
