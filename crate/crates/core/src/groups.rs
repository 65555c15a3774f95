//! Finite groups given by multiplication tables, and their subgroup lattices.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard ceiling: subgroups are stored as `u64` bitmasks.
pub const MAX_GROUP_ORDER: usize = 64;
pub const DEFAULT_LATTICE_CAP: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("multiplication table is empty")]
    Empty,
    #[error("multiplication table row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("table entry {a}*{b} = {value} is not an element index")]
    NotClosed { a: usize, b: usize, value: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("multiplication is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("element names must be distinct; `{0}` repeats")]
    DuplicateName(String),
    #[error("group of order {order} exceeds the cap {cap}")]
    GroupTooLarge { order: usize, cap: usize },
    #[error("unknown group element `{0}`")]
    UnknownElement(String),
    #[error("subset {0:?} is not a subgroup")]
    NotASubgroup(Vec<usize>),
}

/// A validated finite group. Elements are indices `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    names: Vec<String>,
    mul: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl Group {
    /// Validates a multiplication table. Element names default to `g0, g1, ...`.
    pub fn from_table(
        mul: Vec<Vec<usize>>,
        names: Option<Vec<String>>,
    ) -> Result<Group, GroupError> {
        let n = mul.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if n > MAX_GROUP_ORDER {
            return Err(GroupError::GroupTooLarge {
                order: n,
                cap: MAX_GROUP_ORDER,
            });
        }
        for (row, r) in mul.iter().enumerate() {
            if r.len() != n {
                return Err(GroupError::NotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
            if let Some((b, &value)) = r.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(GroupError::NotClosed { a: row, b, value });
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x))
            .ok_or(GroupError::NoIdentity)?;
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a][b];
                for c in 0..n {
                    if mul[ab][c] != mul[a][mul[b][c]] {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| mul[a][b] == identity && mul[b][a] == identity)
                .ok_or(GroupError::NoInverse(a))?;
            inverse.push(inv);
        }
        let names = names.unwrap_or_else(|| (0..n).map(|i| format!("g{i}")).collect());
        let mut seen = BTreeSet::new();
        for name in &names {
            if !seen.insert(name) {
                return Err(GroupError::DuplicateName(name.clone()));
            }
        }
        assert_eq!(names.len(), n, "one name per element");
        Ok(Group {
            names,
            mul,
            identity,
            inverse,
        })
    }

    pub fn trivial() -> Group {
        Group::from_table(vec![vec![0]], Some(vec!["e".into()])).unwrap()
    }

    /// `Z/n` with elements `e, a, a2, ...`.
    pub fn cyclic(n: usize) -> Group {
        assert!(n >= 1);
        let mul = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        let names = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "a".to_string(),
                k => format!("a{k}"),
            })
            .collect();
        Group::from_table(mul, Some(names)).unwrap()
    }

    /// Direct product, elements ordered lexicographically `(g, h)`.
    pub fn product(g: &Group, h: &Group) -> Group {
        let (n, m) = (g.order(), h.order());
        let idx = |a: usize, b: usize| a * m + b;
        let mut mul = vec![vec![0; n * m]; n * m];
        for a1 in 0..n {
            for b1 in 0..m {
                for a2 in 0..n {
                    for b2 in 0..m {
                        mul[idx(a1, b1)][idx(a2, b2)] = idx(g.mul(a1, a2), h.mul(b1, b2));
                    }
                }
            }
        }
        let names = (0..n)
            .flat_map(|a| (0..m).map(move |b| (a, b)))
            .map(|(a, b)| match (a == g.identity, b == h.identity) {
                (true, true) => "e".to_string(),
                (false, true) => g.names[a].clone(),
                (true, false) => format!("{}'", h.names[b]),
                (false, false) => format!("{}{}'", g.names[a], h.names[b]),
            })
            .collect();
        Group::from_table(mul, Some(names)).unwrap()
    }

    /// `Z/2 x Z/2`.
    pub fn klein() -> Group {
        Group::product(&Group::cyclic(2), &Group::cyclic(2))
    }

    /// The symmetric group on `n` letters, elements are permutations in
    /// lexicographic order (so the identity comes first).
    pub fn symmetric(n: usize) -> Group {
        let perms = permutations(n);
        let index: HashMap<&Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        // (p * q)(x) = p(q(x))
        let mul = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        let pq: Vec<usize> = q.iter().map(|&x| p[x]).collect();
                        index[&pq]
                    })
                    .collect()
            })
            .collect();
        let names = perms
            .iter()
            .enumerate()
            .map(|(i, p)| {
                if i == 0 {
                    "e".to_string()
                } else {
                    format!("p{}", p.iter().map(|x| x.to_string()).collect::<String>())
                }
            })
            .collect();
        Group::from_table(mul, Some(names)).unwrap()
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `g h g⁻¹`.
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn element(&self, name: &str) -> Result<usize, GroupError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| GroupError::UnknownElement(name.to_string()))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Smallest subgroup containing `gens`, as a bitmask.
    pub fn closure_mask(&self, gens: u64) -> u64 {
        let mut mask = gens | (1u64 << self.identity);
        loop {
            let mut next = mask;
            for a in bits(mask) {
                for b in bits(mask) {
                    next |= 1u64 << self.mul(a, b);
                }
            }
            if next == mask {
                return mask;
            }
            mask = next;
        }
    }

    pub fn is_subgroup_mask(&self, mask: u64) -> bool {
        mask & (1u64 << self.identity) != 0
            && bits(mask).all(|a| {
                mask & (1u64 << self.inv(a)) != 0
                    && bits(mask).all(|b| mask & (1u64 << self.mul(a, b)) != 0)
            })
    }

    /// A subgroup as a group in its own right, with the map from its
    /// elements (in increasing order) back to this group. Names are kept.
    pub fn restrict(&self, h: &Subgroup) -> (Group, Vec<usize>) {
        let members = h.members();
        let pos = |g: usize| {
            members
                .iter()
                .position(|&m| m == g)
                .expect("subgroup is closed")
        };
        let mul = members
            .iter()
            .map(|&a| members.iter().map(|&b| pos(self.mul(a, b))).collect())
            .collect();
        let names = members.iter().map(|&a| self.names[a].clone()).collect();
        (
            Group::from_table(mul, Some(names)).expect("subgroup of a group is a group"),
            members,
        )
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "group of order {}", self.order())
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                go(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Indices of set bits, ascending.
pub fn bits(mask: u64) -> impl Iterator<Item = usize> + Clone {
    (0..64).filter(move |i| mask & (1u64 << i) != 0)
}

/// A subgroup, stored as a membership mask over the parent's elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    mask: u64,
}

impl Subgroup {
    pub fn from_mask(group: &Group, mask: u64) -> Result<Subgroup, GroupError> {
        if group.is_subgroup_mask(mask) {
            Ok(Subgroup { mask })
        } else {
            Err(GroupError::NotASubgroup(bits(mask).collect()))
        }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn members(&self) -> Vec<usize> {
        bits(self.mask).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + Clone {
        bits(self.mask)
    }

    pub fn order(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn contains(&self, g: usize) -> bool {
        self.mask & (1u64 << g) != 0
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn conjugate(&self, group: &Group, g: usize) -> Subgroup {
        Subgroup {
            mask: self.iter().fold(0, |m, h| m | (1u64 << group.conj(g, h))),
        }
    }
}

/// All subgroups of a group with inclusions and conjugacy classes.
///
/// Subgroups are sorted by order, then by their sorted member lists, so the
/// trivial subgroup is always index 0 and the whole group is last.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    group: Group,
    subgroups: Vec<Subgroup>,
    index: HashMap<u64, usize>,
    conj: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl SubgroupLattice {
    pub fn new(group: &Group) -> Result<SubgroupLattice, GroupError> {
        SubgroupLattice::with_cap(group, DEFAULT_LATTICE_CAP)
    }

    /// Enumerates subgroups by closing every known subgroup under one more
    /// element until nothing new appears. Every subgroup is reached along a
    /// chain of one-element extensions, so the enumeration is complete.
    pub fn with_cap(group: &Group, cap: usize) -> Result<SubgroupLattice, GroupError> {
        if group.order() > cap.min(MAX_GROUP_ORDER) {
            return Err(GroupError::GroupTooLarge {
                order: group.order(),
                cap,
            });
        }
        let mut found: BTreeSet<u64> = BTreeSet::new();
        let mut frontier = vec![group.closure_mask(0)];
        found.insert(frontier[0]);
        while let Some(mask) = frontier.pop() {
            for g in group.elements() {
                if mask & (1u64 << g) == 0 {
                    let next = group.closure_mask(mask | (1u64 << g));
                    if found.insert(next) {
                        frontier.push(next);
                    }
                }
            }
        }
        let mut subgroups: Vec<Subgroup> =
            found.into_iter().map(|mask| Subgroup { mask }).collect();
        subgroups.sort_by_key(|s| (s.order(), s.members()));
        let index: HashMap<u64, usize> = subgroups
            .iter()
            .enumerate()
            .map(|(i, s)| (s.mask, i))
            .collect();
        let conj: Vec<Vec<usize>> = subgroups
            .iter()
            .map(|s| {
                group
                    .elements()
                    .map(|g| index[&s.conjugate(group, g).mask])
                    .collect()
            })
            .collect();
        let mut class_of = vec![usize::MAX; subgroups.len()];
        let mut classes = Vec::new();
        for i in 0..subgroups.len() {
            if class_of[i] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = conj[i].clone();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                class_of[m] = classes.len();
            }
            classes.push(members);
        }
        Ok(SubgroupLattice {
            group: group.clone(),
            subgroups,
            index,
            conj,
            class_of,
            classes,
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn get(&self, i: usize) -> Subgroup {
        self.subgroups[i]
    }

    pub fn index_of(&self, s: &Subgroup) -> usize {
        self.index[&s.mask]
    }

    pub fn index_of_mask(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    pub fn trivial(&self) -> usize {
        0
    }

    pub fn whole(&self) -> usize {
        self.subgroups.len() - 1
    }

    /// Index of `g S_i g⁻¹`.
    pub fn conjugate(&self, i: usize, g: usize) -> usize {
        self.conj[i][g]
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// The representative of a class is its first (smallest) member.
    pub fn class_rep(&self, class: usize) -> usize {
        self.classes[class][0]
    }

    pub fn is_subgroup(&self, i: usize, j: usize) -> bool {
        self.subgroups[i].is_subgroup_of(&self.subgroups[j])
    }

    /// All pairs `(i, j)` with `S_i ⊆ S_j`.
    pub fn inclusions(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.is_subgroup(i, j))
            .collect()
    }

    /// Subgroups of `S_j`, as lattice indices.
    pub fn subgroups_of(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.is_subgroup(i, j))
    }

    /// Canonical display name, e.g. `{e,a}`.
    pub fn name(&self, i: usize) -> String {
        let names: Vec<&str> = self.subgroups[i]
            .iter()
            .map(|g| self.group.name(g))
            .collect();
        format!("{{{}}}", names.join(","))
    }

    /// Resolves a subgroup by canonical name, `#index`, or the aliases
    /// `e`/`1` (trivial) and `G` (whole group).
    pub fn lookup(&self, name: &str) -> Option<usize> {
        let name = name.trim();
        if let Some(idx) = name.strip_prefix('#') {
            return idx.parse().ok().filter(|&i| i < self.len());
        }
        match name {
            "G" => return Some(self.whole()),
            "1" | "e" | "{e}" => return Some(self.trivial()),
            _ => {}
        }
        if let Some(inner) = name.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
            let mut mask = 0u64;
            for part in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                mask |= 1u64 << self.group.element(part).ok()?;
            }
            return self.index_of_mask(mask);
        }
        None
    }
}

/// JSON form of a group: element names plus the row-major table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupSpec {
    pub elements: Vec<String>,
    pub mul: Vec<Vec<usize>>,
}

impl GroupSpec {
    pub fn build(self) -> Result<Group, GroupError> {
        Group::from_table(self.mul, Some(self.elements))
    }
}

impl From<&Group> for GroupSpec {
    fn from(g: &Group) -> Self {
        GroupSpec {
            elements: g.names.clone(),
            mul: g.mul.clone(),
        }
    }
}
