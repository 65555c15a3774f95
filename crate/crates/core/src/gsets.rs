//! Finite G-sets: orbits, stabilizers, invariant partitions and the effective
//! subgroups `Eff_H(U)` consumed by the connectivity formulas.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groups::{bits, Group, Subgroup, SubgroupLattice};

/// Subsets of points are `u64` bitmasks.
pub const MAX_POINTS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GSetError {
    #[error("action of element {0} is not a permutation of the points")]
    NotPermutation(usize),
    #[error("the identity does not act trivially")]
    IdentityNotTrivial,
    #[error("action is not compatible with multiplication at ({g}, {h})")]
    NotAnAction { g: usize, h: usize },
    #[error("subgroup does not belong to the acting group")]
    SubgroupMismatch,
    #[error("subset must be nonempty")]
    EmptySubset,
    #[error("subset mask {0:#x} has bits outside the point set")]
    SubsetOutOfRange(u64),
    #[error("G-set with {0} points exceeds the limit {MAX_POINTS}")]
    TooManyPoints(usize),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("missing action for group element `{0}`")]
    MissingAction(String),
}

/// A finite set with a left action, `act[g][x] = g·x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSet {
    group: Group,
    points: Vec<String>,
    act: Vec<Vec<usize>>,
}

/// H-orbits as bitmasks (ordered by smallest point) plus the stabilizer of
/// every point in H.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbits {
    pub blocks: Vec<u64>,
    pub stabilizers: Vec<u64>,
}

impl Orbits {
    pub fn count(&self) -> usize {
        self.blocks.len()
    }
}

impl GSet {
    pub fn new(
        group: &Group,
        points: Vec<String>,
        act: Vec<Vec<usize>>,
    ) -> Result<GSet, GSetError> {
        let n = points.len();
        if n > MAX_POINTS {
            return Err(GSetError::TooManyPoints(n));
        }
        if act.len() != group.order() {
            return Err(GSetError::MissingAction(format!(
                "{} rows for {} elements",
                act.len(),
                group.order()
            )));
        }
        for (g, perm) in act.iter().enumerate() {
            let mut seen = vec![false; n];
            if perm.len() != n
                || perm
                    .iter()
                    .any(|&x| x >= n || std::mem::replace(&mut seen[x], true))
            {
                return Err(GSetError::NotPermutation(g));
            }
        }
        if act[group.identity()]
            .iter()
            .enumerate()
            .any(|(x, &y)| x != y)
        {
            return Err(GSetError::IdentityNotTrivial);
        }
        for g in group.elements() {
            for h in group.elements() {
                let gh = group.mul(g, h);
                if (0..n).any(|x| act[gh][x] != act[g][act[h][x]]) {
                    return Err(GSetError::NotAnAction { g, h });
                }
            }
        }
        Ok(GSet {
            group: group.clone(),
            points,
            act,
        })
    }

    /// `n` points with trivial action.
    pub fn trivial(group: &Group, n: usize) -> GSet {
        let points = (0..n).map(|i| i.to_string()).collect();
        let act = vec![(0..n).collect(); group.order()];
        GSet::new(group, points, act).unwrap()
    }

    /// The coset set `G/K`, points named by the smallest coset representative.
    pub fn transitive(group: &Group, k: &Subgroup) -> GSet {
        let mut cosets: Vec<u64> = Vec::new();
        for g in group.elements() {
            let coset = k.iter().fold(0u64, |m, x| m | (1u64 << group.mul(g, x)));
            if !cosets.contains(&coset) {
                cosets.push(coset);
            }
        }
        let coset_of = |g: usize| cosets.iter().position(|c| c & (1u64 << g) != 0).unwrap();
        let reps: Vec<usize> = cosets.iter().map(|c| c.trailing_zeros() as usize).collect();
        let act = group
            .elements()
            .map(|g| reps.iter().map(|&r| coset_of(group.mul(g, r))).collect())
            .collect();
        let points = reps
            .iter()
            .map(|&r| format!("{}K", group.name(r)))
            .collect();
        GSet::new(group, points, act).unwrap()
    }

    /// The left regular action of `G` on itself.
    pub fn regular(group: &Group) -> GSet {
        let points = group.names().to_vec();
        let act = group
            .elements()
            .map(|g| group.elements().map(|x| group.mul(g, x)).collect())
            .collect();
        GSet::new(group, points, act).unwrap()
    }

    /// Disjoint union; point names are prefixed with the summand index when
    /// they would collide.
    pub fn disjoint_union(parts: &[GSet]) -> GSet {
        assert!(!parts.is_empty());
        let group = parts[0].group.clone();
        let mut points = Vec::new();
        let mut act = vec![Vec::new(); group.order()];
        let mut offset = 0;
        for (k, p) in parts.iter().enumerate() {
            assert_eq!(p.group, group, "summands must share the group");
            points.extend(p.points.iter().map(|x| format!("{k}.{x}")));
            for g in group.elements() {
                act[g].extend(p.act[g].iter().map(|&y| y + offset));
            }
            offset += p.len();
        }
        GSet::new(&group, points, act).unwrap()
    }

    /// `J_+`: adds one fixed point named `+` at the end.
    pub fn with_basepoint(&self) -> GSet {
        let n = self.len();
        let mut points = self.points.clone();
        points.push("+".to_string());
        let act = self
            .act
            .iter()
            .map(|perm| {
                let mut p = perm.clone();
                p.push(n);
                p
            })
            .collect();
        GSet::new(&self.group, points, act).unwrap()
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.act[g][x]
    }

    pub fn action_table(&self) -> &[Vec<usize>] {
        &self.act
    }

    pub fn full_mask(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    pub fn point(&self, name: &str) -> Result<usize, GSetError> {
        self.points
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| GSetError::UnknownPoint(name.into()))
    }

    /// `g·U` for a subset mask.
    pub fn act_mask(&self, g: usize, mask: u64) -> u64 {
        bits(mask).fold(0, |m, x| m | (1u64 << self.act[g][x]))
    }

    fn check_subgroup(&self, h: &Subgroup) -> Result<(), GSetError> {
        let in_range = self.group.order() == 64 || h.mask() >> self.group.order() == 0;
        if in_range && self.group.is_subgroup_mask(h.mask()) {
            Ok(())
        } else {
            Err(GSetError::SubgroupMismatch)
        }
    }

    fn check_subset(&self, u: u64) -> Result<(), GSetError> {
        if u & !self.full_mask() != 0 {
            Err(GSetError::SubsetOutOfRange(u))
        } else {
            Ok(())
        }
    }

    /// H-orbits of the whole set and point stabilizers in H.
    pub fn orbits(&self, h: &Subgroup) -> Result<Orbits, GSetError> {
        self.check_subgroup(h)?;
        let mut blocks = Vec::new();
        let mut covered = 0u64;
        for x in 0..self.len() {
            if covered & (1u64 << x) != 0 {
                continue;
            }
            let orbit = h.iter().fold(0u64, |m, g| m | (1u64 << self.act[g][x]));
            covered |= orbit;
            blocks.push(orbit);
        }
        let stabilizers = (0..self.len())
            .map(|x| {
                h.iter()
                    .filter(|&g| self.act[g][x] == x)
                    .fold(0u64, |m, g| m | (1u64 << g))
            })
            .collect();
        Ok(Orbits {
            blocks,
            stabilizers,
        })
    }

    /// Number of orbits of the subgroup with mask `h` on the subset `u`. The
    /// subset is assumed to be invariant; points are grouped by their full
    /// orbit intersected with `u`.
    pub fn orbit_count_in(&self, u: u64, h: u64) -> usize {
        let mut covered = 0u64;
        let mut count = 0;
        for x in bits(u) {
            if covered & (1u64 << x) != 0 {
                continue;
            }
            covered |= bits(h).fold(0u64, |m, g| m | (1u64 << self.act[g][x]));
            count += 1;
        }
        count
    }

    /// `H_U = {h ∈ H | hU = U}` as an element mask.
    pub fn set_stabilizer(&self, u: u64, h: u64) -> u64 {
        bits(h)
            .filter(|&g| self.act_mask(g, u) == u)
            .fold(0, |m, g| m | (1u64 << g))
    }

    /// Whether `u` is invariant under every element of the mask `h`.
    pub fn is_invariant(&self, u: u64, h: u64) -> bool {
        bits(h).all(|g| self.act_mask(g, u) == u)
    }

    /// All partitions of the points into H-invariant blocks, obtained as the
    /// coarsenings of the H-orbit partition. Blocks within a partition are
    /// sorted by smallest point; partitions come in restricted-growth order.
    pub fn invariant_partitions(&self, h: &Subgroup) -> Result<Vec<Vec<u64>>, GSetError> {
        let orbits = self.orbits(h)?;
        Ok(set_partitions(orbits.blocks.len())
            .into_iter()
            .map(|labels| {
                let nblocks = labels.iter().copied().max().map_or(0, |m| m + 1);
                let mut blocks = vec![0u64; nblocks];
                for (o, &b) in labels.iter().enumerate() {
                    blocks[b] |= orbits.blocks[o];
                }
                blocks
            })
            .collect())
    }

    /// `Eff_H(U)` as lattice indices, in lattice order.
    ///
    /// With `H_U` the stabilizer of `U` in `H`: if `H_U ≠ H` this is every
    /// subgroup of `H_U`; otherwise it is every `L ≤ H` with `|U/L| ≠ |U/H|`.
    pub fn eff_subgroups(
        &self,
        lattice: &SubgroupLattice,
        u: u64,
        h: usize,
    ) -> Result<Vec<usize>, GSetError> {
        if lattice.group() != &self.group {
            return Err(GSetError::SubgroupMismatch);
        }
        if u == 0 {
            return Err(GSetError::EmptySubset);
        }
        self.check_subset(u)?;
        let hmask = lattice.get(h).mask();
        let hu = self.set_stabilizer(u, hmask);
        let out: Vec<usize> = if hu != hmask {
            lattice
                .subgroups_of(lattice.index_of_mask(hu).expect("stabilizer is a subgroup"))
                .collect()
        } else {
            let base = self.orbit_count_in(u, hmask);
            lattice
                .subgroups_of(h)
                .filter(|&l| self.orbit_count_in(u, lattice.get(l).mask()) != base)
                .collect()
        };
        debug_assert!(out.iter().all(|&l| l != h && lattice.is_subgroup(l, h)));
        Ok(out)
    }

    /// `G_U` as a lattice index.
    pub fn stabilizer_index(&self, lattice: &SubgroupLattice, u: u64) -> usize {
        let full = lattice.get(lattice.whole()).mask();
        lattice
            .index_of_mask(self.set_stabilizer(u, full))
            .expect("stabilizer is a subgroup")
    }

    pub fn mask_of(&self, names: &[String]) -> Result<u64, GSetError> {
        names
            .iter()
            .try_fold(0u64, |m, n| Ok(m | (1u64 << self.point(n)?)))
    }

    pub fn subset_names(&self, mask: u64) -> Vec<String> {
        bits(mask).map(|x| self.points[x].clone()).collect()
    }
}

/// All set partitions of `{0..n}` as restricted-growth label vectors.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, max: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let next = if prefix.is_empty() { 0 } else { max + 1 };
        for b in 0..=next {
            prefix.push(b);
            go(prefix, n, max.max(b), out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, 0, &mut out);
    out
}

/// JSON form: `action` maps each group element name to the image list.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GSetSpec {
    pub points: Vec<String>,
    pub action: std::collections::BTreeMap<String, Vec<usize>>,
}

impl GSetSpec {
    pub fn build(&self, group: &Group) -> Result<GSet, GSetError> {
        let act = group
            .names()
            .iter()
            .map(|name| {
                if let Some(p) = self.action.get(name) {
                    Ok(p.clone())
                } else if group.element(name).ok() == Some(group.identity()) {
                    Ok((0..self.points.len()).collect())
                } else {
                    Err(GSetError::MissingAction(name.clone()))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        GSet::new(group, self.points.clone(), act)
    }

    pub fn from_gset(j: &GSet) -> GSetSpec {
        let action = j
            .group
            .names()
            .iter()
            .cloned()
            .zip(j.act.iter().cloned())
            .collect();
        GSetSpec {
            points: j.points.clone(),
            action,
        }
    }
}

/// Set partitions of a mask, as lists of block masks; used by tests as an
/// independent oracle.
pub fn all_partitions_of_mask(mask: u64) -> Vec<Vec<u64>> {
    let pts: Vec<usize> = bits(mask).collect();
    set_partitions(pts.len())
        .into_iter()
        .map(|labels| {
            let k = labels.iter().copied().max().map_or(0, |m| m + 1);
            let mut blocks = vec![0u64; k];
            for (i, &b) in labels.iter().enumerate() {
                blocks[b] |= 1u64 << pts[i];
            }
            blocks
        })
        .collect()
}

/// Canonical form for comparing partitions irrespective of block order.
pub fn canonical_partition(blocks: &[u64]) -> BTreeSet<u64> {
    blocks.iter().copied().collect()
}
