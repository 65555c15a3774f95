//! Closed-form connectivity estimates for equivariant cubes: the
//! Blakers–Massey range and its dual, suspensions, configuration spaces and
//! complements of submanifolds, homotopy limits and mapping spaces.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equivariant::{fixed_category, FixedCat, GAction};
use crate::ext::{ExtInt, ExtIntError};
use crate::fincat::{over_category, CatError, Functor};
use crate::groups::SubgroupLattice;
use crate::gsets::{GSet, GSetError};
use crate::simplicial::nerve_dimension;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("monotonicity fails at {subgroup}: value on {smaller:?} exceeds value on {larger:?}")]
    MonotonicityViolation {
        smaller: Vec<String>,
        larger: Vec<String>,
        subgroup: String,
    },
    #[error("{what} is not conjugation compatible at {subset:?}, {subgroup}")]
    NotConjugationInvariant {
        what: &'static str,
        subset: Vec<String>,
        subgroup: String,
    },
    #[error("missing entry {0}")]
    MissingEntry(String),
    #[error("d_{point}({subgroup}) exceeds the ambient dimension")]
    DimensionMismatch { point: String, subgroup: String },
    #[error("the index category has loops, so its nerve is not finite-dimensional")]
    NotFiniteDimensional,
    #[error("unknown subgroup `{0}`")]
    UnknownSubgroup(String),
    #[error("lattice and G-set belong to different groups")]
    GroupMismatch,
    #[error(transparent)]
    Arithmetic(#[from] ExtIntError),
    #[error(transparent)]
    GSet(#[from] GSetError),
    #[error(transparent)]
    Cat(#[from] CatError),
}

fn orbit_count(j: &GSet, u: u64, lattice: &SubgroupLattice, h: usize) -> i64 {
    j.orbit_count_in(u, lattice.get(h).mask()) as i64
}

/// A function on subgroups that is constant on conjugacy classes, stored as
/// one value per class.
#[derive(Clone, Debug)]
pub struct ConnFunction {
    lattice: Arc<SubgroupLattice>,
    values: Vec<ExtInt>,
}

impl PartialEq for ConnFunction {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values && self.lattice.group() == other.lattice.group()
    }
}

impl ConnFunction {
    pub fn new(
        lattice: Arc<SubgroupLattice>,
        values: Vec<ExtInt>,
    ) -> Result<ConnFunction, BoundsError> {
        if values.len() != lattice.class_count() {
            return Err(BoundsError::MissingEntry(format!(
                "{} class values for {} classes",
                values.len(),
                lattice.class_count()
            )));
        }
        Ok(ConnFunction { lattice, values })
    }

    pub fn constant(lattice: Arc<SubgroupLattice>, v: ExtInt) -> ConnFunction {
        let values = vec![v; lattice.class_count()];
        ConnFunction { lattice, values }
    }

    /// Evaluates `f` at each class representative.
    pub fn from_fn(
        lattice: Arc<SubgroupLattice>,
        mut f: impl FnMut(usize) -> ExtInt,
    ) -> ConnFunction {
        let values = (0..lattice.class_count())
            .map(|c| f(lattice.class_rep(c)))
            .collect();
        ConnFunction { lattice, values }
    }

    /// Value at the subgroup with lattice index `h`.
    pub fn at(&self, h: usize) -> ExtInt {
        self.values[self.lattice.class_of(h)]
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    pub fn class_values(&self) -> &[ExtInt] {
        &self.values
    }

    /// Values keyed by the canonical name of each class representative.
    pub fn to_map(&self) -> BTreeMap<String, ExtInt> {
        (0..self.values.len())
            .map(|c| (self.lattice.name(self.lattice.class_rep(c)), self.values[c]))
            .collect()
    }

    /// Reads one value per class; any member of a class may name it.
    pub fn from_map(
        lattice: Arc<SubgroupLattice>,
        map: &BTreeMap<String, ExtInt>,
    ) -> Result<ConnFunction, BoundsError> {
        let mut values: Vec<Option<ExtInt>> = vec![None; lattice.class_count()];
        for (name, &v) in map {
            let h = lattice
                .lookup(name)
                .ok_or_else(|| BoundsError::UnknownSubgroup(name.clone()))?;
            let c = lattice.class_of(h);
            if values[c].is_some_and(|old| old != v) {
                return Err(BoundsError::NotConjugationInvariant {
                    what: "conn function",
                    subset: Vec::new(),
                    subgroup: name.clone(),
                });
            }
            values[c] = Some(v);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(c, v)| {
                v.ok_or_else(|| BoundsError::MissingEntry(lattice.name(lattice.class_rep(c))))
            })
            .collect::<Result<_, _>>()?;
        Ok(ConnFunction { lattice, values })
    }
}

impl Serialize for ConnFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_map().serialize(s)
    }
}

/// One `(U, L)` entry of subset-indexed data, as read from JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetEntry {
    pub subset: u64,
    pub subgroup: String,
    pub value: ExtInt,
}

/// Values indexed by a subset `U ⊆ J` and a subgroup `L ≤ G_U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetTable {
    values: BTreeMap<(u64, usize), ExtInt>,
}

fn subset_keys(j: &GSet, lattice: &SubgroupLattice, include_empty: bool) -> Vec<(u64, usize)> {
    let start = if include_empty { 0 } else { 1 };
    (start..=j.full_mask())
        .flat_map(|u| {
            lattice
                .subgroups_of(j.stabilizer_index(lattice, u))
                .map(move |l| (u, l))
                .collect::<Vec<_>>()
        })
        .collect()
}

impl SubsetTable {
    pub fn from_fn(
        j: &GSet,
        lattice: &SubgroupLattice,
        include_empty: bool,
        mut f: impl FnMut(u64, usize) -> Result<ExtInt, BoundsError>,
    ) -> Result<SubsetTable, BoundsError> {
        let values = subset_keys(j, lattice, include_empty)
            .into_iter()
            .map(|k| Ok((k, f(k.0, k.1)?)))
            .collect::<Result<_, BoundsError>>()?;
        Ok(SubsetTable { values })
    }

    /// Entries are spread over conjugates `(gU, gLg⁻¹)`; every key must end
    /// up with exactly one value.
    pub fn from_entries(
        j: &GSet,
        lattice: &SubgroupLattice,
        include_empty: bool,
        entries: &[SubsetEntry],
        what: &'static str,
    ) -> Result<SubsetTable, BoundsError> {
        let mut values = BTreeMap::new();
        for e in entries {
            let l = lattice
                .lookup(&e.subgroup)
                .ok_or_else(|| BoundsError::UnknownSubgroup(e.subgroup.clone()))?;
            for g in j.group().elements() {
                let key = (j.act_mask(g, e.subset), lattice.conjugate(l, g));
                if values
                    .insert(key, e.value)
                    .is_some_and(|old| old != e.value)
                {
                    return Err(BoundsError::NotConjugationInvariant {
                        what,
                        subset: j.subset_names(key.0),
                        subgroup: lattice.name(key.1),
                    });
                }
            }
        }
        for (u, l) in subset_keys(j, lattice, include_empty) {
            if !values.contains_key(&(u, l)) {
                return Err(BoundsError::MissingEntry(format!(
                    "{what} at {:?}, {}",
                    j.subset_names(u),
                    lattice.name(l)
                )));
            }
        }
        Ok(SubsetTable { values })
    }

    pub fn get(&self, u: u64, l: usize) -> Result<ExtInt, BoundsError> {
        self.values
            .get(&(u, l))
            .copied()
            .ok_or_else(|| BoundsError::MissingEntry(format!("subset {u:#x}, subgroup #{l}")))
    }

    pub fn set(&mut self, u: u64, l: usize, v: ExtInt) {
        self.values.insert((u, l), v);
    }

    pub fn keys(&self) -> impl Iterator<Item = (u64, usize)> + '_ {
        self.values.keys().copied()
    }

    pub fn to_entries(&self, lattice: &SubgroupLattice) -> Vec<SubsetEntry> {
        self.values
            .iter()
            .map(|(&(u, l), &value)| SubsetEntry {
                subset: u,
                subgroup: lattice.name(l),
                value,
            })
            .collect()
    }

    pub fn check_conjugation(
        &self,
        j: &GSet,
        lattice: &SubgroupLattice,
        what: &'static str,
    ) -> Result<(), BoundsError> {
        for (&(u, l), &v) in &self.values {
            for g in j.group().elements() {
                if self.get(j.act_mask(g, u), lattice.conjugate(l, g))? != v {
                    return Err(BoundsError::NotConjugationInvariant {
                        what,
                        subset: j.subset_names(u),
                        subgroup: lattice.name(l),
                    });
                }
            }
        }
        Ok(())
    }

    /// `U ⊆ V`, both `L`-invariant, implies `value(U, L) ≤ value(V, L)`.
    pub fn check_monotone(&self, j: &GSet, lattice: &SubgroupLattice) -> Result<(), BoundsError> {
        for (&(u, l), &vu) in &self.values {
            if u == 0 {
                continue;
            }
            let lm = lattice.get(l).mask();
            let rest = j.full_mask() & !u;
            let mut extra = rest;
            while extra != 0 {
                let v = u | extra;
                if j.is_invariant(v, lm) {
                    if let Some(&vv) = self.values.get(&(v, l)) {
                        if vu > vv {
                            return Err(BoundsError::MonotonicityViolation {
                                smaller: j.subset_names(u),
                                larger: j.subset_names(v),
                                subgroup: lattice.name(l),
                            });
                        }
                    }
                }
                extra = (extra - 1) & rest;
            }
        }
        Ok(())
    }
}

/// `ν^U(L)`: cocartesianity (or, for the dual bound, cartesianity) of the
/// subcubes, for nonempty `U ⊆ J` and `L ≤ G_U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocartData(pub SubsetTable);

/// `conn X_U^L` for every `U ⊆ J` and `L ≤ G_U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexConn(pub SubsetTable);

impl CocartData {
    pub fn from_fn(
        j: &GSet,
        lattice: &SubgroupLattice,
        f: impl FnMut(u64, usize) -> Result<ExtInt, BoundsError>,
    ) -> Result<CocartData, BoundsError> {
        Ok(CocartData(SubsetTable::from_fn(j, lattice, false, f)?))
    }

    pub fn from_entries(
        j: &GSet,
        lattice: &SubgroupLattice,
        entries: &[SubsetEntry],
    ) -> Result<CocartData, BoundsError> {
        Ok(CocartData(SubsetTable::from_entries(
            j,
            lattice,
            false,
            entries,
            "cocartesianity data",
        )?))
    }
}

impl VertexConn {
    pub fn from_fn(
        j: &GSet,
        lattice: &SubgroupLattice,
        f: impl FnMut(u64, usize) -> Result<ExtInt, BoundsError>,
    ) -> Result<VertexConn, BoundsError> {
        Ok(VertexConn(SubsetTable::from_fn(j, lattice, true, f)?))
    }

    pub fn from_entries(
        j: &GSet,
        lattice: &SubgroupLattice,
        entries: &[SubsetEntry],
    ) -> Result<VertexConn, BoundsError> {
        Ok(VertexConn(SubsetTable::from_entries(
            j,
            lattice,
            true,
            entries,
            "vertex connectivity",
        )?))
    }
}

/// What realized a minimum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Partition(Vec<Vec<String>>),
    Effective {
        subset: Vec<String>,
        subgroup: String,
    },
    Subgroup(String),
}

/// The value at one conjugacy class with the terms it is the minimum of.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTerms {
    pub class: String,
    pub value: ExtInt,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first: Option<ExtInt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second: Option<ExtInt>,
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub nu: ConnFunction,
    pub terms: Vec<ClassTerms>,
    pub flags: Vec<String>,
}

impl BoundReport {
    fn assemble(
        lattice: &Arc<SubgroupLattice>,
        mut per_class: impl FnMut(usize) -> Result<ClassTerms, BoundsError>,
    ) -> Result<BoundReport, BoundsError> {
        let terms = (0..lattice.class_count())
            .map(|c| per_class(lattice.class_rep(c)))
            .collect::<Result<Vec<_>, _>>()?;
        let nu = ConnFunction {
            lattice: lattice.clone(),
            values: terms.iter().map(|t| t.value).collect(),
        };
        Ok(BoundReport {
            nu,
            terms,
            flags: Vec::new(),
        })
    }
}

/// Running minimum that remembers the first argument attaining it.
struct ArgMin<W> {
    value: ExtInt,
    witness: Option<W>,
}

impl<W> ArgMin<W> {
    fn new() -> Self {
        ArgMin {
            value: ExtInt::PosInf,
            witness: None,
        }
    }

    fn offer(&mut self, v: ExtInt, w: impl FnOnce() -> W) {
        if v < self.value {
            self.value = v;
            self.witness = Some(w());
        }
    }
}

fn check_groups(j: &GSet, lattice: &SubgroupLattice) -> Result<(), BoundsError> {
    if j.group() != lattice.group() {
        return Err(BoundsError::GroupMismatch);
    }
    Ok(())
}

fn names_of(j: &GSet, blocks: &[u64]) -> Vec<Vec<String>> {
    blocks.iter().map(|&b| j.subset_names(b)).collect()
}

/// `min_{L ∈ Eff_H(U)} conn X_U^L − |U/L| + 1` with its argument.
fn effective_term(
    j: &GSet,
    lattice: &SubgroupLattice,
    vc: &VertexConn,
    u: u64,
    h: usize,
) -> Result<ArgMin<usize>, BoundsError> {
    let mut best = ArgMin::new();
    for l in j.eff_subgroups(lattice, u, h)? {
        let v = vc.0.get(u, l)?.offset(1 - orbit_count(j, u, lattice, l))?;
        best.offer(v, || l);
    }
    Ok(best)
}

/// Both terms of the Blakers–Massey range at the subgroup `h`.
pub fn bm_terms(
    j: &GSet,
    lattice: &SubgroupLattice,
    nu: &CocartData,
    vc: &VertexConn,
    h: usize,
) -> Result<ClassTerms, BoundsError> {
    let hs = lattice.get(h);
    let n = orbit_count(j, j.full_mask(), lattice, h);
    let mut first = ArgMin::new();
    for p in j.invariant_partitions(&hs)? {
        let s = ExtInt::sum(
            p.iter()
                .map(|&t| nu.0.get(t, h))
                .collect::<Result<Vec<_>, _>>()?,
        )?;
        first.offer(s.offset(1 - n)?, || p.clone());
    }
    let mut second = ArgMin::new();
    for u in 1..=j.full_mask() {
        let e = effective_term(j, lattice, vc, u, h)?;
        if let Some(l) = e.witness {
            second.offer(e.value, || (u, l));
        }
    }
    let mut witnesses = Vec::new();
    let value = first.value.min(second.value);
    if let Some(p) = first.witness.filter(|_| first.value == value) {
        witnesses.push(Witness::Partition(names_of(j, &p)));
    }
    if let Some((u, l)) = second.witness.filter(|_| second.value == value) {
        witnesses.push(Witness::Effective {
            subset: j.subset_names(u),
            subgroup: lattice.name(l),
        });
    }
    Ok(ClassTerms {
        class: lattice.name(h),
        value,
        first: Some(first.value),
        second: Some(second.value),
        witnesses,
    })
}

/// The equivariant Blakers–Massey range `ν(H)` for a cube on `P(J)`.
pub fn bm_bound(
    j: &GSet,
    lattice: &Arc<SubgroupLattice>,
    nu: &CocartData,
    vc: &VertexConn,
) -> Result<BoundReport, BoundsError> {
    check_groups(j, lattice)?;
    nu.0.check_monotone(j, lattice)?;
    BoundReport::assemble(lattice, |h| bm_terms(j, lattice, nu, vc, h))
}

/// The dual range at the subgroup `h`.
pub fn dual_bm_terms(
    j: &GSet,
    lattice: &SubgroupLattice,
    nu: &CocartData,
    vc: &VertexConn,
    h: usize,
) -> Result<ClassTerms, BoundsError> {
    let hs = lattice.get(h);
    let n = orbit_count(j, j.full_mask(), lattice, h);
    let eff: Vec<ExtInt> = (0..=j.full_mask())
        .map(|u| {
            if u == 0 {
                Ok(ExtInt::PosInf)
            } else {
                Ok(effective_term(j, lattice, vc, u, h)?.value)
            }
        })
        .collect::<Result<_, BoundsError>>()?;
    let mut best = ArgMin::new();
    for p in j.invariant_partitions(&hs)? {
        let mut parts = Vec::with_capacity(p.len());
        for &t in &p {
            let mut omega = nu.0.get(t, h)?;
            let mut s = t;
            while s != 0 {
                omega = omega.min(eff[s as usize]);
                s = (s - 1) & t;
            }
            parts.push(omega);
        }
        best.offer(ExtInt::sum(parts)?.offset(n - 1)?, || p.clone());
    }
    let witnesses = best
        .witness
        .map(|p| vec![Witness::Partition(names_of(j, &p))])
        .unwrap_or_default();
    Ok(ClassTerms {
        class: lattice.name(h),
        value: best.value,
        first: None,
        second: None,
        witnesses,
    })
}

/// The dual Blakers–Massey range from cartesianity data of the subcubes.
pub fn dual_bm_bound(
    j: &GSet,
    lattice: &Arc<SubgroupLattice>,
    nu_cart: &CocartData,
    vc: &VertexConn,
) -> Result<BoundReport, BoundsError> {
    check_groups(j, lattice)?;
    nu_cart.0.check_monotone(j, lattice)?;
    BoundReport::assemble(lattice, |h| dual_bm_terms(j, lattice, nu_cart, vc, h))
}

/// `min{2·conn X^G + 1, min_{|J/H| ≠ |J/G|} conn X^H}`.
pub fn suspension_closed_form(j: &GSet, conn_x: &ConnFunction) -> Result<ExtInt, BoundsError> {
    let lattice = conn_x.lattice();
    check_groups(j, lattice)?;
    let g = lattice.whole();
    let base = orbit_count(j, j.full_mask(), lattice, g);
    let mut out = conn_x.at(g).times(2)?.offset(1)?;
    for h in 0..lattice.len() {
        if orbit_count(j, j.full_mask(), lattice, h) != base {
            out = out.min(conn_x.at(h));
        }
    }
    Ok(out)
}

/// The cocartesianity data and vertex connectivities of the cube `σ^J X` on
/// `P(J_+)`, whose total fibre is the unit of the suspension adjunction.
pub fn suspension_cube(
    j: &GSet,
    conn_x: &ConnFunction,
) -> Result<(GSet, CocartData, VertexConn), BoundsError> {
    let lattice = conn_x.lattice();
    let jp = j.with_basepoint();
    let full = jp.full_mask();
    let inner = j.full_mask();
    let nu = CocartData::from_fn(&jp, lattice, |u, l| {
        if u == full {
            Ok(ExtInt::PosInf)
        } else {
            Ok(conn_x.at(l).offset(orbit_count(&jp, u, lattice, l))?)
        }
    })?;
    let vc = VertexConn::from_fn(&jp, lattice, |u, l| {
        Ok(if u == 0 {
            conn_x.at(l)
        } else if u == full {
            conn_x.at(l).offset(orbit_count(j, inner, lattice, l))?
        } else {
            ExtInt::PosInf
        })
    })?;
    Ok((jp, nu, vc))
}

/// The suspension range obtained by running the Blakers–Massey bound on
/// `σ^J X`. Negative connectivities are computed but flagged.
pub fn suspension_via_bm(j: &GSet, conn_x: &ConnFunction) -> Result<BoundReport, BoundsError> {
    let lattice = conn_x.lattice();
    check_groups(j, lattice)?;
    let (jp, nu, vc) = suspension_cube(j, conn_x)?;
    let mut report = bm_bound(&jp, lattice, &nu, &vc)?;
    if conn_x.class_values().iter().any(|&v| v < 0) {
        report.flags.push("negative_connectivity".to_string());
    }
    Ok(report)
}

/// `d_j(L)` for every point `j` and subgroup `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointData {
    values: Vec<Vec<ExtInt>>,
}

impl PointData {
    pub fn from_fn(
        j: &GSet,
        lattice: &SubgroupLattice,
        mut f: impl FnMut(usize, usize) -> ExtInt,
    ) -> Result<PointData, BoundsError> {
        let values: Vec<Vec<ExtInt>> = (0..j.len())
            .map(|p| (0..lattice.len()).map(|l| f(p, l)).collect())
            .collect();
        let d = PointData { values };
        d.check_conjugation(j, lattice)?;
        Ok(d)
    }

    pub fn zero(j: &GSet, lattice: &SubgroupLattice) -> PointData {
        PointData {
            values: vec![vec![ExtInt::Fin(0); lattice.len()]; j.len()],
        }
    }

    pub fn get(&self, point: usize, l: usize) -> ExtInt {
        self.values[point][l]
    }

    /// `d_{gj}(gLg⁻¹) = d_j(L)`.
    pub fn check_conjugation(
        &self,
        j: &GSet,
        lattice: &SubgroupLattice,
    ) -> Result<(), BoundsError> {
        for p in 0..j.len() {
            for l in 0..lattice.len() {
                for g in j.group().elements() {
                    if self.values[j.act(g, p)][lattice.conjugate(l, g)] != self.values[p][l] {
                        return Err(BoundsError::NotConjugationInvariant {
                            what: "submanifold dimensions",
                            subset: vec![j.points()[p].clone()],
                            subgroup: lattice.name(l),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// `min over proper L < H with |J/L| ≠ |J/H| of term(L) − |J/L|`.
fn proper_term(
    j: &GSet,
    lattice: &SubgroupLattice,
    h: usize,
    mut term: impl FnMut(usize) -> Result<ExtInt, BoundsError>,
) -> Result<ArgMin<usize>, BoundsError> {
    let base = orbit_count(j, j.full_mask(), lattice, h);
    let mut best = ArgMin::new();
    for l in lattice.subgroups_of(h).filter(|&l| l != h) {
        let n = orbit_count(j, j.full_mask(), lattice, l);
        if n != base {
            best.offer(term(l)?.offset(-n)?, || l);
        }
    }
    Ok(best)
}

fn two_term(
    lattice: &SubgroupLattice,
    h: usize,
    first: ExtInt,
    second: ArgMin<usize>,
) -> ClassTerms {
    let value = first.min(second.value);
    let witnesses = match second.witness {
        Some(l) if second.value == value => vec![Witness::Subgroup(lattice.name(l))],
        _ => Vec::new(),
    };
    ClassTerms {
        class: lattice.name(h),
        value,
        first: Some(first),
        second: Some(second.value),
        witnesses,
    }
}

/// Cartesianity range of the cube of complements `M \ ∪_{u∈U} P_u`.
pub fn submanifold_bound(
    j: &GSet,
    m: &ConnFunction,
    d: &PointData,
    conn_m: &ConnFunction,
) -> Result<BoundReport, BoundsError> {
    let lattice = m.lattice().clone();
    check_groups(j, &lattice)?;
    d.check_conjugation(j, &lattice)?;
    for l in 0..lattice.len() {
        for p in 0..j.len() {
            if d.get(p, l) > m.at(l) {
                return Err(BoundsError::DimensionMismatch {
                    point: j.points()[p].clone(),
                    subgroup: lattice.name(l),
                });
            }
        }
    }
    BoundReport::assemble(&lattice, |h| {
        let n = orbit_count(j, j.full_mask(), &lattice, h);
        let codims = (0..j.len())
            .map(|p| m.at(h).checked_sub(d.get(p, h)))
            .collect::<Result<Vec<_>, _>>()?;
        let first = ExtInt::sum(codims)?.offset(1 - 2 * n)?;
        let second = proper_term(j, &lattice, h, |l| {
            let dmax = ExtInt::max_of((0..j.len()).map(|p| d.get(p, l)));
            Ok(conn_m.at(l).offset(1)?.min(m.at(l).checked_sub(dmax)?))
        })?;
        Ok(two_term(&lattice, h, first, second))
    })
}

/// Cartesianity range of the cube of configuration spaces.
pub fn configuration_bound(
    j: &GSet,
    m: &ConnFunction,
    conn_m: &ConnFunction,
) -> Result<BoundReport, BoundsError> {
    let lattice = m.lattice().clone();
    check_groups(j, &lattice)?;
    BoundReport::assemble(&lattice, |h| {
        let n = orbit_count(j, j.full_mask(), &lattice, h);
        let first = m.at(h).times(j.len())?.offset(1 - 2 * n)?;
        let second = proper_term(j, &lattice, h, |l| Ok(conn_m.at(l).offset(1)?.min(m.at(l))))?;
        Ok(two_term(&lattice, h, first, second))
    })
}

/// Values indexed by an object `i` and a subgroup `H ≤ G_i` (lattice index).
pub type ObjectData = BTreeMap<(usize, usize), ExtInt>;

/// A minimum over pairs `(i, H)` with the pair attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairBound {
    pub value: ExtInt,
    pub witness: Option<(String, String)>,
    pub flags: Vec<String>,
}

fn isotropy_pairs(a: &GAction, lattice: &SubgroupLattice) -> Vec<(usize, usize)> {
    (0..a.cat().object_count())
        .flat_map(|i| {
            let gi = a.isotropy(i);
            (0..lattice.len())
                .filter(move |&h| lattice.get(h).mask() & !gi == 0)
                .map(move |h| (i, h))
        })
        .collect()
}

fn lookup(
    data: &ObjectData,
    a: &GAction,
    lattice: &SubgroupLattice,
    key: (usize, usize),
    what: &str,
) -> Result<ExtInt, BoundsError> {
    data.get(&key).copied().ok_or_else(|| {
        BoundsError::MissingEntry(format!(
            "{what} at ({}, {})",
            a.cat().object_name(key.0),
            lattice.name(key.1)
        ))
    })
}

fn pair_min(
    a: &GAction,
    lattice: &SubgroupLattice,
    pairs: impl IntoIterator<Item = ((usize, usize), ExtInt)>,
) -> PairBound {
    let mut best = ArgMin::new();
    for ((i, h), v) in pairs {
        best.offer(v, || (a.cat().object_name(i).to_string(), lattice.name(h)));
    }
    PairBound {
        value: best.value,
        witness: best.witness,
        flags: Vec::new(),
    }
}

/// `dim N((I/i)^H)` for every object `i` and `H ≤ G_i`.
pub fn holim_dims(a: &GAction, lattice: &SubgroupLattice) -> Result<ObjectData, BoundsError> {
    let c = a.cat();
    if !c.is_loop_free() {
        return Err(BoundsError::NotFiniteDimensional);
    }
    let id = Functor::identity(c);
    let mut out = ObjectData::new();
    for (i, h) in isotropy_pairs(a, lattice) {
        let over = over_category(&id, i)
            .map_err(|_| BoundsError::MissingEntry(c.object_name(i).to_string()))?;
        let hm = lattice.get(h).mask();
        let keep_o: Vec<bool> = over
            .objs
            .iter()
            .map(|&(_, alpha)| a.fixes_morphism(hm, alpha))
            .collect();
        let keep_m: Vec<bool> = over
            .mors
            .iter()
            .map(|&(s, _, u)| keep_o[s] && a.fixes_morphism(hm, u))
            .collect();
        let (sub, _, _) = over
            .cat
            .subcategory(&keep_o, &keep_m)
            .expect("fixed slices are subcategories");
        let dim = nerve_dimension(&sub).map_err(|_| BoundsError::NotFiniteDimensional)?;
        out.insert((i, h), ExtInt::Fin(dim as i64));
    }
    Ok(out)
}

/// `min_{i, H ≤ G_i} conn X_i^H − dim N((I/i)^H)`.
pub fn holim_connectivity_bound(
    a: &GAction,
    lattice: &SubgroupLattice,
    dims: &ObjectData,
    conn_x: &ObjectData,
) -> Result<PairBound, BoundsError> {
    let pairs = isotropy_pairs(a, lattice)
        .into_iter()
        .map(|k| {
            Ok((
                k,
                lookup(conn_x, a, lattice, k, "conn")?
                    .checked_sub(lookup(dims, a, lattice, k, "dim")?)?,
            ))
        })
        .collect::<Result<Vec<_>, BoundsError>>()?;
    Ok(pair_min(a, lattice, pairs))
}

/// Connectivity of the restriction `holim_I X → holim_{I^G} X`: the minimum
/// of `conn X_i^H − dim N(I^H/i) + 1` over the pairs where `ι^H/i` misses
/// morphisms of `I^H/i`, `ι^H: I^G → I^H` the inclusion.
pub fn restriction_connectivity_bound(
    a: &GAction,
    lattice: &SubgroupLattice,
    conn_x: &ObjectData,
) -> Result<PairBound, BoundsError> {
    if !a.cat().is_loop_free() {
        return Err(BoundsError::NotFiniteDimensional);
    }
    let fixed: Vec<FixedCat> = (0..lattice.len())
        .map(|h| fixed_category(a, &lattice.get(h)))
        .collect();
    let ig = &fixed[lattice.whole()];
    if ig.cat.object_count() == 0 {
        let mut b = PairBound {
            value: ExtInt::PosInf,
            witness: None,
            flags: Vec::new(),
        };
        b.flags.push("empty_fixed_category".to_string());
        return Ok(b);
    }
    let mut pairs = Vec::new();
    for (i, h) in isotropy_pairs(a, lattice) {
        let ih = &fixed[h];
        let ii = ih.object_of(i).expect("i is fixed by H ≤ G_i");
        let iota = Functor::new_unchecked(
            ig.cat.clone(),
            ih.cat.clone(),
            ig.obj
                .iter()
                .map(|&o| ih.object_of(o).expect("G-fixed objects are H-fixed"))
                .collect(),
            ig.mor
                .iter()
                .map(|&m| ih.morphism_of(m).expect("G-fixed morphisms are H-fixed"))
                .collect(),
        );
        let whole = over_category(&Functor::identity(&ih.cat), ii)?;
        let part = over_category(&iota, ii)?;
        if part.cat.morphism_count() < whole.cat.morphism_count() {
            let dim = nerve_dimension(&whole.cat).map_err(|_| BoundsError::NotFiniteDimensional)?;
            let v = lookup(conn_x, a, lattice, (i, h), "conn")?.offset(1 - dim as i64)?;
            pairs.push(((i, h), v));
        }
    }
    Ok(pair_min(a, lattice, pairs))
}

/// One `(i, H)` entry for the mapping-space bound: `dim K_i^H` (or the
/// statement that `K_i^H` is a point) and `conn X_i^H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapSpaceEntry {
    pub object: String,
    pub subgroup: String,
    #[serde(default)]
    pub point: bool,
    #[serde(default)]
    pub dim_k: Option<ExtInt>,
    #[serde(default)]
    pub conn_x: Option<ExtInt>,
}

/// `min over (i, H) with K_i^H not a point of conn X_i^H − dim K_i^H`.
pub fn mapping_space_connectivity_bound(
    entries: &[MapSpaceEntry],
) -> Result<PairBound, BoundsError> {
    let mut best = ArgMin::new();
    for e in entries.iter().filter(|e| !e.point) {
        let missing = || BoundsError::MissingEntry(format!("({}, {})", e.object, e.subgroup));
        let v = e
            .conn_x
            .ok_or_else(missing)?
            .checked_sub(e.dim_k.ok_or_else(missing)?)?;
        best.offer(v, || (e.object.clone(), e.subgroup.clone()));
    }
    Ok(PairBound {
        value: best.value,
        witness: best.witness,
        flags: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::FinCat;
    use crate::groups::Group;

    fn fin(v: i64) -> ExtInt {
        ExtInt::Fin(v)
    }

    fn lattice_of(g: &Group) -> Arc<SubgroupLattice> {
        Arc::new(SubgroupLattice::new(g).unwrap())
    }

    /// All set partitions of the given points, built by inserting one point
    /// at a time into an existing block or a new one.
    fn partitions(points: &[usize]) -> Vec<Vec<Vec<usize>>> {
        match points.split_first() {
            None => vec![Vec::new()],
            Some((&p, rest)) => {
                let mut out = Vec::new();
                for part in partitions(rest) {
                    for k in 0..part.len() {
                        let mut q = part.clone();
                        q[k].push(p);
                        out.push(q);
                    }
                    let mut q = part.clone();
                    q.push(vec![p]);
                    out.push(q);
                }
                out
            }
        }
    }

    #[test]
    fn two_point_trivial_bm() {
        let g = Group::trivial();
        let l = lattice_of(&g);
        let j = GSet::trivial(&g, 2);
        let nu = CocartData::from_fn(&j, &l, |u, _| Ok(fin([0, 1, 2, 5][u as usize]))).unwrap();
        let vc = VertexConn::from_fn(&j, &l, |_, _| Ok(fin(0))).unwrap();
        let r = bm_bound(&j, &l, &nu, &vc).unwrap();
        assert_eq!(r.nu.at(l.trivial()), fin(2));
        assert_eq!(r.terms[0].second, Some(ExtInt::PosInf));
    }

    #[test]
    fn one_point_bm_and_dual_return_the_input() {
        let g = Group::cyclic(3);
        let l = lattice_of(&g);
        let j = GSet::trivial(&g, 1);
        let nu = CocartData::from_fn(&j, &l, |_, h| Ok(fin(3 + h as i64 % 2))).unwrap();
        let vc = VertexConn::from_fn(&j, &l, |_, _| Ok(fin(0))).unwrap();
        let r = bm_bound(&j, &l, &nu, &vc).unwrap();
        let d = dual_bm_bound(&j, &l, &nu, &vc).unwrap();
        for h in 0..l.len() {
            assert_eq!(r.nu.at(h), nu.0.get(1, h).unwrap());
            assert_eq!(d.nu.at(h), nu.0.get(1, h).unwrap());
        }
    }

    #[test]
    fn two_point_trivial_dual() {
        let g = Group::trivial();
        let l = lattice_of(&g);
        let j = GSet::trivial(&g, 2);
        for (a, b, c) in [(1, 2, 5), (0, 0, 7), (3, 4, 5)] {
            let nu = CocartData::from_fn(&j, &l, |u, _| Ok(fin([0, a, b, c][u as usize]))).unwrap();
            let vc = VertexConn::from_fn(&j, &l, |_, _| Ok(fin(0))).unwrap();
            let r = dual_bm_bound(&j, &l, &nu, &vc).unwrap();
            assert_eq!(r.nu.at(0), fin((1 + c).min(1 + a + b)));
        }
    }

    #[test]
    fn classical_range_matches_partition_enumeration() {
        let g = Group::trivial();
        let l = lattice_of(&g);
        for n in [2usize, 3] {
            let j = GSet::trivial(&g, n);
            let points: Vec<usize> = (0..n).collect();
            for seed in 0..20i64 {
                let val = |u: u64| fin((u as i64 * 7 + seed * 3) % 5 + u.count_ones() as i64);
                let nu = CocartData::from_fn(&j, &l, |u, _| Ok(val(u))).unwrap();
                let vc = VertexConn::from_fn(&j, &l, |_, _| Ok(fin(0))).unwrap();
                if nu.0.check_monotone(&j, &l).is_err() {
                    continue;
                }
                let expected = partitions(&points)
                    .iter()
                    .map(|p| {
                        p.iter()
                            .map(|b| val(b.iter().map(|&x| 1u64 << x).sum()))
                            .fold(fin(0), |s, v| s.checked_add(v).unwrap())
                    })
                    .min()
                    .unwrap()
                    .offset(1 - n as i64)
                    .unwrap();
                assert_eq!(bm_bound(&j, &l, &nu, &vc).unwrap().nu.at(0), expected);
            }
        }
    }

    #[test]
    fn monotonicity_is_enforced() {
        let g = Group::trivial();
        let l = lattice_of(&g);
        let j = GSet::trivial(&g, 2);
        let nu = CocartData::from_fn(&j, &l, |u, _| Ok(fin([0, 4, 1, 2][u as usize]))).unwrap();
        let vc = VertexConn::from_fn(&j, &l, |_, _| Ok(fin(0))).unwrap();
        assert!(matches!(
            bm_bound(&j, &l, &nu, &vc),
            Err(BoundsError::MonotonicityViolation { .. })
        ));
    }

    #[test]
    fn suspension_of_regular_z2() {
        let g = Group::cyclic(2);
        let l = lattice_of(&g);
        let j = GSet::regular(&g);
        let conn =
            ConnFunction::from_fn(l.clone(), |h| if h == l.whole() { fin(0) } else { fin(1) });
        assert_eq!(suspension_closed_form(&j, &conn).unwrap(), fin(1));
        let r = suspension_via_bm(&j, &conn).unwrap();
        assert_eq!(r.nu.at(l.whole()), fin(1));
        assert!(r.flags.is_empty());
    }

    #[test]
    fn suspension_with_trivial_action_is_freudenthal() {
        for g in [Group::trivial(), Group::cyclic(2)] {
            let l = lattice_of(&g);
            let j = GSet::trivial(&g, 1);
            let conn = ConnFunction::from_fn(l.clone(), |h| fin(2 + h as i64));
            let top = conn.at(l.whole());
            let expected = top.times(2).unwrap().offset(1).unwrap();
            assert_eq!(suspension_closed_form(&j, &conn).unwrap(), expected);
            assert_eq!(
                suspension_via_bm(&j, &conn).unwrap().nu.at(l.whole()),
                expected
            );
        }
    }

    #[test]
    fn negative_connectivity_is_flagged() {
        let g = Group::cyclic(2);
        let l = lattice_of(&g);
        let conn = ConnFunction::constant(l.clone(), fin(-1));
        let r = suspension_via_bm(&GSet::regular(&g), &conn).unwrap();
        assert_eq!(r.flags, vec!["negative_connectivity".to_string()]);
    }

    #[test]
    fn configuration_sharp_example() {
        let g = Group::cyclic(2);
        let l = lattice_of(&g);
        let j = GSet::regular(&g);
        let m = ConnFunction::from_fn(l.clone(), |h| if h == l.whole() { fin(1) } else { fin(2) });
        let conn_m = ConnFunction::constant(l.clone(), fin(0));
        let r = configuration_bound(&j, &m, &conn_m).unwrap();
        assert_eq!(r.nu.at(l.whole()), fin(-1));
        assert_eq!(r.nu.at(l.trivial()), fin(1));
        let s = submanifold_bound(&j, &m, &PointData::zero(&j, &l), &conn_m).unwrap();
        assert_eq!(s, r);
    }

    #[test]
    fn submanifold_trivial_example() {
        let g = Group::trivial();
        let l = lattice_of(&g);
        let j = GSet::trivial(&g, 2);
        let m = ConnFunction::constant(l.clone(), fin(3));
        let d = PointData::from_fn(&j, &l, |_, _| fin(1)).unwrap();
        let r = submanifold_bound(&j, &m, &d, &ConnFunction::constant(l.clone(), fin(2))).unwrap();
        assert_eq!(r.nu.at(0), fin(1));
        let too_big = PointData::from_fn(&j, &l, |_, _| fin(4)).unwrap();
        assert!(matches!(
            submanifold_bound(&j, &m, &too_big, &ConnFunction::constant(l, fin(2))),
            Err(BoundsError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bm_is_constant_on_conjugates_in_s3() {
        let g = Group::symmetric(3);
        let l = lattice_of(&g);
        let j = GSet::regular(&g);
        let nu = CocartData::from_fn(&j, &l, |u, h| {
            Ok(fin(u.count_ones() as i64 + l.get(h).order() as i64 % 3))
        })
        .unwrap();
        let vc = VertexConn::from_fn(&j, &l, |u, h| {
            Ok(fin(u.count_ones() as i64 * 2 - l.get(h).order() as i64))
        })
        .unwrap();
        for h in 0..l.len() {
            for x in g.elements() {
                let c = l.conjugate(h, x);
                assert_eq!(
                    bm_terms(&j, &l, &nu, &vc, h).unwrap().value,
                    bm_terms(&j, &l, &nu, &vc, c).unwrap().value
                );
                assert_eq!(
                    dual_bm_terms(&j, &l, &nu, &vc, h).unwrap().value,
                    dual_bm_terms(&j, &l, &nu, &vc, c).unwrap().value
                );
            }
        }
    }

    fn nonempty_subsets(j: &GSet) -> GAction {
        let masks: Vec<u64> = (1..=j.full_mask()).collect();
        let names: Vec<String> = masks
            .iter()
            .map(|&m| crate::fincat::subset_name(m))
            .collect();
        let cat = Arc::new(FinCat::poset(&names, |a, b| masks[a] & !masks[b] == 0).unwrap());
        GAction::on_poset_of_masks(j, cat, masks)
    }

    #[test]
    fn holim_and_mapping_space_agree_on_punctured_square() {
        let g = Group::trivial();
        let l = lattice_of(&g);
        let a = nonempty_subsets(&GSet::trivial(&g, 2));
        let dims = holim_dims(&a, &l).unwrap();
        let conn: ObjectData = dims.keys().map(|&k| (k, fin(5))).collect();
        let h = holim_connectivity_bound(&a, &l, &dims, &conn).unwrap();
        assert_eq!(h.value, fin(4));
        let entries: Vec<MapSpaceEntry> = dims
            .iter()
            .map(|(&(i, s), &d)| MapSpaceEntry {
                object: a.cat().object_name(i).to_string(),
                subgroup: l.name(s),
                point: false,
                dim_k: Some(d),
                conn_x: Some(fin(5)),
            })
            .collect();
        assert_eq!(
            mapping_space_connectivity_bound(&entries).unwrap().value,
            fin(4)
        );
        let inf: ObjectData = dims.keys().map(|&k| (k, ExtInt::PosInf)).collect();
        assert_eq!(
            holim_connectivity_bound(&a, &l, &dims, &inf).unwrap().value,
            ExtInt::PosInf
        );
    }

    #[test]
    fn holim_of_terminal_is_conn() {
        let g = Group::trivial();
        let l = lattice_of(&g);
        let a = GAction::trivial(Arc::new(g), Arc::new(FinCat::terminal()));
        let dims = holim_dims(&a, &l).unwrap();
        let conn: ObjectData = [((0, 0), fin(3))].into();
        assert_eq!(
            holim_connectivity_bound(&a, &l, &dims, &conn)
                .unwrap()
                .value,
            fin(3)
        );
        assert!(matches!(
            holim_connectivity_bound(&a, &l, &dims, &ObjectData::new()),
            Err(BoundsError::MissingEntry(_))
        ));
    }

    #[test]
    fn mapping_space_points_are_ignored() {
        let point = MapSpaceEntry {
            object: "i".into(),
            subgroup: "e".into(),
            point: true,
            dim_k: None,
            conn_x: None,
        };
        assert_eq!(
            mapping_space_connectivity_bound(std::slice::from_ref(&point))
                .unwrap()
                .value,
            ExtInt::PosInf
        );
        let one = MapSpaceEntry {
            point: false,
            dim_k: Some(fin(2)),
            conn_x: Some(fin(4)),
            ..point
        };
        assert_eq!(
            mapping_space_connectivity_bound(&[one]).unwrap().value,
            fin(2)
        );
    }

    #[test]
    fn restriction_bounds() {
        // trivial group: ι is the identity
        let g = Group::trivial();
        let l = lattice_of(&g);
        let a = nonempty_subsets(&GSet::trivial(&g, 2));
        let conn: ObjectData = (0..3).map(|i| ((i, 0), fin(0))).collect();
        assert_eq!(
            restriction_connectivity_bound(&a, &l, &conn).unwrap().value,
            ExtInt::PosInf
        );

        // Z/2 on nonempty subsets of the regular set plus a basepoint
        let g = Group::cyclic(2);
        let l = lattice_of(&g);
        let jp = GSet::regular(&g).with_basepoint();
        let a = nonempty_subsets(&jp);
        let top = a.cat().object_count() - 1;
        let c = 7;
        let conn: ObjectData = isotropy_pairs(&a, &l)
            .into_iter()
            .map(|(i, h)| {
                (
                    (i, h),
                    if i == top && h == l.trivial() {
                        fin(c)
                    } else {
                        ExtInt::PosInf
                    },
                )
            })
            .collect();
        let r = restriction_connectivity_bound(&a, &l, &conn).unwrap();
        assert_eq!(r.value, fin(c - 1));

        // free action on objects: no fixed objects
        let free = nonempty_subsets(&GSet::regular(&g));
        let keep: Vec<bool> = (0..free.cat().object_count())
            .map(|o| free.cat().object_name(o) != "{0,1}")
            .collect();
        let (sub, obj, _) = free.cat().full_subcategory(&keep);
        let masks: Vec<u64> = obj.iter().map(|&o| o as u64 + 1).collect();
        let b = GAction::on_poset_of_masks(&GSet::regular(&g), Arc::new(sub), masks);
        let r = restriction_connectivity_bound(&b, &l, &ObjectData::new()).unwrap();
        assert_eq!(
            (r.value, r.flags),
            (ExtInt::PosInf, vec!["empty_fixed_category".to_string()])
        );
    }
}
