//! Deterministic random instances for the property checks. Every generator
//! draws from a ChaCha stream, so a seed fixes the instance.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{BoundsError, CocartData, ConnFunction, PointData, SubsetTable, VertexConn};
use crate::equivariant::{GAction, GDiagram};
use crate::ext::ExtInt;
use crate::fincat::{subset_name, CatDiagram, FinCat, Functor};
use crate::groups::{Group, Subgroup, SubgroupLattice};
use crate::gsets::GSet;

/// The stream for instance `k` of a run seeded with `seed`.
pub fn instance_rng(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

/// Groups of order at most 6, by display name.
pub fn small_groups() -> Vec<(&'static str, Group)> {
    vec![
        ("Z/2", Group::cyclic(2)),
        ("Z/3", Group::cyclic(3)),
        ("Z/4", Group::cyclic(4)),
        ("Z/2xZ/2", Group::klein()),
        ("Z/5", Group::cyclic(5)),
        ("Z/6", Group::cyclic(6)),
        ("S3", Group::symmetric(3)),
    ]
}

/// A random poset on `n` objects whose index order is a linear extension.
pub fn random_poset(rng: &mut impl Rng, n: usize, density: f64) -> FinCat {
    let mut rel = vec![vec![false; n]; n];
    for (a, row) in rel.iter_mut().enumerate() {
        row[a] = true;
        for b in a + 1..n {
            row[b] = rng.gen_bool(density);
        }
    }
    for k in 0..n {
        for a in 0..n {
            for b in 0..n {
                if rel[a][k] && rel[k][b] {
                    rel[a][b] = true;
                }
            }
        }
    }
    let names: Vec<String> = (0..n).map(|k| format!("p{k}")).collect();
    FinCat::poset(&names, |a, b| rel[a][b])
        .expect("closure of an upper-triangular relation is a partial order")
}

/// A random order-preserving map between posets, falling back to a constant.
pub fn random_monotone(rng: &mut impl Rng, c: &Arc<FinCat>, d: &Arc<FinCat>) -> Functor {
    for _ in 0..20 {
        let mut obj: Vec<usize> = Vec::with_capacity(c.object_count());
        let mut ok = true;
        for x in 0..c.object_count() {
            let cands: Vec<usize> = (0..d.object_count())
                .filter(|&y| (0..x).all(|p| c.hom(p, x).is_empty() || !d.hom(obj[p], y).is_empty()))
                .collect();
            match cands.choose(rng) {
                Some(&y) => obj.push(y),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return poset_functor(c, d, obj);
        }
    }
    let y = rng.gen_range(0..d.object_count());
    Functor::constant(c, d, y)
}

/// The functor between posets determined by an order-preserving object map.
pub fn poset_functor(c: &Arc<FinCat>, d: &Arc<FinCat>, obj: Vec<usize>) -> Functor {
    let mor = (0..c.morphism_count())
        .map(|m| d.hom(obj[c.src(m)], obj[c.tgt(m)])[0])
        .collect();
    Functor::new(c.clone(), d.clone(), obj, mor).expect("order-preserving maps are functors")
}

/// A random G-set with at most `max_orbits` orbits and `max_points` points.
pub fn random_gset(
    rng: &mut impl Rng,
    group: &Group,
    max_orbits: usize,
    max_points: usize,
) -> GSet {
    let lattice = SubgroupLattice::new(group).expect("small group");
    let orbits = rng.gen_range(1..=max_orbits.max(1));
    let mut parts = Vec::new();
    let mut total = 0;
    for _ in 0..orbits {
        let fits: Vec<Subgroup> = lattice
            .subgroups()
            .iter()
            .filter(|k| total + group.order() / k.order() <= max_points)
            .cloned()
            .collect();
        let Some(k) = fits.choose(rng) else { break };
        total += group.order() / k.order();
        parts.push(GSet::transitive(group, k));
    }
    if parts.is_empty() {
        parts.push(GSet::trivial(group, 1));
    }
    GSet::disjoint_union(&parts)
}

fn random_ext(rng: &mut impl Rng, lo: i64, hi: i64, inf: f64) -> ExtInt {
    if inf > 0.0 && rng.gen_bool(inf) {
        ExtInt::PosInf
    } else {
        ExtInt::Fin(rng.gen_range(lo..=hi))
    }
}

pub fn random_conn(
    rng: &mut impl Rng,
    lattice: &Arc<SubgroupLattice>,
    lo: i64,
    hi: i64,
) -> ConnFunction {
    let values = (0..lattice.class_count())
        .map(|_| ExtInt::Fin(rng.gen_range(lo..=hi)))
        .collect();
    ConnFunction::new(lattice.clone(), values).expect("one value per class")
}

/// Conjugation-compatible values drawn once per orbit of keys `(U, L)`.
fn orbit_table(
    rng: &mut impl Rng,
    j: &GSet,
    lattice: &SubgroupLattice,
    include_empty: bool,
    (lo, hi, inf): (i64, i64, f64),
) -> SubsetTable {
    let mut table = SubsetTable::from_fn(j, lattice, include_empty, |_, _| Ok(ExtInt::NegInf))
        .expect("placeholder values");
    let keys: Vec<(u64, usize)> = table.keys().collect();
    let mut done = std::collections::BTreeSet::new();
    for (u, l) in keys {
        if done.contains(&(u, l)) {
            continue;
        }
        let v = random_ext(rng, lo, hi, inf);
        for g in j.group().elements() {
            let key = (j.act_mask(g, u), lattice.conjugate(l, g));
            table.set(key.0, key.1, v);
            done.insert(key);
        }
    }
    table
}

/// Monotone, conjugation-compatible data: raw orbit values, then for each
/// `(U, L)` the maximum over the `L`-invariant subsets of `U`.
pub fn random_cocart(
    rng: &mut impl Rng,
    j: &GSet,
    lattice: &SubgroupLattice,
    lo: i64,
    hi: i64,
    inf: f64,
) -> CocartData {
    let raw = orbit_table(rng, j, lattice, false, (lo, hi, inf));
    let data = CocartData::from_fn(j, lattice, |u, l| {
        let lm = lattice.get(l).mask();
        let mut best = ExtInt::NegInf;
        let mut s = u;
        while s != 0 {
            if j.is_invariant(s, lm) {
                best = best.max(raw.get(s, l)?);
            }
            s = (s - 1) & u;
        }
        Ok::<_, BoundsError>(best)
    })
    .expect("every invariant subset has a value");
    debug_assert!(data.0.check_monotone(j, lattice).is_ok());
    data
}

pub fn random_vertex_conn(
    rng: &mut impl Rng,
    j: &GSet,
    lattice: &SubgroupLattice,
    lo: i64,
    hi: i64,
    inf: f64,
) -> VertexConn {
    VertexConn(orbit_table(rng, j, lattice, true, (lo, hi, inf)))
}

/// Conjugation-compatible `d_j(L)` with values in `0..=hi`.
pub fn random_point_data(
    rng: &mut impl Rng,
    j: &GSet,
    lattice: &SubgroupLattice,
    hi: i64,
) -> PointData {
    let mut table = vec![vec![None; lattice.len()]; j.len()];
    for p in 0..j.len() {
        for l in 0..lattice.len() {
            if table[p][l].is_some() {
                continue;
            }
            let v = ExtInt::Fin(rng.gen_range(0..=hi));
            for g in j.group().elements() {
                table[j.act(g, p)][lattice.conjugate(l, g)] = Some(v);
            }
        }
    }
    PointData::from_fn(j, lattice, |p, l| table[p][l].expect("filled by orbits"))
        .expect("conjugation compatible by construction")
}

/// A G-invariant family of subsets of `j` with at most `max` members.
fn invariant_family(rng: &mut impl Rng, j: &GSet, max: usize, allow_empty: bool) -> Vec<u64> {
    let start = if allow_empty { 0 } else { 1 };
    let mut masks: Vec<u64> = (start..=j.full_mask()).collect();
    masks.shuffle(rng);
    let mut family: Vec<u64> = Vec::new();
    for m in masks {
        if family.contains(&m) {
            continue;
        }
        let mut orbit: Vec<u64> = j.group().elements().map(|g| j.act_mask(g, m)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        if family.len() + orbit.len() <= max && (family.is_empty() || rng.gen_bool(0.5)) {
            family.extend(orbit);
        }
    }
    family.sort_unstable();
    family
}

fn inclusion_poset(masks: &[u64]) -> FinCat {
    let names: Vec<String> = masks.iter().map(|&m| subset_name(m)).collect();
    FinCat::poset(&names, |a, b| masks[a] & !masks[b] == 0).expect("inclusion is a partial order")
}

/// Shape parameters for [`random_gdiagram`].
#[derive(Clone, Copy, Debug)]
pub struct DiagramShape {
    pub index_points: usize,
    pub max_index: usize,
    pub fibre_points: usize,
    pub max_vertex: usize,
}

/// A random G-diagram of posets over a G-invariant subposet `I` of `P(J)`.
///
/// With `h: J → P(K)` equivariant and `F` a G-invariant family of subsets
/// of `K`, the vertex at `U` is `{S ∪ h(U) | S ∈ F}` ordered by inclusion,
/// `h(U) = ∪_{x∈U} h(x)`; edges add `h(V)` and `g` acts by translation.
pub fn random_gdiagram(rng: &mut impl Rng, group: &Arc<Group>, shape: DiagramShape) -> GDiagram {
    let (j, masks) = random_index(rng, group, shape);
    random_fibres(rng, &j, &masks, shape)
}

/// Two independent random G-diagrams over the same G-category `I`.
pub fn random_gdiagram_pair(
    rng: &mut impl Rng,
    group: &Arc<Group>,
    shape: DiagramShape,
) -> (GDiagram, GDiagram) {
    let (j, masks) = random_index(rng, group, shape);
    let x = random_fibres(rng, &j, &masks, shape);
    let y = random_fibres(rng, &j, &masks, shape);
    (x, y)
}

fn random_index(rng: &mut impl Rng, group: &Arc<Group>, shape: DiagramShape) -> (GSet, Vec<u64>) {
    let j = random_gset(rng, group, shape.index_points, shape.index_points);
    let masks = invariant_family(rng, &j, shape.max_index, true);
    (j, masks)
}

fn random_fibres(rng: &mut impl Rng, j: &GSet, masks: &[u64], shape: DiagramShape) -> GDiagram {
    let group = j.group();
    let icat = Arc::new(inclusion_poset(masks));
    let action = GAction::on_poset_of_masks(j, icat.clone(), masks.to_vec());
    let k = random_gset(rng, group, shape.fibre_points, shape.fibre_points);
    let mut hx = vec![0u64; j.len()];
    let mut set = vec![false; j.len()];
    for x in 0..j.len() {
        if set[x] {
            continue;
        }
        let stab: Vec<usize> = group.elements().filter(|&g| j.act(g, x) == x).collect();
        let raw: u64 = rng.gen_range(0..=k.full_mask());
        let closed = stab.iter().fold(0u64, |m, &g| m | k.act_mask(g, raw));
        for g in group.elements() {
            hx[j.act(g, x)] = k.act_mask(g, closed);
            set[j.act(g, x)] = true;
        }
    }
    let hu = |u: u64| crate::groups::bits(u).fold(0u64, |m, x| m | hx[x]);
    let family = invariant_family(rng, &k, shape.max_vertex, true);
    let vmasks: Vec<Vec<u64>> = masks
        .iter()
        .map(|&u| {
            let mut v: Vec<u64> = family.iter().map(|&s| s | hu(u)).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    let vertices: Vec<Arc<FinCat>> = vmasks
        .iter()
        .map(|v| Arc::new(inclusion_poset(v)))
        .collect();
    let map = |from: usize, to: usize, f: &dyn Fn(u64) -> u64| -> Functor {
        let obj = vmasks[from]
            .iter()
            .map(|&s| {
                vmasks[to]
                    .iter()
                    .position(|&t| t == f(s))
                    .expect("image lies in the family")
            })
            .collect();
        poset_functor(&vertices[from], &vertices[to], obj)
    };
    let edges: Vec<Functor> = (0..icat.morphism_count())
        .map(|a| {
            let (s, t) = (icat.src(a), icat.tgt(a));
            let add = hu(masks[t]);
            map(s, t, &|m| m | add)
        })
        .collect();
    let diagram =
        CatDiagram::new(icat.clone(), vertices.clone(), edges).expect("unions are functorial");
    let phi: Vec<Vec<Functor>> = group
        .elements()
        .map(|g| {
            (0..masks.len())
                .map(|i| map(i, action.obj(g, i), &|m| k.act_mask(g, m)))
                .collect()
        })
        .collect();
    GDiagram::new(action, diagram, phi).expect("translation is a G-structure")
}

/// A cospan `C → D ← E` of posets with `|Ob D| ≤ max_d`.
pub fn random_cospan(rng: &mut impl Rng, max_d: usize, max_side: usize) -> (Functor, Functor) {
    let d = Arc::new({
        let n = rng.gen_range(1..=max_d);
        random_poset(rng, n, 0.5)
    });
    let c = Arc::new({
        let n = rng.gen_range(1..=max_side);
        random_poset(rng, n, 0.5)
    });
    let e = Arc::new({
        let n = rng.gen_range(1..=max_side);
        random_poset(rng, n, 0.5)
    });
    (random_monotone(rng, &c, &d), random_monotone(rng, &e, &d))
}

/// A diagram `Y: D → Cat` of relabelled copies of a poset `C`, with
/// `Y(α) = σ_{d'} ∘ σ_d⁻¹`, so every morphism goes to an isomorphism.
pub fn random_isomorphic_fibres(rng: &mut impl Rng, max_d: usize, max_c: usize) -> CatDiagram {
    let d = Arc::new({
        let n = rng.gen_range(1..=max_d);
        random_poset(rng, n, 0.5)
    });
    let c = {
        let n = rng.gen_range(1..=max_c);
        random_poset(rng, n, 0.5)
    };
    let n = c.object_count();
    // copy k lists the objects of C in the order perms[k]
    let perms: Vec<Vec<usize>> = (0..d.object_count())
        .map(|_| {
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(rng);
            p
        })
        .collect();
    let copies: Vec<Arc<FinCat>> = perms
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let names: Vec<String> = p
                .iter()
                .map(|&x| format!("{}@{k}", c.object_name(x)))
                .collect();
            Arc::new(
                FinCat::poset(&names, |a, b| !c.hom(p[a], p[b]).is_empty())
                    .expect("relabelled poset"),
            )
        })
        .collect();
    let edges = (0..d.morphism_count())
        .map(|a| {
            let (s, t) = (d.src(a), d.tgt(a));
            let obj = perms[s]
                .iter()
                .map(|&x| perms[t].iter().position(|&y| y == x).expect("permutation"))
                .collect();
            poset_functor(&copies[s], &copies[t], obj)
        })
        .collect();
    CatDiagram::new(d, copies, edges).expect("relabellings compose")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<u32> = (0..4).map(|_| instance_rng(7, 3).gen()).collect();
        let b: Vec<u32> = (0..4).map(|_| instance_rng(7, 3).gen()).collect();
        assert_eq!(a, b);
        assert_ne!(
            instance_rng(7, 3).gen::<u64>(),
            instance_rng(7, 4).gen::<u64>()
        );
    }

    #[test]
    fn random_gdiagrams_validate_and_respect_shape() {
        let shape = DiagramShape {
            index_points: 3,
            max_index: 5,
            fibre_points: 3,
            max_vertex: 3,
        };
        for (k, (_, g)) in small_groups().into_iter().enumerate() {
            let g = Arc::new(g);
            for s in 0..5 {
                let x = random_gdiagram(&mut instance_rng(k as u64, s), &g, shape);
                x.validate().unwrap();
                assert!(x.index().object_count() <= 5);
                assert!(x.diagram.vertices.iter().all(|v| v.object_count() <= 3));
            }
        }
    }

    #[test]
    fn random_cocart_is_monotone_and_conjugation_compatible() {
        let g = Group::symmetric(3);
        let l = SubgroupLattice::new(&g).unwrap();
        for s in 0..10 {
            let mut rng = instance_rng(1, s);
            let j = random_gset(&mut rng, &g, 3, 6);
            let nu = random_cocart(&mut rng, &j, &l, 0, 4, 0.1);
            nu.0.check_monotone(&j, &l).unwrap();
            nu.0.check_conjugation(&j, &l, "cocart").unwrap();
            random_vertex_conn(&mut rng, &j, &l, 0, 4, 0.1)
                .0
                .check_conjugation(&j, &l, "vc")
                .unwrap();
        }
    }

    #[test]
    fn isomorphic_fibres_validate() {
        for s in 0..10 {
            let y = random_isomorphic_fibres(&mut instance_rng(2, s), 4, 3);
            y.validate().unwrap();
            assert!(y.edges.iter().all(|e| e.is_isomorphism()));
        }
    }
}
