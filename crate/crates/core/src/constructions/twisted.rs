//! `Hom(K, X)^G` as a limit over the twisted arrow category of the orbit
//! category of the fixed-level Hom-categories `Hom_{I^H}(K^H, f^*X^L)`.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use super::hom::{hom_action, hom_category, HomCategory, HomError};
use super::witness::{checked_functor, IsoWitness, WitnessFailure};
use crate::equivariant::{
    fixed_category, orbit_category, transport, twisted_arrow, EquivariantError, FixedDiagram,
    GDiagram, OrbitCategory, Transport,
};
use crate::fincat::{cat_limit, CatDiagram, CatLimit, DiagramError, FinCat, Functor, FunctorData};
use crate::groups::Subgroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistedError {
    #[error(transparent)]
    Witness(#[from] WitnessFailure),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Equivariant(#[from] EquivariantError),
    #[error("Tw-indexed diagram is malformed: {0}")]
    Diagram(#[from] DiagramError),
    #[error("K and X carry different actions on the index category")]
    ActionMismatch,
}

/// The witness together with the limit it identifies `Hom(K, X)^G` with.
#[derive(Clone, Debug)]
pub struct TwistedLimit {
    pub witness: IsoWitness,
    pub orbit: OrbitCategory,
    /// `Tw(O_G)^op`, objects the morphisms of `O_G`.
    pub index: Arc<FinCat>,
    pub limit: CatLimit,
}

/// Inverse lookups of a fixed diagram: fixed index of each original index
/// object, and per fixed vertex the fixed index of each original object and
/// morphism.
struct FixedLookup {
    fd: FixedDiagram,
    index: HashMap<usize, usize>,
    obj: Vec<HashMap<usize, usize>>,
    mor: Vec<HashMap<usize, usize>>,
}

impl FixedLookup {
    fn new(fd: FixedDiagram) -> FixedLookup {
        let index = fd
            .index
            .obj
            .iter()
            .enumerate()
            .map(|(k, &i)| (i, k))
            .collect();
        let obj = fd
            .vertex_maps
            .iter()
            .map(|(o, _)| o.iter().enumerate().map(|(k, &y)| (y, k)).collect())
            .collect();
        let mor = fd
            .vertex_maps
            .iter()
            .map(|(_, m)| m.iter().enumerate().map(|(k, &y)| (y, k)).collect())
            .collect();
        FixedLookup {
            fd,
            index,
            obj,
            mor,
        }
    }
}

/// One vertex `Hom_{I^H}(K^H, f^*X^L)` for `f = (L, H, g)`.
struct Vertex {
    l: usize,
    h: usize,
    transport: Transport,
    hom: HomCategory,
}

pub fn twisted_limit_witness(k: &GDiagram, x: &GDiagram) -> Result<TwistedLimit, TwistedError> {
    if k.action.obj_table() != x.action.obj_table() || k.action.mor_table() != x.action.mor_table()
    {
        return Err(TwistedError::ActionMismatch);
    }
    let group = k.group().clone();
    let orbit = orbit_category(&group)?;
    let lat = &orbit.lattice;
    let tw = twisted_arrow(&orbit.cat);
    let index = Arc::new(tw.cat.opposite());

    let mut kfix: HashMap<usize, FixedLookup> = HashMap::new();
    let mut xfix: HashMap<usize, FixedLookup> = HashMap::new();
    for s in 0..lat.len() {
        let sub = lat.get(s);
        kfix.insert(s, FixedLookup::new(k.fixed_diagram(&sub)));
        xfix.insert(s, FixedLookup::new(x.fixed_diagram(&sub)));
    }
    let mut verts = Vec::with_capacity(tw.objs.len());
    for &f in &tw.objs {
        let (l, h, g) = orbit.mors[f];
        let tr = transport(&k.action, lat, l, h, g)?;
        let xpull = xfix[&l].fd.diagram.restrict(&tr.functor);
        let hom = hom_category(&kfix[&h].fd.diagram, &xpull)?;
        verts.push(Vertex {
            l,
            h,
            transport: tr,
            hom,
        });
    }

    // the gluing map Ψ' ↦ φ^X_γ ∘ Ψ'_{α·} ∘ φ^K_α for f = v∘f'∘u
    let glue_obj = |f: usize,
                    f2: usize,
                    gamma: usize,
                    alpha: usize,
                    fam: &[FunctorData]|
     -> Option<Vec<FunctorData>> {
        let (vf, vf2) = (&verts[f], &verts[f2]);
        let (kh, kh2, xl, xl2) = (
            &kfix[&vf.h],
            &kfix[&verts[f2].h],
            &xfix[&vf.l],
            &xfix[&vf2.l],
        );
        let g2 = vf2.transport.representative;
        let rep = vf.transport.representative;
        (0..kh.fd.index.obj.len())
            .map(|ki| {
                let i = kh.fd.index.obj[ki];
                let ai = k.action.obj(alpha, i);
                let ki2 = *kh2.index.get(&ai)?;
                let (src_i2, dst_i) = (x.action.obj(g2, ai), x.action.obj(rep, i));
                if x.action.obj(gamma, src_i2) != dst_i {
                    return None;
                }
                let xi2 = *xl2.index.get(&src_i2)?;
                let xi = *xl.index.get(&dst_i)?;
                let (pk, px) = (&k.phi[alpha][i], &x.phi[gamma][src_i2]);
                let (ko, km) = &kh.fd.vertex_maps[ki];
                let (xo2, xm2) = &xl2.fd.vertex_maps[xi2];
                let obj: Option<Vec<usize>> = ko
                    .iter()
                    .map(|&o| {
                        let o2 = *kh2.obj[ki2].get(&pk.obj[o])?;
                        xl.obj[xi].get(&px.obj[xo2[fam[ki2].obj[o2]]]).copied()
                    })
                    .collect();
                let mor: Option<Vec<usize>> = km
                    .iter()
                    .map(|&m| {
                        let m2 = *kh2.mor[ki2].get(&pk.mor[m])?;
                        xl.mor[xi].get(&px.mor[xm2[fam[ki2].mor[m2]]]).copied()
                    })
                    .collect();
                Some(FunctorData {
                    obj: obj?,
                    mor: mor?,
                })
            })
            .collect()
    };
    let glue_comps = |f: usize,
                      f2: usize,
                      gamma: usize,
                      alpha: usize,
                      comps: &[Vec<usize>]|
     -> Option<Vec<Vec<usize>>> {
        let (vf, vf2) = (&verts[f], &verts[f2]);
        let (kh, kh2, xl, xl2) = (&kfix[&vf.h], &kfix[&vf2.h], &xfix[&vf.l], &xfix[&vf2.l]);
        let g2 = vf2.transport.representative;
        (0..kh.fd.index.obj.len())
            .map(|ki| {
                let i = kh.fd.index.obj[ki];
                let ai = k.action.obj(alpha, i);
                let ki2 = *kh2.index.get(&ai)?;
                let src_i2 = x.action.obj(g2, ai);
                let xi2 = *xl2.index.get(&src_i2)?;
                let xi = *xl.index.get(&x.action.obj(gamma, src_i2))?;
                let (pk, px) = (&k.phi[alpha][i], &x.phi[gamma][src_i2]);
                let xm2 = &xl2.fd.vertex_maps[xi2].1;
                kh.fd.vertex_maps[ki]
                    .0
                    .iter()
                    .map(|&o| {
                        let o2 = *kh2.obj[ki2].get(&pk.obj[o])?;
                        xl.mor[xi].get(&px.mor[xm2[comps[ki2][o2]]]).copied()
                    })
                    .collect()
            })
            .collect()
    };
    let mut edges = Vec::with_capacity(tw.mors.len());
    for (e, &(f, f2, u, v)) in tw.mors.iter().enumerate() {
        let (gamma, alpha) = (orbit.mors[u].2, orbit.mors[v].2);
        let (vf, vf2) = (&verts[f], &verts[f2]);
        let bad = || {
            WitnessFailure(format!(
                "gluing map along `{}` leaves the fixed-level Hom-category",
                tw.cat.morphism(e).name
            ))
        };
        let obj: Option<Vec<usize>> = (0..vf2.hom.cat().object_count())
            .map(|o| {
                vf.hom
                    .object_of(&glue_obj(f, f2, gamma, alpha, vf2.hom.family(o))?)
            })
            .collect();
        let obj = obj.ok_or_else(bad)?;
        let mor: Option<Vec<usize>> = (0..vf2.hom.cat().morphism_count())
            .map(|m| {
                let (s, t, comps) = vf2.hom.modification(m);
                vf.hom
                    .morphism_of(obj[*s], obj[*t], &glue_comps(f, f2, gamma, alpha, comps)?)
            })
            .collect();
        edges.push(Functor::new_unchecked(
            vf2.hom.cat().clone(),
            vf.hom.cat().clone(),
            obj,
            mor.ok_or_else(bad)?,
        ));
    }
    let w = CatDiagram::new(
        index.clone(),
        verts.iter().map(|v| v.hom.cat().clone()).collect(),
        edges,
    )?;
    let limit = cat_limit(&w);

    // Hom(K, X)^G
    let hom = hom_category(&k.diagram, &x.diagram)?;
    let act = hom_action(k, x, &hom)?;
    let whole = Subgroup::from_mask(&group, (1u64 << group.order()) - 1)
        .expect("G is a subgroup of itself");
    let fixed = fixed_category(&act, &whole);

    // forward: Φ ↦ {φ^X_β ∘ Φ restricted to K^H}
    let restrict_obj = |f: usize, fam: &[FunctorData]| -> Option<Vec<FunctorData>> {
        let vf = &verts[f];
        let (kh, xl) = (&kfix[&vf.h], &xfix[&vf.l]);
        let beta = vf.transport.representative;
        (0..kh.fd.index.obj.len())
            .map(|ki| {
                let i = kh.fd.index.obj[ki];
                let xi = *xl.index.get(&x.action.obj(beta, i))?;
                let px = &x.phi[beta][i];
                let (ko, km) = &kh.fd.vertex_maps[ki];
                let obj: Option<Vec<usize>> = ko
                    .iter()
                    .map(|&o| xl.obj[xi].get(&px.obj[fam[i].obj[o]]).copied())
                    .collect();
                let mor: Option<Vec<usize>> = km
                    .iter()
                    .map(|&m| xl.mor[xi].get(&px.mor[fam[i].mor[m]]).copied())
                    .collect();
                Some(FunctorData {
                    obj: obj?,
                    mor: mor?,
                })
            })
            .collect()
    };
    let restrict_comps = |f: usize, comps: &[Vec<usize>]| -> Option<Vec<Vec<usize>>> {
        let vf = &verts[f];
        let (kh, xl) = (&kfix[&vf.h], &xfix[&vf.l]);
        let beta = vf.transport.representative;
        (0..kh.fd.index.obj.len())
            .map(|ki| {
                let i = kh.fd.index.obj[ki];
                let xi = *xl.index.get(&x.action.obj(beta, i))?;
                let px = &x.phi[beta][i];
                kh.fd.vertex_maps[ki]
                    .0
                    .iter()
                    .map(|&o| xl.mor[xi].get(&px.mor[comps[i][o]]).copied())
                    .collect()
            })
            .collect()
    };
    let nv = verts.len();
    let mut f_obj = Vec::with_capacity(fixed.obj.len());
    for &o in &fixed.obj {
        let fam = hom.family(o);
        let family: Option<Vec<usize>> = (0..nv)
            .map(|f| verts[f].hom.object_of(&restrict_obj(f, fam)?))
            .collect();
        let family = family.ok_or_else(|| {
            WitnessFailure(format!("Φ{o} does not restrict to every fixed level"))
        })?;
        f_obj.push(
            limit.object_of(&family).ok_or_else(|| {
                WitnessFailure(format!("restrictions of Φ{o} are not compatible"))
            })?,
        );
    }
    let mut f_mor = Vec::with_capacity(fixed.mor.len());
    for (mi, &m) in fixed.mor.iter().enumerate() {
        let (_, _, comps) = hom.modification(m);
        let (s, t) = (f_obj[fixed.cat.src(mi)], f_obj[fixed.cat.tgt(mi)]);
        let family: Option<Vec<usize>> = (0..nv)
            .map(|f| {
                verts[f].hom.morphism_of(
                    limit.objs[s][f],
                    limit.objs[t][f],
                    &restrict_comps(f, comps)?,
                )
            })
            .collect();
        let family = family.ok_or_else(|| {
            WitnessFailure(format!("Λ{m} does not restrict to every fixed level"))
        })?;
        f_mor.push(
            limit.morphism_of(&family).ok_or_else(|| {
                WitnessFailure(format!("restrictions of Λ{m} are not compatible"))
            })?,
        );
    }

    // backward: the component at id_{G/e}
    let e = lat.trivial();
    let f0 = tw
        .objs
        .iter()
        .position(|&f| orbit.mors[f] == (e, e, group.identity()))
        .expect("id_{G/e} is a morphism of O_G");
    let (ke, xe) = (&kfix[&e], &xfix[&e]);
    let unfix_obj = |fam: &FunctorData, ki: usize| -> FunctorData {
        let xi = xe.index[&ke.fd.index.obj[ki]];
        let (xo, xm) = &xe.fd.vertex_maps[xi];
        FunctorData {
            obj: fam.obj.iter().map(|&y| xo[y]).collect(),
            mor: fam.mor.iter().map(|&y| xm[y]).collect(),
        }
    };
    let fixed_obj: HashMap<usize, usize> =
        fixed.obj.iter().enumerate().map(|(k, &o)| (o, k)).collect();
    let fixed_mor: HashMap<usize, usize> =
        fixed.mor.iter().enumerate().map(|(k, &m)| (m, k)).collect();
    let n = k.index().object_count();
    let mut b_obj = Vec::with_capacity(limit.objs.len());
    for (lo, family) in limit.objs.iter().enumerate() {
        let comp = verts[f0].hom.family(family[f0]);
        let mut fam = vec![
            FunctorData {
                obj: vec![],
                mor: vec![]
            };
            n
        ];
        for (ki, c) in comp.iter().enumerate() {
            let (ko, km) = &ke.fd.vertex_maps[ki];
            let i = ke.fd.index.obj[ki];
            let d = unfix_obj(c, ki);
            // reindex from K^e_i to K_i
            let mut obj = vec![0; ko.len()];
            let mut mor = vec![0; km.len()];
            for (a, &b) in ko.iter().enumerate() {
                obj[b] = d.obj[a];
            }
            for (a, &b) in km.iter().enumerate() {
                mor[b] = d.mor[a];
            }
            fam[i] = FunctorData { obj, mor };
        }
        let o = hom
            .object_of(&fam)
            .ok_or_else(|| WitnessFailure(format!("limit object {lo} gives no transformation")))?;
        b_obj.push(
            *fixed_obj
                .get(&o)
                .ok_or_else(|| WitnessFailure(format!("limit object {lo} is not G-fixed")))?,
        );
    }
    let mut b_mor = Vec::with_capacity(limit.mors.len());
    for (lm, family) in limit.mors.iter().enumerate() {
        let (_, _, comps) = verts[f0].hom.modification(family[f0]);
        let mut full = vec![Vec::new(); n];
        for (ki, c) in comps.iter().enumerate() {
            let i = ke.fd.index.obj[ki];
            let xi = xe.index[&i];
            let (ko, _) = &ke.fd.vertex_maps[ki];
            let xm = &xe.fd.vertex_maps[xi].1;
            let mut out = vec![0; ko.len()];
            for (a, &b) in ko.iter().enumerate() {
                out[b] = xm[c[a]];
            }
            full[i] = out;
        }
        let (s, t) = (
            fixed.obj[b_obj[limit.cat.src(lm)]],
            fixed.obj[b_obj[limit.cat.tgt(lm)]],
        );
        let m = hom
            .morphism_of(s, t, &full)
            .ok_or_else(|| WitnessFailure(format!("limit morphism {lm} gives no modification")))?;
        b_mor.push(
            *fixed_mor
                .get(&m)
                .ok_or_else(|| WitnessFailure(format!("limit morphism {lm} is not G-fixed")))?,
        );
    }
    let fwd = checked_functor("Hom(K,X)^G -> lim", &fixed.cat, &limit.cat, f_obj, f_mor)?;
    let bwd = checked_functor("lim -> Hom(K,X)^G", &limit.cat, &fixed.cat, b_obj, b_mor)?;
    let witness = IsoWitness::verify(fwd, bwd)?;
    Ok(TwistedLimit {
        witness,
        orbit,
        index,
        limit,
    })
}
