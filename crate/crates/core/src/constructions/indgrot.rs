//! The decomposition `Hom((U≤I)/−, X_{U≤}) ≅ Hom((U<I)/−, X_{U<}) ≀ F_U`
//! with `F_U(Φ) = m_U/Φ`, and its `G_U`-equivariance.

use std::collections::HashMap;

use thiserror::Error;

use super::grothendieck::{grothendieck, Grothendieck};
use super::hom::{
    hom_action, hom_category, overcat_diagram, overcat_gdiagram, HomCategory, OverDiagram,
};
use super::matching::{matching_action, matching_functor, Matching, MatchingAction, MatchingError};
use super::witness::{checked_functor, IsoWitness, WitnessFailure};
use crate::equivariant::{EquivariantError, GAction, GDiagram};
use crate::fincat::{slice_under, CatDiagram, Comma, DiagramError, Functor, FunctorData, Slice};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndGrotError {
    #[error(transparent)]
    Witness(#[from] WitnessFailure),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error("F_U is not a diagram: {0}")]
    Diagram(#[from] DiagramError),
}

impl From<EquivariantError> for IndGrotError {
    fn from(e: EquivariantError) -> Self {
        IndGrotError::Matching(e.into())
    }
}

/// The verified isomorphism, with the sizes of `G_U` when equivariance was
/// checked.
#[derive(Clone, Debug)]
pub struct IndGrot {
    pub witness: IsoWitness,
    /// `|G_U|` when the forward functor was checked to be `G_U`-equivariant.
    pub equivariant_order: Option<usize>,
}

/// Both sides and the index bookkeeping between `U<I` and `U≤I`.
struct Parts {
    m: Matching,
    t: Slice,
    kt: OverDiagram,
    lhs: HomCategory,
    fibres: Vec<Comma>,
    rhs: Grothendieck,
    /// Object of `U≤I` for each object of `U<I`.
    t_of_s: Vec<usize>,
    /// Object `id_u` of `U≤I` for each factor `u`.
    tid: Vec<usize>,
    /// Per object `k` of `U<I`: object and morphism maps `(U<I)/k → (U≤I)/k`.
    incl: Vec<(Vec<usize>, Vec<usize>)>,
    /// Per object `t` of `U≤I`: inverse of `incl` on objects and morphisms.
    incl_inv: Vec<(HashMap<usize, usize>, HashMap<usize, usize>)>,
    /// Factor index of the source of each object of `U<I`.
    pos: Vec<usize>,
}

fn parts(x: &CatDiagram, units: &[usize]) -> Result<Parts, IndGrotError> {
    let m = matching_functor(x, units)?;
    let t = slice_under(&x.index, &m.units, false).map_err(MatchingError::from)?;
    let kt = overcat_diagram(&Functor::identity(&t.cat));
    let xt = x.restrict(&t.projection);
    let lhs = hom_category(&kt.diagram, &xt).map_err(MatchingError::from)?;

    let h = m.hom.cat();
    let fibres: Vec<Comma> = (0..h.object_count()).map(|phi| m.over(phi)).collect();
    let edges = (0..h.morphism_count())
        .map(|l| m.postcompose(&fibres[h.src(l)], &fibres[h.tgt(l)], l))
        .collect();
    let fu = CatDiagram::new(
        h.clone(),
        fibres.iter().map(|c| c.cat.clone()).collect(),
        edges,
    )?;
    let rhs = grothendieck(&fu);

    let (s, idx) = (&m.slice, &*x.index);
    let t_of_s: Vec<usize> = s
        .objs
        .iter()
        .map(|&a| t.object_of(a).expect("U<I sits inside U≤I"))
        .collect();
    let tid: Vec<usize> = m
        .units
        .iter()
        .map(|&u| t.object_of(idx.id(u)).expect("id_u is in U≤I"))
        .collect();
    let pos: Vec<usize> = s
        .objs
        .iter()
        .map(|&a| {
            m.units
                .iter()
                .position(|&u| u == idx.src(a))
                .expect("α starts in U")
        })
        .collect();
    let s_mor: Vec<usize> = (0..s.cat.morphism_count())
        .map(|k| {
            let (a, b) = (t_of_s[s.cat.src(k)], t_of_s[s.cat.tgt(k)]);
            t.cat
                .hom(a, b)
                .iter()
                .copied()
                .find(|&y| t.mors[y].1 == s.mors[k].1)
                .expect("U<I is full in U≤I")
        })
        .collect();
    let mut incl = Vec::with_capacity(s.cat.object_count());
    let mut incl_inv = vec![(HashMap::new(), HashMap::new()); t.cat.object_count()];
    for k in 0..s.cat.object_count() {
        let (sv, tk) = (&m.k.vertices[k], t_of_s[k]);
        let obj: Vec<usize> = sv
            .objs
            .iter()
            .map(|&(c, a)| {
                kt.object_of(tk, t_of_s[c], s_mor[a])
                    .expect("(U<I)/k sits inside (U≤I)/k")
            })
            .collect();
        let mor: Vec<usize> = sv
            .mors
            .iter()
            .map(|&(o, o2, u)| {
                kt.morphism_of(tk, obj[o], obj[o2], s_mor[u])
                    .expect("(U<I)/k sits inside (U≤I)/k")
            })
            .collect();
        incl_inv[tk] = (
            obj.iter().enumerate().map(|(i, &y)| (y, i)).collect(),
            mor.iter().enumerate().map(|(i, &y)| (y, i)).collect(),
        );
        incl.push((obj, mor));
    }
    Ok(Parts {
        m,
        t,
        kt,
        lhs,
        fibres,
        rhs,
        t_of_s,
        tid,
        incl,
        incl_inv,
        pos,
    })
}

/// Verifies `Hom((U≤I)/−, X_{U≤}) ≅ Hom((U<I)/−, X_{U<}) ≀ F_U` for a set
/// `U` of objects of equal under-degree.
pub fn indgrot_witness(x: &CatDiagram, units: &[usize]) -> Result<IndGrot, IndGrotError> {
    let p = parts(x, units)?;
    let witness = build_witness(x, &p)?;
    Ok(IndGrot {
        witness,
        equivariant_order: None,
    })
}

/// As [`indgrot_witness`], and checks that the forward functor commutes with
/// the actions of the setwise stabilizer `G_U` on both sides.
pub fn indgrot_witness_equivariant(x: &GDiagram, units: &[usize]) -> Result<IndGrot, IndGrotError> {
    let p = parts(&x.diagram, units)?;
    let witness = build_witness(&x.diagram, &p)?;
    let ma = matching_action(x, &p.m)?;
    let lhs_act = lhs_action(x, &p, &ma)?;
    let rhs_act = rhs_action(&p, &ma)?;
    if !lhs_act.is_equivariant(&witness.fwd, &rhs_act) {
        return Err(WitnessFailure("forward functor is not G_U-equivariant".into()).into());
    }
    Ok(IndGrot {
        witness,
        equivariant_order: Some(ma.elems.len()),
    })
}

fn build_witness(x: &CatDiagram, p: &Parts) -> Result<IsoWitness, IndGrotError> {
    let (m, s, t, kt) = (&p.m, &p.m.slice, &p.t, &p.kt);
    let hs = &m.hom;
    let idx = &*x.index;
    let fail = |s: String| WitnessFailure(s);

    // forward: Ψ ↦ (Ψ restricted to U<I, (x, λ))
    let restrict = |fam: &[FunctorData]| -> Vec<FunctorData> {
        (0..s.cat.object_count())
            .map(|k| {
                let (ref io, ref im) = p.incl[k];
                let psi = &fam[p.t_of_s[k]];
                FunctorData {
                    obj: io.iter().map(|&q| psi.obj[q]).collect(),
                    mor: im.iter().map(|&q| psi.mor[q]).collect(),
                }
            })
            .collect()
    };
    // the morphism of (U≤I)/t from (id_u, α) to the object q
    let from_unit = |k: usize, q: usize| -> usize {
        let tk = p.t_of_s[k];
        let tu = p.tid[p.pos[k]];
        let start = kt
            .object_of(tk, tu, t.cat.hom(tu, tk)[0])
            .expect("(id_u, α) is an object");
        let c = kt.vertices[tk].objs[q].0;
        kt.morphism_of(tk, start, q, t.cat.hom(tu, c)[0])
            .expect("(id_u, α) is initial")
    };
    let mut f_obj = Vec::with_capacity(p.lhs.cat().object_count());
    for o in 0..p.lhs.cat().object_count() {
        let fam = p.lhs.family(o);
        let phi = hs
            .object_of(&restrict(fam))
            .ok_or_else(|| fail(format!("restriction of Ψ{o} is not a transformation")))?;
        let xs: Vec<usize> = p.tid.iter().map(|&tu| fam[tu].obj[0]).collect();
        let xo = m
            .dom
            .obj(&xs)
            .expect("families of objects are product objects");
        let comps: Vec<Vec<usize>> = (0..s.cat.object_count())
            .map(|k| {
                p.incl[k]
                    .0
                    .iter()
                    .map(|&q| fam[p.t_of_s[k]].mor[from_unit(k, q)])
                    .collect()
            })
            .collect();
        let lambda = hs
            .morphism_of(m.functor.obj[xo], phi, &comps)
            .ok_or_else(|| fail(format!("Ψ{o} does not give a modification m_U(x) → Φ")))?;
        let fib = p.fibres[phi]
            .object_of(xo, 0, lambda)
            .expect("(x, λ) is in m_U/Φ");
        f_obj.push(
            p.rhs
                .object_of(phi, fib)
                .expect("(Φ, (x, λ)) is in the Grothendieck construction"),
        );
    }
    let mut f_mor = Vec::with_capacity(p.lhs.cat().morphism_count());
    for mo in 0..p.lhs.cat().morphism_count() {
        let (a, b, comps) = p.lhs.modification(mo);
        let (fa, fb) = (f_obj[*a], f_obj[*b]);
        let ((phi, fib), (phi2, fib2)) = (p.rhs.objs[fa], p.rhs.objs[fb]);
        let lc: Vec<Vec<usize>> = (0..s.cat.object_count())
            .map(|k| p.incl[k].0.iter().map(|&q| comps[p.t_of_s[k]][q]).collect())
            .collect();
        let lam = hs
            .morphism_of(phi, phi2, &lc)
            .ok_or_else(|| fail(format!("restriction of Ω{mo} is not a modification")))?;
        let ws: Vec<usize> = p.tid.iter().map(|&tu| comps[tu][0]).collect();
        let w = m
            .dom
            .mor(&ws)
            .expect("families of morphisms are product morphisms");
        let (xo, _, l) = p.fibres[phi].objs[fib];
        let moved = p.fibres[phi2]
            .object_of(xo, 0, hs.cat().then(l, lam))
            .expect("postcomposition stays in the comma");
        let c2 = &p.fibres[phi2];
        let gamma = c2
            .cat
            .hom(moved, fib2)
            .iter()
            .copied()
            .find(|&y| c2.mors[y] == (moved, fib2, w, 0))
            .ok_or_else(|| fail(format!("Ω{mo} gives no morphism of m_U/Φ'")))?;
        f_mor.push(
            p.rhs
                .morphism_of(lam, fib, gamma)
                .expect("(Λ, γ) is in the Grothendieck construction"),
        );
    }

    // backward: (Φ, (x, λ)) ↦ Ψ
    // X(α) applied to an object or morphism of X_u, for α the k-th object of U<I
    let value_at = |k: usize, on_mor: bool, v: usize| -> usize {
        let e = &x.edges[s.objs[k]];
        if on_mor {
            e.mor[v]
        } else {
            e.obj[v]
        }
    };
    let assemble =
        |xs: &[usize], phi_fam: &[FunctorData], lam: &[Vec<usize>]| -> Vec<FunctorData> {
            (0..t.cat.object_count())
                .map(|tt| {
                    if let Some(pu) = p.tid.iter().position(|&y| y == tt) {
                        let u = m.units[pu];
                        return FunctorData {
                            obj: vec![xs[pu]],
                            mor: vec![x.vertices[u].id(xs[pu])],
                        };
                    }
                    let k = p
                        .t_of_s
                        .iter()
                        .position(|&y| y == tt)
                        .expect("every object of U≤I is id_u or in U<I");
                    let xk = value_at(k, false, xs[p.pos[k]]);
                    let tv = &kt.vertices[tt];
                    let target = &x.vertices[idx.tgt(s.objs[k])];
                    let (ref oi, ref mi) = p.incl_inv[tt];
                    let obj: Vec<usize> = (0..tv.cat.object_count())
                        .map(|q| match oi.get(&q) {
                            Some(&o) => phi_fam[k].obj[o],
                            None => xk,
                        })
                        .collect();
                    let mor = (0..tv.cat.morphism_count())
                        .map(|mm| match mi.get(&mm) {
                            Some(&o) => phi_fam[k].mor[o],
                            None => {
                                let (q1, q2) = (tv.cat.src(mm), tv.cat.tgt(mm));
                                match (oi.get(&q1), oi.get(&q2)) {
                                    (None, Some(&o2)) => lam[k][o2],
                                    _ => target.id(obj[q1]),
                                }
                            }
                        })
                        .collect();
                    FunctorData { obj, mor }
                })
                .collect()
        };
    let mut b_obj = Vec::with_capacity(p.rhs.objs.len());
    for (o, &(phi, fib)) in p.rhs.objs.iter().enumerate() {
        let (xo, _, l) = p.fibres[phi].objs[fib];
        let xs = &m.dom.objs[xo];
        let fam = assemble(xs, hs.family(phi), &hs.modification(l).2);
        b_obj.push(p.lhs.object_of(&fam).ok_or_else(|| {
            fail(format!(
                "object {o} of the Grothendieck side gives no transformation"
            ))
        })?);
    }
    let mut b_mor = Vec::with_capacity(p.rhs.mors.len());
    for (mo, &(lam, _, gamma)) in p.rhs.mors.iter().enumerate() {
        let (a, b) = (b_obj[p.rhs.cat.src(mo)], b_obj[p.rhs.cat.tgt(mo)]);
        let phi2 = hs.cat().tgt(lam);
        let ws = &m.dom.mors[p.fibres[phi2].mors[gamma].2];
        let lc = &hs.modification(lam).2;
        let comps: Vec<Vec<usize>> = (0..t.cat.object_count())
            .map(|tt| {
                if let Some(pu) = p.tid.iter().position(|&y| y == tt) {
                    return vec![ws[pu]];
                }
                let k = p
                    .t_of_s
                    .iter()
                    .position(|&y| y == tt)
                    .expect("every object of U≤I is id_u or in U<I");
                let oi = &p.incl_inv[tt].0;
                (0..kt.vertices[tt].cat.object_count())
                    .map(|q| match oi.get(&q) {
                        Some(&o) => lc[k][o],
                        None => value_at(k, true, ws[p.pos[k]]),
                    })
                    .collect()
            })
            .collect();
        b_mor.push(p.lhs.morphism_of(a, b, &comps).ok_or_else(|| {
            fail(format!(
                "morphism {mo} of the Grothendieck side gives no modification"
            ))
        })?);
    }
    let fwd = checked_functor(
        "Hom((U≤I)/-, X) -> Hom((U<I)/-, X)≀F_U",
        p.lhs.cat(),
        &p.rhs.cat,
        f_obj,
        f_mor,
    )?;
    let bwd = checked_functor(
        "Hom((U<I)/-, X)≀F_U -> Hom((U≤I)/-, X)",
        &p.rhs.cat,
        p.lhs.cat(),
        b_obj,
        b_mor,
    )?;
    Ok(IsoWitness::verify(fwd, bwd)?)
}

/// Conjugation on `Hom((U≤I)/−, X_{U≤})` by `G_U`.
fn lhs_action(x: &GDiagram, p: &Parts, ma: &MatchingAction) -> Result<GAction, IndGrotError> {
    let group = x.action.group();
    let mask = ma.elems.iter().fold(0u64, |acc, &g| acc | (1 << g));
    let gu = crate::groups::Subgroup::from_mask(group, mask).map_err(EquivariantError::from)?;
    let xr = x.restrict_group(&gu);
    let ta = xr.action.on_slice(&p.t)?;
    let (_, kg) = overcat_gdiagram(&Functor::identity(&p.t.cat), &ta, &ta)?;
    let xg = xr.pullback(&p.t.projection, &ta)?;
    Ok(hom_action(&kg, &xg, &p.lhs)?)
}

/// `g·(Φ, (x, λ)) = (g·Φ, (g·x, g·λ))` on the Grothendieck side.
fn rhs_action(p: &Parts, ma: &MatchingAction) -> Result<GAction, IndGrotError> {
    let group = ma.hom.group().clone();
    let mut obj = Vec::with_capacity(group.order());
    let mut mor = Vec::with_capacity(group.order());
    let none = || WitnessFailure("the Grothendieck side is not closed under G_U".into());
    for g in group.elements() {
        let move_fib = |phi: usize, fib: usize| -> Option<usize> {
            let (xo, b, l) = p.fibres[phi].objs[fib];
            p.fibres[ma.hom.obj(g, phi)].object_of(ma.dom.obj(g, xo), b, ma.hom.mor(g, l))
        };
        let o: Option<Vec<usize>> = p
            .rhs
            .objs
            .iter()
            .map(|&(phi, fib)| p.rhs.object_of(ma.hom.obj(g, phi), move_fib(phi, fib)?))
            .collect();
        let o = o.ok_or_else(none)?;
        let mm: Option<Vec<usize>> = p
            .rhs
            .mors
            .iter()
            .map(|&(lam, fib, gamma)| {
                let phi = p.m.hom.cat().src(lam);
                let phi2 = p.m.hom.cat().tgt(lam);
                let gphi2 = ma.hom.obj(g, phi2);
                let (s2, t2, w, v) = p.fibres[phi2].mors[gamma];
                let (gs, gt) = (move_fib(phi2, s2)?, move_fib(phi2, t2)?);
                let c = &p.fibres[gphi2];
                let key = (gs, gt, ma.dom.mor(g, w), v);
                let gg = c
                    .cat
                    .hom(gs, gt)
                    .iter()
                    .copied()
                    .find(|&y| c.mors[y] == key)?;
                p.rhs
                    .morphism_of(ma.hom.mor(g, lam), move_fib(phi, fib)?, gg)
            })
            .collect();
        obj.push(o);
        mor.push(mm.ok_or_else(none)?);
    }
    Ok(GAction::new(group, p.rhs.cat.clone(), obj, mor)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::fincat::FinCat;
    use crate::groups::Group;
    use crate::gsets::GSet;

    fn arrow() -> Arc<FinCat> {
        Arc::new(FinCat::poset(&["a", "b"], |x, y| x <= y).unwrap())
    }

    #[test]
    fn maximal_unit_gives_its_vertex() {
        let i = Arc::new(FinCat::powerset(2));
        let x = CatDiagram::constant(&i, &arrow());
        let w = indgrot_witness(&x, &[3]).unwrap();
        assert_eq!(
            (w.witness.a.object_count(), w.witness.a.morphism_count()),
            (2, 3)
        );
    }

    #[test]
    fn singletons_of_square() {
        let i = Arc::new(FinCat::powerset(2));
        let x = CatDiagram::constant(&i, &arrow());
        indgrot_witness(&x, &[1, 2]).unwrap();
        indgrot_witness(&x, &[0]).unwrap();
    }

    #[test]
    fn mixed_degree_is_rejected() {
        let i = Arc::new(FinCat::powerset(2));
        let x = CatDiagram::constant(&i, &arrow());
        assert!(matches!(
            indgrot_witness(&x, &[0, 1]),
            Err(IndGrotError::Matching(MatchingError::Cat(
                crate::fincat::CatError::MixedDegree(_)
            )))
        ));
    }

    #[test]
    fn swapped_singletons_are_equivariant() {
        let grp = Group::cyclic(2);
        let a = GAction::powerset(&GSet::regular(&grp));
        let x =
            GDiagram::with_trivial_structure(a.clone(), CatDiagram::constant(a.cat(), &arrow()))
                .unwrap();
        let w = indgrot_witness_equivariant(&x, &[1, 2]).unwrap();
        assert_eq!(w.equivariant_order, Some(2));
    }
}
