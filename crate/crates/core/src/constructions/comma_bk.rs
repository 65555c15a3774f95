//! The homotopy-pullback model `f↓g` of a cospan `C → D ← E`, with its
//! identifications as a Hom-category and as a Grothendieck construction.

use std::sync::Arc;

use super::grothendieck::grothendieck;
use super::hom::{hom_category, overcat_diagram, HomError};
use super::witness::{checked_functor, IsoWitness, WitnessFailure};
use crate::fincat::{CatBuilder, CatDiagram, FinCat, Functor, FunctorData};

/// `f↓g`: objects `(c, e, d, a: f c → d, b: g e → d)`; morphisms
/// `(u, v, w)` with `w∘a = a'∘f(u)` and `w∘b = b'∘g(v)`.
#[derive(Clone, Debug)]
pub struct CommaBk {
    pub cat: Arc<FinCat>,
    pub objs: Vec<(usize, usize, usize, usize, usize)>,
    /// `(source object, target object, u, v, w)` per morphism.
    pub mors: Vec<(usize, usize, usize, usize, usize)>,
}

pub fn comma_bk(f: &Functor, g: &Functor) -> CommaBk {
    let (c, e, d) = (&*f.dom, &*g.dom, &*f.cod);
    let mut b: CatBuilder<
        (usize, usize, usize, usize, usize),
        (usize, usize, usize, usize, usize),
    > = CatBuilder::new();
    for ci in 0..c.object_count() {
        for ei in 0..e.object_count() {
            for di in 0..d.object_count() {
                for &a in d.hom(f.obj[ci], di) {
                    for &bb in d.hom(g.obj[ei], di) {
                        let o = b.object((ci, ei, di, a, bb));
                        b.identity(o, (o, o, c.id(ci), e.id(ei), d.id(di)));
                    }
                }
            }
        }
    }
    for o in 0..b.object_count() {
        let (ci, ei, di, a, bb) = *b.object_label(o);
        for &u in c.out_of(ci) {
            for &v in e.out_of(ei) {
                for &w in d.out_of(di) {
                    if c.is_identity(u) && e.is_identity(v) && d.is_identity(w) {
                        continue;
                    }
                    let (c2, e2, d2) = (c.tgt(u), e.tgt(v), d.tgt(w));
                    let (wa, wb) = (d.then(a, w), d.then(bb, w));
                    for &a2 in d.hom(f.obj[c2], d2) {
                        if d.then(f.mor[u], a2) != wa {
                            continue;
                        }
                        for &b2 in d.hom(g.obj[e2], d2) {
                            if d.then(g.mor[v], b2) == wb {
                                let t = b
                                    .object_index(&(c2, e2, d2, a2, b2))
                                    .expect("object enumerated");
                                b.morphism((o, t, u, v, w), o, t);
                            }
                        }
                    }
                }
            }
        }
    }
    let l = b
        .build_named(
            |x, y| {
                (
                    x.0,
                    y.1,
                    c.then(x.2, y.2),
                    e.then(x.3, y.3),
                    d.then(x.4, y.4),
                )
            },
            |_, &(ci, ei, di, a, bb)| {
                format!(
                    "({},{},{}:{},{})",
                    c.object_name(ci),
                    e.object_name(ei),
                    d.object_name(di),
                    d.morphism(a).name,
                    d.morphism(bb).name
                )
            },
            |_, &(o, t, u, v, w)| {
                format!(
                    "({},{},{}):{}->{}",
                    c.morphism(u).name,
                    e.morphism(v).name,
                    d.morphism(w).name,
                    o,
                    t
                )
            },
        )
        .expect("f↓g is a category");
    CommaBk {
        cat: l.cat,
        objs: l.objs,
        mors: l.mors,
    }
}

/// The cospan shape `0 → 2 ← 1`.
pub fn cospan_index() -> Arc<FinCat> {
    Arc::new(FinCat::poset(&["0", "1", "2"], |x, y| x == y || y == 2).expect("cospan is a poset"))
}

/// Both identifications of `f↓g`.
#[derive(Clone, Debug)]
pub struct CommaBkWitnesses {
    pub comma: CommaBk,
    pub hom: IsoWitness,
    pub grothendieck: IsoWitness,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum CommaBkError {
    #[error(transparent)]
    Witness(#[from] WitnessFailure),
    #[error(transparent)]
    Hom(#[from] HomError),
}

pub fn comma_bk_witnesses(f: &Functor, g: &Functor) -> Result<CommaBkWitnesses, CommaBkError> {
    let fg = comma_bk(f, g);
    let hom = hom_witness(f, g, &fg)?;
    let gr = grothendieck_witness(f, g, &fg)?;
    Ok(CommaBkWitnesses {
        comma: fg,
        hom,
        grothendieck: gr,
    })
}

/// `f↓g ≅ Hom((0→2←1)/−, X)` with `X = (C → D ← E)`.
fn hom_witness(f: &Functor, g: &Functor, fg: &CommaBk) -> Result<IsoWitness, CommaBkError> {
    let (c, e, d) = (&f.dom, &g.dom, &f.cod);
    let idx = cospan_index();
    let k = overcat_diagram(&Functor::identity(&idx));
    let m02 = idx.hom(0, 2)[0];
    let m12 = idx.hom(1, 2)[0];
    let mut edges = vec![Functor::identity(c); idx.morphism_count()];
    edges[idx.id(1)] = Functor::identity(e);
    edges[idx.id(2)] = Functor::identity(d);
    edges[m02] = f.clone();
    edges[m12] = g.clone();
    let x = CatDiagram::new(idx.clone(), vec![c.clone(), e.clone(), d.clone()], edges)
        .map_err(|err| WitnessFailure(format!("cospan diagram: {err}")))?;
    let hom = hom_category(&k.diagram, &x)?;
    // K_2 = I/2 has objects (0, 0→2), (1, 1→2), (2, id)
    let k2 = &k.vertices[2];
    let p = k.object_of(2, 0, m02).expect("object of I/2");
    let q = k.object_of(2, 1, m12).expect("object of I/2");
    let top = k.object_of(2, 2, idx.id(2)).expect("object of I/2");
    let p_top = k2.cat.hom(p, top)[0];
    let q_top = k2.cat.hom(q, top)[0];
    let k2c = &k2.cat;

    let family = |&(ci, ei, di, a, bb): &(usize, usize, usize, usize, usize)| -> Vec<FunctorData> {
        let mut obj2 = vec![0; k2c.object_count()];
        obj2[p] = f.obj[ci];
        obj2[q] = g.obj[ei];
        obj2[top] = di;
        let mor2 = (0..k2c.morphism_count())
            .map(|m| {
                if m == p_top {
                    a
                } else if m == q_top {
                    bb
                } else {
                    d.id(obj2[k2c.src(m)])
                }
            })
            .collect();
        vec![
            FunctorData {
                obj: vec![ci],
                mor: vec![c.id(ci)],
            },
            FunctorData {
                obj: vec![ei],
                mor: vec![e.id(ei)],
            },
            FunctorData {
                obj: obj2,
                mor: mor2,
            },
        ]
    };
    let mut f_obj = Vec::with_capacity(fg.objs.len());
    for (o, lab) in fg.objs.iter().enumerate() {
        let fam = family(lab);
        f_obj.push(hom.object_of(&fam).ok_or_else(|| {
            WitnessFailure(format!(
                "object `{}` of f↓g is not a strict transformation",
                fg.cat.object_name(o)
            ))
        })?);
    }
    let mut f_mor = Vec::with_capacity(fg.mors.len());
    for (m, &(s, t, u, v, w)) in fg.mors.iter().enumerate() {
        let mut c2 = vec![0; k2c.object_count()];
        c2[p] = f.mor[u];
        c2[q] = g.mor[v];
        c2[top] = w;
        let comps = vec![vec![u], vec![v], c2];
        f_mor.push(hom.morphism_of(f_obj[s], f_obj[t], &comps).ok_or_else(|| {
            WitnessFailure(format!(
                "morphism `{}` of f↓g is not a modification",
                fg.cat.morphism(m).name
            ))
        })?);
    }
    let lookup_obj =
        |lab: (usize, usize, usize, usize, usize)| fg.objs.iter().position(|&x| x == lab);
    let mut b_obj = Vec::with_capacity(hom.cat().object_count());
    for o in 0..hom.cat().object_count() {
        let fam = hom.family(o);
        let lab = (
            fam[0].obj[0],
            fam[1].obj[0],
            fam[2].obj[top],
            fam[2].mor[p_top],
            fam[2].mor[q_top],
        );
        b_obj.push(
            lookup_obj(lab)
                .ok_or_else(|| WitnessFailure(format!("transformation Φ{o} has no zig-zag")))?,
        );
    }
    let mut b_mor = Vec::with_capacity(hom.cat().morphism_count());
    for m in 0..hom.cat().morphism_count() {
        let (s, t, comps) = hom.modification(m);
        let (bs, bt) = (b_obj[*s], b_obj[*t]);
        let found = fg.cat.hom(bs, bt).iter().copied().find(|&x| {
            let (_, _, u, v, w) = fg.mors[x];
            (u, v, w) == (comps[0][0], comps[1][0], comps[2][top])
        });
        b_mor.push(
            found.ok_or_else(|| {
                WitnessFailure(format!("modification {m} has no morphism of f↓g"))
            })?,
        );
    }
    let fwd = checked_functor("f↓g -> Hom", &fg.cat, hom.cat(), f_obj, f_mor)?;
    let bwd = checked_functor("Hom -> f↓g", hom.cat(), &fg.cat, b_obj, b_mor)?;
    Ok(IsoWitness::verify(fwd, bwd)?)
}

/// `f↓g ≅ D≀(f/− × g/−)`.
fn grothendieck_witness(
    f: &Functor,
    g: &Functor,
    fg: &CommaBk,
) -> Result<IsoWitness, CommaBkError> {
    let d = &*f.cod;
    let fo = overcat_diagram(f);
    let go = overcat_diagram(g);
    let prod = fo.diagram.product(&go.diagram);
    let gr = grothendieck(&prod);
    // labels of the product vertices
    let prods: Vec<_> = (0..d.object_count())
        .map(|j| {
            crate::fincat::product(&[
                fo.diagram.vertices[j].clone(),
                go.diagram.vertices[j].clone(),
            ])
        })
        .collect();
    let miss = |what: String| WitnessFailure(what);
    let mut f_obj = Vec::with_capacity(fg.objs.len());
    for (o, &(ci, ei, di, a, bb)) in fg.objs.iter().enumerate() {
        let x1 = fo
            .object_of(di, ci, a)
            .ok_or_else(|| miss(format!("object {o}: no (c, a) in f/d")))?;
        let x2 = go
            .object_of(di, ei, bb)
            .ok_or_else(|| miss(format!("object {o}: no (e, b) in g/d")))?;
        let x = prods[di]
            .obj(&vec![x1, x2])
            .ok_or_else(|| miss(format!("object {o}: no product object")))?;
        f_obj.push(
            gr.object_of(di, x)
                .ok_or_else(|| miss(format!("object {o}: not in D≀(f/-×g/-)")))?,
        );
    }
    let mut f_mor = Vec::with_capacity(fg.mors.len());
    for (m, &(s, t, u, v, w)) in fg.mors.iter().enumerate() {
        let dj = fg.objs[t].2;
        let (sx, tx) = (gr.objs[f_obj[s]].1, gr.objs[f_obj[t]].1);
        // γ: X(w)x → y in f/d' × g/d' lies over (u, v)
        let moved = prod.edges[w].obj[sx];
        let pj = &prods[dj];
        let (m1, m2) = (pj.objs[moved][0], pj.objs[moved][1]);
        let (t1, t2) = (pj.objs[tx][0], pj.objs[tx][1]);
        let u1 = fo
            .morphism_of(dj, m1, t1, u)
            .ok_or_else(|| miss(format!("morphism {m}: no lift of u")))?;
        let v1 = go
            .morphism_of(dj, m2, t2, v)
            .ok_or_else(|| miss(format!("morphism {m}: no lift of v")))?;
        let gamma = pj
            .mor(&vec![u1, v1])
            .ok_or_else(|| miss(format!("morphism {m}: no product morphism")))?;
        if pj.cat.tgt(gamma) != tx {
            return Err(miss(format!("morphism {m}: lift has the wrong target")).into());
        }
        f_mor.push(
            gr.morphism_of(w, sx, gamma)
                .ok_or_else(|| miss(format!("morphism {m}: not in D≀(f/-×g/-)")))?,
        );
    }
    let mut b_obj = Vec::with_capacity(gr.objs.len());
    for &(di, x) in &gr.objs {
        let (x1, x2) = (prods[di].objs[x][0], prods[di].objs[x][1]);
        let (ci, a) = fo.vertices[di].objs[x1];
        let (ei, bb) = go.vertices[di].objs[x2];
        let lab = (ci, ei, di, a, bb);
        b_obj.push(
            fg.objs
                .iter()
                .position(|&y| y == lab)
                .ok_or_else(|| miss(format!("({di},{x}) has no zig-zag")))?,
        );
    }
    let mut b_mor = Vec::with_capacity(gr.mors.len());
    for (m, &(w, _, gamma)) in gr.mors.iter().enumerate() {
        let dj = d.tgt(w);
        let (g1, g2) = (prods[dj].mors[gamma][0], prods[dj].mors[gamma][1]);
        let (u, v) = (fo.vertices[dj].mors[g1].2, go.vertices[dj].mors[g2].2);
        let (s, t) = (b_obj[gr.cat.src(m)], b_obj[gr.cat.tgt(m)]);
        let found = fg.cat.hom(s, t).iter().copied().find(|&k| {
            let (_, _, u2, v2, w2) = fg.mors[k];
            (u2, v2, w2) == (u, v, w)
        });
        b_mor.push(found.ok_or_else(|| {
            miss(format!(
                "morphism {m} of the Grothendieck side has no preimage"
            ))
        })?);
    }
    let fwd = checked_functor("f↓g -> D≀(f/-×g/-)", &fg.cat, &gr.cat, f_obj, f_mor)?;
    let bwd = checked_functor("D≀(f/-×g/-) -> f↓g", &gr.cat, &fg.cat, b_obj, b_mor)?;
    Ok(IsoWitness::verify(fwd, bwd)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow() -> Arc<FinCat> {
        Arc::new(FinCat::poset(&["a", "b"], |x, y| x <= y).unwrap())
    }

    #[test]
    fn points_into_arrow() {
        let d = arrow();
        let t = Arc::new(FinCat::terminal());
        let f = Functor::constant(&t, &d, 0);
        let g = Functor::constant(&t, &d, 1);
        let w = comma_bk_witnesses(&f, &g).unwrap();
        assert_eq!(w.comma.cat.object_count(), 1);
    }

    #[test]
    fn identities_on_point() {
        let t = Arc::new(FinCat::terminal());
        let id = Functor::identity(&t);
        let w = comma_bk_witnesses(&id, &id).unwrap();
        assert_eq!(
            (w.comma.cat.object_count(), w.comma.cat.morphism_count()),
            (1, 1)
        );
    }

    #[test]
    fn object_count_is_sum_over_d() {
        let d = Arc::new(FinCat::powerset(2));
        let c = arrow();
        let f = Functor::new(
            c.clone(),
            d.clone(),
            vec![0, 1],
            vec![d.id(0), d.hom(0, 1)[0], d.id(1)],
        )
        .unwrap();
        let g = Functor::identity(&d);
        let w = comma_bk_witnesses(&f, &g).unwrap();
        let fo = overcat_diagram(&f);
        let go = overcat_diagram(&g);
        let sum: usize = (0..d.object_count())
            .map(|j| fo.diagram.vertices[j].object_count() * go.diagram.vertices[j].object_count())
            .sum();
        assert_eq!(w.comma.cat.object_count(), sum);
    }
}
