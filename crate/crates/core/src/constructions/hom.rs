//! The category `Hom(K, X)` of strict natural transformations between
//! diagrams of categories, its conjugation action, and the over-category
//! diagrams `F/−`.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::equivariant::{EquivariantError, GAction, GDiagram};
use crate::fincat::{
    all_functors, all_nat_trans, over_category, CatBuilder, CatDiagram, FinCat, Functor,
    FunctorData, Labelled, OverCat,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error("diagrams are indexed by different categories")]
    IndexMismatch,
    #[error("too many candidate families ({0}); raise the cap or shrink the input")]
    TooLarge(usize),
}

/// Upper bound on object families examined while enumerating `Hom(K, X)`.
pub const DEFAULT_FAMILY_CAP: usize = 2_000_000;

/// A modification `Λ: Φ ⇒ Φ'`: per index object `i`, the components of a
/// natural transformation `Φ_i ⇒ Φ'_i`.
pub type ModLabel = (usize, usize, Vec<Vec<usize>>);

#[derive(Clone, Debug)]
pub struct HomCategory {
    pub k: CatDiagram,
    pub x: CatDiagram,
    pub labels: Labelled<Vec<FunctorData>, ModLabel>,
}

impl HomCategory {
    pub fn cat(&self) -> &Arc<FinCat> {
        &self.labels.cat
    }

    pub fn family(&self, o: usize) -> &[FunctorData] {
        &self.labels.objs[o]
    }

    pub fn modification(&self, m: usize) -> &ModLabel {
        &self.labels.mors[m]
    }

    pub fn object_of(&self, family: &[FunctorData]) -> Option<usize> {
        self.labels.obj(&family.to_vec())
    }

    pub fn morphism_of(&self, src: usize, tgt: usize, comps: &[Vec<usize>]) -> Option<usize> {
        self.labels.mor(&(src, tgt, comps.to_vec()))
    }
}

fn compatible_functors(
    k: &CatDiagram,
    x: &CatDiagram,
    alpha: usize,
    s: &FunctorData,
    t: &FunctorData,
) -> bool {
    let (ke, xe) = (&k.edges[alpha], &x.edges[alpha]);
    (0..s.obj.len()).all(|o| xe.obj[s.obj[o]] == t.obj[ke.obj[o]])
        && (0..s.mor.len()).all(|m| xe.mor[s.mor[m]] == t.mor[ke.mor[m]])
}

fn compatible_components(
    k: &CatDiagram,
    x: &CatDiagram,
    alpha: usize,
    s: &[usize],
    t: &[usize],
) -> bool {
    let (ke, xe) = (&k.edges[alpha], &x.edges[alpha]);
    (0..s.len()).all(|o| xe.mor[s[o]] == t[ke.obj[o]])
}

/// Backtracking over one choice per index object, with each edge checked as
/// soon as both ends are chosen.
fn families<T: Clone>(
    index: &FinCat,
    choices: &[Vec<T>],
    ok: &dyn Fn(usize, &T, &T) -> bool,
    cap: usize,
) -> Result<Vec<Vec<T>>, HomError> {
    let n = index.object_count();
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for m in index.non_identities() {
        checks[index.src(m).max(index.tgt(m))].push(m);
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::with_capacity(n);
    let mut steps = 0usize;
    fn go<T: Clone>(
        index: &FinCat,
        choices: &[Vec<T>],
        ok: &dyn Fn(usize, &T, &T) -> bool,
        checks: &[Vec<usize>],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<T>>,
        steps: &mut usize,
        cap: usize,
    ) -> Result<(), HomError> {
        let k = cur.len();
        if k == choices.len() {
            out.push(
                cur.iter()
                    .enumerate()
                    .map(|(i, &c)| choices[i][c].clone())
                    .collect(),
            );
            return Ok(());
        }
        for c in 0..choices[k].len() {
            *steps += 1;
            if *steps > cap {
                return Err(HomError::TooLarge(*steps));
            }
            cur.push(c);
            let good = checks[k].iter().all(|&m| {
                let (s, t) = (index.src(m), index.tgt(m));
                ok(m, &choices[s][cur[s]], &choices[t][cur[t]])
            });
            if good {
                go(index, choices, ok, checks, cur, out, steps, cap)?;
            }
            cur.pop();
        }
        Ok(())
    }
    go(
        index, choices, ok, &checks, &mut cur, &mut out, &mut steps, cap,
    )?;
    Ok(out)
}

pub fn hom_category(k: &CatDiagram, x: &CatDiagram) -> Result<HomCategory, HomError> {
    hom_category_capped(k, x, DEFAULT_FAMILY_CAP)
}

pub fn hom_category_capped(
    k: &CatDiagram,
    x: &CatDiagram,
    cap: usize,
) -> Result<HomCategory, HomError> {
    if !(Arc::ptr_eq(&k.index, &x.index) || *k.index == *x.index) {
        return Err(HomError::IndexMismatch);
    }
    let index = &*k.index;
    let n = index.object_count();
    let cands: Vec<Vec<FunctorData>> = (0..n)
        .map(|i| all_functors(&k.vertices[i], &x.vertices[i]))
        .collect();
    let objs = families(
        index,
        &cands,
        &|m, s, t| compatible_functors(k, x, m, s, t),
        cap,
    )?;

    let mut b: CatBuilder<Vec<FunctorData>, ModLabel> = CatBuilder::new();
    for f in &objs {
        let o = b.object(f.clone());
        let ids = f
            .iter()
            .enumerate()
            .map(|(i, fi)| fi.obj.iter().map(|&y| x.vertices[i].id(y)).collect())
            .collect();
        b.identity(o, (o, o, ids));
    }
    let mut nat_cache: HashMap<(usize, FunctorData, FunctorData), Vec<Vec<usize>>> = HashMap::new();
    for (s, fs) in objs.iter().enumerate() {
        for (t, ft) in objs.iter().enumerate() {
            let mut per: Vec<Vec<Vec<usize>>> = Vec::with_capacity(n);
            for i in 0..n {
                let key = (i, fs[i].clone(), ft[i].clone());
                let nts = nat_cache
                    .entry(key)
                    .or_insert_with(|| {
                        all_nat_trans(&k.vertices[i], &x.vertices[i], &fs[i], &ft[i])
                    })
                    .clone();
                if nts.is_empty() {
                    break;
                }
                per.push(nts);
            }
            if per.len() < n {
                continue;
            }
            let mods = families(
                index,
                &per,
                &|m, a, c| compatible_components(k, x, m, a, c),
                cap,
            )?;
            for comps in mods {
                if s == t
                    && comps
                        .iter()
                        .enumerate()
                        .all(|(i, c)| c.iter().all(|&m| x.vertices[i].is_identity(m)))
                {
                    continue;
                }
                b.morphism((s, t, comps), s, t);
            }
        }
    }
    let labels = b
        .build_named(
            |f, g| {
                let comps =
                    f.2.iter()
                        .zip(&g.2)
                        .enumerate()
                        .map(|(i, (a, c))| {
                            a.iter()
                                .zip(c)
                                .map(|(&p, &q)| x.vertices[i].then(p, q))
                                .collect()
                        })
                        .collect();
                (f.0, g.1, comps)
            },
            |o, _| format!("Φ{o}"),
            |m, l| format!("Λ{m}:Φ{}->Φ{}", l.0, l.1),
        )
        .expect("natural transformations and modifications form a category");
    Ok(HomCategory {
        k: k.clone(),
        x: x.clone(),
        labels,
    })
}

/// Conjugation: `(g·Φ)_i = φ^X_{g,g⁻¹i} ∘ Φ_{g⁻¹i} ∘ φ^K_{g⁻¹,i}`, and the
/// same formula on the components of modifications.
pub fn hom_action(
    k: &GDiagram,
    x: &GDiagram,
    hom: &HomCategory,
) -> Result<GAction, EquivariantError> {
    let group = k.group().clone();
    let a = &k.action;
    let n = hom.k.index.object_count();
    let mut obj_tab = Vec::with_capacity(group.order());
    let mut mor_tab = Vec::with_capacity(group.order());
    for g in group.elements() {
        let gi = group.inv(g);
        let act_family = |f: &[FunctorData]| -> Vec<FunctorData> {
            (0..n)
                .map(|i| {
                    let src = a.obj(gi, i);
                    let (pk, px) = (&k.phi[gi][i], &x.phi[g][src]);
                    FunctorData {
                        obj: pk.obj.iter().map(|&o| px.obj[f[src].obj[o]]).collect(),
                        mor: pk.mor.iter().map(|&m| px.mor[f[src].mor[m]]).collect(),
                    }
                })
                .collect()
        };
        let objs: Option<Vec<usize>> = hom
            .labels
            .objs
            .iter()
            .map(|f| hom.object_of(&act_family(f)))
            .collect();
        let objs = objs.ok_or(EquivariantError::NotInvariant)?;
        let mors: Option<Vec<usize>> = hom
            .labels
            .mors
            .iter()
            .map(|(s, t, comps)| {
                let c: Vec<Vec<usize>> = (0..n)
                    .map(|i| {
                        let src = a.obj(gi, i);
                        let (pk, px) = (&k.phi[gi][i], &x.phi[g][src]);
                        pk.obj.iter().map(|&o| px.mor[comps[src][o]]).collect()
                    })
                    .collect();
                hom.morphism_of(objs[*s], objs[*t], &c)
            })
            .collect();
        obj_tab.push(objs);
        mor_tab.push(mors.ok_or(EquivariantError::NotInvariant)?);
    }
    GAction::new(group, hom.cat().clone(), obj_tab, mor_tab)
}

/// `F/−: I → Cat` for `F: C → I`, with edges by postcomposition.
#[derive(Clone, Debug)]
pub struct OverDiagram {
    pub diagram: CatDiagram,
    pub vertices: Vec<OverCat>,
    obj_index: Vec<HashMap<(usize, usize), usize>>,
    mor_index: Vec<HashMap<(usize, usize, usize), usize>>,
}

impl OverDiagram {
    /// Object `(c, α: F c → j)` of `F/j`.
    pub fn object_of(&self, j: usize, c: usize, alpha: usize) -> Option<usize> {
        self.obj_index[j].get(&(c, alpha)).copied()
    }

    /// The morphism `o → t` of `F/j` lying over `u`.
    pub fn morphism_of(&self, j: usize, o: usize, t: usize, u: usize) -> Option<usize> {
        self.mor_index[j].get(&(o, t, u)).copied()
    }
}

pub fn overcat_diagram(f: &Functor) -> OverDiagram {
    let i = &*f.cod;
    let vertices: Vec<OverCat> = (0..i.object_count())
        .map(|j| over_category(f, j).expect("object in range"))
        .collect();
    let obj_index: Vec<HashMap<(usize, usize), usize>> = vertices
        .iter()
        .map(|v| v.objs.iter().enumerate().map(|(k, &o)| (o, k)).collect())
        .collect();
    let mor_index: Vec<HashMap<(usize, usize, usize), usize>> = vertices
        .iter()
        .map(|v| v.mors.iter().enumerate().map(|(k, &m)| (m, k)).collect())
        .collect();
    let edges = (0..i.morphism_count())
        .map(|beta| {
            let (j, j2) = (i.src(beta), i.tgt(beta));
            let (v, v2) = (&vertices[j], &vertices[j2]);
            let obj: Vec<usize> = v
                .objs
                .iter()
                .map(|&(c, a)| obj_index[j2][&(c, i.then(a, beta))])
                .collect();
            let mor = v
                .mors
                .iter()
                .map(|&(o, t, u)| mor_index[j2][&(obj[o], obj[t], u)])
                .collect();
            Functor::new_unchecked(v.cat.clone(), v2.cat.clone(), obj, mor)
        })
        .collect();
    let diagram = CatDiagram {
        index: f.cod.clone(),
        vertices: vertices.iter().map(|v| v.cat.clone()).collect(),
        edges,
    };
    OverDiagram {
        diagram,
        vertices,
        obj_index,
        mor_index,
    }
}

/// `F/−` with its structure maps `(c, α) ↦ (gc, gα)` for an equivariant `F`.
pub fn overcat_gdiagram(
    f: &Functor,
    dom: &GAction,
    cod: &GAction,
) -> Result<(OverDiagram, GDiagram), EquivariantError> {
    if !dom.is_equivariant(f, cod) {
        return Err(EquivariantError::NotEquivariant);
    }
    let od = overcat_diagram(f);
    let group = cod.group();
    let i = &*f.cod;
    let phi = group
        .elements()
        .map(|g| {
            (0..i.object_count())
                .map(|j| {
                    let gj = cod.obj(g, j);
                    let v = &od.vertices[j];
                    let obj: Vec<usize> = v
                        .objs
                        .iter()
                        .map(|&(c, a)| {
                            od.object_of(gj, dom.obj(g, c), cod.mor(g, a))
                                .expect("action preserves F/-")
                        })
                        .collect();
                    let mor = v
                        .mors
                        .iter()
                        .map(|&(o, t, u)| {
                            od.morphism_of(gj, obj[o], obj[t], dom.mor(g, u))
                                .expect("action preserves F/-")
                        })
                        .collect();
                    Functor::new_unchecked(v.cat.clone(), od.vertices[gj].cat.clone(), obj, mor)
                })
                .collect()
        })
        .collect();
    let gd = GDiagram::new(cod.clone(), od.diagram.clone(), phi)?;
    Ok((od, gd))
}

/// `I/−` with its natural structure.
pub fn slash_gdiagram(a: &GAction) -> (OverDiagram, GDiagram) {
    overcat_gdiagram(&Functor::identity(a.cat()), a, a).expect("identity is equivariant")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::product;
    use crate::groups::Group;
    use crate::gsets::GSet;

    fn arrow() -> Arc<FinCat> {
        Arc::new(FinCat::poset(&["a", "b"], |x, y| x <= y).unwrap())
    }

    #[test]
    fn overcat_vertex_sizes() {
        let i = Arc::new(FinCat::powerset(2));
        let od = overcat_diagram(&Functor::identity(&i));
        let sizes: Vec<usize> = od
            .diagram
            .vertices
            .iter()
            .map(|v| v.object_count())
            .collect();
        assert_eq!(sizes, vec![1, 2, 2, 4]);
        od.diagram.validate().unwrap();
    }

    #[test]
    fn overcat_structure_validates() {
        let grp = Group::cyclic(2);
        let a = GAction::powerset(&GSet::regular(&grp));
        let (_, gd) = slash_gdiagram(&a);
        gd.validate().unwrap();
    }

    #[test]
    fn hom_over_terminal_index_is_vertex() {
        let t = Arc::new(FinCat::terminal());
        let x = CatDiagram::constant(&t, &arrow());
        let k = overcat_diagram(&Functor::identity(&t)).diagram;
        let h = hom_category(&k, &x).unwrap();
        assert_eq!(h.cat().object_count(), 2);
        assert_eq!(h.cat().morphism_count(), 3);
    }

    /// Brute force over all pairs of functor families.
    #[test]
    fn hom_objects_match_brute_force() {
        let i = arrow();
        let c = arrow();
        // K = I/−, X: a ↦ C, b ↦ C×C via the diagonal
        let k = overcat_diagram(&Functor::identity(&i)).diagram;
        let p = product(&[c.clone(), c.clone()]);
        let diag = Functor::new(
            c.clone(),
            p.cat.clone(),
            (0..c.object_count())
                .map(|o| p.obj(&vec![o, o]).unwrap())
                .collect(),
            (0..c.morphism_count())
                .map(|m| p.mor(&vec![m, m]).unwrap())
                .collect(),
        )
        .unwrap();
        let x = CatDiagram::new(
            i.clone(),
            vec![c.clone(), p.cat.clone()],
            vec![Functor::identity(&c), diag, Functor::identity(&p.cat)],
        )
        .unwrap();
        let h = hom_category(&k, &x).unwrap();
        let f0 = all_functors(&k.vertices[0], &x.vertices[0]);
        let f1 = all_functors(&k.vertices[1], &x.vertices[1]);
        let mut brute = 0;
        for a in &f0 {
            for b in &f1 {
                let ok = (0..i.morphism_count()).all(|m| {
                    let (s, t) = (i.src(m), i.tgt(m));
                    let fam = [a, b];
                    compatible_functors(&k, &x, m, fam[s], fam[t])
                });
                if ok {
                    brute += 1;
                }
            }
        }
        assert_eq!(h.cat().object_count(), brute);
    }

    #[test]
    fn conjugation_action_validates() {
        let grp = Group::cyclic(2);
        let a = GAction::powerset(&GSet::regular(&grp));
        let (_, k) = slash_gdiagram(&a);
        let x =
            GDiagram::with_trivial_structure(a.clone(), CatDiagram::constant(a.cat(), &arrow()))
                .unwrap();
        let h = hom_category(&k.diagram, &x.diagram).unwrap();
        let act = hom_action(&k, &x, &h).unwrap();
        act.validate().unwrap();
    }
}
