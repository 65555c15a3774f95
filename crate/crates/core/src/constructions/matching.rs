//! Matching functors `m_U: Π_{u∈U} X_u → Hom((U<I)/−, X_{U<})`, their comma
//! categories `m_U/Φ`, and the actions induced by a G-structure.

use std::sync::Arc;

use thiserror::Error;

use super::hom::{
    hom_action, hom_category, overcat_diagram, overcat_gdiagram, HomCategory, HomError, OverDiagram,
};
use crate::equivariant::{EquivariantError, GAction, GDiagram};
use crate::fincat::{
    comma, product, slice_under, CatDiagram, CatError, Comma, FinCat, Functor, FunctorData,
    Labelled, Slice,
};
use crate::groups::{bits, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Equivariant(#[from] EquivariantError),
    #[error("the given family is not a strict natural transformation")]
    InvalidTransformation,
    #[error("transformation Φ{0} is not fixed by the acting subgroup")]
    NotFixed(usize),
}

/// `m_U` together with everything it is built from.
#[derive(Clone, Debug)]
pub struct Matching {
    /// The objects `U`, in the order of the factors of `dom`.
    pub units: Vec<usize>,
    /// `U<I`.
    pub slice: Slice,
    /// `(U<I)/−`.
    pub k: OverDiagram,
    /// `X_{U<}`.
    pub x: CatDiagram,
    pub hom: HomCategory,
    /// `Π_{u∈U} X_u`, labelled by families of objects and morphisms.
    pub dom: Labelled<Vec<usize>, Vec<usize>>,
    pub functor: Functor,
    terminal: Arc<FinCat>,
}

/// `m_U(x)` is the family of constant functors `α ↦ const X(α)x_{src α}`.
pub fn matching_functor(x: &CatDiagram, units: &[usize]) -> Result<Matching, MatchingError> {
    let mut units = units.to_vec();
    units.sort_unstable();
    units.dedup();
    let slice = slice_under(&x.index, &units, true)?;
    let k = overcat_diagram(&Functor::identity(&slice.cat));
    let xr = x.restrict(&slice.projection);
    let hom = hom_category(&k.diagram, &xr)?;
    let dom = product(
        &units
            .iter()
            .map(|&u| x.vertices[u].clone())
            .collect::<Vec<_>>(),
    );
    let idx = &*x.index;
    let sc = &*slice.cat;
    let pos: Vec<usize> = slice
        .objs
        .iter()
        .map(|&a| {
            units
                .iter()
                .position(|&u| u == idx.src(a))
                .expect("α starts in U")
        })
        .collect();

    let family = |a: &[usize]| -> Vec<FunctorData> {
        (0..sc.object_count())
            .map(|s| {
                let alpha = slice.objs[s];
                let y = x.edges[alpha].obj[a[pos[s]]];
                let v = &k.diagram.vertices[s];
                FunctorData {
                    obj: vec![y; v.object_count()],
                    mor: vec![x.vertices[idx.tgt(alpha)].id(y); v.morphism_count()],
                }
            })
            .collect()
    };
    let obj: Vec<usize> = dom
        .objs
        .iter()
        .map(|a| {
            hom.object_of(&family(a))
                .expect("constant families are transformations")
        })
        .collect();
    let mor = dom
        .mors
        .iter()
        .enumerate()
        .map(|(m, w)| {
            let comps: Vec<Vec<usize>> = (0..sc.object_count())
                .map(|s| {
                    vec![
                        x.edges[slice.objs[s]].mor[w[pos[s]]];
                        k.diagram.vertices[s].object_count()
                    ]
                })
                .collect();
            hom.morphism_of(obj[dom.cat.src(m)], obj[dom.cat.tgt(m)], &comps)
                .expect("constant families are modifications")
        })
        .collect();
    let functor = Functor::new_unchecked(dom.cat.clone(), hom.cat().clone(), obj, mor);
    Ok(Matching {
        units,
        slice,
        k,
        x: xr,
        hom,
        dom,
        functor,
        terminal: Arc::new(FinCat::terminal()),
    })
}

impl Matching {
    /// The comma category `m_U/Φ`: objects `(x, 0, λ: m_U(x) → Φ)`.
    pub fn over(&self, phi: usize) -> Comma {
        let at = Functor::constant(&self.terminal, self.hom.cat(), phi);
        comma(&self.functor, &at).expect("terminal has its one object")
    }

    /// The object of `Hom((U<I)/−, X_{U<})` given by a family of functors.
    pub fn transformation(&self, family: &[FunctorData]) -> Result<usize, MatchingError> {
        self.hom
            .object_of(family)
            .ok_or(MatchingError::InvalidTransformation)
    }

    /// Postcomposition `m_U/Φ → m_U/Φ'` with `Λ: Φ → Φ'`.
    pub fn postcompose(&self, src: &Comma, tgt: &Comma, lambda: usize) -> Functor {
        let h = &**self.hom.cat();
        let obj: Vec<usize> = src
            .objs
            .iter()
            .map(|&(a, b, g)| {
                tgt.object_of(a, b, h.then(g, lambda))
                    .expect("postcomposition stays in the comma")
            })
            .collect();
        let mor = src
            .mors
            .iter()
            .map(|&(s, t, u, v)| {
                let (s2, t2) = (obj[s], obj[t]);
                tgt.cat
                    .hom(s2, t2)
                    .iter()
                    .copied()
                    .find(|&k| tgt.mors[k] == (s2, t2, u, v))
                    .expect("postcomposition stays in the comma")
            })
            .collect();
        Functor::new_unchecked(src.cat.clone(), tgt.cat.clone(), obj, mor)
    }
}

/// The actions of the setwise stabilizer `G_U` on `Π X_u` and on the
/// Hom-category, under which `m_U` is equivariant. The group is `G_U`
/// re-indexed as a group; `elems` maps its elements into `G`.
#[derive(Clone, Debug)]
pub struct MatchingAction {
    pub elems: Vec<usize>,
    pub slice: GAction,
    pub dom: GAction,
    pub hom: GAction,
}

/// `(g·x)_{gu} = φ_{g,u}(x_u)` on `Π X_u` and conjugation on Hom.
pub fn matching_action(x: &GDiagram, m: &Matching) -> Result<MatchingAction, MatchingError> {
    let a = &x.action;
    let group = a.group();
    let umask: u64 = m.units.iter().map(|&u| 1u64 << u).sum();
    let stab = group
        .elements()
        .filter(|&g| m.units.iter().map(|&u| 1u64 << a.obj(g, u)).sum::<u64>() == umask)
        .fold(0u64, |acc, g| acc | (1 << g));
    let gu = Subgroup::from_mask(group, stab).map_err(EquivariantError::from)?;
    let xr = x.restrict_group(&gu);
    let (_, elems) = a.restrict(&gu);
    let slice = xr.action.on_slice(&m.slice)?;
    let (_, kg) = overcat_gdiagram(&Functor::identity(&m.slice.cat), &slice, &slice)?;
    let xg = xr.pullback(&m.slice.projection, &slice)?;
    let hom = hom_action(&kg, &xg, &m.hom)?;

    let pos = |u: usize| {
        m.units
            .iter()
            .position(|&v| v == u)
            .expect("G_U preserves U")
    };
    let sub = xr.action.group().clone();
    let mut obj = Vec::with_capacity(sub.order());
    let mut mor = Vec::with_capacity(sub.order());
    for g in sub.elements() {
        let move_family = |fam: &[usize], on_mor: bool| -> Vec<usize> {
            let mut out = vec![0; fam.len()];
            for (p, &u) in m.units.iter().enumerate() {
                let phi = &xr.phi[g][u];
                out[pos(xr.action.obj(g, u))] = if on_mor {
                    phi.mor[fam[p]]
                } else {
                    phi.obj[fam[p]]
                };
            }
            out
        };
        obj.push(
            m.dom
                .objs
                .iter()
                .map(|f| {
                    m.dom
                        .obj(&move_family(f, false))
                        .expect("φ preserves objects")
                })
                .collect(),
        );
        mor.push(
            m.dom
                .mors
                .iter()
                .map(|f| {
                    m.dom
                        .mor(&move_family(f, true))
                        .expect("φ preserves morphisms")
                })
                .collect(),
        );
    }
    let dom = GAction::new(sub, m.dom.cat.clone(), obj, mor)?;
    if !dom.is_equivariant(&m.functor, &hom) {
        return Err(EquivariantError::NotEquivariant.into());
    }
    Ok(MatchingAction {
        elems,
        slice,
        dom,
        hom,
    })
}

impl MatchingAction {
    /// Elements of `G_U` (in its own indexing) fixing `Φ`.
    pub fn stabilizer(&self, phi: usize) -> Subgroup {
        let g = self.hom.group();
        let mask = g
            .elements()
            .filter(|&e| self.hom.obj(e, phi) == phi)
            .fold(0u64, |acc, e| acc | (1 << e));
        Subgroup::from_mask(g, mask).expect("stabilizers are subgroups")
    }

    /// The action of `h ≤ G_U` on `m_U/Φ`, `g·(x, λ) = (g·x, g·λ)`, re-indexed
    /// by `h` as a group. Every element of `h` must fix `Φ`.
    pub fn on_comma(&self, phi: usize, c: &Comma, h: &Subgroup) -> Result<GAction, MatchingError> {
        if bits(h.mask()).any(|g| self.hom.obj(g, phi) != phi) {
            return Err(MatchingError::NotFixed(phi));
        }
        let (dom, _) = self.dom.restrict(h);
        let (hom, _) = self.hom.restrict(h);
        let sub = dom.group().clone();
        let mut obj = Vec::with_capacity(sub.order());
        let mut mor = Vec::with_capacity(sub.order());
        for g in sub.elements() {
            let o: Vec<usize> = c
                .objs
                .iter()
                .map(|&(a, b, l)| {
                    c.object_of(dom.obj(g, a), b, hom.mor(g, l))
                        .expect("action preserves m/Φ")
                })
                .collect();
            let mm = c
                .mors
                .iter()
                .map(|&(s, t, u, v)| {
                    let key = (o[s], o[t], dom.mor(g, u), v);
                    c.cat
                        .hom(o[s], o[t])
                        .iter()
                        .copied()
                        .find(|&k| c.mors[k] == key)
                        .expect("action preserves m/Φ")
                })
                .collect();
            obj.push(o);
            mor.push(mm);
        }
        Ok(GAction::new(sub, c.cat.clone(), obj, mor)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::over_category;
    use crate::groups::Group;
    use crate::gsets::GSet;

    fn arrow() -> Arc<FinCat> {
        Arc::new(FinCat::poset(&["a", "b"], |x, y| x <= y).unwrap())
    }

    /// The one-arrow cube `X_∅ = C → D = X_{1}`.
    fn one_cube(f: &Functor) -> CatDiagram {
        let i = Arc::new(FinCat::powerset(1));
        let m = i.hom(0, 1)[0];
        let mut edges = vec![Functor::identity(&f.dom); 3];
        edges[i.id(1)] = Functor::identity(&f.cod);
        edges[m] = f.clone();
        CatDiagram::new(i, vec![f.dom.clone(), f.cod.clone()], edges).unwrap()
    }

    #[test]
    fn maximal_object_matches_to_terminal() {
        let c = arrow();
        let x = one_cube(&Functor::identity(&c));
        let m = matching_functor(&x, &[1]).unwrap();
        assert_eq!(m.hom.cat().object_count(), 1);
        let over = m.over(0);
        assert_eq!((over.cat.object_count(), over.cat.morphism_count()), (2, 3));
    }

    #[test]
    fn one_cube_comma_is_over_category() {
        let c = Arc::new(FinCat::powerset(2));
        let d = arrow();
        // F: P(2) → {a<b}, ∅ ↦ a, everything else ↦ b
        let obj = vec![0, 1, 1, 1];
        let mor = (0..c.morphism_count())
            .map(|k| d.hom(obj[c.src(k)], obj[c.tgt(k)])[0])
            .collect();
        let f = Functor::new(c.clone(), d.clone(), obj, mor).unwrap();
        let x = one_cube(&f);
        let m = matching_functor(&x, &[0]).unwrap();
        assert_eq!(m.hom.cat().object_count(), d.object_count());
        for phi in 0..m.hom.cat().object_count() {
            // Φ is determined by its value at the one vertex
            let dv = m.hom.family(phi)[0].obj[0];
            let over = m.over(phi);
            let fd = over_category(&f, dv).unwrap();
            assert_eq!(over.cat.object_count(), fd.cat.object_count());
            assert_eq!(over.cat.morphism_count(), fd.cat.morphism_count());
        }
    }

    #[test]
    fn postcomposition_is_a_functor() {
        let c = Arc::new(FinCat::powerset(2));
        let x = CatDiagram::constant(&c, &arrow());
        let m = matching_functor(&x, &[0]).unwrap();
        let h = m.hom.cat();
        for l in 0..h.morphism_count() {
            let (s, t) = (m.over(h.src(l)), m.over(h.tgt(l)));
            m.postcompose(&s, &t, l).validate().unwrap();
        }
    }

    #[test]
    fn swap_acts_on_matching_of_empty_set() {
        let grp = Group::cyclic(2);
        let a = GAction::powerset(&GSet::regular(&grp));
        let x =
            GDiagram::with_trivial_structure(a.clone(), CatDiagram::constant(a.cat(), &arrow()))
                .unwrap();
        let m = matching_functor(&x.diagram, &[0]).unwrap();
        let act = matching_action(&x, &m).unwrap();
        assert_eq!(act.elems.len(), 2);
        for phi in 0..m.hom.cat().object_count() {
            let stab = act.stabilizer(phi);
            let c = m.over(phi);
            act.on_comma(phi, &c, &stab).unwrap().validate().unwrap();
        }
    }
}
