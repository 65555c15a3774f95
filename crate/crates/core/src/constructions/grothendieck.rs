//! The Grothendieck construction `I≀X`, its induced action, and the
//! isomorphism `(I≀X)^H ≅ I^H≀X^H`.

use std::collections::HashMap;
use std::sync::Arc;

use super::witness::{checked_functor, IsoWitness, WitnessFailure};
use crate::equivariant::{fixed_category, GAction, GDiagram};
use crate::fincat::{CatBuilder, CatDiagram, FinCat, Functor};
use crate::groups::Subgroup;

/// `I≀X`: objects `(i, x ∈ X_i)`; a morphism `(i,x) → (j,y)` is `(α, γ)`
/// with `α: i → j` and `γ: X(α)x → y`.
#[derive(Clone, Debug)]
pub struct Grothendieck {
    pub cat: Arc<FinCat>,
    pub objs: Vec<(usize, usize)>,
    /// `(α, x, γ)` per morphism, `x` the source object in `X_i`.
    pub mors: Vec<(usize, usize, usize)>,
    pub projection: Functor,
    obj_index: HashMap<(usize, usize), usize>,
    mor_index: HashMap<(usize, usize, usize), usize>,
}

impl Grothendieck {
    pub fn object_of(&self, i: usize, x: usize) -> Option<usize> {
        self.obj_index.get(&(i, x)).copied()
    }

    pub fn morphism_of(&self, alpha: usize, x: usize, gamma: usize) -> Option<usize> {
        self.mor_index.get(&(alpha, x, gamma)).copied()
    }
}

pub fn grothendieck(d: &CatDiagram) -> Grothendieck {
    let idx = &*d.index;
    let mut b: CatBuilder<(usize, usize), (usize, usize, usize)> = CatBuilder::new();
    for i in 0..idx.object_count() {
        let xi = &d.vertices[i];
        for x in 0..xi.object_count() {
            let o = b.object((i, x));
            b.identity(o, (idx.id(i), x, xi.id(x)));
        }
    }
    for o in 0..b.object_count() {
        let (i, x) = *b.object_label(o);
        for &alpha in idx.out_of(i) {
            let j = idx.tgt(alpha);
            let (e, xj) = (&d.edges[alpha], &d.vertices[j]);
            for &gamma in xj.out_of(e.obj[x]) {
                if idx.is_identity(alpha) && xj.is_identity(gamma) {
                    continue;
                }
                let t = b
                    .object_index(&(j, xj.tgt(gamma)))
                    .expect("object enumerated");
                b.morphism((alpha, x, gamma), o, t);
            }
        }
    }
    let l = b
        .build_named(
            |f, g| {
                let (a1, x, g1) = *f;
                let (a2, _, g2) = *g;
                let j2 = idx.tgt(a2);
                (
                    idx.then(a1, a2),
                    x,
                    d.vertices[j2].then(d.edges[a2].mor[g1], g2),
                )
            },
            |_, &(i, x)| format!("({},{})", idx.object_name(i), d.vertices[i].object_name(x)),
            |_, &(a, x, g)| {
                format!(
                    "({},{})@{}",
                    idx.morphism(a).name,
                    d.vertices[idx.tgt(a)].morphism(g).name,
                    x
                )
            },
        )
        .expect("Grothendieck construction of a diagram is a category");
    let projection = Functor::new_unchecked(
        l.cat.clone(),
        d.index.clone(),
        l.objs.iter().map(|o| o.0).collect(),
        l.mors.iter().map(|m| m.0).collect(),
    );
    let obj_index = l.objs.iter().enumerate().map(|(k, &o)| (o, k)).collect();
    let mor_index = l.mors.iter().enumerate().map(|(k, &m)| (m, k)).collect();
    Grothendieck {
        cat: l.cat,
        objs: l.objs,
        mors: l.mors,
        projection,
        obj_index,
        mor_index,
    }
}

/// The induced action `g·(i,x) = (gi, φ_g x)`, `g·(α,γ) = (gα, φ_g γ)`.
pub fn grothendieck_action(x: &GDiagram, gr: &Grothendieck) -> GAction {
    let a = &x.action;
    let group = a.group().clone();
    let mut obj = Vec::with_capacity(group.order());
    let mut mor = Vec::with_capacity(group.order());
    for g in group.elements() {
        obj.push(
            gr.objs
                .iter()
                .map(|&(i, y)| {
                    gr.object_of(a.obj(g, i), x.phi[g][i].obj[y])
                        .expect("action preserves objects")
                })
                .collect(),
        );
        mor.push(
            gr.mors
                .iter()
                .map(|&(alpha, y, gamma)| {
                    let (i, j) = (x.index().src(alpha), x.index().tgt(alpha));
                    gr.morphism_of(a.mor(g, alpha), x.phi[g][i].obj[y], x.phi[g][j].mor[gamma])
                        .expect("action preserves morphisms")
                })
                .collect(),
        );
    }
    GAction::new(group, gr.cat.clone(), obj, mor)
        .expect("induced action on a Grothendieck construction")
}

/// The relabelling `(I≀X)^H ≅ I^H≀X^H`, verified cell by cell.
pub fn fixed_grothendieck_witness(
    x: &GDiagram,
    h: &Subgroup,
) -> Result<IsoWitness, WitnessFailure> {
    let gr = grothendieck(&x.diagram);
    let action = grothendieck_action(x, &gr);
    let lhs = fixed_category(&action, h);
    let fixed = x.fixed_diagram(h);
    let rhs = grothendieck(&fixed.diagram);
    // original (i, x) ↔ fixed-level indices
    let fobj: HashMap<usize, usize> = fixed
        .index
        .obj
        .iter()
        .enumerate()
        .map(|(k, &i)| (i, k))
        .collect();
    let fmor: HashMap<usize, usize> = fixed
        .index
        .mor
        .iter()
        .enumerate()
        .map(|(k, &m)| (m, k))
        .collect();
    let vobj: Vec<HashMap<usize, usize>> = fixed
        .vertex_maps
        .iter()
        .map(|(om, _)| om.iter().enumerate().map(|(k, &o)| (o, k)).collect())
        .collect();
    let vmor: Vec<HashMap<usize, usize>> = fixed
        .vertex_maps
        .iter()
        .map(|(_, mm)| mm.iter().enumerate().map(|(k, &m)| (m, k)).collect())
        .collect();
    let miss = |what: &str, name: &str| {
        WitnessFailure(format!("{what} `{name}` has no fixed-level counterpart"))
    };

    let mut f_obj = Vec::with_capacity(lhs.obj.len());
    for &o in &lhs.obj {
        let (i, y) = gr.objs[o];
        let name = gr.cat.object_name(o);
        let k = *fobj.get(&i).ok_or_else(|| miss("object", name))?;
        let yk = *vobj[k].get(&y).ok_or_else(|| miss("object", name))?;
        f_obj.push(rhs.object_of(k, yk).ok_or_else(|| miss("object", name))?);
    }
    let mut f_mor = Vec::with_capacity(lhs.mor.len());
    for &m in &lhs.mor {
        let (alpha, y, gamma) = gr.mors[m];
        let name = &gr.cat.morphism(m).name;
        let (i, j) = (x.index().src(alpha), x.index().tgt(alpha));
        let ak = *fmor.get(&alpha).ok_or_else(|| miss("morphism", name))?;
        let (ik, jk) = (fobj[&i], fobj[&j]);
        let yk = *vobj[ik].get(&y).ok_or_else(|| miss("morphism", name))?;
        let gk = *vmor[jk].get(&gamma).ok_or_else(|| miss("morphism", name))?;
        f_mor.push(
            rhs.morphism_of(ak, yk, gk)
                .ok_or_else(|| miss("morphism", name))?,
        );
    }
    let lobj: HashMap<usize, usize> = lhs.obj.iter().enumerate().map(|(k, &o)| (o, k)).collect();
    let lmor: HashMap<usize, usize> = lhs.mor.iter().enumerate().map(|(k, &m)| (m, k)).collect();
    let back = |what: &str, name: &str| {
        WitnessFailure(format!("{what} `{name}` of I^H≀X^H is not H-fixed in I≀X"))
    };
    let mut b_obj = Vec::with_capacity(rhs.objs.len());
    for (o, &(k, yk)) in rhs.objs.iter().enumerate() {
        let (i, y) = (fixed.index.obj[k], fixed.vertex_maps[k].0[yk]);
        let name = rhs.cat.object_name(o);
        let orig = gr.object_of(i, y).ok_or_else(|| back("object", name))?;
        b_obj.push(*lobj.get(&orig).ok_or_else(|| back("object", name))?);
    }
    let mut b_mor = Vec::with_capacity(rhs.mors.len());
    for (m, &(ak, yk, gk)) in rhs.mors.iter().enumerate() {
        let alpha = fixed.index.mor[ak];
        let (ik, jk) = (fixed.index.cat.src(ak), fixed.index.cat.tgt(ak));
        let (y, gamma) = (fixed.vertex_maps[ik].0[yk], fixed.vertex_maps[jk].1[gk]);
        let name = &rhs.cat.morphism(m).name;
        let orig = gr
            .morphism_of(alpha, y, gamma)
            .ok_or_else(|| back("morphism", name))?;
        b_mor.push(*lmor.get(&orig).ok_or_else(|| back("morphism", name))?);
    }
    let fwd = checked_functor("(I≀X)^H -> I^H≀X^H", &lhs.cat, &rhs.cat, f_obj, f_mor)?;
    let bwd = checked_functor("I^H≀X^H -> (I≀X)^H", &rhs.cat, &lhs.cat, b_obj, b_mor)?;
    IsoWitness::verify(fwd, bwd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Group;
    use crate::gsets::GSet;

    fn arrow() -> Arc<FinCat> {
        Arc::new(FinCat::poset(&["a", "b"], |x, y| x <= y).unwrap())
    }

    #[test]
    fn constant_terminal_recovers_index() {
        let i = Arc::new(FinCat::powerset(2));
        let g = grothendieck(&CatDiagram::constant(&i, &Arc::new(FinCat::terminal())));
        assert_eq!(g.cat.object_count(), i.object_count());
        assert_eq!(g.cat.morphism_count(), i.morphism_count());
    }

    #[test]
    fn arrow_with_discrete_fibres() {
        let i = arrow();
        let x2 = Arc::new(FinCat::discrete(&["p", "q"]));
        let swap = Functor::new(x2.clone(), x2.clone(), vec![1, 0], vec![1, 0]).unwrap();
        let d = CatDiagram::new(
            i.clone(),
            vec![x2.clone(), x2.clone()],
            vec![Functor::identity(&x2), swap, Functor::identity(&x2)],
        )
        .unwrap();
        let g = grothendieck(&d);
        assert_eq!(g.cat.object_count(), 4);
        // brute force: pairs (α, γ) with γ out of X(α)x
        let brute: usize = (0..i.morphism_count())
            .map(|a| {
                let j = i.tgt(a);
                (0..d.vertices[i.src(a)].object_count())
                    .map(|x| d.vertices[j].out_of(d.edges[a].obj[x]).len())
                    .sum::<usize>()
            })
            .sum();
        assert_eq!(g.cat.morphism_count(), brute);
    }

    #[test]
    fn fixed_points_of_grothendieck_on_swapped_square() {
        let grp = Group::cyclic(2);
        let j = GSet::regular(&grp);
        let a = GAction::powerset(&j);
        let x = CatDiagram::constant(a.cat(), &arrow());
        let gd = GDiagram::with_trivial_structure(a, x).unwrap();
        for mask in [0b01u64, 0b11] {
            let h = Subgroup::from_mask(&grp, mask).unwrap();
            let w = fixed_grothendieck_witness(&gd, &h).unwrap();
            if mask == 0b01 {
                assert_eq!(w.a.object_count(), 8);
            } else {
                // I^G = {∅, J}
                assert_eq!(w.a.object_count(), 4);
            }
        }
    }

    #[test]
    fn free_swap_has_empty_fixed_points() {
        let grp = Arc::new(Group::cyclic(2));
        let i = Arc::new(FinCat::discrete(&["u", "v"]));
        let a = GAction::new(
            grp.clone(),
            i.clone(),
            vec![vec![0, 1], vec![1, 0]],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        let t = Arc::new(FinCat::terminal());
        let gd = GDiagram::with_trivial_structure(a, CatDiagram::constant(&i, &t)).unwrap();
        let h = Subgroup::from_mask(&grp, 0b11).unwrap();
        let w = fixed_grothendieck_witness(&gd, &h).unwrap();
        assert_eq!((w.a.object_count(), w.b.object_count()), (0, 0));
    }
}
