//! Group actions on finite categories, G-diagrams of categories, fixed
//! points, the orbit category, twisted arrows and transport along orbit maps.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{IsoWitness, WitnessFailure};
use crate::fincat::{
    CatBuilder, CatDiagram, CatError, DiagramError, FinCat, Functor, FunctorError, Slice,
};
use crate::groups::{bits, Group, GroupError, Subgroup, SubgroupLattice};
use crate::gsets::GSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquivariantError {
    #[error("action or structure data has the wrong shape")]
    Shape,
    #[error("element `{0}` does not act by an automorphism")]
    NotAutomorphism(String),
    #[error("identity element acts non-trivially")]
    IdentityNotTrivial,
    #[error("action is not compatible with multiplication at g=`{g}`, h=`{h}`")]
    NotAnAction { g: String, h: String },
    #[error("phi of the identity element is not the identity at `{object}`")]
    UnitAxiomFailure { object: String },
    #[error("cocycle axiom fails for g=`{g}`, h=`{h}` at `{object}`")]
    CocycleFailure {
        g: String,
        h: String,
        object: String,
    },
    #[error("phi of `{g}` at `{object}` is not a functor X_i -> X_gi: {source}")]
    StructureMap {
        g: String,
        object: String,
        source: FunctorError,
    },
    #[error("phi of `{g}` is not natural at `{morphism}`")]
    NotNatural { g: String, morphism: String },
    #[error("`{coset}` does not define a map G/{from} -> G/{to}")]
    InvalidCoset {
        coset: String,
        from: String,
        to: String,
    },
    #[error("diagram index or group differs from the acting category")]
    IndexMismatch,
    #[error("subset is not invariant under the acting group")]
    NotInvariant,
    #[error("functor is not equivariant")]
    NotEquivariant,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// `G` acting on a finite category by automorphisms, stored as object and
/// morphism permutations per element.
#[derive(Clone, Debug)]
pub struct GAction {
    group: Arc<Group>,
    cat: Arc<FinCat>,
    obj: Vec<Vec<usize>>,
    mor: Vec<Vec<usize>>,
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter()
        .all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

impl GAction {
    pub fn new(
        group: Arc<Group>,
        cat: Arc<FinCat>,
        obj: Vec<Vec<usize>>,
        mor: Vec<Vec<usize>>,
    ) -> Result<GAction, EquivariantError> {
        let a = GAction {
            group,
            cat,
            obj,
            mor,
        };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<(), EquivariantError> {
        let (g, c) = (&*self.group, &*self.cat);
        if self.obj.len() != g.order()
            || self.mor.len() != g.order()
            || self.obj.iter().any(|p| p.len() != c.object_count())
            || self.mor.iter().any(|p| p.len() != c.morphism_count())
        {
            return Err(EquivariantError::Shape);
        }
        for x in g.elements() {
            if !is_permutation(&self.obj[x])
                || !is_permutation(&self.mor[x])
                || self.functor(x).validate().is_err()
            {
                return Err(EquivariantError::NotAutomorphism(g.name(x).to_string()));
            }
        }
        let e = g.identity();
        if self.obj[e].iter().enumerate().any(|(i, &o)| i != o)
            || self.mor[e].iter().enumerate().any(|(i, &m)| i != m)
        {
            return Err(EquivariantError::IdentityNotTrivial);
        }
        for x in g.elements() {
            for y in g.elements() {
                let yx = g.mul(y, x);
                let ok = (0..c.object_count())
                    .all(|o| self.obj[y][self.obj[x][o]] == self.obj[yx][o])
                    && (0..c.morphism_count())
                        .all(|m| self.mor[y][self.mor[x][m]] == self.mor[yx][m]);
                if !ok {
                    return Err(EquivariantError::NotAnAction {
                        g: g.name(x).into(),
                        h: g.name(y).into(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn trivial(group: Arc<Group>, cat: Arc<FinCat>) -> GAction {
        let obj = vec![(0..cat.object_count()).collect(); group.order()];
        let mor = vec![(0..cat.morphism_count()).collect(); group.order()];
        GAction {
            group,
            cat,
            obj,
            mor,
        }
    }

    /// The action on `P(J)` (objects are bitmasks in increasing order).
    pub fn powerset(j: &GSet) -> GAction {
        let cat = Arc::new(FinCat::powerset(j.len()));
        GAction::on_poset_of_masks(j, cat, (0..(1u64 << j.len())).collect())
    }

    /// The action on the poset of the given subsets of `J`, which must be
    /// closed under the action and listed in the object order of `cat`.
    pub fn on_poset_of_masks(j: &GSet, cat: Arc<FinCat>, masks: Vec<u64>) -> GAction {
        let group = Arc::new(j.group().clone());
        let pos: std::collections::HashMap<u64, usize> =
            masks.iter().enumerate().map(|(k, &m)| (m, k)).collect();
        let obj: Vec<Vec<usize>> = group
            .elements()
            .map(|g| masks.iter().map(|&m| pos[&j.act_mask(g, m)]).collect())
            .collect();
        let mor = group
            .elements()
            .map(|g| {
                (0..cat.morphism_count())
                    .map(|f| cat.hom(obj[g][cat.src(f)], obj[g][cat.tgt(f)])[0])
                    .collect()
            })
            .collect();
        GAction {
            group,
            cat,
            obj,
            mor,
        }
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn obj(&self, g: usize, o: usize) -> usize {
        self.obj[g][o]
    }

    pub fn mor(&self, g: usize, m: usize) -> usize {
        self.mor[g][m]
    }

    pub fn obj_table(&self) -> &[Vec<usize>] {
        &self.obj
    }

    pub fn mor_table(&self) -> &[Vec<usize>] {
        &self.mor
    }

    pub fn functor(&self, g: usize) -> Functor {
        Functor::new_unchecked(
            self.cat.clone(),
            self.cat.clone(),
            self.obj[g].clone(),
            self.mor[g].clone(),
        )
    }

    /// The isotropy group `G_i` as a bitmask.
    pub fn isotropy(&self, o: usize) -> u64 {
        self.group
            .elements()
            .filter(|&g| self.obj[g][o] == o)
            .fold(0, |m, g| m | (1u64 << g))
    }

    pub fn fixes_object(&self, h: u64, o: usize) -> bool {
        bits(h).all(|g| self.obj[g][o] == o)
    }

    pub fn fixes_morphism(&self, h: u64, m: usize) -> bool {
        bits(h).all(|g| self.mor[g][m] == m)
    }

    /// The same category with the action restricted to `h`, re-indexed by
    /// `h` as a group; also returns the inclusion of elements.
    pub fn restrict(&self, h: &Subgroup) -> (GAction, Vec<usize>) {
        let (sub, elems) = self.group.restrict(h);
        let a = GAction {
            group: Arc::new(sub),
            cat: self.cat.clone(),
            obj: elems.iter().map(|&g| self.obj[g].clone()).collect(),
            mor: elems.iter().map(|&g| self.mor[g].clone()).collect(),
        };
        (a, elems)
    }

    /// Whether `f: self.cat → other.cat` commutes with both actions (same group).
    pub fn is_equivariant(&self, f: &Functor, other: &GAction) -> bool {
        self.group.elements().all(|g| {
            (0..self.cat.object_count()).all(|o| f.obj[self.obj[g][o]] == other.obj[g][f.obj[o]])
                && (0..self.cat.morphism_count())
                    .all(|m| f.mor[self.mor[g][m]] == other.mor[g][f.mor[m]])
        })
    }

    /// The induced action on `U≤I` or `U<I`: `g·α = gα`. `U` must be
    /// invariant under the acting group.
    pub fn on_slice(&self, slice: &Slice) -> Result<GAction, EquivariantError> {
        let c = &*slice.cat;
        let mut obj = Vec::with_capacity(self.group.order());
        let mut mor = Vec::with_capacity(self.group.order());
        for g in self.group.elements() {
            let o: Option<Vec<usize>> = slice
                .objs
                .iter()
                .map(|&a| slice.object_of(self.mor[g][a]))
                .collect();
            let o = o.ok_or(EquivariantError::NotInvariant)?;
            let m: Option<Vec<usize>> = (0..c.morphism_count())
                .map(|k| {
                    let v = self.mor[g][slice.mors[k].1];
                    c.hom(o[c.src(k)], o[c.tgt(k)])
                        .iter()
                        .copied()
                        .find(|&x| slice.mors[x].1 == v)
                })
                .collect();
            obj.push(o);
            mor.push(m.ok_or(EquivariantError::NotInvariant)?);
        }
        GAction::new(self.group.clone(), slice.cat.clone(), obj, mor)
    }

    pub fn to_spec(&self) -> GActionSpec {
        let g = &*self.group;
        GActionSpec {
            objects: g
                .elements()
                .map(|x| (g.name(x).to_string(), self.obj[x].clone()))
                .collect(),
            morphisms: g
                .elements()
                .map(|x| (g.name(x).to_string(), self.mor[x].clone()))
                .collect(),
        }
    }
}

/// JSON form: per element name, the object and morphism permutations as
/// index lists. The identity may be omitted.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GActionSpec {
    pub objects: BTreeMap<String, Vec<usize>>,
    pub morphisms: BTreeMap<String, Vec<usize>>,
}

impl GActionSpec {
    pub fn build(&self, group: Arc<Group>, cat: Arc<FinCat>) -> Result<GAction, EquivariantError> {
        let mut obj = Vec::new();
        let mut mor = Vec::new();
        for g in group.elements() {
            let name = group.name(g);
            let ident = g == group.identity();
            match (self.objects.get(name), self.morphisms.get(name)) {
                (Some(o), Some(m)) => {
                    obj.push(o.clone());
                    mor.push(m.clone());
                }
                (None, None) if ident => {
                    obj.push((0..cat.object_count()).collect());
                    mor.push((0..cat.morphism_count()).collect());
                }
                _ => return Err(EquivariantError::Shape),
            }
        }
        for k in self.objects.keys().chain(self.morphisms.keys()) {
            group.element(k)?;
        }
        GAction::new(group, cat, obj, mor)
    }
}

/// A diagram of categories over a category with `G`-action together with
/// structure functors `φ_{g,i}: X_i → X_{gi}`.
#[derive(Clone, Debug)]
pub struct GDiagram {
    pub action: GAction,
    pub diagram: CatDiagram,
    /// `phi[g][i]: X_i → X_{g·i}`.
    pub phi: Vec<Vec<Functor>>,
}

impl GDiagram {
    pub fn new(
        action: GAction,
        diagram: CatDiagram,
        phi: Vec<Vec<Functor>>,
    ) -> Result<GDiagram, EquivariantError> {
        let d = GDiagram {
            action,
            diagram,
            phi,
        };
        d.validate()?;
        Ok(d)
    }

    /// Structure maps all identities; valid when `X∘g = X` on the nose.
    pub fn with_trivial_structure(
        action: GAction,
        diagram: CatDiagram,
    ) -> Result<GDiagram, EquivariantError> {
        let phi = action
            .group
            .elements()
            .map(|g| {
                (0..diagram.index.object_count())
                    .map(|i| {
                        let gi = action.obj(g, i);
                        Functor::new_unchecked(
                            diagram.vertices[i].clone(),
                            diagram.vertices[gi].clone(),
                            (0..diagram.vertices[i].object_count()).collect(),
                            (0..diagram.vertices[i].morphism_count()).collect(),
                        )
                    })
                    .collect()
            })
            .collect();
        GDiagram::new(action, diagram, phi)
    }

    pub fn group(&self) -> &Arc<Group> {
        self.action.group()
    }

    pub fn index(&self) -> &Arc<FinCat> {
        &self.diagram.index
    }

    pub fn vertex(&self, i: usize) -> &Arc<FinCat> {
        &self.diagram.vertices[i]
    }

    pub fn validate(&self) -> Result<(), EquivariantError> {
        let a = &self.action;
        let (g, idx) = (&*a.group, &*a.cat);
        if !(Arc::ptr_eq(&a.cat, &self.diagram.index) || *a.cat == *self.diagram.index) {
            return Err(EquivariantError::IndexMismatch);
        }
        self.diagram.validate()?;
        if self.phi.len() != g.order() || self.phi.iter().any(|row| row.len() != idx.object_count())
        {
            return Err(EquivariantError::Shape);
        }
        let xs = &self.diagram.vertices;
        for x in g.elements() {
            for i in 0..idx.object_count() {
                let f = &self.phi[x][i];
                let err = |source| EquivariantError::StructureMap {
                    g: g.name(x).into(),
                    object: idx.object_name(i).into(),
                    source,
                };
                let gi = a.obj(x, i);
                if !(Arc::ptr_eq(&f.dom, &xs[i]) || *f.dom == *xs[i])
                    || !(Arc::ptr_eq(&f.cod, &xs[gi]) || *f.cod == *xs[gi])
                {
                    return Err(err(FunctorError::DomainMismatch));
                }
                f.validate().map_err(err)?;
            }
            for m in 0..idx.morphism_count() {
                let (i, j) = (idx.src(m), idx.tgt(m));
                let lhs = self.diagram.edges[m]
                    .then(&self.phi[x][j])
                    .expect("shapes checked");
                let rhs = self.phi[x][i]
                    .then(&self.diagram.edges[a.mor(x, m)])
                    .expect("shapes checked");
                if lhs.obj != rhs.obj || lhs.mor != rhs.mor {
                    return Err(EquivariantError::NotNatural {
                        g: g.name(x).into(),
                        morphism: idx.morphism(m).name.clone(),
                    });
                }
            }
        }
        for i in 0..idx.object_count() {
            if !self.phi[g.identity()][i].is_identity() {
                return Err(EquivariantError::UnitAxiomFailure {
                    object: idx.object_name(i).into(),
                });
            }
        }
        for x in g.elements() {
            for y in g.elements() {
                let yx = g.mul(y, x);
                for i in 0..idx.object_count() {
                    let comp = self.phi[x][i]
                        .then(&self.phi[y][a.obj(x, i)])
                        .expect("shapes checked");
                    let direct = &self.phi[yx][i];
                    if comp.obj != direct.obj || comp.mor != direct.mor {
                        return Err(EquivariantError::CocycleFailure {
                            g: g.name(x).into(),
                            h: g.name(y).into(),
                            object: idx.object_name(i).into(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// The action of the isotropy group `G_i` on `X_i`, re-indexed by `G_i`
    /// as a group.
    pub fn vertex_action(&self, i: usize) -> (GAction, Vec<usize>) {
        let gi = Subgroup::from_mask(&self.action.group, self.action.isotropy(i))
            .expect("isotropy is a subgroup");
        let (sub, elems) = self.action.group.restrict(&gi);
        let a = GAction {
            group: Arc::new(sub),
            cat: self.diagram.vertices[i].clone(),
            obj: elems.iter().map(|&g| self.phi[g][i].obj.clone()).collect(),
            mor: elems.iter().map(|&g| self.phi[g][i].mor.clone()).collect(),
        };
        (a, elems)
    }

    /// Restriction of the structure to a subgroup, re-indexed as a group.
    pub fn restrict_group(&self, h: &Subgroup) -> GDiagram {
        let (action, elems) = self.action.restrict(h);
        GDiagram {
            action,
            diagram: self.diagram.clone(),
            phi: elems.iter().map(|&g| self.phi[g].clone()).collect(),
        }
    }

    /// Restriction `X∘F` along an equivariant functor `F: J → I`, where `b`
    /// is the action on `J` (same group).
    pub fn pullback(&self, f: &Functor, b: &GAction) -> Result<GDiagram, EquivariantError> {
        if !b.is_equivariant(f, &self.action) {
            return Err(EquivariantError::NotEquivariant);
        }
        let diagram = self.diagram.restrict(f);
        let phi = self
            .phi
            .iter()
            .map(|row| f.obj.iter().map(|&i| row[i].clone()).collect())
            .collect();
        GDiagram::new(b.clone(), diagram, phi)
    }

    /// The `H`-fixed diagram `X^H` on `I^H`.
    pub fn fixed_diagram(&self, h: &Subgroup) -> FixedDiagram {
        let hm = h.mask();
        let index = fixed_category(&self.action, h);
        let mut vertices = Vec::new();
        let mut vertex_maps = Vec::new();
        for &i in &index.obj {
            let x = &*self.diagram.vertices[i];
            let keep_o: Vec<bool> = (0..x.object_count())
                .map(|o| bits(hm).all(|g| self.phi[g][i].obj[o] == o))
                .collect();
            let keep_m: Vec<bool> = (0..x.morphism_count())
                .map(|m| bits(hm).all(|g| self.phi[g][i].mor[m] == m))
                .collect();
            let (sub, om, mm) = x
                .subcategory(&keep_o, &keep_m)
                .expect("fixed points form a subcategory");
            vertices.push(Arc::new(sub));
            vertex_maps.push((om, mm));
        }
        let icat = &*index.cat;
        let edges = (0..icat.morphism_count())
            .map(|k| {
                let (s, t) = (icat.src(k), icat.tgt(k));
                let e = &self.diagram.edges[index.mor[k]];
                let (so, sm) = &vertex_maps[s];
                let (to, tm) = &vertex_maps[t];
                let obj = so
                    .iter()
                    .map(|&o| {
                        to.iter()
                            .position(|&y| y == e.obj[o])
                            .expect("edges preserve fixed objects")
                    })
                    .collect();
                let mor = sm
                    .iter()
                    .map(|&m| {
                        tm.iter()
                            .position(|&y| y == e.mor[m])
                            .expect("edges preserve fixed morphisms")
                    })
                    .collect();
                Functor::new_unchecked(vertices[s].clone(), vertices[t].clone(), obj, mor)
            })
            .collect();
        let diagram = CatDiagram {
            index: index.cat.clone(),
            vertices,
            edges,
        };
        FixedDiagram {
            index,
            diagram,
            vertex_maps,
        }
    }
}

/// `I^H` with its inclusion into `I`.
#[derive(Clone, Debug)]
pub struct FixedCat {
    pub cat: Arc<FinCat>,
    pub obj: Vec<usize>,
    pub mor: Vec<usize>,
    pub inclusion: Functor,
}

impl FixedCat {
    pub fn object_of(&self, o: usize) -> Option<usize> {
        self.obj.iter().position(|&x| x == o)
    }

    pub fn morphism_of(&self, m: usize) -> Option<usize> {
        self.mor.iter().position(|&x| x == m)
    }
}

/// Objects and morphisms fixed (strictly) by every element of `h`.
pub fn fixed_category(a: &GAction, h: &Subgroup) -> FixedCat {
    let hm = h.mask();
    let c = &*a.cat;
    let keep_o: Vec<bool> = (0..c.object_count())
        .map(|o| a.fixes_object(hm, o))
        .collect();
    let keep_m: Vec<bool> = (0..c.morphism_count())
        .map(|m| a.fixes_morphism(hm, m))
        .collect();
    let (sub, obj, mor) = c
        .subcategory(&keep_o, &keep_m)
        .expect("fixed points form a subcategory");
    let cat = Arc::new(sub);
    let inclusion = Functor::new_unchecked(cat.clone(), a.cat.clone(), obj.clone(), mor.clone());
    FixedCat {
        cat,
        obj,
        mor,
        inclusion,
    }
}

/// `X^H` on `I^H`, with the inclusion of each fixed vertex into `X_i`.
#[derive(Clone, Debug)]
pub struct FixedDiagram {
    pub index: FixedCat,
    pub diagram: CatDiagram,
    /// For each object of `I^H`: original object and morphism indices.
    pub vertex_maps: Vec<(Vec<usize>, Vec<usize>)>,
}

/// The orbit category: one object `G/H` per subgroup; a morphism
/// `G/L → G/H` is `eL ↦ gH` for a coset `gH` with `g⁻¹Lg ⊆ H`.
#[derive(Clone, Debug)]
pub struct OrbitCategory {
    pub cat: Arc<FinCat>,
    pub lattice: SubgroupLattice,
    /// `(L, H, g)` per morphism, `g` the smallest element of its coset.
    pub mors: Vec<(usize, usize, usize)>,
}

fn coset_rep(group: &Group, g: usize, h: &Subgroup) -> usize {
    h.iter()
        .map(|x| group.mul(g, x))
        .min()
        .expect("subgroups are nonempty")
}

pub fn orbit_category(group: &Group) -> Result<OrbitCategory, EquivariantError> {
    let lattice = SubgroupLattice::new(group)?;
    let subs = lattice.subgroups().to_vec();
    let mut b: CatBuilder<usize, (usize, usize, usize)> = CatBuilder::new();
    for k in 0..subs.len() {
        let o = b.object(k);
        b.identity(o, (k, k, coset_rep(group, group.identity(), &subs[k])));
    }
    for l in 0..subs.len() {
        for h in 0..subs.len() {
            for g in group.elements() {
                if coset_rep(group, g, &subs[h]) != g {
                    continue;
                }
                if subs[l]
                    .conjugate(group, group.inv(g))
                    .is_subgroup_of(&subs[h])
                {
                    b.morphism((l, h, g), l, h);
                }
            }
        }
    }
    let l = b.build_named(
        |x, y| (x.0, y.1, coset_rep(group, group.mul(x.2, y.2), &subs[y.1])),
        |k, _| format!("G/{}", lattice.name(k)),
        |_, &(l, h, g)| {
            format!(
                "{}{}:G/{}->G/{}",
                group.name(g),
                lattice.name(h),
                lattice.name(l),
                lattice.name(h)
            )
        },
    )?;
    Ok(OrbitCategory {
        cat: l.cat,
        lattice,
        mors: l.mors,
    })
}

impl OrbitCategory {
    pub fn morphism_of(&self, l: usize, h: usize, g: usize) -> Option<usize> {
        let group = self.lattice.group();
        let rep = coset_rep(group, g, &self.lattice.get(h));
        self.mors.iter().position(|&m| m == (l, h, rep))
    }
}

/// `Tw(C)`: objects are morphisms `f: c → d`; a morphism `f → f'` is a pair
/// `(u: c → c', v: d' → d)` with `f = v∘f'∘u`.
#[derive(Clone, Debug)]
pub struct TwistedArrow {
    pub cat: Arc<FinCat>,
    pub objs: Vec<usize>,
    /// `(f, f', u, v)` per morphism.
    pub mors: Vec<(usize, usize, usize, usize)>,
}

pub fn twisted_arrow(c: &FinCat) -> TwistedArrow {
    let mut b: CatBuilder<usize, (usize, usize, usize, usize)> = CatBuilder::new();
    for f in 0..c.morphism_count() {
        let o = b.object(f);
        b.identity(o, (f, f, c.id(c.src(f)), c.id(c.tgt(f))));
    }
    for f in 0..c.morphism_count() {
        let (cs, cd) = (c.src(f), c.tgt(f));
        for &u in c.out_of(cs) {
            for &v in c.into_obj(cd) {
                for &f2 in c.hom(c.tgt(u), c.src(v)) {
                    if c.then(c.then(u, f2), v) == f
                        && !(c.is_identity(u) && c.is_identity(v) && f2 == f)
                    {
                        b.morphism((f, f2, u, v), f, f2);
                    }
                }
            }
        }
    }
    let l = b
        .build_named(
            |x, y| (x.0, y.1, c.then(x.2, y.2), c.then(y.3, x.3)),
            |_, &f| c.morphism(f).name.clone(),
            |_, &(f, f2, u, v)| {
                format!(
                    "({},{}):{}->{}",
                    c.morphism(u).name,
                    c.morphism(v).name,
                    c.morphism(f).name,
                    c.morphism(f2).name
                )
            },
        )
        .expect("twisted arrow category is a category");
    TwistedArrow {
        cat: l.cat,
        objs: l.objs,
        mors: l.mors,
    }
}

/// `f^*: I^H → I^L` for `f: G/L → G/H`, `eL ↦ gH`: `i ↦ g·i`.
#[derive(Clone, Debug)]
pub struct Transport {
    pub source: FixedCat,
    pub target: FixedCat,
    pub representative: usize,
    pub functor: Functor,
}

pub fn transport(
    a: &GAction,
    lattice: &SubgroupLattice,
    l: usize,
    h: usize,
    g: usize,
) -> Result<Transport, EquivariantError> {
    let group = &*a.group;
    let (ls, hs) = (lattice.get(l), lattice.get(h));
    if g >= group.order() || !ls.conjugate(group, group.inv(g)).is_subgroup_of(&hs) {
        return Err(EquivariantError::InvalidCoset {
            coset: format!(
                "{}{}",
                group.name(g.min(group.order() - 1)),
                lattice.name(h)
            ),
            from: lattice.name(l),
            to: lattice.name(h),
        });
    }
    let source = fixed_category(a, &hs);
    let target = fixed_category(a, &ls);
    let obj = source
        .obj
        .iter()
        .map(|&o| target.object_of(a.obj(g, o)).expect("lands in I^L"))
        .collect();
    let mor = source
        .mor
        .iter()
        .map(|&m| target.morphism_of(a.mor(g, m)).expect("lands in I^L"))
        .collect();
    let functor = Functor::new_unchecked(source.cat.clone(), target.cat.clone(), obj, mor);
    Ok(Transport {
        source,
        target,
        representative: g,
        functor,
    })
}

/// The isomorphism `P(J)^H ≅ P(J/H)`: an invariant subset goes to the set of
/// orbits it contains.
pub fn powerset_fixed_witness(j: &GSet, h: &Subgroup) -> Result<IsoWitness, WitnessFailure> {
    let a = GAction::powerset(j);
    let fixed = fixed_category(&a, h);
    let orbits = j.orbits(h).map_err(|e| WitnessFailure(e.to_string()))?;
    let quot = Arc::new(FinCat::powerset(orbits.count()));
    let to_orbits = |mask: u64| {
        orbits
            .blocks
            .iter()
            .enumerate()
            .filter(|(_, &b)| b & mask != 0)
            .fold(0u64, |m, (k, _)| m | (1 << k))
    };
    let from_orbits = |q: u64| {
        orbits
            .blocks
            .iter()
            .enumerate()
            .filter(|(k, _)| q & (1 << k) != 0)
            .fold(0u64, |m, (_, &b)| m | b)
    };
    let fc = &fixed.cat;
    let fobj: Vec<usize> = fixed
        .obj
        .iter()
        .map(|&o| to_orbits(o as u64) as usize)
        .collect();
    let fmor = (0..fc.morphism_count())
        .map(|m| quot.hom(fobj[fc.src(m)], fobj[fc.tgt(m)])[0])
        .collect();
    let bobj: Vec<usize> = (0..quot.object_count())
        .map(|q| {
            fixed
                .object_of(from_orbits(q as u64) as usize)
                .expect("unions of orbits are invariant")
        })
        .collect();
    let bmor = (0..quot.morphism_count())
        .map(|m| {
            fc.hom(bobj[quot.src(m)], bobj[quot.tgt(m)])
                .first()
                .copied()
                .ok_or_else(|| WitnessFailure("missing inclusion".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let fwd = crate::constructions::checked_functor("P(J)^H -> P(J/H)", fc, &quot, fobj, fmor)?;
    let bwd = crate::constructions::checked_functor("P(J/H) -> P(J)^H", &quot, fc, bobj, bmor)?;
    IsoWitness::verify(fwd, bwd)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2_swap() -> (GSet, GAction) {
        let g = Group::cyclic(2);
        let j = GSet::regular(&g);
        let a = GAction::powerset(&j);
        (j, a)
    }

    fn discrete2() -> Arc<FinCat> {
        Arc::new(FinCat::discrete(&["p", "q"]))
    }

    #[test]
    fn powerset_action_validates() {
        let (_, a) = z2_swap();
        a.validate().unwrap();
        assert_eq!(a.isotropy(0).count_ones(), 2);
        assert_eq!(a.isotropy(1).count_ones(), 1);
    }

    #[test]
    fn trivial_group_structure_validates() {
        let g = Arc::new(Group::trivial());
        let i = Arc::new(FinCat::powerset(2));
        let a = GAction::trivial(g, i.clone());
        let x = CatDiagram::constant(&i, &discrete2());
        GDiagram::with_trivial_structure(a, x).unwrap();
    }

    #[test]
    fn constant_diagram_on_swapped_square() {
        let (_, a) = z2_swap();
        let x = CatDiagram::constant(a.cat(), &discrete2());
        GDiagram::with_trivial_structure(a, x).unwrap();
    }

    #[test]
    fn broken_cocycle_on_klein() {
        let g = Arc::new(Group::klein());
        let t = Arc::new(FinCat::terminal());
        let a = GAction::trivial(g.clone(), t.clone());
        let x2 = discrete2();
        let x = CatDiagram::constant(&t, &x2);
        let swap = Functor::new(x2.clone(), x2.clone(), vec![1, 0], vec![1, 0]).unwrap();
        let phi = g
            .elements()
            .map(|e| {
                vec![if e == g.identity() {
                    Functor::identity(&x2)
                } else {
                    swap.clone()
                }]
            })
            .collect();
        match GDiagram::new(a, x, phi) {
            Err(EquivariantError::CocycleFailure { g: x, h: y, .. }) => {
                assert_ne!(x, y);
                assert_ne!(x, "e");
            }
            other => panic!("expected a cocycle failure, got {other:?}"),
        }
    }

    #[test]
    fn fixed_category_of_based_square() {
        let g = Group::cyclic(2);
        let j = GSet::regular(&g).with_basepoint();
        let a = GAction::powerset(&j);
        let whole = Subgroup::from_mask(&g, 0b11).unwrap();
        assert_eq!(fixed_category(&a, &whole).cat.object_count(), 4);
        let triv = Subgroup::from_mask(&g, 0b1).unwrap();
        assert_eq!(fixed_category(&a, &triv).cat.object_count(), 8);
    }

    #[test]
    fn free_action_has_no_fixed_objects() {
        let g = Arc::new(Group::cyclic(2));
        let c = discrete2();
        let a = GAction::new(
            g.clone(),
            c,
            vec![vec![0, 1], vec![1, 0]],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        let whole = Subgroup::from_mask(&g, 0b11).unwrap();
        assert_eq!(fixed_category(&a, &whole).cat.object_count(), 0);
    }

    #[test]
    fn fixed_diagram_of_swapped_summands() {
        // X_i = two copies of a 2-chain, Z/2 swaps the copies: fixed part is empty
        // unless the swap is trivial; with the diagonal action on pairs it halves
        let g = Arc::new(Group::cyclic(2));
        let t = Arc::new(FinCat::terminal());
        let a = GAction::trivial(g.clone(), t.clone());
        let chain = Arc::new(FinCat::poset(&["0", "1"], |x, y| x <= y).unwrap());
        let sq = crate::fincat::product(&[chain.clone(), chain.clone()]);
        let swap_obj: Vec<usize> = sq
            .objs
            .iter()
            .map(|o| sq.obj(&vec![o[1], o[0]]).unwrap())
            .collect();
        let swap_mor: Vec<usize> = sq
            .mors
            .iter()
            .map(|m| sq.mor(&vec![m[1], m[0]]).unwrap())
            .collect();
        let swap = Functor::new(sq.cat.clone(), sq.cat.clone(), swap_obj, swap_mor).unwrap();
        let x = CatDiagram::constant(&t, &sq.cat);
        let d = GDiagram::new(a, x, vec![vec![Functor::identity(&sq.cat)], vec![swap]]).unwrap();
        let whole = Subgroup::from_mask(&g, 0b11).unwrap();
        let f = d.fixed_diagram(&whole);
        // diagonal of chain × chain is a 2-chain
        assert_eq!(f.diagram.vertices[0].object_count(), 2);
        assert_eq!(f.diagram.vertices[0].morphism_count(), 3);
        let e = Subgroup::from_mask(&g, 0b1).unwrap();
        assert_eq!(d.fixed_diagram(&e).diagram.vertices[0].object_count(), 4);
    }

    #[test]
    fn orbit_category_of_z2() {
        let g = Group::cyclic(2);
        let o = orbit_category(&g).unwrap();
        let (e, whole) = (o.lattice.trivial(), o.lattice.whole());
        assert_eq!(o.cat.hom(e, e).len(), 2);
        assert_eq!(o.cat.hom(e, whole).len(), 1);
        assert_eq!(o.cat.hom(whole, e).len(), 0);
        assert_eq!(o.cat.hom(whole, whole).len(), 1);
        assert_eq!(twisted_arrow(&o.cat.opposite()).cat.object_count(), 4);
    }

    #[test]
    fn orbit_hom_counts_match_coset_formula() {
        let g = Group::symmetric(3);
        let o = orbit_category(&g).unwrap();
        let lat = &o.lattice;
        for l in 0..lat.len() {
            for h in 0..lat.len() {
                let hs = lat.get(h);
                let mut cosets = std::collections::BTreeSet::new();
                for x in g.elements() {
                    // L ⊆ xHx⁻¹
                    if lat.get(l).is_subgroup_of(&hs.conjugate(&g, x)) {
                        cosets.insert(coset_rep(&g, x, &hs));
                    }
                }
                assert_eq!(o.cat.hom(l, h).len(), cosets.len());
            }
        }
    }

    #[test]
    fn twisted_arrow_counts_factorizations() {
        let c = FinCat::powerset(2);
        let tw = twisted_arrow(&c);
        assert_eq!(tw.cat.object_count(), c.morphism_count());
        let mut brute = 0;
        for f in 0..c.morphism_count() {
            for f2 in 0..c.morphism_count() {
                for u in 0..c.morphism_count() {
                    for v in 0..c.morphism_count() {
                        if c.src(u) == c.src(f)
                            && c.tgt(u) == c.src(f2)
                            && c.src(v) == c.tgt(f2)
                            && c.tgt(v) == c.tgt(f)
                            && c.then(c.then(u, f2), v) == f
                        {
                            brute += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(tw.cat.morphism_count(), brute);
    }

    #[test]
    fn transport_examples() {
        let (_, a) = z2_swap();
        let lat = SubgroupLattice::new(a.group()).unwrap();
        let (e, whole) = (lat.trivial(), lat.whole());
        let id = transport(&a, &lat, whole, whole, 0).unwrap();
        assert!(id.functor.is_identity());
        let down = transport(&a, &lat, e, whole, 0).unwrap();
        assert_eq!(
            (
                down.functor.dom.object_count(),
                down.functor.cod.object_count()
            ),
            (2, 4)
        );
        assert!(matches!(
            transport(&a, &lat, whole, e, 0),
            Err(EquivariantError::InvalidCoset { .. })
        ));
    }

    #[test]
    fn powerset_fixed_points_are_powersets_of_orbits() {
        for g in [
            Group::cyclic(2),
            Group::cyclic(3),
            Group::klein(),
            Group::symmetric(3),
        ] {
            let lat = SubgroupLattice::new(&g).unwrap();
            let j = GSet::disjoint_union(&[GSet::regular(&g), GSet::trivial(&g, 1)]);
            if j.len() > 7 {
                continue;
            }
            for h in lat.subgroups() {
                let w = powerset_fixed_witness(&j, h).unwrap();
                assert_eq!(w.b.object_count(), 1 << j.orbits(h).unwrap().count());
            }
        }
    }

    #[test]
    fn conjugate_subgroups_have_isomorphic_fixed_categories() {
        let g = Group::symmetric(3);
        let j = GSet::transitive(&g, &Subgroup::from_mask(&g, 0b1).unwrap());
        let a = GAction::powerset(&j);
        let lat = SubgroupLattice::new(&g).unwrap();
        for class in lat.classes() {
            let sizes: Vec<(usize, usize)> = class
                .iter()
                .map(|&h| {
                    let f = fixed_category(&a, &lat.get(h));
                    (f.cat.object_count(), f.cat.morphism_count())
                })
                .collect();
            assert!(sizes.windows(2).all(|w| w[0] == w[1]));
        }
    }
}
