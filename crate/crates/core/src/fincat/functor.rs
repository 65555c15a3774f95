//! Functors, natural transformations and diagrams of categories.

use std::sync::Arc;

use thiserror::Error;

use super::FinCat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FunctorError {
    #[error("object or morphism map has the wrong length")]
    ShapeMismatch,
    #[error("image index out of range")]
    OutOfRange,
    #[error("morphism `{0}` is not sent between the images of its endpoints")]
    EndpointMismatch(String),
    #[error("identity of `{0}` is not preserved")]
    IdentityNotPreserved(String),
    #[error("composition of `{f}` then `{g}` is not preserved")]
    CompositionNotPreserved { f: String, g: String },
    #[error("functors do not share domain and codomain")]
    DomainMismatch,
    #[error("component at `{0}` has the wrong source or target")]
    ComponentMismatch(String),
    #[error("naturality fails at `{0}`")]
    NotNatural(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("edge for `{0}` does not go between the vertices of its endpoints")]
    EdgeShape(String),
    #[error("edge for the identity of `{0}` is not the identity functor")]
    IdentityEdge(String),
    #[error("edges are not functorial at `{f}` then `{g}`")]
    CompositeEdge { f: String, g: String },
    #[error("edge for `{morphism}`: {source}")]
    Functor {
        morphism: String,
        source: FunctorError,
    },
    #[error("diagram has {got} vertices/edges, index needs {want}")]
    Count { got: usize, want: usize },
}

/// Object and morphism maps of a functor, without its endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctorData {
    pub obj: Vec<usize>,
    pub mor: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Functor {
    pub dom: Arc<FinCat>,
    pub cod: Arc<FinCat>,
    pub obj: Vec<usize>,
    pub mor: Vec<usize>,
}

fn same_cat(a: &Arc<FinCat>, b: &Arc<FinCat>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Functor {
    pub fn new(
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        obj: Vec<usize>,
        mor: Vec<usize>,
    ) -> Result<Functor, FunctorError> {
        let f = Functor { dom, cod, obj, mor };
        f.validate()?;
        Ok(f)
    }

    /// Skips validation; for maps that are functors by construction.
    pub fn new_unchecked(
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        obj: Vec<usize>,
        mor: Vec<usize>,
    ) -> Functor {
        debug_assert_eq!(obj.len(), dom.object_count());
        debug_assert_eq!(mor.len(), dom.morphism_count());
        Functor { dom, cod, obj, mor }
    }

    pub fn from_data(dom: Arc<FinCat>, cod: Arc<FinCat>, d: &FunctorData) -> Functor {
        Functor::new_unchecked(dom, cod, d.obj.clone(), d.mor.clone())
    }

    pub fn validate(&self) -> Result<(), FunctorError> {
        let (d, c) = (&*self.dom, &*self.cod);
        if self.obj.len() != d.object_count() || self.mor.len() != d.morphism_count() {
            return Err(FunctorError::ShapeMismatch);
        }
        if self.obj.iter().any(|&o| o >= c.object_count())
            || self.mor.iter().any(|&m| m >= c.morphism_count())
        {
            return Err(FunctorError::OutOfRange);
        }
        for m in 0..d.morphism_count() {
            let fm = self.mor[m];
            if c.src(fm) != self.obj[d.src(m)] || c.tgt(fm) != self.obj[d.tgt(m)] {
                return Err(FunctorError::EndpointMismatch(d.morphism(m).name.clone()));
            }
        }
        for o in 0..d.object_count() {
            if self.mor[d.id(o)] != c.id(self.obj[o]) {
                return Err(FunctorError::IdentityNotPreserved(
                    d.object_name(o).to_string(),
                ));
            }
        }
        for f in 0..d.morphism_count() {
            for &g in d.out_of(d.tgt(f)) {
                if self.mor[d.then(f, g)] != c.then(self.mor[f], self.mor[g]) {
                    return Err(FunctorError::CompositionNotPreserved {
                        f: d.morphism(f).name.clone(),
                        g: d.morphism(g).name.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn identity(c: &Arc<FinCat>) -> Functor {
        Functor::new_unchecked(
            c.clone(),
            c.clone(),
            (0..c.object_count()).collect(),
            (0..c.morphism_count()).collect(),
        )
    }

    /// Constant functor at an object of the codomain.
    pub fn constant(dom: &Arc<FinCat>, cod: &Arc<FinCat>, object: usize) -> Functor {
        Functor::new_unchecked(
            dom.clone(),
            cod.clone(),
            vec![object; dom.object_count()],
            vec![cod.id(object); dom.morphism_count()],
        )
    }

    /// `g∘self`.
    pub fn then(&self, g: &Functor) -> Result<Functor, FunctorError> {
        if !same_cat(&self.cod, &g.dom) {
            return Err(FunctorError::DomainMismatch);
        }
        Ok(Functor::new_unchecked(
            self.dom.clone(),
            g.cod.clone(),
            self.obj.iter().map(|&o| g.obj[o]).collect(),
            self.mor.iter().map(|&m| g.mor[m]).collect(),
        ))
    }

    pub fn data(&self) -> FunctorData {
        FunctorData {
            obj: self.obj.clone(),
            mor: self.mor.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        same_cat(&self.dom, &self.cod)
            && self.obj.iter().enumerate().all(|(i, &o)| i == o)
            && self.mor.iter().enumerate().all(|(i, &m)| i == m)
    }

    /// Equal maps between equal categories.
    pub fn same_as(&self, other: &Functor) -> bool {
        same_cat(&self.dom, &other.dom)
            && same_cat(&self.cod, &other.cod)
            && self.obj == other.obj
            && self.mor == other.mor
    }

    /// Bijective on objects and on morphisms.
    pub fn is_isomorphism(&self) -> bool {
        fn bijective(map: &[usize], n: usize) -> bool {
            if map.len() != n {
                return false;
            }
            let mut seen = vec![false; n];
            map.iter()
                .all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
        }
        bijective(&self.obj, self.cod.object_count())
            && bijective(&self.mor, self.cod.morphism_count())
    }
}

/// A natural transformation `src ⇒ tgt`, one component per domain object.
#[derive(Clone, Debug)]
pub struct NatTrans {
    pub src: Functor,
    pub tgt: Functor,
    pub comp: Vec<usize>,
}

impl NatTrans {
    pub fn new(src: Functor, tgt: Functor, comp: Vec<usize>) -> Result<NatTrans, FunctorError> {
        let t = NatTrans { src, tgt, comp };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), FunctorError> {
        if !same_cat(&self.src.dom, &self.tgt.dom) || !same_cat(&self.src.cod, &self.tgt.cod) {
            return Err(FunctorError::DomainMismatch);
        }
        let (d, c) = (&*self.src.dom, &*self.src.cod);
        if self.comp.len() != d.object_count() {
            return Err(FunctorError::ShapeMismatch);
        }
        for o in 0..d.object_count() {
            let t = self.comp[o];
            if t >= c.morphism_count() || c.src(t) != self.src.obj[o] || c.tgt(t) != self.tgt.obj[o]
            {
                return Err(FunctorError::ComponentMismatch(
                    d.object_name(o).to_string(),
                ));
            }
        }
        for m in 0..d.morphism_count() {
            let (a, b) = (d.src(m), d.tgt(m));
            if c.then(self.comp[a], self.tgt.mor[m]) != c.then(self.src.mor[m], self.comp[b]) {
                return Err(FunctorError::NotNatural(d.morphism(m).name.clone()));
            }
        }
        Ok(())
    }

    pub fn identity(f: &Functor) -> NatTrans {
        let comp = f.obj.iter().map(|&o| f.cod.id(o)).collect();
        NatTrans {
            src: f.clone(),
            tgt: f.clone(),
            comp,
        }
    }
}

/// A diagram `I → Cat`: one category per object and one functor per morphism.
#[derive(Clone, Debug)]
pub struct CatDiagram {
    pub index: Arc<FinCat>,
    pub vertices: Vec<Arc<FinCat>>,
    pub edges: Vec<Functor>,
}

impl CatDiagram {
    pub fn new(
        index: Arc<FinCat>,
        vertices: Vec<Arc<FinCat>>,
        edges: Vec<Functor>,
    ) -> Result<CatDiagram, DiagramError> {
        let d = CatDiagram {
            index,
            vertices,
            edges,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), DiagramError> {
        let i = &*self.index;
        if self.vertices.len() != i.object_count() {
            return Err(DiagramError::Count {
                got: self.vertices.len(),
                want: i.object_count(),
            });
        }
        if self.edges.len() != i.morphism_count() {
            return Err(DiagramError::Count {
                got: self.edges.len(),
                want: i.morphism_count(),
            });
        }
        for m in 0..i.morphism_count() {
            let e = &self.edges[m];
            let name = || i.morphism(m).name.clone();
            if !same_cat(&e.dom, &self.vertices[i.src(m)])
                || !same_cat(&e.cod, &self.vertices[i.tgt(m)])
            {
                return Err(DiagramError::EdgeShape(name()));
            }
            e.validate().map_err(|source| DiagramError::Functor {
                morphism: name(),
                source,
            })?;
        }
        for o in 0..i.object_count() {
            if !self.edges[i.id(o)].is_identity() {
                return Err(DiagramError::IdentityEdge(i.object_name(o).to_string()));
            }
        }
        for f in 0..i.morphism_count() {
            for &g in i.out_of(i.tgt(f)) {
                let composite = self.edges[f].then(&self.edges[g]).expect("shapes checked");
                if !composite.same_as(&self.edges[i.then(f, g)]) {
                    return Err(DiagramError::CompositeEdge {
                        f: i.morphism(f).name.clone(),
                        g: i.morphism(g).name.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn constant(index: &Arc<FinCat>, c: &Arc<FinCat>) -> CatDiagram {
        CatDiagram {
            index: index.clone(),
            vertices: vec![c.clone(); index.object_count()],
            edges: vec![Functor::identity(c); index.morphism_count()],
        }
    }

    /// `X∘F` for a functor `F` into the index.
    pub fn restrict(&self, f: &Functor) -> CatDiagram {
        CatDiagram {
            index: f.dom.clone(),
            vertices: f.obj.iter().map(|&o| self.vertices[o].clone()).collect(),
            edges: f.mor.iter().map(|&m| self.edges[m].clone()).collect(),
        }
    }

    /// Pointwise product of two diagrams on the same index.
    pub fn product(&self, other: &CatDiagram) -> CatDiagram {
        assert!(same_cat(&self.index, &other.index));
        let prods: Vec<_> = self
            .vertices
            .iter()
            .zip(&other.vertices)
            .map(|(a, b)| super::product(&[a.clone(), b.clone()]))
            .collect();
        let i = &*self.index;
        let edges = (0..i.morphism_count())
            .map(|m| {
                let (s, t) = (&prods[i.src(m)], &prods[i.tgt(m)]);
                let (e1, e2) = (&self.edges[m], &other.edges[m]);
                let obj = s
                    .objs
                    .iter()
                    .map(|o| t.obj(&vec![e1.obj[o[0]], e2.obj[o[1]]]).unwrap())
                    .collect();
                let mor = s
                    .mors
                    .iter()
                    .map(|f| t.mor(&vec![e1.mor[f[0]], e2.mor[f[1]]]).unwrap())
                    .collect();
                Functor::new_unchecked(s.cat.clone(), t.cat.clone(), obj, mor)
            })
            .collect();
        CatDiagram {
            index: self.index.clone(),
            vertices: prods.iter().map(|p| p.cat.clone()).collect(),
            edges,
        }
    }
}

/// Every functor `dom → cod`, by backtracking over object images and then
/// over images of non-identity morphisms, pruning on composition.
pub fn all_functors(dom: &FinCat, cod: &FinCat) -> Vec<FunctorData> {
    let n = dom.object_count();
    let non_ids: Vec<usize> = dom.non_identities().collect();
    let mut pos = vec![usize::MAX; dom.morphism_count()];
    for (k, &m) in non_ids.iter().enumerate() {
        pos[m] = k;
    }
    // constraint (f, g, h = g∘f) is checked once the last of its non-identity
    // members is assigned
    let mut checks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); non_ids.len()];
    for &f in &non_ids {
        for &g in dom.out_of(dom.tgt(f)) {
            if dom.is_identity(g) {
                continue;
            }
            let h = dom.then(f, g);
            let last = [f, g, h]
                .iter()
                .filter(|&&x| pos[x] != usize::MAX)
                .map(|&x| pos[x])
                .max()
                .unwrap();
            checks[last].push((f, g, h));
        }
    }
    // objects adjacent through non-identity morphisms, checked during the object phase
    let mut obj_checks: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &m in &non_ids {
        let (a, b) = (dom.src(m), dom.tgt(m));
        obj_checks[a.max(b)].push((a, b));
    }
    let mut out = Vec::new();
    let mut obj = vec![0usize; n];
    let mut mor = vec![usize::MAX; dom.morphism_count()];

    fn assign_mors(
        k: usize,
        dom: &FinCat,
        cod: &FinCat,
        non_ids: &[usize],
        checks: &[Vec<(usize, usize, usize)>],
        obj: &[usize],
        mor: &mut Vec<usize>,
        out: &mut Vec<FunctorData>,
    ) {
        if k == non_ids.len() {
            out.push(FunctorData {
                obj: obj.to_vec(),
                mor: mor.clone(),
            });
            return;
        }
        let m = non_ids[k];
        for &c in cod.hom(obj[dom.src(m)], obj[dom.tgt(m)]) {
            mor[m] = c;
            if checks[k]
                .iter()
                .all(|&(f, g, h)| cod.then(mor[f], mor[g]) == mor[h])
            {
                assign_mors(k + 1, dom, cod, non_ids, checks, obj, mor, out);
            }
        }
        mor[m] = usize::MAX;
    }

    #[allow(clippy::too_many_arguments)]
    fn assign_objs(
        k: usize,
        dom: &FinCat,
        cod: &FinCat,
        non_ids: &[usize],
        checks: &[Vec<(usize, usize, usize)>],
        obj_checks: &[Vec<(usize, usize)>],
        obj: &mut Vec<usize>,
        mor: &mut Vec<usize>,
        out: &mut Vec<FunctorData>,
    ) {
        if k == dom.object_count() {
            for o in 0..dom.object_count() {
                mor[dom.id(o)] = cod.id(obj[o]);
            }
            assign_mors(0, dom, cod, non_ids, checks, obj, mor, out);
            return;
        }
        for c in 0..cod.object_count() {
            obj[k] = c;
            if obj_checks[k]
                .iter()
                .all(|&(a, b)| !cod.hom(obj[a], obj[b]).is_empty())
            {
                assign_objs(k + 1, dom, cod, non_ids, checks, obj_checks, obj, mor, out);
            }
        }
    }

    if n == 0 {
        return vec![FunctorData {
            obj: vec![],
            mor: vec![],
        }];
    }
    assign_objs(
        0,
        dom,
        cod,
        &non_ids,
        &checks,
        &obj_checks,
        &mut obj,
        &mut mor,
        &mut out,
    );
    out
}

/// Every natural transformation `f ⇒ g` between functors `dom → cod`, as
/// component lists.
pub fn all_nat_trans(
    dom: &FinCat,
    cod: &FinCat,
    f: &FunctorData,
    g: &FunctorData,
) -> Vec<Vec<usize>> {
    let n = dom.object_count();
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for m in dom.non_identities() {
        checks[dom.src(m).max(dom.tgt(m))].push(m);
    }
    let mut out = Vec::new();
    let mut comp = vec![0usize; n];
    fn go(
        k: usize,
        dom: &FinCat,
        cod: &FinCat,
        f: &FunctorData,
        g: &FunctorData,
        checks: &[Vec<usize>],
        comp: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == dom.object_count() {
            out.push(comp.clone());
            return;
        }
        for &c in cod.hom(f.obj[k], g.obj[k]) {
            comp[k] = c;
            let ok = checks[k].iter().all(|&m| {
                let (a, b) = (dom.src(m), dom.tgt(m));
                cod.then(comp[a], g.mor[m]) == cod.then(f.mor[m], comp[b])
            });
            if ok {
                go(k + 1, dom, cod, f, g, checks, comp, out);
            }
        }
    }
    go(0, dom, cod, f, g, &checks, &mut comp, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow() -> Arc<FinCat> {
        Arc::new(FinCat::poset(&["a", "b"], |i, j| i <= j).unwrap())
    }

    /// Brute force: every pair of maps, filtered by the functor axioms.
    fn brute_functors(dom: &Arc<FinCat>, cod: &Arc<FinCat>) -> usize {
        let no = dom.object_count();
        let nm = dom.morphism_count();
        let mut count = 0;
        let objs = cod.object_count().pow(no as u32);
        let mors = cod.morphism_count().pow(nm as u32);
        for oi in 0..objs {
            let obj: Vec<usize> = (0..no)
                .map(|k| (oi / cod.object_count().pow(k as u32)) % cod.object_count())
                .collect();
            for mi in 0..mors {
                let mor: Vec<usize> = (0..nm)
                    .map(|k| (mi / cod.morphism_count().pow(k as u32)) % cod.morphism_count())
                    .collect();
                if Functor::new(dom.clone(), cod.clone(), obj.clone(), mor).is_ok() {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn functor_counts_match_brute_force() {
        let a = arrow();
        let p = Arc::new(FinCat::powerset(2));
        let d = Arc::new(FinCat::discrete(&["x", "y"]));
        for (dom, cod) in [(&a, &a), (&a, &p), (&d, &a), (&a, &d)] {
            assert_eq!(all_functors(dom, cod).len(), brute_functors(dom, cod));
        }
        // functors [1] → [1] are the monotone maps of a 2-chain: 3
        assert_eq!(all_functors(&a, &a).len(), 3);
    }

    #[test]
    fn functors_out_of_empty() {
        let e = FinCat::empty();
        assert_eq!(all_functors(&e, &FinCat::terminal()).len(), 1);
        assert_eq!(all_functors(&FinCat::terminal(), &e).len(), 0);
    }

    #[test]
    fn nat_trans_between_constant_functors() {
        let a = arrow();
        let p = Arc::new(FinCat::powerset(2));
        let f = Functor::constant(&a, &p, 0).data();
        let g = Functor::constant(&a, &p, 3).data();
        assert_eq!(all_nat_trans(&a, &p, &f, &g).len(), 1);
        assert_eq!(all_nat_trans(&a, &p, &g, &f).len(), 0);
    }

    #[test]
    fn diagram_validation() {
        let a = arrow();
        let t = Arc::new(FinCat::terminal());
        let d = CatDiagram::constant(&a, &t);
        assert!(d.validate().is_ok());
        let mut bad = d.clone();
        bad.vertices[1] = Arc::new(FinCat::discrete(&["u", "v"]));
        assert!(matches!(bad.validate(), Err(DiagramError::EdgeShape(_))));
    }
}
