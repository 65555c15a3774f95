//! Categories assembled from hashable object and morphism labels.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use super::{CatError, FinCat, Morphism};

/// A category together with the labels its objects and morphisms were built
/// from, and reverse lookups.
#[derive(Clone, Debug)]
pub struct Labelled<O, M> {
    pub cat: Arc<FinCat>,
    pub objs: Vec<O>,
    pub mors: Vec<M>,
    obj_index: HashMap<O, usize>,
    mor_index: HashMap<M, usize>,
}

impl<O: Hash + Eq + Clone, M: Hash + Eq + Clone> Labelled<O, M> {
    pub fn obj(&self, o: &O) -> Option<usize> {
        self.obj_index.get(o).copied()
    }

    pub fn mor(&self, m: &M) -> Option<usize> {
        self.mor_index.get(m).copied()
    }
}

/// Collects labelled objects and morphisms, then validates the composition
/// given by a label-level rule.
pub struct CatBuilder<O, M> {
    objs: Vec<O>,
    obj_index: HashMap<O, usize>,
    mors: Vec<(M, usize, usize)>,
    mor_index: HashMap<M, usize>,
    ids: Vec<Option<usize>>,
}

impl<O: Hash + Eq + Clone + Debug, M: Hash + Eq + Clone + Debug> Default for CatBuilder<O, M> {
    fn default() -> Self {
        CatBuilder {
            objs: Vec::new(),
            obj_index: HashMap::new(),
            mors: Vec::new(),
            mor_index: HashMap::new(),
            ids: Vec::new(),
        }
    }
}

impl<O: Hash + Eq + Clone + Debug, M: Hash + Eq + Clone + Debug> CatBuilder<O, M> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an object, or returns the index of an existing equal label.
    pub fn object(&mut self, o: O) -> usize {
        if let Some(&i) = self.obj_index.get(&o) {
            return i;
        }
        let i = self.objs.len();
        self.obj_index.insert(o.clone(), i);
        self.objs.push(o);
        self.ids.push(None);
        i
    }

    pub fn object_index(&self, o: &O) -> Option<usize> {
        self.obj_index.get(o).copied()
    }

    pub fn object_label(&self, i: usize) -> &O {
        &self.objs[i]
    }

    pub fn object_count(&self) -> usize {
        self.objs.len()
    }

    /// Adds a morphism, or returns the index of an existing equal label.
    pub fn morphism(&mut self, m: M, src: usize, tgt: usize) -> usize {
        if let Some(&i) = self.mor_index.get(&m) {
            assert_eq!(
                (self.mors[i].1, self.mors[i].2),
                (src, tgt),
                "morphism label {m:?} reused with other endpoints"
            );
            return i;
        }
        let i = self.mors.len();
        self.mor_index.insert(m.clone(), i);
        self.mors.push((m, src, tgt));
        i
    }

    /// Adds the identity of `obj` with the given label.
    pub fn identity(&mut self, obj: usize, m: M) -> usize {
        let i = self.morphism(m, obj, obj);
        self.ids[obj] = Some(i);
        i
    }

    /// Builds with positional names `o0, o1, ...` and `m0, m1, ...`.
    pub fn build(self, compose: impl Fn(&M, &M) -> M) -> Result<Labelled<O, M>, CatError> {
        self.build_named(compose, |i, _| format!("o{i}"), |i, _| format!("m{i}"))
    }

    /// Builds with names derived from the labels.
    pub fn build_named(
        self,
        compose: impl Fn(&M, &M) -> M,
        obj_name: impl Fn(usize, &O) -> String,
        mor_name: impl Fn(usize, &M) -> String,
    ) -> Result<Labelled<O, M>, CatError> {
        let CatBuilder {
            objs,
            obj_index,
            mors,
            mor_index,
            ids,
        } = self;
        let objects: Vec<String> = objs
            .iter()
            .enumerate()
            .map(|(i, o)| obj_name(i, o))
            .collect();
        let mut ids_out = Vec::with_capacity(ids.len());
        for (o, id) in ids.iter().enumerate() {
            ids_out.push(id.ok_or_else(|| CatError::BadIdentity {
                object: objects[o].clone(),
            })?);
        }
        let morphisms: Vec<Morphism> = mors
            .iter()
            .enumerate()
            .map(|(i, (m, s, t))| Morphism {
                name: mor_name(i, m),
                src: *s,
                tgt: *t,
            })
            .collect();
        let cat = FinCat::from_parts(objects, morphisms, ids_out, |f, g| {
            let r = compose(&mors[f].0, &mors[g].0);
            Some(mor_index.get(&r).copied().unwrap_or(usize::MAX))
        })?;
        Ok(Labelled {
            cat: Arc::new(cat),
            objs,
            mors: mors.into_iter().map(|(m, _, _)| m).collect(),
            obj_index,
            mor_index,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrow_category_from_labels() {
        let mut b: CatBuilder<&str, (&str, &str)> = CatBuilder::new();
        let a = b.object("a");
        let c = b.object("b");
        b.identity(a, ("a", "a"));
        b.identity(c, ("b", "b"));
        b.morphism(("a", "b"), a, c);
        let l = b.build(|f, g| (f.0, g.1)).unwrap();
        assert_eq!(l.cat.object_count(), 2);
        assert_eq!(l.cat.morphism_count(), 3);
        assert_eq!(l.mor(&("a", "b")), Some(2));
    }

    #[test]
    fn missing_composite_is_reported() {
        let mut b: CatBuilder<u8, (u8, u8)> = CatBuilder::new();
        for i in 0..3 {
            let o = b.object(i);
            b.identity(o, (i, i));
        }
        b.morphism((0, 1), 0, 1);
        b.morphism((1, 2), 1, 2);
        assert!(matches!(
            b.build(|f, g| (f.0, g.1)),
            Err(CatError::MissingComposite { .. })
        ));
    }
}
