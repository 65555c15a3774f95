//! Products and limits of finite diagrams of categories.

use std::sync::Arc;

use super::{CatBuilder, CatDiagram, FinCat, Functor, Labelled};

/// Cartesian product; labels are tuples of component indices.
pub fn product(cats: &[Arc<FinCat>]) -> Labelled<Vec<usize>, Vec<usize>> {
    let mut b: CatBuilder<Vec<usize>, Vec<usize>> = CatBuilder::new();
    let mut objs: Vec<Vec<usize>> = vec![Vec::new()];
    for c in cats {
        objs = objs
            .into_iter()
            .flat_map(|t| {
                (0..c.object_count()).map(move |o| {
                    let mut t = t.clone();
                    t.push(o);
                    t
                })
            })
            .collect();
    }
    for t in &objs {
        let o = b.object(t.clone());
        b.identity(o, t.iter().zip(cats).map(|(&x, c)| c.id(x)).collect());
    }
    for (o, t) in objs.iter().enumerate() {
        let mut mors: Vec<Vec<usize>> = vec![Vec::new()];
        for (&x, c) in t.iter().zip(cats) {
            mors = mors
                .into_iter()
                .flat_map(|m| {
                    c.out_of(x).iter().map(move |&f| {
                        let mut m = m.clone();
                        m.push(f);
                        m
                    })
                })
                .collect();
        }
        for m in mors {
            let tgt: Vec<usize> = m.iter().zip(cats).map(|(&f, c)| c.tgt(f)).collect();
            let ti = b.object_index(&tgt).expect("object enumerated");
            b.morphism(m, o, ti);
        }
    }
    b.build_named(
        |f, g| {
            f.iter()
                .zip(g)
                .zip(cats)
                .map(|((&x, &y), c)| c.then(x, y))
                .collect()
        },
        |_, t| {
            format!(
                "({})",
                t.iter()
                    .zip(cats)
                    .map(|(&x, c)| c.object_name(x).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        },
        |_, t| {
            format!(
                "({})",
                t.iter()
                    .zip(cats)
                    .map(|(&x, c)| c.morphism(x).name.clone())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        },
    )
    .expect("products of categories are categories")
}

/// Limit of a diagram of categories: compatible families of objects and of
/// morphisms, with the projections to each vertex.
#[derive(Clone, Debug)]
pub struct CatLimit {
    pub cat: Arc<FinCat>,
    /// One vertex object per index object, for each limit object.
    pub objs: Vec<Vec<usize>>,
    pub mors: Vec<Vec<usize>>,
    pub projections: Vec<Functor>,
}

impl CatLimit {
    pub fn object_of(&self, family: &[usize]) -> Option<usize> {
        self.objs.iter().position(|f| f == family)
    }

    pub fn morphism_of(&self, family: &[usize]) -> Option<usize> {
        self.mors.iter().position(|f| f == family)
    }
}

pub fn cat_limit(d: &CatDiagram) -> CatLimit {
    let idx = &*d.index;
    let n = idx.object_count();
    // edge α: i → j is checked once both ends are assigned
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for m in idx.non_identities() {
        checks[idx.src(m).max(idx.tgt(m))].push(m);
    }

    fn families(
        k: usize,
        d: &CatDiagram,
        checks: &[Vec<usize>],
        choices: &dyn Fn(usize, &[usize]) -> Vec<usize>,
        apply: &dyn Fn(usize, usize) -> usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == d.vertices.len() {
            out.push(cur.clone());
            return;
        }
        for c in choices(k, cur) {
            cur.push(c);
            let idx = &*d.index;
            if checks[k]
                .iter()
                .all(|&m| apply(m, cur[idx.src(m)]) == cur[idx.tgt(m)])
            {
                families(k + 1, d, checks, choices, apply, cur, out);
            }
            cur.pop();
        }
    }

    let mut objs = Vec::new();
    families(
        0,
        d,
        &checks,
        &|k, _| (0..d.vertices[k].object_count()).collect(),
        &|m, x| d.edges[m].obj[x],
        &mut Vec::new(),
        &mut objs,
    );
    let mut b: CatBuilder<Vec<usize>, Vec<usize>> = CatBuilder::new();
    for f in &objs {
        let o = b.object(f.clone());
        b.identity(
            o,
            f.iter()
                .enumerate()
                .map(|(i, &x)| d.vertices[i].id(x))
                .collect(),
        );
    }
    for (o, src) in objs.iter().enumerate() {
        let mut mors = Vec::new();
        families(
            0,
            d,
            &checks,
            &|k, _| d.vertices[k].out_of(src[k]).to_vec(),
            &|m, f| d.edges[m].mor[f],
            &mut Vec::new(),
            &mut mors,
        );
        for m in mors {
            let tgt: Vec<usize> = m
                .iter()
                .enumerate()
                .map(|(i, &f)| d.vertices[i].tgt(f))
                .collect();
            let t = b
                .object_index(&tgt)
                .expect("targets of compatible families are compatible");
            b.morphism(m, o, t);
        }
    }
    let l = b
        .build(|f, g| {
            f.iter()
                .zip(g)
                .enumerate()
                .map(|(i, (&x, &y))| d.vertices[i].then(x, y))
                .collect()
        })
        .expect("limits of categories are categories");
    let projections = (0..n)
        .map(|i| {
            Functor::new_unchecked(
                l.cat.clone(),
                d.vertices[i].clone(),
                l.objs.iter().map(|f| f[i]).collect(),
                l.mors.iter().map(|f| f[i]).collect(),
            )
        })
        .collect();
    CatLimit {
        cat: l.cat,
        objs: l.objs,
        mors: l.mors,
        projections,
    }
}
