//! Comma, over and under categories, the slices `i<I`, `U≤I`, `U<I`, and
//! degree filtrations.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{CatBuilder, CatError, FinCat, Functor};

/// The comma category `F↓G` of functors `F: A → C` and `G: B → C`.
///
/// Objects are `(a, b, γ: Fa → Gb)`; a morphism `(a,b,γ) → (a',b',γ')` is a
/// pair `(u, v)` with `γ'∘F(u) = G(v)∘γ`.
#[derive(Clone, Debug)]
pub struct Comma {
    pub cat: Arc<FinCat>,
    pub objs: Vec<(usize, usize, usize)>,
    /// `(source object, target object, u, v)` per morphism.
    pub mors: Vec<(usize, usize, usize, usize)>,
    pub proj_a: Functor,
    pub proj_b: Functor,
    index: HashMap<(usize, usize, usize), usize>,
}

impl Comma {
    pub fn object_of(&self, a: usize, b: usize, gamma: usize) -> Option<usize> {
        self.index.get(&(a, b, gamma)).copied()
    }
}

pub fn comma(f: &Functor, g: &Functor) -> Result<Comma, CatError> {
    assert!(
        Arc::ptr_eq(&f.cod, &g.cod) || *f.cod == *g.cod,
        "comma of functors with different codomains"
    );
    let (ca, cb, cc) = (&*f.dom, &*g.dom, &*f.cod);
    let mut b: CatBuilder<(usize, usize, usize), (usize, usize, usize, usize)> = CatBuilder::new();
    for a in 0..ca.object_count() {
        for bb in 0..cb.object_count() {
            for &gamma in cc.hom(f.obj[a], g.obj[bb]) {
                let o = b.object((a, bb, gamma));
                b.identity(o, (o, o, ca.id(a), cb.id(bb)));
            }
        }
    }
    for o in 0..b.object_count() {
        let (a, bb, gamma) = *b.object_label(o);
        for &u in ca.out_of(a) {
            for &v in cb.out_of(bb) {
                if ca.is_identity(u) && cb.is_identity(v) {
                    continue;
                }
                let (a2, b2) = (ca.tgt(u), cb.tgt(v));
                let lhs = cc.then(gamma, g.mor[v]);
                for &gamma2 in cc.hom(f.obj[a2], g.obj[b2]) {
                    if cc.then(f.mor[u], gamma2) == lhs {
                        let t = b
                            .object_index(&(a2, b2, gamma2))
                            .expect("object enumerated");
                        b.morphism((o, t, u, v), o, t);
                    }
                }
            }
        }
    }
    let l = b.build_named(
        |x, y| (x.0, y.1, ca.then(x.2, y.2), cb.then(x.3, y.3)),
        |_, &(a, bb, gamma)| {
            format!(
                "({},{},{})",
                ca.object_name(a),
                cb.object_name(bb),
                cc.morphism(gamma).name
            )
        },
        |_, &(o, t, u, v)| {
            format!(
                "({},{}):{}->{}",
                ca.morphism(u).name,
                cb.morphism(v).name,
                o,
                t
            )
        },
    )?;
    let proj_a = Functor::new_unchecked(
        l.cat.clone(),
        f.dom.clone(),
        l.objs.iter().map(|o| o.0).collect(),
        l.mors.iter().map(|m| m.2).collect(),
    );
    let proj_b = Functor::new_unchecked(
        l.cat.clone(),
        g.dom.clone(),
        l.objs.iter().map(|o| o.1).collect(),
        l.mors.iter().map(|m| m.3).collect(),
    );
    let index = l.objs.iter().enumerate().map(|(k, &o)| (o, k)).collect();
    Ok(Comma {
        cat: l.cat,
        objs: l.objs,
        mors: l.mors,
        proj_a,
        proj_b,
        index,
    })
}

/// `F/d`: objects `(i, α: F(i) → d)`, morphisms `u: i → i'` with `α'∘F(u) = α`.
#[derive(Clone, Debug)]
pub struct OverCat {
    pub cat: Arc<FinCat>,
    pub objs: Vec<(usize, usize)>,
    /// `(source object, target object, u)` per morphism.
    pub mors: Vec<(usize, usize, usize)>,
    pub projection: Functor,
}

/// `d/F`: objects `(i, α: d → F(i))`, morphisms `u: i → i'` with `F(u)∘α = α'`.
#[derive(Clone, Debug)]
pub struct UnderCat {
    pub cat: Arc<FinCat>,
    pub objs: Vec<(usize, usize)>,
    /// `(source object, target object, u)` per morphism.
    pub mors: Vec<(usize, usize, usize)>,
    pub projection: Functor,
}

fn check_object(c: &FinCat, d: usize) -> Result<(), CatError> {
    if d >= c.object_count() {
        return Err(CatError::UnknownObject(format!("#{d}")));
    }
    Ok(())
}

pub fn over_category(f: &Functor, d: usize) -> Result<OverCat, CatError> {
    let (dom, cod) = (&*f.dom, &*f.cod);
    check_object(cod, d)?;
    let (cat, objs, mors) = slice_by(
        dom,
        |i| cod.hom(f.obj[i], d).to_vec(),
        |u, a, a2| cod.then(f.mor[u], a2) == a,
    )?;
    let projection = Functor::new_unchecked(
        cat.clone(),
        f.dom.clone(),
        objs.iter().map(|o| o.0).collect(),
        mors.iter().map(|m| m.2).collect(),
    );
    Ok(OverCat {
        cat,
        objs,
        mors,
        projection,
    })
}

pub fn under_category(f: &Functor, d: usize) -> Result<UnderCat, CatError> {
    let (dom, cod) = (&*f.dom, &*f.cod);
    check_object(cod, d)?;
    let (cat, objs, mors) = slice_by(
        dom,
        |i| cod.hom(d, f.obj[i]).to_vec(),
        |u, a, a2| cod.then(a, f.mor[u]) == a2,
    )?;
    let projection = Functor::new_unchecked(
        cat.clone(),
        f.dom.clone(),
        objs.iter().map(|o| o.0).collect(),
        mors.iter().map(|m| m.2).collect(),
    );
    Ok(UnderCat {
        cat,
        objs,
        mors,
        projection,
    })
}

type SliceParts = (Arc<FinCat>, Vec<(usize, usize)>, Vec<(usize, usize, usize)>);

/// Shared body of over/under categories: objects `(i, α)` for `α` in
/// `arrows(i)`, morphisms `u: i → i'` accepted by `commutes(u, α, α')`.
fn slice_by(
    dom: &FinCat,
    arrows: impl Fn(usize) -> Vec<usize>,
    commutes: impl Fn(usize, usize, usize) -> bool,
) -> Result<SliceParts, CatError> {
    let mut b: CatBuilder<(usize, usize), (usize, usize, usize)> = CatBuilder::new();
    for i in 0..dom.object_count() {
        for a in arrows(i) {
            let o = b.object((i, a));
            b.identity(o, (o, o, dom.id(i)));
        }
    }
    for o in 0..b.object_count() {
        let (i, a) = *b.object_label(o);
        for &u in dom.out_of(i) {
            if dom.is_identity(u) {
                continue;
            }
            let j = dom.tgt(u);
            for a2 in arrows(j) {
                if commutes(u, a, a2) {
                    let t = b.object_index(&(j, a2)).expect("object enumerated");
                    b.morphism((o, t, u), o, t);
                }
            }
        }
    }
    let l = b.build_named(
        |x, y| (x.0, y.1, dom.then(x.2, y.2)),
        |_, &(i, a)| format!("({},{})", dom.object_name(i), a),
        |_, &(o, t, u)| format!("{}:{}->{}", dom.morphism(u).name, o, t),
    )?;
    Ok((l.cat, l.objs, l.mors))
}

/// The categories `i<I`, `U≤I` and `U<I`.
///
/// Objects are morphisms `α: u → j` of `I` with `u ∈ U` (non-identity when
/// strict); a morphism `α → β` is `v` with `β = v∘α`.
#[derive(Clone, Debug)]
pub struct Slice {
    pub cat: Arc<FinCat>,
    /// The `I`-morphism labelling each object.
    pub objs: Vec<usize>,
    /// `(α, v)` per morphism.
    pub mors: Vec<(usize, usize)>,
    /// Projection onto the target.
    pub projection: Functor,
    index: HashMap<usize, usize>,
}

impl Slice {
    pub fn object_of(&self, alpha: usize) -> Option<usize> {
        self.index.get(&alpha).copied()
    }
}

/// `U≤I` (`strict = false`) or `U<I` (`strict = true`). For `U = {i}` and
/// strict this is `i<I`. Elements of `U` must share their under-degree.
pub fn slice_under(i_cat: &Arc<FinCat>, u: &[usize], strict: bool) -> Result<Slice, CatError> {
    let cat = &**i_cat;
    for &x in u {
        check_object(cat, x)?;
    }
    if u.len() > 1 {
        let deg = degree_filtration(cat, Direction::Under)?;
        let d0 = deg.degree[u[0]];
        if let Some(&bad) = u.iter().find(|&&x| deg.degree[x] != d0) {
            return Err(CatError::MixedDegree(cat.object_name(bad).to_string()));
        }
    }
    let mut b: CatBuilder<usize, (usize, usize)> = CatBuilder::new();
    let mut seen = vec![false; cat.object_count()];
    for &x in u {
        if std::mem::replace(&mut seen[x], true) {
            continue;
        }
        for &a in cat.out_of(x) {
            if strict && cat.is_identity(a) {
                continue;
            }
            let o = b.object(a);
            b.identity(o, (a, cat.id(cat.tgt(a))));
        }
    }
    for o in 0..b.object_count() {
        let a = *b.object_label(o);
        for &v in cat.out_of(cat.tgt(a)) {
            if cat.is_identity(v) {
                continue;
            }
            if let Some(t) = b.object_index(&cat.then(a, v)) {
                b.morphism((a, v), o, t);
            }
        }
    }
    let l = b.build_named(
        |x, y| (x.0, cat.then(x.1, y.1)),
        |_, &a| cat.morphism(a).name.clone(),
        |_, &(a, v)| format!("{}@{}", cat.morphism(v).name, cat.morphism(a).name),
    )?;
    let projection = Functor::new_unchecked(
        l.cat.clone(),
        i_cat.clone(),
        l.objs.iter().map(|&a| cat.tgt(a)).collect(),
        l.mors.iter().map(|m| m.1).collect(),
    );
    let index = l.objs.iter().enumerate().map(|(k, &a)| (a, k)).collect();
    Ok(Slice {
        cat: l.cat,
        objs: l.objs,
        mors: l.mors,
        projection,
        index,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Longest chain of non-identity morphisms starting at the object.
    Under,
    /// Longest chain of non-identity morphisms ending at the object.
    Over,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Degrees {
    pub direction: Direction,
    pub degree: Vec<usize>,
    pub max: usize,
    /// Every under (or over) category has a finite-dimensional nerve. Always
    /// true for a finite loop-free category.
    pub left_finite: bool,
}

impl Degrees {
    /// Objects of degree exactly `n`.
    pub fn level(&self, n: usize) -> Vec<usize> {
        (0..self.degree.len())
            .filter(|&o| self.degree[o] == n)
            .collect()
    }

    /// The full subcategory on objects of degree at most `n`, with the
    /// original indices of its objects and morphisms.
    pub fn up_to(&self, cat: &FinCat, n: usize) -> (FinCat, Vec<usize>, Vec<usize>) {
        let keep: Vec<bool> = self.degree.iter().map(|&d| d <= n).collect();
        cat.full_subcategory(&keep)
    }

    /// The full subcategory on objects of degree exactly `n`.
    pub fn exactly(&self, cat: &FinCat, n: usize) -> (FinCat, Vec<usize>, Vec<usize>) {
        let keep: Vec<bool> = self.degree.iter().map(|&d| d == n).collect();
        cat.full_subcategory(&keep)
    }
}

pub fn degree_filtration(cat: &FinCat, direction: Direction) -> Result<Degrees, CatError> {
    if !cat.is_loop_free() {
        return Err(CatError::NotLoopFree);
    }
    let n = cat.object_count();
    let mut degree: Vec<Option<usize>> = vec![None; n];
    fn visit(cat: &FinCat, o: usize, dir: Direction, degree: &mut Vec<Option<usize>>) -> usize {
        if let Some(d) = degree[o] {
            return d;
        }
        let next: Vec<usize> = match dir {
            Direction::Under => cat
                .out_of(o)
                .iter()
                .filter(|&&m| !cat.is_identity(m))
                .map(|&m| cat.tgt(m))
                .collect(),
            Direction::Over => cat
                .into_obj(o)
                .iter()
                .filter(|&&m| !cat.is_identity(m))
                .map(|&m| cat.src(m))
                .collect(),
        };
        let d = next
            .into_iter()
            .map(|j| 1 + visit(cat, j, dir, degree))
            .max()
            .unwrap_or(0);
        degree[o] = Some(d);
        d
    }
    for o in 0..n {
        visit(cat, o, direction, &mut degree);
    }
    let degree: Vec<usize> = degree.into_iter().map(|d| d.expect("visited")).collect();
    let max = degree.iter().copied().max().unwrap_or(0);
    Ok(Degrees {
        direction,
        degree,
        max,
        left_finite: true,
    })
}
