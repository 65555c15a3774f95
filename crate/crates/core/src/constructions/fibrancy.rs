//! Reedy quasi-fibrancy checks, total-fiber models `m_∅/Φ` of cubes, and the
//! base case of Quillen's Theorem B for Grothendieck constructions.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::grothendieck::grothendieck;
use super::matching::{matching_action, matching_functor, Matching, MatchingAction, MatchingError};
use crate::equivariant::{fixed_category, FixedCat, GAction, GDiagram};
use crate::fincat::{over_category, CatDiagram, CatError, Comma, FinCat, Functor, FunctorData};
use crate::groups::{Group, Subgroup, SubgroupLattice};
use crate::simplicial::{
    homology, homology_equivalence, nerve, EquivalenceReport, HomologyResult, SimplicialError,
    Verdict,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FibrancyError {
    #[error("category is not loop-free")]
    NotLoopFree,
    #[error("index category is not a cube: object 0 must be initial")]
    NotCube,
    #[error("the given family is not a strict natural transformation")]
    InvalidTransformation,
    #[error(transparent)]
    Matching(MatchingError),
    #[error(transparent)]
    Simplicial(SimplicialError),
    #[error(transparent)]
    Cat(#[from] CatError),
}

impl From<MatchingError> for FibrancyError {
    fn from(e: MatchingError) -> Self {
        match e {
            MatchingError::InvalidTransformation => FibrancyError::InvalidTransformation,
            e => FibrancyError::Matching(e),
        }
    }
}

impl From<SimplicialError> for FibrancyError {
    fn from(e: SimplicialError) -> Self {
        match e {
            SimplicialError::NotLoopFree => FibrancyError::NotLoopFree,
            e => FibrancyError::Simplicial(e),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QfMode {
    Plain,
    Equivariant,
}

/// One induced functor `m_i^H/Φ → m_i^H/Φ'` and its verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QfCheck {
    pub object: String,
    /// Elements of the subgroup `H ≤ G_i`, by name.
    pub subgroup: Vec<String>,
    pub source: String,
    pub target: String,
    pub morphism: String,
    pub report: EquivalenceReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QfReport {
    pub mode: QfMode,
    pub max_dim: usize,
    pub verdict: Verdict,
    pub checks: Vec<QfCheck>,
}

/// Aggregate verdict: any failure fails, otherwise any doubt is reported.
pub fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    verdicts
        .into_iter()
        .fold(Verdict::Pass, |acc, v| match (acc, v) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        })
}

/// `F` restricted to fixed subcategories it maps into each other.
fn restrict_to_fixed(f: &Functor, src: &FixedCat, tgt: &FixedCat) -> Functor {
    let obj = src
        .obj
        .iter()
        .map(|&o| {
            tgt.object_of(f.obj[o])
                .expect("equivariant functors keep fixed objects")
        })
        .collect();
    let mor = src
        .mor
        .iter()
        .map(|&m| {
            tgt.morphism_of(f.mor[m])
                .expect("equivariant functors keep fixed morphisms")
        })
        .collect();
    Functor::new_unchecked(src.cat.clone(), tgt.cat.clone(), obj, mor)
}

struct Level<'a> {
    m: &'a Matching,
    /// Fixed subcategory of Hom, and the fixed comma `(m/Φ)^H` per fixed Φ.
    hom_fixed: FixedCat,
    commas: BTreeMap<usize, (Comma, FixedCat)>,
    subgroup: Vec<String>,
}

/// The subcategory fixed by the whole acting group.
fn fully_fixed(a: &GAction) -> FixedCat {
    let g = a.group();
    fixed_category(
        a,
        &Subgroup::from_mask(g, full(g.order())).expect("whole group"),
    )
}

fn everything(cat: &Arc<FinCat>) -> FixedCat {
    fully_fixed(&GAction::trivial(Arc::new(Group::trivial()), cat.clone()))
}

fn level<'a>(
    m: &'a Matching,
    action: Option<(&MatchingAction, &Subgroup)>,
) -> Result<Level<'a>, FibrancyError> {
    let (hom_fixed, subgroup) = match action {
        Some((a, h)) => {
            let g = a.hom.group();
            (
                fixed_category(&a.hom, h),
                h.iter().map(|e| g.name(e).to_string()).collect(),
            )
        }
        None => (
            everything(m.hom.cat()),
            vec![Group::trivial().name(0).to_string()],
        ),
    };
    let commas = hom_fixed
        .obj
        .par_iter()
        .map(|&phi| {
            let c = m.over(phi);
            let fixed = match action {
                Some((a, h)) => fully_fixed(&a.on_comma(phi, &c, h)?),
                None => everything(&c.cat),
            };
            Ok((phi, (c, fixed)))
        })
        .collect::<Result<BTreeMap<_, _>, FibrancyError>>()?;
    Ok(Level {
        m,
        hom_fixed,
        commas,
        subgroup,
    })
}

fn full(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn level_checks(l: &Level, object: &str, max_dim: usize) -> Result<Vec<QfCheck>, FibrancyError> {
    let hom = &**l.m.hom.cat();
    l.hom_fixed
        .mor
        .par_iter()
        .map(|&lambda| {
            let (s, t) = (hom.src(lambda), hom.tgt(lambda));
            let (cs, fs) = &l.commas[&s];
            let (ct, ft) = &l.commas[&t];
            let report = if hom.is_identity(lambda) {
                EquivalenceReport {
                    verdict: Verdict::Pass,
                    failing_dim: None,
                    truncated: false,
                    equivalence_of_categories: true,
                    contractible_components: false,
                }
            } else {
                let f = restrict_to_fixed(&l.m.postcompose(cs, ct, lambda), fs, ft);
                homology_equivalence(&f, max_dim)?
            };
            Ok(QfCheck {
                object: object.to_string(),
                subgroup: l.subgroup.clone(),
                source: hom.object_name(s).to_string(),
                target: hom.object_name(t).to_string(),
                morphism: hom.morphism(lambda).name.clone(),
                report,
            })
        })
        .collect()
}

/// Checks that every morphism `Λ: Φ → Φ'` of `Hom((i<I)/−, X_{i<})^H`
/// induces a homology equivalence `(m_i/Φ)^H → (m_i/Φ')^H` through
/// `max_dim`, for every object `i` and, in equivariant mode, every `H ≤ G_i`.
pub fn reedy_quasi_fibrant(
    x: &GDiagram,
    max_dim: usize,
    mode: QfMode,
) -> Result<QfReport, FibrancyError> {
    let index = x.index();
    if !index.is_loop_free() {
        return Err(FibrancyError::NotLoopFree);
    }
    let mut checks = Vec::new();
    for i in 0..index.object_count() {
        let m = matching_functor(&x.diagram, &[i])?;
        let name = index.object_name(i);
        match mode {
            QfMode::Plain => checks.extend(level_checks(&level(&m, None)?, name, max_dim)?),
            QfMode::Equivariant => {
                let a = matching_action(x, &m)?;
                let lattice = SubgroupLattice::new(a.hom.group())
                    .map_err(crate::equivariant::EquivariantError::from)
                    .map_err(MatchingError::from)?;
                for h in lattice.subgroups() {
                    checks.extend(level_checks(&level(&m, Some((&a, h)))?, name, max_dim)?);
                }
            }
        }
    }
    let verdict = combine(checks.iter().map(|c| c.report.verdict));
    Ok(QfReport {
        mode,
        max_dim,
        verdict,
        checks,
    })
}

/// Plain-mode check of a diagram without group action.
pub fn reedy_quasi_fibrant_plain(
    x: &CatDiagram,
    max_dim: usize,
) -> Result<QfReport, FibrancyError> {
    let t = Arc::new(Group::trivial());
    let a = GAction::trivial(t, x.index.clone());
    let gx = GDiagram::with_trivial_structure(a, x.clone()).map_err(MatchingError::from)?;
    reedy_quasi_fibrant(&gx, max_dim, QfMode::Plain)
}

/// `m_∅/Φ` for a cube on `P(J)` with the action of the stabilizer `G_Φ`.
#[derive(Clone, Debug)]
pub struct TotalFiber {
    pub matching: Matching,
    pub phi: usize,
    pub comma: Comma,
    /// `G_Φ` as a subgroup of `G`, by element index.
    pub stabilizer: Vec<usize>,
    /// Action of `G_Φ` (re-indexed as a group) on `m_∅/Φ`.
    pub action: GAction,
}

impl TotalFiber {
    pub fn cat(&self) -> &Arc<FinCat> {
        &self.comma.cat
    }

    pub fn homology(&self) -> Result<HomologyResult, FibrancyError> {
        Ok(homology(&nerve(&self.comma.cat)?)?)
    }
}

pub fn total_fiber_model(x: &GDiagram, phi: &[FunctorData]) -> Result<TotalFiber, FibrancyError> {
    let index = x.index();
    if index.object_count() == 0 || (0..index.object_count()).any(|y| index.hom(0, y).len() != 1) {
        return Err(FibrancyError::NotCube);
    }
    let matching = matching_functor(&x.diagram, &[0])?;
    let p = matching.transformation(phi)?;
    let a = matching_action(x, &matching)?;
    let h = a.stabilizer(p);
    let comma = matching.over(p);
    let action = a.on_comma(p, &comma, &h)?;
    let stabilizer = h.iter().map(|e| a.elems[e]).collect();
    Ok(TotalFiber {
        matching,
        phi: p,
        comma,
        stabilizer,
        action,
    })
}

/// Homology of `π/d` against the fibre `Y_d` for `π: D≀Y → D`, per `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuillenBCheck {
    pub object: String,
    pub over: HomologyResult,
    pub fibre: HomologyResult,
    pub agree: bool,
}

pub fn quillen_b_base(y: &CatDiagram) -> Result<Vec<QuillenBCheck>, FibrancyError> {
    let g = grothendieck(y);
    (0..y.index.object_count())
        .map(|d| {
            let over = homology(&nerve(&over_category(&g.projection, d)?.cat)?)?;
            let fibre = homology(&nerve(&y.vertices[d])?)?;
            let n = over.betti.len().max(fibre.betti.len());
            let agree = over.agrees_through(&fibre, n);
            Ok(QuillenBCheck {
                object: y.index.object_name(d).to_string(),
                over,
                fibre,
                agree,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::over_category;
    use crate::gsets::GSet;

    fn poset(names: &[&str], leq: impl Fn(usize, usize) -> bool) -> Arc<FinCat> {
        Arc::new(FinCat::poset(names, leq).unwrap())
    }

    /// The cospan `a → c ← b`.
    fn cospan() -> Arc<FinCat> {
        poset(&["a", "b", "c"], |x, y| x == y || y == 2)
    }

    fn cospan_diagram(f: Functor, g: Functor) -> CatDiagram {
        let i = cospan();
        let mut edges: Vec<Functor> = (0..i.morphism_count())
            .map(|_| Functor::identity(&f.dom))
            .collect();
        edges[i.id(1)] = Functor::identity(&g.dom);
        edges[i.id(2)] = Functor::identity(&f.cod);
        edges[i.hom(0, 2)[0]] = f.clone();
        edges[i.hom(1, 2)[0]] = g.clone();
        CatDiagram::new(i, vec![f.dom.clone(), g.dom.clone(), f.cod.clone()], edges).unwrap()
    }

    #[test]
    fn constant_diagram_passes() {
        let arrow = poset(&["p", "q"], |x, y| x <= y);
        let x = CatDiagram::constant(&cospan(), &arrow);
        let r = reedy_quasi_fibrant_plain(&x, 3).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(!r.checks.is_empty());
    }

    #[test]
    fn empty_fibre_fails() {
        // f: {*} → {u < v} picks v, so f/u = ∅ while f/v = ∗
        let pt = Arc::new(FinCat::terminal());
        let d = poset(&["u", "v"], |x, y| x <= y);
        let f = Functor::constant(&pt, &d, 1);
        let x = cospan_diagram(f, Functor::identity(&d));
        let r = reedy_quasi_fibrant_plain(&x, 2).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let bad = r
            .checks
            .iter()
            .find(|c| c.report.verdict == Verdict::Fail)
            .unwrap();
        assert_eq!(bad.object, "a");
        assert_eq!(bad.report.failing_dim, Some(0));
    }

    #[test]
    fn fibres_constant_up_to_iso_pass() {
        // f: C × D → D the projection, so every f/d is contractible-equivalent to C
        let d = poset(&["0", "1"], |x, y| x <= y);
        let c = poset(&["s", "t"], |x, y| x <= y);
        let prod = crate::fincat::product(&[c.clone(), d.clone()]);
        let obj = prod.objs.iter().map(|o| o[1]).collect();
        let mor = prod.mors.iter().map(|m| m[1]).collect();
        let f = Functor::new(prod.cat.clone(), d.clone(), obj, mor).unwrap();
        let x = cospan_diagram(f, Functor::identity(&d));
        let r = reedy_quasi_fibrant_plain(&x, 3).unwrap();
        assert_eq!(
            r.verdict,
            Verdict::Pass,
            "{:?}",
            r.checks.iter().find(|c| c.report.verdict != Verdict::Pass)
        );
    }

    #[test]
    fn equivariant_mode_on_swapped_cospan() {
        let g = Group::cyclic(2);
        let j = GSet::regular(&g);
        // nonempty subsets of the regular Z/2-set: a cospan swapped by the generator
        let masks = vec![1u64, 2, 3];
        let cat = poset(&["{0}", "{1}", "{0,1}"], |x, y| masks[x] & !masks[y] == 0);
        let b = GAction::on_poset_of_masks(&j, cat.clone(), masks.clone());
        let arrow = poset(&["p", "q"], |x, y| x <= y);
        let x = GDiagram::with_trivial_structure(b, CatDiagram::constant(&cat, &arrow)).unwrap();
        let r = reedy_quasi_fibrant(&x, 3, QfMode::Equivariant).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.checks.iter().any(|c| c.subgroup.len() == 2));
    }

    #[test]
    fn one_cube_total_fiber_is_over_category() {
        let d = poset(&["0", "1", "2"], |x, y| x <= y);
        let c = poset(&["s", "t"], |x, y| x <= y);
        let i = Arc::new(FinCat::powerset(1));
        let mut edges = vec![Functor::identity(&c); 3];
        edges[i.id(1)] = Functor::identity(&d);
        let m = i.hom(0, 1)[0];
        let fo = [0, 2];
        let fmor = (0..c.morphism_count())
            .map(|u| d.hom(fo[c.src(u)], fo[c.tgt(u)])[0])
            .collect();
        let fm = Functor::new(c.clone(), d.clone(), fo.to_vec(), fmor).unwrap();
        edges[m] = fm.clone();
        let x = CatDiagram::new(i.clone(), vec![c.clone(), d.clone()], edges).unwrap();
        let gx =
            GDiagram::with_trivial_structure(GAction::trivial(Arc::new(Group::trivial()), i), x)
                .unwrap();
        for dd in 0..3 {
            let phi = vec![FunctorData {
                obj: vec![dd],
                mor: vec![d.id(dd)],
            }];
            let t = total_fiber_model(&gx, &phi).unwrap();
            let over = over_category(&fm, dd).unwrap();
            assert_eq!(t.cat().object_count(), over.cat.object_count());
            assert_eq!(t.cat().morphism_count(), over.cat.morphism_count());
            assert_eq!(
                t.homology().unwrap(),
                homology(&nerve(&over.cat).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn invalid_phi_is_rejected() {
        let i = Arc::new(FinCat::powerset(1));
        let x = CatDiagram::constant(&i, &Arc::new(FinCat::discrete(&["u", "v"])));
        let gx =
            GDiagram::with_trivial_structure(GAction::trivial(Arc::new(Group::trivial()), i), x)
                .unwrap();
        let bad = vec![FunctorData {
            obj: vec![5],
            mor: vec![0],
        }];
        assert_eq!(
            total_fiber_model(&gx, &bad).unwrap_err(),
            FibrancyError::InvalidTransformation
        );
    }

    #[test]
    fn constant_cube_has_point_fibre() {
        let g = Group::cyclic(2);
        let a = GAction::powerset(&GSet::regular(&g));
        let c = poset(&["p", "q"], |x, y| x <= y);
        let x =
            GDiagram::with_trivial_structure(a.clone(), CatDiagram::constant(a.cat(), &c)).unwrap();
        let m = matching_functor(&x.diagram, &[0]).unwrap();
        let family: Vec<FunctorData> = (0..m.k.diagram.vertices.len())
            .map(|s| {
                let v = &m.k.diagram.vertices[s];
                FunctorData {
                    obj: vec![0; v.object_count()],
                    mor: vec![c.id(0); v.morphism_count()],
                }
            })
            .collect();
        let t = total_fiber_model(&x, &family).unwrap();
        assert!(t.homology().unwrap().is_point());
        assert_eq!(t.stabilizer.len(), 2);
    }

    #[test]
    fn quillen_b_with_isomorphic_fibres() {
        let d = poset(&["0", "1"], |x, y| x <= y);
        let c = Arc::new(FinCat::discrete(&["u", "v"]));
        let mut edges = vec![Functor::identity(&c); d.morphism_count()];
        edges[d.hom(0, 1)[0]] =
            Functor::new(c.clone(), c.clone(), vec![1, 0], vec![c.id(1), c.id(0)]).unwrap();
        let y = CatDiagram::new(d, vec![c.clone(), c], edges).unwrap();
        let checks = quillen_b_base(&y).unwrap();
        assert!(checks.iter().all(|q| q.agree));
        assert_eq!(checks[1].over.betti[0], 2);
    }
}
