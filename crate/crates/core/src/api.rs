//! JSON-in, JSON-out entry points shared by the command line and the C ABI.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::bounds::{
    bm_bound, configuration_bound, dual_bm_bound, holim_connectivity_bound, holim_dims,
    mapping_space_connectivity_bound, restriction_connectivity_bound, submanifold_bound,
    suspension_closed_form, suspension_via_bm, BoundsError, CocartData, ConnFunction,
    MapSpaceEntry, ObjectData, PointData, SubsetEntry, VertexConn,
};
use crate::checks::{run_check, CheckError, SizeCaps};
use crate::constructions::{
    fixed_grothendieck_witness, grothendieck, hom_category, matching_functor, reedy_quasi_fibrant,
    total_fiber_model, FibrancyError, HomError, QfMode,
};
use crate::equivariant::GActionSpec;
use crate::ext::ExtInt;
use crate::fincat::{CategorySpec, FinCat};
use crate::groups::{Group, SubgroupLattice};
use crate::gsets::{GSet, GSetSpec};
use crate::io::{DiagramSpec, FunctorSpec, GroupInput, IoError};
use crate::simplicial::{
    homology, homology_equivalence, nerve_truncated, SimplicialError, Verdict,
};

/// Largest number of transformations `Φ` reported when none is selected.
pub const TOTAL_FIBER_LIMIT: usize = 64;

#[derive(Debug, Error)]
pub enum ApiError {
    #[error("unknown verb `{verb}` for `{noun}`; expected one of {expected:?}")]
    UnknownVerb {
        noun: &'static str,
        verb: String,
        expected: &'static [&'static str],
    },
    #[error("unknown subgroup `{0}`")]
    UnknownSubgroup(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("transformation index {0} out of range")]
    NoSuchTransformation(usize),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Fibrancy(#[from] FibrancyError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Cat(#[from] crate::fincat::CatError),
    #[error(transparent)]
    Equivariant(#[from] crate::equivariant::EquivariantError),
    #[error(transparent)]
    GSet(#[from] crate::gsets::GSetError),
}

impl From<serde_json::Error> for ApiError {
    fn from(e: serde_json::Error) -> Self {
        ApiError::Io(IoError::Json(e))
    }
}

/// A result document and, for commands that decide something, its verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub value: Value,
    pub verdict: Option<Verdict>,
}

impl Output {
    fn plain(value: Value) -> Output {
        Output {
            value,
            verdict: None,
        }
    }
}

pub const BOUNDS_VERBS: &[&str] = &[
    "bm",
    "dual-bm",
    "suspension",
    "submanifold",
    "configuration",
    "holim",
    "restriction",
    "mapspace",
];
pub const BUILD_VERBS: &[&str] = &["grothendieck", "fixed-grothendieck", "hom", "matching"];
pub const HOMOLOGY_VERBS: &[&str] = &["nerve", "equivalence"];

/// A G-set given by name (`regular`, `trivial:<n>`, `cosets:<subgroup>`) or
/// explicitly.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GSetInput {
    Name(String),
    Spec(GSetSpec),
}

impl GSetInput {
    pub fn build(&self, group: &Group, lattice: &SubgroupLattice) -> Result<GSet, ApiError> {
        match self {
            GSetInput::Spec(s) => Ok(s.build(group)?),
            GSetInput::Name(n) if n == "regular" => Ok(GSet::regular(group)),
            GSetInput::Name(n) => {
                if let Some(k) = n.strip_prefix("trivial:") {
                    let k: usize = k.parse().map_err(|_| ApiError::UnknownPoint(n.clone()))?;
                    return Ok(GSet::trivial(group, k));
                }
                if let Some(h) = n.strip_prefix("cosets:") {
                    let h = lattice
                        .lookup(h)
                        .ok_or_else(|| ApiError::UnknownSubgroup(h.to_string()))?;
                    return Ok(GSet::transitive(group, &lattice.get(h)));
                }
                Err(ApiError::UnknownPoint(n.clone()))
            }
        }
    }
}

#[derive(Deserialize)]
struct GroupAndSet {
    #[serde(default)]
    group: GroupInput,
    j: GSetInput,
}

#[derive(Deserialize)]
struct BmInput {
    #[serde(flatten)]
    base: GroupAndSet,
    cocart: Vec<SubsetEntry>,
    vertex: Vec<SubsetEntry>,
}

#[derive(Deserialize)]
struct SuspensionInput {
    #[serde(flatten)]
    base: GroupAndSet,
    conn: BTreeMap<String, ExtInt>,
}

#[derive(Deserialize)]
struct PointEntry {
    point: String,
    subgroup: String,
    value: ExtInt,
}

#[derive(Deserialize)]
struct ManifoldInput {
    #[serde(flatten)]
    base: GroupAndSet,
    m: BTreeMap<String, ExtInt>,
    conn_m: BTreeMap<String, ExtInt>,
    #[serde(default)]
    d: Vec<PointEntry>,
}

#[derive(Deserialize)]
struct ObjectEntry {
    object: String,
    subgroup: String,
    value: ExtInt,
}

#[derive(Deserialize)]
struct GCategoryInput {
    #[serde(default)]
    group: GroupInput,
    category: CategorySpec,
    #[serde(default)]
    action: Option<GActionSpec>,
    conn: Vec<ObjectEntry>,
}

#[derive(Deserialize)]
struct MapSpaceInput {
    entries: Vec<MapSpaceEntry>,
}

fn group_lattice(
    g: &GroupInput,
    caps: &SizeCaps,
) -> Result<(Group, Arc<SubgroupLattice>), ApiError> {
    let group = g.build()?;
    caps.check_group(group.order())?;
    let lattice = Arc::new(SubgroupLattice::new(&group).map_err(IoError::from)?);
    Ok((group, lattice))
}

fn with_set(base: &GroupAndSet, caps: &SizeCaps) -> Result<(GSet, Arc<SubgroupLattice>), ApiError> {
    let (group, lattice) = group_lattice(&base.group, caps)?;
    let j = base.j.build(&group, &lattice)?;
    caps.check_j(j.len())?;
    Ok((j, lattice))
}

fn subgroup(lattice: &SubgroupLattice, name: &str) -> Result<usize, ApiError> {
    lattice
        .lookup(name)
        .ok_or_else(|| ApiError::UnknownSubgroup(name.to_string()))
}

fn object_data(
    cat: &FinCat,
    lattice: &SubgroupLattice,
    entries: &[ObjectEntry],
) -> Result<ObjectData, ApiError> {
    entries
        .iter()
        .map(|e| {
            Ok((
                (
                    cat.object_index(&e.object)?,
                    subgroup(lattice, &e.subgroup)?,
                ),
                e.value,
            ))
        })
        .collect()
}

/// `equicat bounds <verb>`.
pub fn bounds(verb: &str, input: &str, caps: &SizeCaps) -> Result<Output, ApiError> {
    let value = match verb {
        "bm" | "dual-bm" => {
            let inp: BmInput = serde_json::from_str(input)?;
            let (j, lattice) = with_set(&inp.base, caps)?;
            let nu = CocartData::from_entries(&j, &lattice, &inp.cocart)?;
            let vc = VertexConn::from_entries(&j, &lattice, &inp.vertex)?;
            let r = if verb == "bm" {
                bm_bound(&j, &lattice, &nu, &vc)?
            } else {
                dual_bm_bound(&j, &lattice, &nu, &vc)?
            };
            serde_json::to_value(r)?
        }
        "suspension" => {
            let inp: SuspensionInput = serde_json::from_str(input)?;
            let (j, lattice) = with_set(&inp.base, caps)?;
            let conn = ConnFunction::from_map(lattice.clone(), &inp.conn)?;
            let closed = suspension_closed_form(&j, &conn)?;
            let bm = suspension_via_bm(&j, &conn)?;
            json!({ "closed_form": closed, "blakers_massey": bm })
        }
        "submanifold" | "configuration" => {
            let inp: ManifoldInput = serde_json::from_str(input)?;
            let (j, lattice) = with_set(&inp.base, caps)?;
            let m = ConnFunction::from_map(lattice.clone(), &inp.m)?;
            let conn_m = ConnFunction::from_map(lattice.clone(), &inp.conn_m)?;
            let r = if verb == "configuration" {
                configuration_bound(&j, &m, &conn_m)?
            } else {
                let mut given = BTreeMap::new();
                for e in &inp.d {
                    let p = j
                        .points()
                        .iter()
                        .position(|q| *q == e.point)
                        .ok_or_else(|| ApiError::UnknownPoint(e.point.clone()))?;
                    given.insert((p, subgroup(&lattice, &e.subgroup)?), e.value);
                }
                let d = PointData::from_fn(&j, &lattice, |p, l| {
                    given.get(&(p, l)).copied().unwrap_or(ExtInt::Fin(0))
                })?;
                submanifold_bound(&j, &m, &d, &conn_m)?
            };
            serde_json::to_value(r)?
        }
        "holim" | "restriction" => {
            let inp: GCategoryInput = serde_json::from_str(input)?;
            let (group, lattice) = group_lattice(&inp.group, caps)?;
            let cat = Arc::new(inp.category.build()?);
            caps.check_index(cat.object_count())?;
            let group = Arc::new(group);
            let a = match &inp.action {
                Some(s) => s.build(group, cat.clone())?,
                None => crate::equivariant::GAction::trivial(group, cat.clone()),
            };
            let conn = object_data(&cat, &lattice, &inp.conn)?;
            if verb == "holim" {
                let dims = holim_dims(&a, &lattice)?;
                let r = holim_connectivity_bound(&a, &lattice, &dims, &conn)?;
                let dims: Vec<Value> = dims
                    .iter()
                    .map(|(&(i, h), v)| json!({ "object": cat.object_name(i), "subgroup": lattice.name(h), "dim": v }))
                    .collect();
                json!({ "bound": r, "dims": dims })
            } else {
                serde_json::to_value(restriction_connectivity_bound(&a, &lattice, &conn)?)?
            }
        }
        "mapspace" => {
            let inp: MapSpaceInput = serde_json::from_str(input)?;
            serde_json::to_value(mapping_space_connectivity_bound(&inp.entries)?)?
        }
        other => {
            return Err(ApiError::UnknownVerb {
                noun: "bounds",
                verb: other.to_string(),
                expected: BOUNDS_VERBS,
            })
        }
    };
    Ok(Output::plain(value))
}

fn diagram(input: &str, caps: &SizeCaps) -> Result<crate::equivariant::GDiagram, ApiError> {
    let spec: DiagramSpec = serde_json::from_str(input)?;
    let x = spec.build()?;
    caps.check_group(x.group().order())?;
    caps.check_index(x.index().object_count())?;
    for v in &x.diagram.vertices {
        caps.check_vertex(v.object_count())?;
    }
    Ok(x)
}

#[derive(Deserialize)]
struct HomInput {
    k: DiagramSpec,
    x: DiagramSpec,
}

/// `equicat build <verb>`. `subgroup` selects `H` for `fixed-grothendieck`
/// (default `G`); `units` names the objects `U` for `matching`.
pub fn build(
    verb: &str,
    input: &str,
    subgroup_name: Option<&str>,
    units: &[String],
    caps: &SizeCaps,
) -> Result<Output, ApiError> {
    match verb {
        "grothendieck" => {
            let x = diagram(input, caps)?;
            Ok(Output::plain(serde_json::to_value(
                grothendieck(&x.diagram).cat.to_spec(),
            )?))
        }
        "fixed-grothendieck" => {
            let x = diagram(input, caps)?;
            let lattice = SubgroupLattice::new(x.group()).map_err(IoError::from)?;
            let h = match subgroup_name {
                Some(n) => subgroup(&lattice, n)?,
                None => lattice.whole(),
            };
            let (value, verdict) = match fixed_grothendieck_witness(&x, &lattice.get(h)) {
                Ok(w) => (
                    json!({ "subgroup": lattice.name(h), "verdict": Verdict::Pass, "witness": w.report() }),
                    Verdict::Pass,
                ),
                Err(e) => (
                    json!({ "subgroup": lattice.name(h), "verdict": Verdict::Fail, "counterexample": e.0 }),
                    Verdict::Fail,
                ),
            };
            Ok(Output {
                value,
                verdict: Some(verdict),
            })
        }
        "hom" => {
            let inp: HomInput = serde_json::from_str(input)?;
            let (k, x) = (inp.k.build()?, inp.x.build()?);
            Ok(Output::plain(serde_json::to_value(
                hom_category(&k.diagram, &x.diagram)?.cat().to_spec(),
            )?))
        }
        "matching" => {
            let x = diagram(input, caps)?;
            let us = units
                .iter()
                .map(|u| x.index().object_index(u))
                .collect::<Result<Vec<_>, _>>()?;
            let m = matching_functor(&x.diagram, &us).map_err(FibrancyError::Matching)?;
            Ok(Output::plain(json!({
                "domain": m.dom.cat.to_spec(),
                "hom": m.hom.cat().to_spec(),
                "functor": FunctorSpec::from_functor(&m.functor),
            })))
        }
        other => Err(ApiError::UnknownVerb {
            noun: "build",
            verb: other.to_string(),
            expected: BUILD_VERBS,
        }),
    }
}

/// `equicat check run`.
pub fn check(id: &str, seed: u64, size: usize, caps: &SizeCaps) -> Result<Output, ApiError> {
    let r = run_check(id, seed, size, caps)?;
    Ok(Output {
        verdict: Some(r.verdict),
        value: serde_json::to_value(r)?,
    })
}

/// `equicat qf run`.
pub fn quasi_fibrant(
    input: &str,
    max_dim: usize,
    mode: QfMode,
    caps: &SizeCaps,
) -> Result<Output, ApiError> {
    let x = diagram(input, caps)?;
    let r = reedy_quasi_fibrant(&x, max_dim, mode)?;
    Ok(Output {
        verdict: Some(r.verdict),
        value: serde_json::to_value(r)?,
    })
}

/// `equicat totalfiber run`: the model `m_∅/Φ` for the selected `Φ`, or for
/// the first [`TOTAL_FIBER_LIMIT`] transformations.
pub fn total_fiber(input: &str, phi: Option<usize>, caps: &SizeCaps) -> Result<Output, ApiError> {
    let x = diagram(input, caps)?;
    let m = matching_functor(&x.diagram, &[0]).map_err(FibrancyError::Matching)?;
    let count = m.hom.cat().object_count();
    let chosen: Vec<usize> = match phi {
        Some(p) if p < count => vec![p],
        Some(p) => return Err(ApiError::NoSuchTransformation(p)),
        None => (0..count.min(TOTAL_FIBER_LIMIT)).collect(),
    };
    let group = x.group();
    let fibres = chosen
        .iter()
        .map(|&p| {
            let t = total_fiber_model(&x, m.hom.family(p))?;
            let h = t.homology()?;
            Ok(json!({
                "phi": p,
                "name": m.hom.cat().object_name(p),
                "stabilizer": t.stabilizer.iter().map(|&g| group.name(g)).collect::<Vec<_>>(),
                "objects": t.cat().object_count(),
                "morphisms": t.cat().morphism_count(),
                "homology": h,
            }))
        })
        .collect::<Result<Vec<Value>, ApiError>>()?;
    Ok(Output::plain(
        json!({ "transformations": count, "fibres": fibres }),
    ))
}

#[derive(Deserialize)]
struct FunctorInput {
    dom: CategorySpec,
    cod: CategorySpec,
    functor: FunctorSpec,
}

/// `equicat homology <verb>`.
pub fn homology_cmd(verb: &str, input: &str, max_dim: usize) -> Result<Output, ApiError> {
    match verb {
        "nerve" => {
            let c: CategorySpec = serde_json::from_str(input)?;
            let k = nerve_truncated(&c.build()?, max_dim + 1)?;
            let h = homology(&k)?;
            Ok(Output::plain(
                json!({ "chain_ranks": k.ranks(), "truncated": k.truncated, "homology": h }),
            ))
        }
        "equivalence" => {
            let inp: FunctorInput = serde_json::from_str(input)?;
            let (dom, cod) = (Arc::new(inp.dom.build()?), Arc::new(inp.cod.build()?));
            let f = inp.functor.build(&dom, &cod)?;
            let r = homology_equivalence(&f, max_dim)?;
            Ok(Output {
                verdict: Some(r.verdict),
                value: serde_json::to_value(r)?,
            })
        }
        other => Err(ApiError::UnknownVerb {
            noun: "homology",
            verb: other.to_string(),
            expected: HOMOLOGY_VERBS,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SWAP_CUBE: &str = r#"{
        "group": "Z2",
        "index": {"objects": ["0", "a", "b"], "morphisms": [
            {"id": "0a", "src": "0", "tgt": "a"}, {"id": "0b", "src": "0", "tgt": "b"}]},
        "action": {"objects": {"a": [0, 2, 1]}, "morphisms": {"a": [1, 0, 2, 4, 3]}},
        "vertices": {
            "0": {"objects": ["p"], "morphisms": []},
            "a": {"objects": ["p"], "morphisms": []},
            "b": {"objects": ["p"], "morphisms": []}},
        "edges": {"0a": {"objects": {"p": "p"}}, "0b": {"objects": {"p": "p"}}}
    }"#;

    #[test]
    fn configuration_from_json_matches_exsharp() {
        let input =
            r#"{"group": "Z2", "j": "regular", "m": {"e": 2, "G": 1}, "conn_m": {"e": 0, "G": 0}}"#;
        let out = bounds("configuration", input, &SizeCaps::default()).unwrap();
        assert_eq!(out.value["nu"]["{e,a}"], json!(-1));
        assert_eq!(out.value["nu"]["{e}"], json!(1));
    }

    #[test]
    fn unknown_verb() {
        assert!(matches!(
            bounds("sideways", "{}", &SizeCaps::default()),
            Err(ApiError::UnknownVerb { .. })
        ));
    }

    #[test]
    fn caps_are_enforced() {
        let caps = SizeCaps {
            j_size: 1,
            ..SizeCaps::default()
        };
        let input =
            r#"{"group": "Z2", "j": "regular", "m": {"e": 2, "G": 1}, "conn_m": {"e": 0, "G": 0}}"#;
        assert!(matches!(
            bounds("configuration", input, &caps),
            Err(ApiError::Check(CheckError::SizeCap(_)))
        ));
    }

    #[test]
    fn swap_cube_end_to_end() {
        let caps = SizeCaps::default();
        let fixed = build("fixed-grothendieck", SWAP_CUBE, None, &[], &caps).unwrap();
        assert_eq!(fixed.verdict, Some(Verdict::Pass));
        let qf = quasi_fibrant(SWAP_CUBE, 2, QfMode::Equivariant, &caps).unwrap();
        assert_eq!(qf.verdict, Some(Verdict::Pass));
        let tf = total_fiber(SWAP_CUBE, None, &caps).unwrap();
        assert_eq!(tf.value["transformations"], json!(1));
        assert_eq!(
            tf.value["fibres"][0]["stabilizer"]
                .as_array()
                .unwrap()
                .len(),
            2
        );
    }

    #[test]
    fn nerve_of_boundary_of_triangle() {
        let c = crate::fincat::FinCat::powerset_nonempty(3);
        let keep: Vec<bool> = (0..c.object_count())
            .map(|o| c.object_name(o) != "{0,1,2}")
            .collect();
        let (sub, _, _) = c.full_subcategory(&keep);
        let out =
            homology_cmd("nerve", &serde_json::to_string(&sub.to_spec()).unwrap(), 3).unwrap();
        assert_eq!(out.value["homology"]["betti"], json!([1, 1]));
    }
}
