//! JSON interchange for groups, functors and G-diagrams of categories.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equivariant::{EquivariantError, GAction, GActionSpec, GDiagram};
use crate::fincat::{
    CatDiagram, CatError, CategorySpec, DiagramError, FinCat, Functor, FunctorError,
};
use crate::groups::{Group, GroupError, GroupSpec};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(
        "unknown group `{0}`; expected e, Z<n>, Z/<n>, Klein, S<n> or a product joined by `x`"
    )]
    UnknownGroup(String),
    #[error("missing entry: {0}")]
    Missing(String),
    #[error("ambiguous image for morphism `{0}`; give it explicitly")]
    Ambiguous(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Equivariant(#[from] EquivariantError),
}

/// Parses `e`, `Z2`, `Z/2`, `C2`, `Klein`, `V4`, `S3` and products such as
/// `Z2xS3`.
pub fn parse_group(name: &str) -> Result<Group, IoError> {
    let unknown = || IoError::UnknownGroup(name.to_string());
    let factors: Vec<&str> = name.split('x').map(str::trim).collect();
    if factors.len() > 1 {
        let mut g = parse_group(factors[0])?;
        for f in &factors[1..] {
            g = Group::product(&g, &parse_group(f)?);
        }
        return Ok(g);
    }
    let n = name.trim();
    match n {
        "e" | "1" | "trivial" => return Ok(Group::trivial()),
        "Klein" | "V4" => return Ok(Group::klein()),
        _ => {}
    }
    let order = |s: &str| {
        s.trim_start_matches('/')
            .parse::<usize>()
            .map_err(|_| unknown())
    };
    if let Some(rest) = n.strip_prefix('Z').or_else(|| n.strip_prefix('C')) {
        let k = order(rest)?;
        if k == 0 || k > 64 {
            return Err(unknown());
        }
        return Ok(Group::cyclic(k));
    }
    if let Some(rest) = n.strip_prefix('S') {
        let k = order(rest)?;
        if !(1..=4).contains(&k) {
            return Err(unknown());
        }
        return Ok(Group::symmetric(k));
    }
    Err(unknown())
}

/// A group given by name or by its multiplication table.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupInput {
    Name(String),
    Table(GroupSpec),
}

impl Default for GroupInput {
    fn default() -> Self {
        GroupInput::Name("e".into())
    }
}

impl GroupInput {
    pub fn build(&self) -> Result<Group, IoError> {
        match self {
            GroupInput::Name(n) => parse_group(n),
            GroupInput::Table(t) => Ok(t.clone().build()?),
        }
    }
}

/// A functor given by object and morphism names. Identities may be omitted,
/// as may any morphism whose image is the unique morphism between the images
/// of its ends.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct FunctorSpec {
    pub objects: BTreeMap<String, String>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, String>,
}

impl FunctorSpec {
    pub fn build(&self, dom: &Arc<FinCat>, cod: &Arc<FinCat>) -> Result<Functor, IoError> {
        let obj = (0..dom.object_count())
            .map(|o| {
                let name = dom.object_name(o);
                let image = self
                    .objects
                    .get(name)
                    .ok_or_else(|| IoError::Missing(format!("image of object `{name}`")))?;
                Ok(cod.object_index(image)?)
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        let mor = (0..dom.morphism_count())
            .map(|m| {
                let name = &dom.morphism(m).name;
                if let Some(image) = self.morphisms.get(name) {
                    return Ok(cod.morphism_index(image)?);
                }
                let (s, t) = (obj[dom.src(m)], obj[dom.tgt(m)]);
                if dom.is_identity(m) {
                    return Ok(cod.id(s));
                }
                match cod.hom(s, t) {
                    [only] => Ok(*only),
                    _ => Err(IoError::Ambiguous(name.clone())),
                }
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        Ok(Functor::new(dom.clone(), cod.clone(), obj, mor)?)
    }

    pub fn from_functor(f: &Functor) -> FunctorSpec {
        FunctorSpec {
            objects: (0..f.dom.object_count())
                .map(|o| {
                    (
                        f.dom.object_name(o).into(),
                        f.cod.object_name(f.obj[o]).into(),
                    )
                })
                .collect(),
            morphisms: (0..f.dom.morphism_count())
                .filter(|&m| !f.dom.is_identity(m))
                .map(|m| {
                    (
                        f.dom.morphism(m).name.clone(),
                        f.cod.morphism(f.mor[m]).name.clone(),
                    )
                })
                .collect(),
        }
    }
}

/// A G-diagram of categories. `vertices` is keyed by index object name and
/// `edges` by index morphism name (identities omitted). Without `action` the
/// group acts trivially; without `phi` the structure maps are identities.
/// `phi` is keyed by group element name, then by index object name; the
/// identity element may be omitted.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagramSpec {
    #[serde(default)]
    pub group: GroupInput,
    pub index: CategorySpec,
    #[serde(default)]
    pub action: Option<GActionSpec>,
    pub vertices: BTreeMap<String, CategorySpec>,
    #[serde(default)]
    pub edges: BTreeMap<String, FunctorSpec>,
    #[serde(default)]
    pub phi: Option<BTreeMap<String, BTreeMap<String, FunctorSpec>>>,
}

impl DiagramSpec {
    pub fn build(&self) -> Result<GDiagram, IoError> {
        let group = Arc::new(self.group.build()?);
        let index = Arc::new(self.index.build()?);
        let vertices = (0..index.object_count())
            .map(|i| {
                let name = index.object_name(i);
                let spec = self
                    .vertices
                    .get(name)
                    .ok_or_else(|| IoError::Missing(format!("vertex `{name}`")))?;
                Ok(Arc::new(spec.build()?))
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        let edges = (0..index.morphism_count())
            .map(|a| {
                let (s, t) = (index.src(a), index.tgt(a));
                if index.is_identity(a) {
                    return Ok(Functor::identity(&vertices[s]));
                }
                let name = &index.morphism(a).name;
                let spec = self
                    .edges
                    .get(name)
                    .ok_or_else(|| IoError::Missing(format!("edge `{name}`")))?;
                spec.build(&vertices[s], &vertices[t])
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        let diagram = CatDiagram::new(index.clone(), vertices.clone(), edges)?;
        let action = match &self.action {
            Some(a) => a.build(group.clone(), index.clone())?,
            None => GAction::trivial(group.clone(), index.clone()),
        };
        let Some(phi_spec) = &self.phi else {
            return Ok(GDiagram::with_trivial_structure(action, diagram)?);
        };
        let phi = group
            .elements()
            .map(|g| {
                (0..index.object_count())
                    .map(|i| {
                        let gi = action.obj(g, i);
                        let entry = phi_spec
                            .get(group.name(g))
                            .and_then(|m| m.get(index.object_name(i)));
                        match entry {
                            Some(spec) => spec.build(&vertices[i], &vertices[gi]),
                            None if g == group.identity() => Ok(Functor::identity(&vertices[i])),
                            None => Err(IoError::Missing(format!(
                                "phi for `{}` at `{}`",
                                group.name(g),
                                index.object_name(i)
                            ))),
                        }
                    })
                    .collect::<Result<Vec<_>, IoError>>()
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        Ok(GDiagram::new(action, diagram, phi)?)
    }

    pub fn from_gdiagram(x: &GDiagram) -> DiagramSpec {
        let index = x.index();
        let group = x.group();
        DiagramSpec {
            group: GroupInput::Table(GroupSpec::from(&**group)),
            index: index.to_spec(),
            action: Some(x.action.to_spec()),
            vertices: (0..index.object_count())
                .map(|i| (index.object_name(i).into(), x.diagram.vertices[i].to_spec()))
                .collect(),
            edges: index
                .non_identities()
                .map(|a| {
                    (
                        index.morphism(a).name.clone(),
                        FunctorSpec::from_functor(&x.diagram.edges[a]),
                    )
                })
                .collect(),
            phi: Some(
                group
                    .elements()
                    .filter(|&g| g != group.identity())
                    .map(|g| {
                        let per: BTreeMap<String, FunctorSpec> = (0..index.object_count())
                            .map(|i| {
                                (
                                    index.object_name(i).into(),
                                    FunctorSpec::from_functor(&x.phi[g][i]),
                                )
                            })
                            .collect();
                        (group.name(g).to_string(), per)
                    })
                    .collect(),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{instance_rng, random_gdiagram, DiagramShape};

    #[test]
    fn group_names() {
        assert_eq!(parse_group("Z/3").unwrap().order(), 3);
        assert_eq!(parse_group("C4").unwrap().order(), 4);
        assert_eq!(parse_group("Klein").unwrap().order(), 4);
        assert_eq!(parse_group("S3").unwrap().order(), 6);
        assert_eq!(parse_group("Z2xS3").unwrap().order(), 12);
        assert_eq!(parse_group("e").unwrap().order(), 1);
        assert!(matches!(parse_group("Q8"), Err(IoError::UnknownGroup(_))));
    }

    #[test]
    fn poset_edges_may_omit_morphisms() {
        let json = r#"{
            "index": {"objects": ["a", "b"], "morphisms": [{"id": "f", "src": "a", "tgt": "b"}]},
            "vertices": {
                "a": {"objects": ["p"], "morphisms": []},
                "b": {"objects": ["q", "r"], "morphisms": [{"id": "u", "src": "q", "tgt": "r"}]}
            },
            "edges": {"f": {"objects": {"p": "r"}}}
        }"#;
        let spec: DiagramSpec = serde_json::from_str(json).unwrap();
        let x = spec.build().unwrap();
        assert_eq!(x.group().order(), 1);
        assert_eq!(
            x.diagram.edges[x.index().morphism_index("f").unwrap()].obj,
            vec![1]
        );
    }

    #[test]
    fn missing_vertex_is_reported() {
        let json = r#"{"index": {"objects": ["a"], "morphisms": []}, "vertices": {}}"#;
        let spec: DiagramSpec = serde_json::from_str(json).unwrap();
        assert!(matches!(spec.build(), Err(IoError::Missing(_))));
    }

    #[test]
    fn round_trip_random_gdiagrams() {
        let shape = DiagramShape {
            index_points: 3,
            max_index: 4,
            fibre_points: 3,
            max_vertex: 3,
        };
        for k in 0..10 {
            let mut rng = instance_rng(11, k);
            let g = Arc::new(if k % 2 == 0 {
                Group::cyclic(2)
            } else {
                Group::symmetric(3)
            });
            let x = random_gdiagram(&mut rng, &g, shape);
            let json = serde_json::to_string(&DiagramSpec::from_gdiagram(&x)).unwrap();
            let y = serde_json::from_str::<DiagramSpec>(&json)
                .unwrap()
                .build()
                .unwrap();
            assert_eq!(*y.index(), *x.index());
            assert_eq!(y.action.obj_table(), x.action.obj_table());
            for g in x.group().elements() {
                for i in 0..x.index().object_count() {
                    assert_eq!(y.phi[g][i].obj, x.phi[g][i].obj);
                    assert_eq!(y.phi[g][i].mor, x.phi[g][i].mor);
                }
            }
        }
    }
}
