//! The randomized check harness: each check id generates instances from a
//! seed, runs one witness or equality, and summarizes the outcome.

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{
    configuration_bound, submanifold_bound, suspension_closed_form, suspension_via_bm,
    ConnFunction, PointData,
};
use crate::constructions::{
    comma_bk_witnesses, fixed_grothendieck_witness, hom_category, indgrot_witness,
    indgrot_witness_equivariant, quillen_b_base, twisted_limit_witness,
};
use crate::equivariant::GDiagram;
use crate::ext::ExtInt;
use crate::fincat::{
    all_functors, degree_filtration, product, CatDiagram, Direction, FinCat, FunctorData,
};
use crate::groups::{Group, SubgroupLattice};
use crate::gsets::GSet;
use crate::random::{
    instance_rng, random_conn, random_cospan, random_gdiagram, random_gdiagram_pair, random_gset,
    random_isomorphic_fibres, small_groups, DiagramShape,
};
use crate::simplicial::Verdict;

pub const CHECK_IDS: [&str; 9] = [
    "gthom",
    "indgrot",
    "twisted",
    "modelhpb",
    "susp-coherence",
    "conf-specialization",
    "exsharp",
    "nerve-hom",
    "quillenB-base",
];

/// Largest number of instances a single run may request.
pub const MAX_INSTANCES: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("unknown check `{0}`; expected one of {CHECK_IDS:?}")]
    UnknownCheck(String),
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("malformed size caps `{0}`")]
    BadCaps(String),
}

/// Global limits on instance dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeCaps {
    pub group_order: usize,
    pub index_objects: usize,
    pub vertex_objects: usize,
    pub j_size: usize,
}

impl Default for SizeCaps {
    fn default() -> Self {
        SizeCaps {
            group_order: 24,
            index_objects: 8,
            vertex_objects: 4,
            j_size: 6,
        }
    }
}

impl SizeCaps {
    /// Parses `group=24,index=8,vertex=4,j=6`; omitted keys keep defaults.
    pub fn parse(text: &str) -> Result<SizeCaps, CheckError> {
        let mut caps = SizeCaps::default();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| CheckError::BadCaps(text.to_string()))?;
            let v: usize = v
                .trim()
                .parse()
                .map_err(|_| CheckError::BadCaps(text.to_string()))?;
            match k.trim() {
                "group" => caps.group_order = v,
                "index" => caps.index_objects = v,
                "vertex" => caps.vertex_objects = v,
                "j" => caps.j_size = v,
                _ => return Err(CheckError::BadCaps(text.to_string())),
            }
        }
        Ok(caps)
    }

    /// Defaults overridden by `EQUICAT_SIZE_CAPS` when it is set.
    pub fn from_env() -> Result<SizeCaps, CheckError> {
        match std::env::var("EQUICAT_SIZE_CAPS") {
            Ok(s) => SizeCaps::parse(&s),
            Err(_) => Ok(SizeCaps::default()),
        }
    }

    pub fn check_group(&self, order: usize) -> Result<(), CheckError> {
        cap("group order", order, self.group_order)
    }

    pub fn check_index(&self, n: usize) -> Result<(), CheckError> {
        cap("index objects", n, self.index_objects)
    }

    pub fn check_vertex(&self, n: usize) -> Result<(), CheckError> {
        cap("vertex objects", n, self.vertex_objects)
    }

    pub fn check_j(&self, n: usize) -> Result<(), CheckError> {
        cap("|J|", n, self.j_size)
    }
}

fn cap(what: &str, n: usize, limit: usize) -> Result<(), CheckError> {
    if n > limit {
        return Err(CheckError::SizeCap(format!("{what} {n} > {limit}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFailure {
    pub index: usize,
    pub instance: String,
    pub reason: String,
}

/// Outcome of one check run. Identical `(id, seed, size)` give identical
/// reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub seed: u64,
    pub size: usize,
    pub instances: usize,
    pub passed: usize,
    pub verdict: Verdict,
    pub summary: String,
    /// The first failing instances, in instance order.
    pub failures: Vec<InstanceFailure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
}

const REPORTED_FAILURES: usize = 10;

struct Outcome {
    instance: String,
    result: Result<(), String>,
}

fn run_instances(
    seed: u64,
    size: usize,
    f: impl Fn(u64, &mut rand_chacha::ChaCha8Rng) -> Outcome + Sync,
) -> Vec<Outcome> {
    (0..size as u64)
        .into_par_iter()
        .map(|k| f(k, &mut instance_rng(seed, k)))
        .collect()
}

fn report(
    id: &str,
    seed: u64,
    size: usize,
    outcomes: Vec<Outcome>,
    witness: Option<serde_json::Value>,
) -> CheckReport {
    let passed = outcomes.iter().filter(|o| o.result.is_ok()).count();
    let failures: Vec<InstanceFailure> = outcomes
        .iter()
        .enumerate()
        .filter_map(|(index, o)| {
            o.result.as_ref().err().map(|r| InstanceFailure {
                index,
                instance: o.instance.clone(),
                reason: r.clone(),
            })
        })
        .take(REPORTED_FAILURES)
        .collect();
    let verdict = if passed == outcomes.len() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    CheckReport {
        id: id.to_string(),
        seed,
        size,
        instances: outcomes.len(),
        passed,
        verdict,
        summary: format!("{passed}/{} instances passed", outcomes.len()),
        failures,
        witness,
    }
}

fn describe(name: &str, x: &GDiagram) -> String {
    let sizes: Vec<usize> = x
        .diagram
        .vertices
        .iter()
        .map(|v| v.object_count())
        .collect();
    format!(
        "G={name} |Ob I|={} |Ob X_i|={sizes:?}",
        x.index().object_count()
    )
}

fn shape(caps: &SizeCaps, index: usize, vertex: usize) -> DiagramShape {
    DiagramShape {
        index_points: 3.min(caps.j_size),
        max_index: index.min(caps.index_objects),
        fibre_points: 3.min(caps.j_size),
        max_vertex: vertex.min(caps.vertex_objects),
    }
}

fn groups_within(
    caps: &SizeCaps,
    max_order: usize,
) -> Result<Vec<(&'static str, Arc<Group>)>, CheckError> {
    let gs: Vec<_> = small_groups()
        .into_iter()
        .filter(|(_, g)| g.order() <= max_order.min(caps.group_order))
        .map(|(n, g)| (n, Arc::new(g)))
        .collect();
    if gs.is_empty() {
        return Err(CheckError::SizeCap(
            "no test group fits the group-order cap".into(),
        ));
    }
    Ok(gs)
}

/// `(I≀X)^H ≅ I^H≀X^H` for every subgroup `H`.
fn check_gthom(seed: u64, size: usize, caps: &SizeCaps) -> Result<CheckReport, CheckError> {
    let groups = groups_within(caps, 6)?;
    let sh = shape(caps, 5, 3);
    let out = run_instances(seed, size, |_, rng| {
        let (name, g) = &groups[rng.gen_range(0..groups.len())];
        let x = random_gdiagram(rng, g, sh);
        let lattice = SubgroupLattice::new(g).expect("small group");
        let result = lattice.subgroups().iter().try_for_each(|h| {
            fixed_grothendieck_witness(&x, h)
                .map(|_| ())
                .map_err(|e| format!("H={}: {e}", lattice.name(lattice.index_of(h))))
        });
        Outcome {
            instance: describe(name, &x),
            result,
        }
    });
    Ok(report("gthom", seed, size, out, None))
}

/// Every 5th instance is a Z/2-diagram checked for `G_U`-equivariance.
pub fn indgrot_instance(
    k: u64,
    rng: &mut impl Rng,
    caps: &SizeCaps,
) -> (String, Result<usize, String>) {
    let equivariant = k % 5 == 4;
    let g = Arc::new(if equivariant {
        Group::cyclic(2)
    } else {
        Group::trivial()
    });
    let x = random_gdiagram(rng, &g, shape(caps, 4, 3));
    let name = if equivariant { "Z/2" } else { "e" };
    let deg = degree_filtration(x.index(), Direction::Under).expect("posets are loop-free");
    let mut count = 0;
    for n in 0..=deg.max {
        let level = deg.level(n);
        for mask in 1u64..(1 << level.len()) {
            let units: Vec<usize> = crate::groups::bits(mask).map(|b| level[b]).collect();
            let r = if equivariant {
                indgrot_witness_equivariant(&x, &units)
            } else {
                indgrot_witness(&x.diagram, &units)
            };
            if let Err(e) = r {
                let names: Vec<&str> = units.iter().map(|&u| x.index().object_name(u)).collect();
                return (describe(name, &x), Err(format!("U={names:?}: {e}")));
            }
            count += 1;
        }
    }
    (describe(name, &x), Ok(count))
}

fn check_indgrot(seed: u64, size: usize, caps: &SizeCaps) -> Result<CheckReport, CheckError> {
    let out = run_instances(seed, size, |k, rng| {
        let (instance, r) = indgrot_instance(k, rng, caps);
        Outcome {
            instance,
            result: r.map(|_| ()),
        }
    });
    Ok(report("indgrot", seed, size, out, None))
}

/// Z/2 and Z/3 alternate; `K` and `X` share the action on `I`.
fn check_twisted(seed: u64, size: usize, caps: &SizeCaps) -> Result<CheckReport, CheckError> {
    let sh = shape(caps, 3, 3);
    let out = run_instances(seed, size, |k, rng| {
        let (name, g) = if k % 2 == 0 {
            ("Z/2", Group::cyclic(2))
        } else {
            ("Z/3", Group::cyclic(3))
        };
        let g = Arc::new(g);
        let (kd, x) = random_gdiagram_pair(rng, &g, sh);
        let result = twisted_limit_witness(&kd, &x)
            .map(|_| ())
            .map_err(|e| e.to_string());
        Outcome {
            instance: describe(name, &x),
            result,
        }
    });
    Ok(report("twisted", seed, size, out, None))
}

fn check_modelhpb(seed: u64, size: usize, caps: &SizeCaps) -> Result<CheckReport, CheckError> {
    let max_d = 4.min(caps.index_objects);
    let side = 3.min(caps.vertex_objects);
    let out = run_instances(seed, size, |_, rng| {
        let (f, g) = random_cospan(rng, max_d, side);
        let instance = format!(
            "|Ob C|={} |Ob E|={} |Ob D|={}",
            f.dom.object_count(),
            g.dom.object_count(),
            f.cod.object_count()
        );
        Outcome {
            instance,
            result: comma_bk_witnesses(&f, &g)
                .map(|_| ())
                .map_err(|e| e.to_string()),
        }
    });
    Ok(report("modelhpb", seed, size, out, None))
}

/// The groups of the suspension sweep.
pub fn suspension_groups() -> Vec<(&'static str, Group)> {
    vec![
        ("Z/2", Group::cyclic(2)),
        ("Z/3", Group::cyclic(3)),
        ("Z/2xZ/2", Group::klein()),
        ("S3", Group::symmetric(3)),
    ]
}

/// Instance `k` uses group `k mod 4`, a G-set with at most 4 orbits and 6
/// points, and connectivities in `0..=4`.
pub fn suspension_instance(
    k: u64,
    rng: &mut impl Rng,
    caps: &SizeCaps,
) -> (String, Result<(), String>) {
    let groups = suspension_groups();
    let (name, g) = &groups[(k % groups.len() as u64) as usize];
    let lattice = Arc::new(SubgroupLattice::new(g).expect("small group"));
    let j = random_gset(rng, g, 4, 6.min(caps.j_size));
    let conn = random_conn(rng, &lattice, 0, 4);
    let instance = format!("G={name} |J|={} conn={:?}", j.len(), conn.to_map());
    let result = (|| {
        let closed = suspension_closed_form(&j, &conn).map_err(|e| e.to_string())?;
        let bm = suspension_via_bm(&j, &conn)
            .map_err(|e| e.to_string())?
            .nu
            .at(lattice.whole());
        if closed == bm {
            Ok(())
        } else {
            Err(format!(
                "closed form {closed} but Blakers–Massey gives {bm}"
            ))
        }
    })();
    (instance, result)
}

fn check_susp(seed: u64, size: usize, caps: &SizeCaps) -> Result<CheckReport, CheckError> {
    let out = run_instances(seed, size, |k, rng| {
        let (instance, result) = suspension_instance(k, rng, caps);
        Outcome { instance, result }
    });
    Ok(report("susp-coherence", seed, size, out, None))
}

pub fn conf_instance(rng: &mut impl Rng, caps: &SizeCaps) -> (String, Result<(), String>) {
    let groups = small_groups();
    let (name, g) = &groups[rng.gen_range(0..groups.len())];
    let lattice = Arc::new(SubgroupLattice::new(g).expect("small group"));
    let j = random_gset(rng, g, 3, 6.min(caps.j_size));
    let m = random_conn(rng, &lattice, 0, 6);
    let conn_m = random_conn(rng, &lattice, -1, 5);
    let instance = format!(
        "G={name} |J|={} m={:?} connM={:?}",
        j.len(),
        m.to_map(),
        conn_m.to_map()
    );
    let result = (|| {
        let a = configuration_bound(&j, &m, &conn_m).map_err(|e| e.to_string())?;
        let b = submanifold_bound(&j, &m, &PointData::zero(&j, &lattice), &conn_m)
            .map_err(|e| e.to_string())?;
        if a.nu == b.nu {
            Ok(())
        } else {
            Err(format!(
                "configuration {:?} but submanifold {:?}",
                a.nu.to_map(),
                b.nu.to_map()
            ))
        }
    })();
    (instance, result)
}

fn check_conf(seed: u64, size: usize, caps: &SizeCaps) -> Result<CheckReport, CheckError> {
    let out = run_instances(seed, size, |_, rng| {
        let (instance, result) = conf_instance(rng, caps);
        Outcome { instance, result }
    });
    Ok(report("conf-specialization", seed, size, out, None))
}

/// The configuration bound for `Z/2` swapping two points of a surface with
/// `m_e = 2`, `m_G = 1`, `conn M ≡ 0`.
pub fn exsharp() -> (ExtInt, ExtInt, serde_json::Value) {
    let g = Group::cyclic(2);
    let lattice = Arc::new(SubgroupLattice::new(&g).expect("small group"));
    let j = GSet::regular(&g);
    let m = ConnFunction::from_fn(lattice.clone(), |h| {
        if h == lattice.whole() {
            ExtInt::Fin(1)
        } else {
            ExtInt::Fin(2)
        }
    });
    let conn_m = ConnFunction::constant(lattice.clone(), ExtInt::Fin(0));
    let r = configuration_bound(&j, &m, &conn_m).expect("valid input");
    let w = serde_json::to_value(&r).expect("reports serialize");
    (r.nu.at(lattice.whole()), r.nu.at(lattice.trivial()), w)
}

fn check_exsharp(seed: u64, size: usize) -> CheckReport {
    let (top, bottom, witness) = exsharp();
    let result = if top == ExtInt::Fin(-1) && bottom == ExtInt::Fin(1) {
        Ok(())
    } else {
        Err(format!("ν(Z/2)={top}, ν(e)={bottom}; expected -1 and 1"))
    };
    report(
        "exsharp",
        seed,
        size,
        vec![Outcome {
            instance: "G=Z/2 J=regular m=(2,1) connM=0".into(),
            result,
        }],
        Some(witness),
    )
}

/// Counts strictly commuting families `Φ_i: K_i × [n] → X_i`, `n ∈ {0, 1}`.
pub fn brute_force_families(k: &CatDiagram, x: &CatDiagram, with_interval: bool) -> usize {
    let interval = Arc::new(if with_interval {
        FinCat::poset(&["0", "1"], |a, b| a <= b).expect("poset")
    } else {
        FinCat::terminal()
    });
    let prods: Vec<_> = k
        .vertices
        .iter()
        .map(|v| product(&[v.clone(), interval.clone()]))
        .collect();
    let cands: Vec<Vec<FunctorData>> = (0..k.vertices.len())
        .map(|i| all_functors(&prods[i].cat, &x.vertices[i]))
        .collect();
    let idx = &*k.index;
    let compatible = |chosen: &[FunctorData], j: usize| -> bool {
        (0..idx.morphism_count())
            .filter(|&a| idx.src(a).max(idx.tgt(a)) == j)
            .all(|a| {
                let (s, t) = (idx.src(a), idx.tgt(a));
                let (ps, pt) = (&prods[s], &prods[t]);
                let (fs, ft) = (&chosen[s], &chosen[t]);
                let (ka, xa) = (&k.edges[a], &x.edges[a]);
                let objs_ok = ps.objs.iter().enumerate().all(|(o, lab)| {
                    let moved = pt
                        .obj(&vec![ka.obj[lab[0]], lab[1]])
                        .expect("product object");
                    xa.obj[fs.obj[o]] == ft.obj[moved]
                });
                objs_ok
                    && ps.mors.iter().enumerate().all(|(m, lab)| {
                        let moved = pt
                            .mor(&vec![ka.mor[lab[0]], lab[1]])
                            .expect("product morphism");
                        xa.mor[fs.mor[m]] == ft.mor[moved]
                    })
            })
    };
    // an edge is checked as soon as both of its ends have been chosen
    fn go(
        j: usize,
        chosen: &mut Vec<FunctorData>,
        cands: &[Vec<FunctorData>],
        ok: &dyn Fn(&[FunctorData], usize) -> bool,
        n: usize,
    ) -> usize {
        if j == n {
            return 1;
        }
        let mut total = 0;
        for c in &cands[j] {
            chosen.push(c.clone());
            if ok(chosen, j) {
                total += go(j + 1, chosen, cands, ok, n);
            }
            chosen.pop();
        }
        total
    }
    go(0, &mut Vec::new(), &cands, &compatible, idx.object_count())
}

fn check_nerve_hom(seed: u64, size: usize, caps: &SizeCaps) -> Result<CheckReport, CheckError> {
    let g = Arc::new(Group::trivial());
    let sh = shape(caps, 3, 2);
    let out = run_instances(seed, size, |_, rng| {
        let (k, x) = random_gdiagram_pair(rng, &g, sh);
        let instance = describe("e", &x);
        let result = (|| {
            let hom = hom_category(&k.diagram, &x.diagram).map_err(|e| e.to_string())?;
            let objs = brute_force_families(&k.diagram, &x.diagram, false);
            let mors = brute_force_families(&k.diagram, &x.diagram, true);
            if (objs, mors) == (hom.cat().object_count(), hom.cat().morphism_count()) {
                Ok(())
            } else {
                Err(format!(
                    "Hom has {}/{} cells, brute force {objs}/{mors}",
                    hom.cat().object_count(),
                    hom.cat().morphism_count()
                ))
            }
        })();
        Outcome { instance, result }
    });
    Ok(report("nerve-hom", seed, size, out, None))
}

pub fn quillen_b_instance(rng: &mut impl Rng, caps: &SizeCaps) -> (String, Result<(), String>) {
    let y = random_isomorphic_fibres(rng, 4.min(caps.index_objects), 3.min(caps.vertex_objects));
    let instance = format!(
        "|Ob D|={} |Ob C|={}",
        y.index.object_count(),
        y.vertices[0].object_count()
    );
    let result = match quillen_b_base(&y) {
        Err(e) => Err(e.to_string()),
        Ok(checks) => match checks.iter().find(|c| !c.agree) {
            Some(c) => Err(format!(
                "at {}: π/d has {:?}, fibre has {:?}",
                c.object, c.over.betti, c.fibre.betti
            )),
            None => Ok(()),
        },
    };
    (instance, result)
}

fn check_quillen_b(seed: u64, size: usize, caps: &SizeCaps) -> Result<CheckReport, CheckError> {
    let out = run_instances(seed, size, |_, rng| {
        let (instance, result) = quillen_b_instance(rng, caps);
        Outcome { instance, result }
    });
    Ok(report("quillenB-base", seed, size, out, None))
}

/// Runs the check `id` on `size` instances drawn from `seed`.
pub fn run_check(
    id: &str,
    seed: u64,
    size: usize,
    caps: &SizeCaps,
) -> Result<CheckReport, CheckError> {
    if size > MAX_INSTANCES {
        return Err(CheckError::SizeCap(format!(
            "{size} instances > {MAX_INSTANCES}"
        )));
    }
    match id {
        "gthom" => check_gthom(seed, size, caps),
        "indgrot" => check_indgrot(seed, size, caps),
        "twisted" => check_twisted(seed, size, caps),
        "modelhpb" => check_modelhpb(seed, size, caps),
        "susp-coherence" => check_susp(seed, size, caps),
        "conf-specialization" => check_conf(seed, size, caps),
        "exsharp" => Ok(check_exsharp(seed, size)),
        "nerve-hom" => check_nerve_hom(seed, size, caps),
        "quillenB-base" => check_quillen_b(seed, size, caps),
        other => Err(CheckError::UnknownCheck(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caps_parse_and_override() {
        let c = SizeCaps::parse("group=6, j=4").unwrap();
        assert_eq!(
            c,
            SizeCaps {
                group_order: 6,
                j_size: 4,
                ..SizeCaps::default()
            }
        );
        assert!(SizeCaps::parse("colour=3").is_err());
        assert!(c.check_j(5).is_err());
    }

    #[test]
    fn unknown_check_is_rejected() {
        assert_eq!(
            run_check("nope", 0, 1, &SizeCaps::default()).unwrap_err(),
            CheckError::UnknownCheck("nope".into())
        );
    }

    #[test]
    fn reports_are_deterministic() {
        let caps = SizeCaps::default();
        for id in ["modelhpb", "susp-coherence", "quillenB-base"] {
            let a = serde_json::to_string(&run_check(id, 7, 6, &caps).unwrap()).unwrap();
            let b = serde_json::to_string(&run_check(id, 7, 6, &caps).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn exsharp_passes() {
        let r = run_check("exsharp", 0, 1, &SizeCaps::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn modelhpb_small_run_passes() {
        let r = run_check("modelhpb", 7, 3, &SizeCaps::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.failures);
    }

    #[test]
    fn paired_diagrams_have_nontrivial_hom_categories() {
        let g = Arc::new(Group::trivial());
        let sh = shape(&SizeCaps::default(), 3, 2);
        let (mut objects, mut arrows, mut differ) = (0, 0, 0);
        for k in 0..50 {
            let (a, b) = random_gdiagram_pair(&mut instance_rng(3, k), &g, sh);
            let hom = hom_category(&a.diagram, &b.diagram).unwrap();
            objects += hom.cat().object_count();
            arrows += hom.cat().morphism_count() - hom.cat().object_count();
            differ += usize::from(a.diagram.vertices != b.diagram.vertices);
        }
        assert!(
            objects > 50 && arrows > 0 && differ > 10,
            "{objects} {arrows} {differ}"
        );
    }

    #[test]
    fn nerve_hom_counts_match() {
        let r = run_check("nerve-hom", 3, 8, &SizeCaps::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.failures);
    }
}
