//! Explicit isomorphisms of finite categories, checked cell by cell.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::fincat::{FinCat, Functor};

/// The first cell at which a claimed isomorphism fails.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("witness failure: {0}")]
pub struct WitnessFailure(pub String);

/// A pair of mutually inverse functors `a ⇄ b`.
#[derive(Clone, Debug)]
pub struct IsoWitness {
    pub a: Arc<FinCat>,
    pub b: Arc<FinCat>,
    pub fwd: Functor,
    pub bwd: Functor,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub objects: usize,
    pub morphisms: usize,
    pub object_map: Vec<(String, String)>,
    pub morphism_map: Vec<(String, String)>,
}

impl IsoWitness {
    /// Checks that `fwd` and `bwd` are functors and that both composites are
    /// identities on every object and morphism.
    pub fn verify(fwd: Functor, bwd: Functor) -> Result<IsoWitness, WitnessFailure> {
        let fail = |s: String| Err(WitnessFailure(s));
        fwd.validate()
            .map_err(|e| WitnessFailure(format!("forward map is not a functor: {e}")))?;
        bwd.validate()
            .map_err(|e| WitnessFailure(format!("backward map is not a functor: {e}")))?;
        let (a, b) = (fwd.dom.clone(), fwd.cod.clone());
        if !(Arc::ptr_eq(&a, &bwd.cod) || *a == *bwd.cod)
            || !(Arc::ptr_eq(&b, &bwd.dom) || *b == *bwd.dom)
        {
            return fail("forward and backward maps do not form a pair".into());
        }
        for o in 0..a.object_count() {
            if bwd.obj[fwd.obj[o]] != o {
                return fail(format!(
                    "object `{}` does not return to itself",
                    a.object_name(o)
                ));
            }
        }
        for m in 0..a.morphism_count() {
            if bwd.mor[fwd.mor[m]] != m {
                return fail(format!(
                    "morphism `{}` does not return to itself",
                    a.morphism(m).name
                ));
            }
        }
        for o in 0..b.object_count() {
            if fwd.obj[bwd.obj[o]] != o {
                return fail(format!(
                    "object `{}` of the target is not hit",
                    b.object_name(o)
                ));
            }
        }
        for m in 0..b.morphism_count() {
            if fwd.mor[bwd.mor[m]] != m {
                return fail(format!(
                    "morphism `{}` of the target is not hit",
                    b.morphism(m).name
                ));
            }
        }
        Ok(IsoWitness { a, b, fwd, bwd })
    }

    pub fn report(&self) -> WitnessReport {
        WitnessReport {
            objects: self.a.object_count(),
            morphisms: self.a.morphism_count(),
            object_map: (0..self.a.object_count())
                .map(|o| {
                    (
                        self.a.object_name(o).to_string(),
                        self.b.object_name(self.fwd.obj[o]).to_string(),
                    )
                })
                .collect(),
            morphism_map: (0..self.a.morphism_count())
                .map(|m| {
                    (
                        self.a.morphism(m).name.clone(),
                        self.b.morphism(self.fwd.mor[m]).name.clone(),
                    )
                })
                .collect(),
        }
    }
}

/// Builds a functor from object and morphism maps and checks it, turning any
/// failure into a witness failure naming `what`.
pub(crate) fn checked_functor(
    what: &str,
    dom: &Arc<FinCat>,
    cod: &Arc<FinCat>,
    obj: Vec<usize>,
    mor: Vec<usize>,
) -> Result<Functor, WitnessFailure> {
    Functor::new(dom.clone(), cod.clone(), obj, mor)
        .map_err(|e| WitnessFailure(format!("{what}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_a_witness() {
        let c = Arc::new(FinCat::powerset(2));
        let w = IsoWitness::verify(Functor::identity(&c), Functor::identity(&c)).unwrap();
        assert_eq!(w.report().objects, 4);
    }

    #[test]
    fn non_inverse_pair_fails() {
        let c = Arc::new(FinCat::discrete(&["x", "y"]));
        let swap = Functor::new(c.clone(), c.clone(), vec![1, 0], vec![1, 0]).unwrap();
        assert!(IsoWitness::verify(swap.clone(), swap.clone()).is_ok());
        assert!(IsoWitness::verify(swap, Functor::identity(&c)).is_err());
    }
}
