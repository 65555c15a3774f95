//! Composite categorical models built from G-diagrams of categories.

mod comma_bk;
mod fibrancy;
mod grothendieck;
mod hom;
mod indgrot;
mod matching;
mod twisted;
mod witness;

pub use comma_bk::{
    comma_bk, comma_bk_witnesses, cospan_index, CommaBk, CommaBkError, CommaBkWitnesses,
};
pub use fibrancy::{
    combine, quillen_b_base, reedy_quasi_fibrant, reedy_quasi_fibrant_plain, total_fiber_model,
    FibrancyError, QfCheck, QfMode, QfReport, QuillenBCheck, TotalFiber,
};
pub use grothendieck::{
    fixed_grothendieck_witness, grothendieck, grothendieck_action, Grothendieck,
};
pub use hom::{
    hom_action, hom_category, hom_category_capped, overcat_diagram, overcat_gdiagram,
    slash_gdiagram, HomCategory, HomError, ModLabel, OverDiagram, DEFAULT_FAMILY_CAP,
};
pub use indgrot::{indgrot_witness, indgrot_witness_equivariant, IndGrot, IndGrotError};
pub use matching::{matching_action, matching_functor, Matching, MatchingAction, MatchingError};
pub use twisted::{twisted_limit_witness, TwistedError, TwistedLimit};
pub(crate) use witness::checked_functor;
pub use witness::{IsoWitness, WitnessFailure, WitnessReport};
