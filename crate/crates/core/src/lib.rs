//! Equivariant cubical diagrams over finite groups: connectivity estimates,
//! finite categorical models and nerve homology.

pub mod api;
pub mod bounds;
pub mod checks;
pub mod constructions;
pub mod equivariant;
pub mod ext;
pub mod fincat;
pub mod groups;
pub mod gsets;
pub mod io;
pub mod random;
pub mod simplicial;

pub use ext::{ExtInt, ExtIntError};
pub use groups::{Group, GroupError, Subgroup, SubgroupLattice};
pub use gsets::{GSet, GSetError};
