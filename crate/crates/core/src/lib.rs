//! Exact analysis of period characters of abelian differentials.
//!
//! The crate covers exact quadratic-field scalars ([`scalar`]), integer
//! symplectic lattices ([`symplattice`]), period characters and their Haupt
//! conditions ([`periods`]), orbit-closure classification and admissible
//! decompositions ([`classify`]), monodromy of branched torus covers
//! ([`hurwitz`]) and the genus-2 isoperiodic flow ([`g2flow`]).

pub mod classify;
pub mod error;
pub mod g2flow;
pub mod hurwitz;
pub mod intmat;
pub mod io;
pub mod periods;
pub mod scalar;
mod ser;
pub mod symplattice;

pub use error::*;
pub use scalar::{FieldDesc, KComplex, QuadReal};
