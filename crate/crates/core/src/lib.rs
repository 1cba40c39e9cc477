//! Class-group statistics of monogenized cubic fields ordered by height.
//!
//! The pipeline enumerates monic binary cubic forms by height
//! ([`cubicforms`]), builds the order `Z[θ]` each one defines and keeps the
//! maximal ones ([`cubicfield`]), computes their ideal class groups from a
//! Minkowski-bound factor base ([`classgroup`]), averages the `p`-torsion
//! sizes over the family ([`survey`]) and fits power-law asymptotes to the
//! resulting series ([`asymptote`]).

pub mod arith;
pub mod asymptote;
pub mod classgroup;
pub mod cubicfield;
pub mod cubicforms;
pub mod survey;
pub mod verify;
