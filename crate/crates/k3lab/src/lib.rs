//! Exact verification toolkit for three two-parameter families of elliptic
//! K3 surfaces attached to 5-vertex reflexive polytopes.

// Matrix code reads better with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod exactcore;
pub mod fibration;
pub mod fixtures;
pub mod lattice;
pub mod monodromy;
pub mod period;
pub mod pfaffian;
pub mod polytope;
pub mod suite;
