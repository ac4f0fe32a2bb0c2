//! Exact-arithmetic polytope combinatorics.
//!
//! Polytopes are given by rational vertex coordinates. From those the crate
//! computes facets, vertex-facet incidences and face lattices, decides
//! combinatorial equivalence with an explicit witness, builds the standard
//! families (polygons, cubes, simplices, cross-polytopes, products,
//! bipyramids, polar duals, truncations) and searches vertex subsets of a
//! polytope for one whose convex hull is combinatorially its dual.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, certificates,
//! multi-threaded search and the command-line tool live in the `polydual`
//! crate.

#![no_std]

extern crate alloc;

pub mod arith;
pub mod construct;
pub mod equivalence;
mod error;
pub mod subsets;
pub mod hull;
pub mod search;
pub mod theorem;

pub use arith::{affine_dim, hyperplane_through, side_of, Hyperplane, QMatrix, QVector, Rational};
pub use construct::{BipyramidTower, ProductStructure};

pub use equivalence::{are_equivalent, signature, IsoWitness, Signature};
pub use error::{Error, Result};
pub use hull::{FaceLattice, Facet, IncidenceStructure, VPolytope};
pub use search::{find_dual_subset, SearchCertificate, SearchMode, SearchOptions};

