//! Exact shelling and flag vectors of finite vertex-and-cell objects.
//!
//! A shelling removes the vertices of an object one at a time and
//! records, for each removal, the link the departing vertex left
//! behind.  Summing the resulting tensor words over every removal
//! order, with coefficients in the rationals, gives the shelling
//! vector.  The flag vector is the same sum with every link projected
//! onto the quotient of its ambient space by all disjoint-change
//! relations, which collapses the combinatorial explosion while keeping
//! a relabeling invariant.  Everything here is exact big-rational
//! arithmetic; nothing is floating point.
//!
//! Supported objects: plain `i`-graphs ([`graphs`]), oriented graphs
//! and graphs with boundary ([`decorated`]), n-ary relations with
//! placeholder links, and finite groups read as ternary relations
//! ([`relations`]).  The quotient spaces live in [`spaces`], the
//! engines in [`shelling`], and batch analyses (independence, collision
//! scans, hull and co-sphericity probes, randomized invariance checks)
//! in [`experiments`].  Text formats for objects live in [`formats`];
//! vectors and reports serialize themselves.
//!
//! The examples directory is the guided tour:
//!
//! - `shelling_vectors`: the removal-order sum from first principles.
//! - `flag_vectors`: link projection and why it keeps vectors small.
//! - `link_spaces`: quotient spaces, residues, and the disk cache.
//! - `oriented_and_boundary`: sign parity and boundary labels.
//! - `relations_and_groups`: placeholder links and Cayley tables.
//! - `independence_and_collisions`: rank reports with exact kernel
//!   certificates and collision scans.
//! - `hull_and_cosphere`: convex position and co-sphericity probes.
//! - `invariance_suite`: seeded randomized self-checks.
//!
//! Each runs with `cargo run --example <name>`.  The `flagvec` binary
//! wraps the same entry points for file-based use.

pub mod algebra;
pub mod decorated;
pub mod error;
pub mod experiments;
pub mod formats;
pub mod graphs;
pub mod relations;
pub mod shelling;
pub mod spaces;

pub use error::{Error, Result};
