//! Exact linear algebra over formal sums of flag words.

pub mod atom;
pub mod psd;
pub mod quotient;
pub mod rref;
pub mod simplex;
pub mod vector;

pub use atom::{atom_a, atom_b, atom_b_labelled, atom_b_signed, Atom, Word};
pub use psd::{kernel_basis, psd_probe, quadratic_value, solve_linear, PsdOutcome};
pub use quotient::{build_quotient, BudgetMeta, Mat, QuotientSpace, SpaceMeta, SpaceModel};
pub use rref::{row_reduce, Rref, TrackedRref};
pub use simplex::{convex_membership, HullOutcome};
pub use vector::{parse_rational, rat, ratio, render_rational, FormalVector, Rational};
