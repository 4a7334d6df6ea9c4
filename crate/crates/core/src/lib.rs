//! Symmetric tensors of smooth complete toric varieties.
//!
//! The algebra `S(X) = ⊕ H⁰(X, SᵖT_X)` of a smooth complete toric variety is
//! computed from two graded presentations built out of the fan: the Cox ring
//! of the projectivized tangent bundle, and the coordinate ring of the zero
//! fiber of the hypertoric moment map. Everything is exact: integer and
//! rational linear algebra, lattice-point enumeration, and exact LP.
//!
//! Modules, bottom-up:
//!
//! - [`lattice`]: Smith normal form, integer kernels, rational rank, exact
//!   simplex and cone membership.
//! - [`fan`]: fans, validation, the exact sequence `0 → M → ℤ^N → Pic → 0`.
//! - [`coxring`]: the four graded presentations and the comparison map.
//! - [`tensors`]: invariant monomials, graded dimensions, generators,
//!   classical maps (Springer, ν, determinantal models).
//! - [`hypertoric`]: moment maps, θ-semistability, walls, central fibers.
//! - [`cli`]: the `symtens` command-line driver.

pub mod cli;
pub mod coxring;
pub mod error;
pub mod fan;
pub mod hypertoric;
pub mod lattice;
pub mod tensors;

pub use error::{Error, Result};
