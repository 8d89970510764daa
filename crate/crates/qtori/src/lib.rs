//! Exact-arithmetic quantum n-tori and their finite coverings.
//!
//! The deformation parameter θ is a skew matrix over ℚ[t] with t treated as
//! a formal transcendental, so every identity in this crate is decided
//! exactly: no floating point, no numerical tolerance.
//!
//! The crate has three layers:
//!
//! * torus arithmetic: [`torus::TorusElement`] over a [`torus::ThetaMatrix`],
//!   with normal-ordered products, adjoints, gauge and lattice
//!   automorphisms;
//! * connected coverings: embeddings of a base torus into a cover along a
//!   finite-index sublattice, their verification, classification up to
//!   equivalence, and the profinite poset of iterated coverings
//!   ([`covering`]);
//! * smooth crossed-product coverings: finite abelian groups graded over a
//!   2-torus via outer-automorphism data, cocycle computation, associativity
//!   obstruction solving, inflation along group extensions, and the
//!   associated Morita self-equivalences ([`smooth`]).
//!
//! The `qtc` binary exposes the same functionality as a small command-line
//! tool; the `examples/` directory walks through each capability.

#![forbid(unsafe_code)]

pub mod abgroup;
pub mod cli;
pub mod covering;
pub mod error;
pub mod expr;
pub mod lattice;
pub mod phase;
pub mod ratpoly;
pub mod smooth;
pub mod torus;

pub use abgroup::{ExtensionGroup, FiniteAbelianGroup, QuotientMap};
pub use covering::{CoveringReport, CoveringSpec, CoveringSystem};
pub use error::{Error, Result};
pub use expr::{eval_expr, parse_expr, Expr};
pub use lattice::IntMatrix;
pub use phase::{PhaseExponent, Scalar};
pub use ratpoly::RatPoly;
pub use smooth::{GradedSystem, OutSmoothElement, TorusPoint};
pub use torus::{ThetaMatrix, TorusElement};

pub use cli::cli_main;
