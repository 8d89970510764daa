//! Smooth coverings of the quantum 2-torus: the outer automorphism group
//! (𝕋/⟨e(θ)⟩)² ⋊ SL₂(ℤ) in exact arithmetic, Picard-homomorphism data, the
//! graded covering algebra with its cocycle corrections, inflation along
//! central extensions, and Morita self-equivalences.

pub mod cocycle;
pub mod graded;
pub mod inflate;
pub mod morita;
pub mod out;

pub use cocycle::{compute_cocycle, solve_associativity, SigmaEntry, SigmaTable};
pub use graded::{build_smooth_covering, GradedElement, GradedReport, GradedSystem, Lift};
pub use inflate::{inflate_by_extension, InflatedElement, InflatedSystem};
pub use morita::{morita_module_of, AutomorphismDescriptor, MoritaModule};
pub use out::{
    check_homomorphism, hom_image, lattice_inverse_apply, out_inv, out_mul, out_pow, GaugeVec,
    HomReport, OutSmoothElement, TorusPoint,
};
