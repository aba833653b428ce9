//! Jacquet integrals: GL(2) directly and after regularization, the GL(3)
//! change-of-variables check, and the simplified integrands that the
//! birational map produces.

mod bump;
mod gl2;
mod gl3;
mod ibp;
mod integrand;
pub mod jet;
pub mod quad;
pub mod special;

pub use bump::BumpSpec;
pub use gl2::{gl2_continued, gl2_direct, gl2_reference};
pub use gl3::{
    bump_product, change_of_variables, gl3_change_of_variables_check, gl3_default_params, tau_factorization_check,
    Gl3Report, TauReport,
};
pub use ibp::{IBPScheme, MAX_IBP_ORDER};
pub use integrand::{
    bessel_kernel, superdiagonal_phase, transformed_integrand, Factor, IntegrandDescriptor, PhaseKind, PolyPhase,
};
pub use quad::{Estimate, QuadratureParams};
