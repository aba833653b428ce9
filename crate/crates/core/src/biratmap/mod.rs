//! The birational map `R_w` and the structure attached to it: the forward
//! images, the matrix `wu`, its UDL factorization, the inverse map, the
//! Jacobian, the exponent bookkeeping of the transformed character, and the
//! integration-domain bounds.

mod bounds;
mod exponents;
mod forward;
mod inverse;
mod jacobian;
mod ksystem;
mod reduction;
mod udl;

pub use bounds::{domain_bounds, BoundEntry, DomainBounds};
pub use exponents::{exponents, AlphaExponent, ExponentData, InstantiatedExponents, LinearForm, ParityForm};
pub use forward::{forward_map, forward_split, wn_matrix, wu_symbolic, ForwardMap, Image, Mutation};
pub use inverse::{inverse_map, invert_point, invert_point_f64, InverseMap};
pub use jacobian::{diagonal_derivative_closed_form, jacobian, Jacobian};
pub use ksystem::{k_system, KShape, KSystem};
pub use reduction::{hat_compatibility, level_compatibility, rightmost_column_closed_form, tilde_scaling};
pub use udl::{
    delta, diag_closed_form, l_matrix_det, superdiag_closed_form, udl_blocks, udl_decompose, UdlBlocks,
    UdlDecomposition,
};
