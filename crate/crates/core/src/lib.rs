//! Dense Einstein-product tensor algebra over the complex field.
//!
//! Tensors carry a *paired shape* `(I1..IM | J1..JN)`: a list of row modes and
//! a list of column modes. The Einstein product contracts the column modes of
//! the left operand with the row modes of the right one, so every tensor is
//! canonically isomorphic to its unfolded matrix and products, inverses and
//! pseudoinverses all go through that isomorphism.
//!
//! On top of the basic algebra the crate provides
//!
//! - tensor inverses and Moore-Penrose inverses ([`inverse`]),
//! - both Sherman-Morrison-Woodbury identities, for invertible tensors and for
//!   Moore-Penrose inverses, with the full applicability check ([`smw`]),
//! - a solver and a normalized error bound for perturbed multilinear systems
//!   `A * X = D` ([`sensitivity`]),
//! - a JSON tensor file format and CSV sweep output ([`io`]).

pub mod display;
pub mod error;
pub mod inverse;
pub mod io;
pub mod matkernel;
pub mod sensitivity;
pub mod shape;
pub mod smw;
pub mod tensor;
pub mod unfold;

pub use error::{Error, Result};
pub use inverse::{inverse, pinv, verify_penrose, PenroseReport};
pub use shape::PairedShape;
pub use smw::{
    apply_update, check_conditions, decompose_update, smw_invertible, smw_pinv, smw_pinv_hermitian,
    smw_pinv_orthogonal, update_pinv, Condition, ConditionReport, LowRankUpdate, PinvUpdate,
    SplitParts,
};
pub use tensor::{einstein_product, EinsteinTensor, Scalar};
pub use unfold::{
    fold, is_invertible, phi_index, phi_inverse, unfold, unfold_rank, MultiIndex, UnfoldedMatrix,
};

/// Default relative tolerance used when deciding whether the generalized
/// update identity applies.
pub const DEFAULT_APPLICABILITY_TOL: f64 = 1e-8;

/// Default tolerance for the four Penrose residuals.
pub const DEFAULT_PENROSE_TOL: f64 = 1e-10;
