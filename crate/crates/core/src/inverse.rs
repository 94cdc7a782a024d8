//! Tensor inverse and Moore-Penrose inverse through the unfolding, and the
//! Penrose-condition verifier.

use crate::error::{Error, Result};
use crate::matkernel;
use crate::tensor::EinsteinTensor;
use crate::unfold::{fold, unfold, unfold_rank, UnfoldedMatrix};

/// Inverse of a square tensor with full unfolding rank.
pub fn inverse(a: &EinsteinTensor) -> Result<EinsteinTensor> {
    let shape = a.shape();
    if !shape.is_square() {
        return Err(Error::shape(format!("{shape} is not a square tensor")));
    }
    let r = unfold_rank(a, 1.0)?;
    if r.rank < shape.row_size() {
        return Err(Error::SingularTensor {
            rank: r.rank,
            size: shape.row_size(),
            sigma_min: r.sigma_min,
        });
    }
    let inv = matkernel::inv_matrix(&unfold(a)).map_err(|e| match e {
        Error::SingularMatrix {
            rank,
            size,
            sigma_min,
        } => Error::SingularTensor {
            rank,
            size,
            sigma_min,
        },
        other => other,
    })?;
    fold(&inv, &shape.transposed())
}

/// Moore-Penrose inverse, of shape `(J | I)` for `A` of shape `(I | J)`.
///
/// `tol` multiplies the default rank threshold; pass `1.0` for the default.
pub fn pinv(a: &EinsteinTensor, tol: f64) -> Result<EinsteinTensor> {
    let p = matkernel::pinv_matrix(&unfold(a), tol)?;
    fold(&p, &a.shape().transposed())
}

/// Relative residuals of the four Penrose equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenroseReport {
    /// `A X A = A`, `X A X = X`, `(A X)^H = A X`, `(X A)^H = X A`.
    pub residuals: [f64; 4],
    pub passed: bool,
    pub tol: f64,
}

fn rel(lhs: &UnfoldedMatrix, rhs: &UnfoldedMatrix) -> Result<f64> {
    Ok(lhs.sub(rhs)?.fro_norm() / rhs.fro_norm().max(1.0))
}

/// Checks whether `x` is the Moore-Penrose inverse of `a`.
///
/// The products are formed on the unfoldings, so one-sided tensors (whose
/// `X * A` would have no modes at all) are handled too.
pub fn verify_penrose(a: &EinsteinTensor, x: &EinsteinTensor, tol: f64) -> Result<PenroseReport> {
    if x.shape() != &a.shape().transposed() {
        return Err(Error::shape(format!(
            "candidate of shape {} cannot invert {}",
            x.shape(),
            a.shape()
        )));
    }
    let (am, xm) = (unfold(a), unfold(x));
    let ax = am.matmul(&xm)?;
    let xa = xm.matmul(&am)?;
    let residuals = [
        rel(&ax.matmul(&am)?, &am)?,
        rel(&xa.matmul(&xm)?, &xm)?,
        rel(&ax.adjoint(), &ax)?,
        rel(&xa.adjoint(), &xa)?,
    ];
    Ok(PenroseReport {
        residuals,
        passed: residuals.iter().all(|&r| r <= tol),
        tol,
    })
}
