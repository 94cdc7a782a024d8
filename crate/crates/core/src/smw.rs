//! Sherman-Morrison-Woodbury identities for tensors.
//!
//! For `S = A + U *_K B *_K V`:
//!
//! - [`smw_invertible`] evaluates `A^-1 - A^-1 U (B^-1 + V A^-1 U)^-1 V A^-1`.
//! - [`smw_pinv`] evaluates the Moore-Penrose version. The factors are split
//!   against the column spaces of `A` and `A^H` by [`decompose_update`]:
//!   `U = X1 + Y1` with `X1 = A A^+ U`, `V^H = X2 + Y2` with `X2 = A^+ A V^H`,
//!   and `E_i = Y_i (Y_i^H Y_i)^+`. The identity holds when the six equalities
//!   checked by [`check_conditions`] hold.

use crate::error::{Error, Result};
use crate::inverse::{inverse, pinv};
use crate::shape::PairedShape;
use crate::tensor::EinsteinTensor;

/// The correction `U *_K B *_K V`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowRankUpdate {
    u: EinsteinTensor,
    b: EinsteinTensor,
    v: EinsteinTensor,
}

impl LowRankUpdate {
    /// `U: (I | K)`, `B: (K | K)`, `V: (K | J)`.
    pub fn new(u: EinsteinTensor, b: EinsteinTensor, v: EinsteinTensor) -> Result<Self> {
        let k = b.shape().row_dims();
        if !b.shape().is_square() || k.is_empty() {
            return Err(Error::shape(format!(
                "B must be square with at least one mode, got {}",
                b.shape()
            )));
        }
        if u.shape().col_dims() != k || v.shape().row_dims() != k {
            return Err(Error::shape(format!(
                "factors {} and {} do not chain through B of shape {}",
                u.shape(),
                v.shape(),
                b.shape()
            )));
        }
        Ok(LowRankUpdate { u, b, v })
    }

    pub fn u(&self) -> &EinsteinTensor {
        &self.u
    }

    pub fn b(&self) -> &EinsteinTensor {
        &self.b
    }

    pub fn v(&self) -> &EinsteinTensor {
        &self.v
    }

    /// Number of contracted modes `K`.
    pub fn contraction_order(&self) -> usize {
        self.b.shape().row_dims().len()
    }

    /// Shape of a base tensor this update can be added to.
    pub fn target_shape(&self) -> Result<PairedShape> {
        PairedShape::new(
            self.u.shape().row_dims().to_vec(),
            self.v.shape().col_dims().to_vec(),
        )
    }

    /// `U *_K B *_K V`.
    pub fn correction(&self) -> Result<EinsteinTensor> {
        self.u.star(&self.b)?.star(&self.v)
    }

    fn check_base(&self, a: &PairedShape) -> Result<()> {
        if &self.target_shape()? != a {
            return Err(Error::shape(format!(
                "update of shape {} does not match base {a}",
                self.target_shape()?
            )));
        }
        Ok(())
    }
}

/// `S = A + U *_K B *_K V`.
pub fn apply_update(a: &EinsteinTensor, upd: &LowRankUpdate) -> Result<EinsteinTensor> {
    upd.check_base(a.shape())?;
    a.add(&upd.correction()?)
}

/// Inverse of `A + U B V` from `A^-1` and `B^-1`.
///
/// Fails with [`Error::SingularCapacitance`] when `B^-1 + V A^-1 U` is singular.
pub fn smw_invertible(
    a_inv: &EinsteinTensor,
    upd: &LowRankUpdate,
    b_inv: &EinsteinTensor,
) -> Result<EinsteinTensor> {
    upd.check_base(&a_inv.shape().transposed())?;
    if b_inv.shape() != upd.b.shape() {
        return Err(Error::shape(format!(
            "B^-1 has shape {}, expected {}",
            b_inv.shape(),
            upd.b.shape()
        )));
    }
    let ai_u = a_inv.star(&upd.u)?;
    let v_ai = upd.v.star(a_inv)?;
    let cap = b_inv.add(&upd.v.star(&ai_u)?)?;
    let cap_inv = match inverse(&cap) {
        Ok(c) => c,
        Err(Error::SingularTensor { rank, size, .. }) => {
            return Err(Error::SingularCapacitance { rank, size })
        }
        Err(e) => return Err(e),
    };
    a_inv.sub(&ai_u.star(&cap_inv)?.star(&v_ai)?)
}

/// Column-space split of an update relative to a base tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitParts {
    /// Part of `U` in the column space of `A`.
    pub x1: EinsteinTensor,
    /// `U - X1`.
    pub y1: EinsteinTensor,
    /// Part of `V^H` in the column space of `A^H`.
    pub x2: EinsteinTensor,
    /// `V^H - X2`.
    pub y2: EinsteinTensor,
    pub e1: EinsteinTensor,
    pub e2: EinsteinTensor,
}

/// `(X, Y)` with `X = P factor`, snapped so that a negligible part is exactly zero.
fn split(
    proj: &EinsteinTensor,
    factor: &EinsteinTensor,
    tol: f64,
) -> Result<(EinsteinTensor, EinsteinTensor)> {
    let x = proj.star(factor)?;
    let y = factor.sub(&x)?;
    let scale = factor.fro_norm();
    let zero = EinsteinTensor::zeros(factor.shape().clone());
    if x.fro_norm() <= tol * scale {
        Ok((zero, factor.clone()))
    } else if y.fro_norm() <= tol * scale {
        Ok((factor.clone(), zero))
    } else {
        Ok((x, y))
    }
}

/// `Y (Y^H Y)^+`, zero when `Y` is zero.
fn e_of(y: &EinsteinTensor) -> Result<EinsteinTensor> {
    let gram = y.conj_transpose().star(y)?;
    y.star(&pinv(&gram, 1.0)?)
}

/// Splits `U` and `V^H` against the column spaces of `A` and `A^H`.
///
/// A part whose norm is at most `tol` times the norm of its factor is set to
/// exactly zero.
pub fn decompose_update(
    a: &EinsteinTensor,
    a_pinv: &EinsteinTensor,
    upd: &LowRankUpdate,
    tol: f64,
) -> Result<SplitParts> {
    upd.check_base(a.shape())?;
    if a_pinv.shape() != &a.shape().transposed() {
        return Err(Error::shape(format!(
            "A^+ has shape {}, expected {}",
            a_pinv.shape(),
            a.shape().transposed()
        )));
    }
    let (x1, y1) = split(&a.star(a_pinv)?, &upd.u, tol)?;
    let (x2, y2) = split(&a_pinv.star(a)?, &upd.v.conj_transpose(), tol)?;
    let e1 = e_of(&y1)?;
    let e2 = e_of(&y2)?;
    Ok(SplitParts {
        x1,
        y1,
        x2,
        y2,
        e1,
        e2,
    })
}

impl SplitParts {
    /// Largest relative residual among the structural properties of the split:
    /// the parts sum to the factors, `X_i` lie in the column spaces and `Y_i`
    /// are orthogonal to them.
    pub fn invariant_residual(
        &self,
        a: &EinsteinTensor,
        a_pinv: &EinsteinTensor,
        upd: &LowRankUpdate,
    ) -> Result<f64> {
        let vh = upd.v.conj_transpose();
        let (nu, nv) = (upd.u.fro_norm().max(1.0), vh.fro_norm().max(1.0));
        let np = a_pinv.fro_norm().max(1.0);
        let p = a.star(a_pinv)?;
        let q = a_pinv.star(a)?;
        let r = [
            upd.u.sub(&self.x1.add(&self.y1)?)?.fro_norm() / nu,
            vh.sub(&self.x2.add(&self.y2)?)?.fro_norm() / nv,
            self.x1.sub(&p.star(&self.x1)?)?.fro_norm() / nu,
            self.x2.sub(&q.star(&self.x2)?)?.fro_norm() / nv,
            a_pinv.star(&self.y1)?.fro_norm() / (np * nu),
            p.star(&self.y1)?.fro_norm() / nu,
            a.star(&self.y2)?.fro_norm() / (a.fro_norm().max(1.0) * nv),
            q.star(&self.y2)?.fro_norm() / nv,
        ];
        Ok(r.into_iter().fold(0.0, f64::max))
    }
}

/// The six applicability conditions of the Moore-Penrose identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    /// `E2 B^+ E1^H Y1 B = E2`
    C3_1,
    /// `X1 E1^H Y1 B = X1 B`
    C3_2,
    /// `Y1 E1^H Y1 = Y1`
    C3_3,
    /// `B Y2^H E2 B^+ E1^H = E1^H`
    C4_1,
    /// `B Y2^H E2 X2^H = B X2^H`
    C4_2,
    /// `E2 Y2^H E2 = E2`
    C4_3,
}

impl Condition {
    pub const ALL: [Condition; 6] = [
        Condition::C3_1,
        Condition::C3_2,
        Condition::C3_3,
        Condition::C4_1,
        Condition::C4_2,
        Condition::C4_3,
    ];

    /// Stable key used in condition reports.
    pub fn label(self) -> &'static str {
        match self {
            Condition::C3_1 => "3.1",
            Condition::C3_2 => "3.2",
            Condition::C3_3 => "3.3",
            Condition::C4_1 => "4.1",
            Condition::C4_2 => "4.2",
            Condition::C4_3 => "4.3",
        }
    }
}

/// Relative residuals of the six conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport {
    /// Indexed in the order of [`Condition::ALL`].
    pub residuals: [f64; 6],
    pub applicable: bool,
    pub tol: f64,
}

impl ConditionReport {
    pub fn residual(&self, c: Condition) -> f64 {
        self.residuals[c as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Condition, f64)> + '_ {
        Condition::ALL.into_iter().zip(self.residuals)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

fn rel(lhs: &EinsteinTensor, rhs: &EinsteinTensor) -> Result<f64> {
    Ok(lhs.sub(rhs)?.fro_norm() / rhs.fro_norm().max(1.0))
}

fn check_b(parts: &SplitParts, b: &EinsteinTensor, b_pinv: &EinsteinTensor) -> Result<()> {
    let k = parts.y1.shape().col_dims();
    if b.shape().row_dims() != k || !b.shape().is_square() || b_pinv.shape() != b.shape() {
        return Err(Error::shape(format!(
            "B {} and B^+ {} do not match the split parts",
            b.shape(),
            b_pinv.shape()
        )));
    }
    Ok(())
}

/// Evaluates the six applicability conditions; applicable iff every residual is at most `tol`.
pub fn check_conditions(
    parts: &SplitParts,
    b: &EinsteinTensor,
    b_pinv: &EinsteinTensor,
    tol: f64,
) -> Result<ConditionReport> {
    check_b(parts, b, b_pinv)?;
    let SplitParts {
        x1,
        y1,
        x2,
        y2,
        e1,
        e2,
    } = parts;
    let e1h = e1.conj_transpose();
    let x2h = x2.conj_transpose();
    let y2h = y2.conj_transpose();
    let e1h_y1 = e1h.star(y1)?;
    let b_y2h_e2 = b.star(&y2h)?.star(e2)?;
    let residuals = [
        rel(&e2.star(b_pinv)?.star(&e1h_y1)?.star(b)?, e2)?,
        rel(&x1.star(&e1h_y1)?.star(b)?, &x1.star(b)?)?,
        rel(&y1.star(&e1h_y1)?, y1)?,
        rel(&b_y2h_e2.star(b_pinv)?.star(&e1h)?, &e1h)?,
        rel(&b_y2h_e2.star(&x2h)?, &b.star(&x2h)?)?,
        rel(&e2.star(&y2h)?.star(e2)?, e2)?,
    ];
    Ok(ConditionReport {
        residuals,
        applicable: residuals.iter().all(|&r| r <= tol),
        tol,
    })
}

/// `A^+ - E2 X2^H A^+ - A^+ X1 E1^H + E2 (B^+ + X2^H A^+ X1) E1^H`.
pub fn smw_pinv(
    a_pinv: &EinsteinTensor,
    parts: &SplitParts,
    b_pinv: &EinsteinTensor,
) -> Result<EinsteinTensor> {
    let SplitParts { x1, x2, e1, e2, .. } = parts;
    if b_pinv.shape().row_dims() != x1.shape().col_dims() || !b_pinv.shape().is_square() {
        return Err(Error::shape(format!(
            "B^+ of shape {} does not match the split parts",
            b_pinv.shape()
        )));
    }
    let e1h = e1.conj_transpose();
    let x2h_ap = x2.conj_transpose().star(a_pinv)?;
    let middle = b_pinv.add(&x2h_ap.star(x1)?)?;
    a_pinv
        .sub(&e2.star(&x2h_ap)?)?
        .sub(&a_pinv.star(x1)?.star(&e1h)?)?
        .add(&e2.star(&middle)?.star(&e1h)?)
}

/// `A^+ + E2 B^+ E1^H`, valid when both `X` parts vanish.
pub fn smw_pinv_orthogonal(
    a_pinv: &EinsteinTensor,
    e1: &EinsteinTensor,
    e2: &EinsteinTensor,
    b_pinv: &EinsteinTensor,
) -> Result<EinsteinTensor> {
    a_pinv.add(&e2.star(b_pinv)?.star(&e1.conj_transpose())?)
}

/// Hermitian case `A = A^H`, `V = U^H`, with `U = X + Y` and `E = Y (Y^H Y)^+`.
pub fn smw_pinv_hermitian(
    a_pinv: &EinsteinTensor,
    x: &EinsteinTensor,
    y: &EinsteinTensor,
    e: &EinsteinTensor,
    b_pinv: &EinsteinTensor,
) -> Result<EinsteinTensor> {
    if x.shape() != y.shape() || x.shape() != e.shape() {
        return Err(Error::shape(format!(
            "X {}, Y {} and E {} must share a shape",
            x.shape(),
            y.shape(),
            e.shape()
        )));
    }
    let parts = SplitParts {
        x1: x.clone(),
        y1: y.clone(),
        x2: x.clone(),
        y2: y.clone(),
        e1: e.clone(),
        e2: e.clone(),
    };
    smw_pinv(a_pinv, &parts, b_pinv)
}

/// Result of [`update_pinv`].
#[derive(Debug, Clone)]
pub struct PinvUpdate {
    pub s_pinv: EinsteinTensor,
    pub report: ConditionReport,
    pub parts: SplitParts,
}

impl PinvUpdate {
    /// True when the conditions failed and `s_pinv` came from a direct pseudoinverse.
    pub fn used_fallback(&self) -> bool {
        !self.report.applicable
    }
}

/// Pseudoinverse of `A + U B V` through the update identity, or directly when it does not apply.
pub fn update_pinv(
    a: &EinsteinTensor,
    a_pinv: &EinsteinTensor,
    upd: &LowRankUpdate,
    tol: f64,
) -> Result<PinvUpdate> {
    let parts = decompose_update(a, a_pinv, upd, tol)?;
    let b_pinv = pinv(&upd.b, 1.0)?;
    let report = check_conditions(&parts, &upd.b, &b_pinv, tol)?;
    let s_pinv = if report.applicable {
        smw_pinv(a_pinv, &parts, &b_pinv)?
    } else {
        pinv(&apply_update(a, upd)?, 1.0)?
    };
    Ok(PinvUpdate {
        s_pinv,
        report,
        parts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sh(r: &[usize], c: &[usize]) -> PairedShape {
        PairedShape::new(r.to_vec(), c.to_vec()).unwrap()
    }

    fn t(r: &[usize], c: &[usize], d: &[f64]) -> EinsteinTensor {
        EinsteinTensor::from_real(sh(r, c), d).unwrap()
    }

    #[test]
    fn update_rejects_mismatched_factors() {
        let u = t(&[2], &[1], &[1.0, 0.0]);
        let b = t(&[1], &[1], &[1.0]);
        let v = t(&[2], &[2], &[0.0; 4]);
        assert!(LowRankUpdate::new(u.clone(), b.clone(), v).is_err());
        assert!(
            LowRankUpdate::new(u.clone(), t(&[1], &[2], &[1.0, 1.0]), u.conj_transpose()).is_err()
        );
        let upd = LowRankUpdate::new(u.clone(), b, u.conj_transpose()).unwrap();
        assert_eq!(upd.contraction_order(), 1);
        assert!(apply_update(&EinsteinTensor::identity(&[3]).unwrap(), &upd).is_err());
    }

    #[test]
    fn sherman_morrison_on_identity() {
        // (I + e e^T)^-1 = I - e e^T / 2 for a unit vector e
        let i = EinsteinTensor::identity(&[3]).unwrap();
        let e = t(&[3], &[1], &[0.0, 1.0, 0.0]);
        let upd = LowRankUpdate::new(e.clone(), t(&[1], &[1], &[1.0]), e.conj_transpose()).unwrap();
        let got = smw_invertible(&i, &upd, &t(&[1], &[1], &[1.0])).unwrap();
        let want = t(&[3], &[3], &[1.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 1.0]);
        assert!(got.sub(&want).unwrap().fro_norm() < 1e-15);
    }

    #[test]
    fn singular_capacitance_is_reported() {
        // B^-1 + V A^-1 U = 1 - 1 = 0
        let i = EinsteinTensor::identity(&[2]).unwrap();
        let e = t(&[2], &[1], &[1.0, 0.0]);
        let upd =
            LowRankUpdate::new(e.clone(), t(&[1], &[1], &[-1.0]), e.conj_transpose()).unwrap();
        let r = smw_invertible(&i, &upd, &t(&[1], &[1], &[-1.0]));
        assert_eq!(r, Err(Error::SingularCapacitance { rank: 0, size: 1 }));
    }

    #[test]
    fn degenerate_split_fails_condition_3_2() {
        let x1 = t(&[2], &[1], &[1.0, 0.0]);
        let zero = t(&[2], &[1], &[0.0, 0.0]);
        let parts = SplitParts {
            x1,
            y1: zero.clone(),
            x2: zero.clone(),
            y2: zero.clone(),
            e1: zero.clone(),
            e2: zero,
        };
        let b = t(&[1], &[1], &[1.0]);
        let r = check_conditions(&parts, &b, &b, 1e-10).unwrap();
        assert_eq!(r.residual(Condition::C3_2), 1.0);
        assert!(!r.applicable);
        assert_eq!(
            r.iter().map(|(c, _)| c.label()).collect::<Vec<_>>(),
            ["3.1", "3.2", "3.3", "4.1", "4.2", "4.3"]
        );
    }

    #[test]
    fn zero_parts_return_a_pinv() {
        let ap = t(&[2], &[2], &[1.0, 2.0, 3.0, 4.0]);
        let zero = t(&[2], &[1], &[0.0, 0.0]);
        let parts = SplitParts {
            x1: zero.clone(),
            y1: zero.clone(),
            x2: zero.clone(),
            y2: zero.clone(),
            e1: zero.clone(),
            e2: zero.clone(),
        };
        let bp = t(&[1], &[1], &[3.0]);
        assert_eq!(smw_pinv(&ap, &parts, &bp).unwrap(), ap);
        assert_eq!(smw_pinv_orthogonal(&ap, &zero, &zero, &bp).unwrap(), ap);
        assert_eq!(
            smw_pinv_hermitian(&ap, &zero, &zero, &zero, &bp).unwrap(),
            ap
        );
    }

    #[test]
    fn e_of_zero_is_zero() {
        let z = t(&[2, 2], &[1], &[0.0; 4]);
        assert_eq!(e_of(&z).unwrap(), z);
    }
}
