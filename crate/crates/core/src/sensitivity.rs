//! Solving `A * X = D` and bounding the normalized error of the perturbed
//! system `(A + U B V) * Y = D + dD`.

use crate::error::{Error, Result};
use crate::inverse::pinv;
use crate::smw::{update_pinv, LowRankUpdate};
use crate::tensor::EinsteinTensor;

/// Particular solution `X = A^+ D` with the solvability test `A A^+ D = D`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub x: EinsteinTensor,
    pub consistent: bool,
    /// `|A A^+ D - D|`.
    pub consistency_residual: f64,
}

/// Solves `A * X = D` in the least-squares sense.
///
/// The system is consistent when `|A A^+ D - D| <= tol * max(1, |D|)`.
pub fn solve(a: &EinsteinTensor, d: &EinsteinTensor, tol: f64) -> Result<SolveResult> {
    solve_with_pinv(a, &pinv(a, 1.0)?, d, tol)
}

fn solve_with_pinv(
    a: &EinsteinTensor,
    a_pinv: &EinsteinTensor,
    d: &EinsteinTensor,
    tol: f64,
) -> Result<SolveResult> {
    if a.shape().row_dims() != d.shape().row_dims() {
        return Err(Error::shape(format!(
            "right-hand side {} does not match the rows of {}",
            d.shape(),
            a.shape()
        )));
    }
    let x = a_pinv.star(d)?;
    let consistency_residual = a.star(&x)?.sub(d)?.fro_norm();
    Ok(SolveResult {
        consistent: consistency_residual <= tol * d.fro_norm().max(1.0),
        consistency_residual,
        x,
    })
}

/// Relative perturbation sizes `eps_A` and `eps_D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationSpec {
    eps_a: f64,
    eps_d: f64,
}

fn non_negative(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() && x >= 0.0 {
        Ok(x)
    } else {
        Err(Error::Domain(format!(
            "{name} must be finite and non-negative, got {x}"
        )))
    }
}

impl PerturbationSpec {
    pub fn new(eps_a: f64, eps_d: f64) -> Result<Self> {
        Ok(PerturbationSpec {
            eps_a: non_negative("eps_A", eps_a)?,
            eps_d: non_negative("eps_D", eps_d)?,
        })
    }

    pub fn eps_a(&self) -> f64 {
        self.eps_a
    }

    pub fn eps_d(&self) -> f64 {
        self.eps_d
    }
}

/// `(1 + eD) |A|^3 (2 eA^2 |A+| + eA^3 |A| + eA^4 |A|^2 |A+|) + eD |A| |A+|`.
pub fn norm_bound(norm_a: f64, norm_a_pinv: f64, p: &PerturbationSpec) -> Result<f64> {
    let a = non_negative("norm_A", norm_a)?;
    let ap = non_negative("norm_A_pinv", norm_a_pinv)?;
    let (ea, ed) = (p.eps_a, p.eps_d);
    let inner = 2.0 * ea.powi(2) * ap + ea.powi(3) * a + ea.powi(4) * a * a * ap;
    Ok((1.0 + ed) * a.powi(3) * inner + ed * a * ap)
}

/// Bound inputs and result for one perturbation scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub norm_a: f64,
    pub norm_a_pinv: f64,
    pub eps_a: f64,
    pub eps_d: f64,
    pub bound: f64,
    /// `|Y - X| / |X|`, when the perturbed system was actually solved.
    pub measured_error: Option<f64>,
    /// Whether the unperturbed system is solvable. The bound assumes it is.
    pub consistent: bool,
    /// Whether the update identity applied to the perturbation.
    pub applicable: bool,
}

impl BoundReport {
    /// Recomputes the bound from the stored fields.
    pub fn recompute_bound(&self) -> Result<f64> {
        norm_bound(
            self.norm_a,
            self.norm_a_pinv,
            &PerturbationSpec::new(self.eps_a, self.eps_d)?,
        )
    }
}

/// Solves the original and perturbed systems and compares the error with the bound.
///
/// `eps_A` is inferred as `max(|X1|, |X2|, |E1|, |E2|, |B^+|) / |A|` from the
/// split of the update, and `eps_D` as `|dD| / |D|`.
pub fn measure_error(
    a: &EinsteinTensor,
    d: &EinsteinTensor,
    upd: &LowRankUpdate,
    delta_d: &EinsteinTensor,
    tol: f64,
) -> Result<BoundReport> {
    if delta_d.shape() != d.shape() {
        return Err(Error::shape(format!(
            "dD has shape {}, expected {}",
            delta_d.shape(),
            d.shape()
        )));
    }
    let a_pinv = pinv(a, 1.0)?;
    let base = solve_with_pinv(a, &a_pinv, d, tol)?;
    let x_norm = base.x.fro_norm();
    if x_norm == 0.0 {
        return Err(Error::DegenerateSolution);
    }
    let upd_result = update_pinv(a, &a_pinv, upd, tol)?;
    let y = upd_result.s_pinv.star(&d.add(delta_d)?)?;
    let measured = y.sub(&base.x)?.fro_norm() / x_norm;

    let norm_a = a.fro_norm();
    let parts = &upd_result.parts;
    let largest = [
        parts.x1.fro_norm(),
        parts.x2.fro_norm(),
        parts.e1.fro_norm(),
        parts.e2.fro_norm(),
        pinv(upd.b(), 1.0)?.fro_norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let eps_a = if largest == 0.0 {
        0.0
    } else {
        largest / norm_a
    };
    let eps_d = delta_d.fro_norm() / d.fro_norm();
    let norm_a_pinv = a_pinv.fro_norm();
    let spec = PerturbationSpec::new(eps_a, eps_d)?;
    Ok(BoundReport {
        norm_a,
        norm_a_pinv,
        eps_a,
        eps_d,
        bound: norm_bound(norm_a, norm_a_pinv, &spec)?,
        measured_error: Some(measured),
        consistent: base.consistent,
        applicable: upd_result.report.applicable,
    })
}

/// One point of an alpha-scaling sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub report: BoundReport,
}

/// Evaluates the bound for `alpha * A` over every `(eps_A, alpha)` pair.
///
/// `|alpha A| = alpha |A|` and `|(alpha A)^+| = |A^+| / alpha`. Rows are
/// ordered by `eps_A` in the given order, then by `alpha`.
pub fn sweep(
    a: &EinsteinTensor,
    d: &EinsteinTensor,
    eps_a_list: &[f64],
    eps_d: f64,
    alpha_grid: &[f64],
) -> Result<Vec<SweepRow>> {
    if eps_a_list.is_empty() || alpha_grid.is_empty() {
        return Err(Error::Domain("sweep grids must be nonempty".into()));
    }
    if let Some(&bad) = alpha_grid.iter().find(|&&x| !(x.is_finite() && x > 0.0)) {
        return Err(Error::Domain(format!(
            "alpha must be finite and positive, got {bad}"
        )));
    }
    if a.shape().row_dims() != d.shape().row_dims() {
        return Err(Error::shape(format!(
            "right-hand side {} does not match the rows of {}",
            d.shape(),
            a.shape()
        )));
    }
    let norm_a = a.fro_norm();
    let norm_a_pinv = pinv(a, 1.0)?.fro_norm();
    let consistent = solve(a, d, crate::DEFAULT_APPLICABILITY_TOL)?.consistent;
    let mut rows = Vec::with_capacity(eps_a_list.len() * alpha_grid.len());
    for &eps_a in eps_a_list {
        let spec = PerturbationSpec::new(eps_a, eps_d)?;
        for &alpha in alpha_grid {
            let (na, nap) = (alpha * norm_a, norm_a_pinv / alpha);
            rows.push(SweepRow {
                alpha,
                report: BoundReport {
                    norm_a: na,
                    norm_a_pinv: nap,
                    eps_a,
                    eps_d,
                    bound: norm_bound(na, nap, &spec)?,
                    measured_error: None,
                    consistent,
                    applicable: true,
                },
            });
        }
    }
    Ok(rows)
}

/// `steps` evenly spaced values from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 || !min.is_finite() || !max.is_finite() || min > max {
        return Err(Error::Domain(format!(
            "invalid grid {min}..{max} with {steps} steps"
        )));
    }
    if steps == 1 {
        return Ok(vec![min]);
    }
    let h = (max - min) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| {
            if k + 1 == steps {
                max
            } else {
                min + h * k as f64
            }
        })
        .collect())
}
