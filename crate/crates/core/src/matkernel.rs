//! Dense complex matrix kernel: one-sided Jacobi SVD, Moore-Penrose
//! pseudoinverse and inverse.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::unfold::UnfoldedMatrix;

/// Sweep cap for the Jacobi iteration.
pub const MAX_SWEEPS: usize = 60;

/// A pair of columns is treated as orthogonal once `|<g_p, g_q>| <= ROTATION_TOL * |g_p| |g_q|`.
pub const ROTATION_TOL: f64 = 1e-14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Row-major `m x k` times `k x n`.
pub(crate) fn gemm(
    a: &[Complex64],
    b: &[Complex64],
    m: usize,
    k: usize,
    n: usize,
) -> Vec<Complex64> {
    debug_assert_eq!(a.len(), m * k);
    debug_assert_eq!(b.len(), k * n);
    let mut c = vec![ZERO; m * n];
    for i in 0..m {
        let crow = &mut c[i * n..(i + 1) * n];
        for (l, &ail) in a[i * k..(i + 1) * k].iter().enumerate() {
            if ail == ZERO {
                continue;
            }
            for (cij, &blj) in crow.iter_mut().zip(&b[l * n..(l + 1) * n]) {
                *cij += ail * blj;
            }
        }
    }
    c
}

/// Singular values at or below this are treated as zero.
pub fn rank_cutoff(sigma_max: f64, rows: usize, cols: usize, tol: f64) -> f64 {
    tol * sigma_max * rows.max(cols) as f64 * f64::EPSILON
}

/// Thin SVD `M = U diag(S) V^H` truncated to the numerical rank.
#[derive(Debug, Clone)]
pub struct Svd {
    /// `m x r`, orthonormal columns.
    pub u: UnfoldedMatrix,
    /// Descending, all above the truncation threshold.
    pub s: Vec<f64>,
    /// `n x r`, orthonormal columns.
    pub v: UnfoldedMatrix,
}

impl Svd {
    pub fn rank(&self) -> usize {
        self.s.len()
    }

    /// `U diag(S) V^H`.
    pub fn reconstruct(&self) -> UnfoldedMatrix {
        let (m, n, r) = (self.u.rows(), self.v.rows(), self.s.len());
        let mut data = vec![ZERO; m * n];
        for i in 0..m {
            for j in 0..n {
                let mut acc = ZERO;
                for k in 0..r {
                    acc += self.u.get(i, k) * self.s[k] * self.v.get(j, k).conj();
                }
                data[i * n + j] = acc;
            }
        }
        UnfoldedMatrix::from_raw(m, n, data)
    }
}

struct FullSvd {
    // columns of U (length m) and V (length n), paired with descending sigma
    u_cols: Vec<Vec<Complex64>>,
    v_cols: Vec<Vec<Complex64>>,
    sigma: Vec<f64>,
}

fn dot_conj(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn norm_sqr(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// Column norm below which a column is rounding noise: `eps * max(m, n) * |M|_F`.
fn noise_floor(g: &[Vec<Complex64>]) -> f64 {
    let len = g.first().map_or(0, Vec::len).max(g.len());
    let total: f64 = g.iter().map(|c| norm_sqr(c)).sum();
    f64::EPSILON * len as f64 * total.sqrt()
}

/// Orthogonalizes the columns of `g` in place, accumulating the rotations in `v`.
fn jacobi_sweeps(g: &mut [Vec<Complex64>], v: &mut [Vec<Complex64>]) -> Result<()> {
    let n = g.len();
    let len = g.first().map_or(0, Vec::len);
    let tol = ROTATION_TOL.max(len as f64 * f64::EPSILON);
    // Rotating columns that are already numerically zero only shuffles noise.
    let floor = noise_floor(g).powi(2);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norm_sqr(&g[p]);
                let beta = norm_sqr(&g[q]);
                let gamma = dot_conj(&g[p], &g[q]);
                let gabs = gamma.norm();
                if gabs == 0.0
                    || alpha <= floor
                    || beta <= floor
                    || gabs <= tol * (alpha * beta).sqrt()
                {
                    continue;
                }
                rotated = true;
                // rotate (g_p, e^{-i theta} g_q) with a real Jacobi rotation
                let phase = gamma.conj() / gabs;
                let zeta = (beta - alpha) / (2.0 * gabs);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(g, p, q, c, s, phase);
                rotate(v, p, q, c, s, phase);
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(Error::NoConvergence { sweeps: MAX_SWEEPS })
}

fn rotate(cols: &mut [Vec<Complex64>], p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let (lo, hi) = cols.split_at_mut(q);
    for (xp, xq) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
        let a = *xp;
        let b = *xq * phase;
        *xp = a * c - b * s;
        *xq = a * s + b * c;
    }
}

fn full_svd(m: &UnfoldedMatrix) -> Result<FullSvd> {
    let (rows, cols) = (m.rows(), m.cols());
    let tall = rows >= cols;
    // Work on the orientation with at least as many rows as columns.
    let (mut g, k) = if tall {
        let g = (0..cols)
            .map(|c| (0..rows).map(|r| m.get(r, c)).collect())
            .collect::<Vec<Vec<_>>>();
        (g, cols)
    } else {
        let g = (0..rows)
            .map(|r| (0..cols).map(|c| m.get(r, c).conj()).collect())
            .collect::<Vec<Vec<_>>>();
        (g, rows)
    };
    let mut v: Vec<Vec<Complex64>> = (0..k)
        .map(|j| {
            let mut e = vec![ZERO; k];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();
    let floor = noise_floor(&g);
    jacobi_sweeps(&mut g, &mut v)?;

    let mut sig: Vec<(f64, usize)> = g
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let s = norm_sqr(c).sqrt();
            (if s <= floor { 0.0 } else { s }, j)
        })
        .collect();
    sig.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut left = Vec::with_capacity(k);
    let mut right = Vec::with_capacity(k);
    let mut sigma = Vec::with_capacity(k);
    for &(s, j) in &sig {
        let scaled: Vec<Complex64> = if s > 0.0 {
            g[j].iter().map(|z| z / s).collect()
        } else {
            g[j].clone()
        };
        left.push(scaled);
        right.push(v[j].clone());
        sigma.push(s);
    }
    // For a wide matrix we decomposed M^H = U' S V'^H, so M = V' S U'^H.
    let (u_cols, v_cols) = if tall { (left, right) } else { (right, left) };
    Ok(FullSvd {
        u_cols,
        v_cols,
        sigma,
    })
}

/// All `min(m, n)` singular values in descending order.
pub fn singular_values(m: &UnfoldedMatrix) -> Result<Vec<f64>> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(Vec::new());
    }
    Ok(full_svd(m)?.sigma)
}

fn columns_to_matrix(cols: &[Vec<Complex64>], rows: usize) -> UnfoldedMatrix {
    let r = cols.len();
    let mut data = vec![ZERO; rows * r];
    for (k, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            data[i * r + k] = z;
        }
    }
    UnfoldedMatrix::from_raw(rows, r, data)
}

/// Thin SVD truncated at `tol * sigma_max * max(m, n) * 2^-52`; `tol = 1` is the default.
pub fn svd(m: &UnfoldedMatrix, tol: f64) -> Result<Svd> {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::Domain(format!(
            "SVD tolerance must be finite and non-negative, got {tol}"
        )));
    }
    let full = full_svd(m)?;
    let sigma_max = full.sigma.first().copied().unwrap_or(0.0);
    let cutoff = rank_cutoff(sigma_max, m.rows(), m.cols(), tol);
    let r = full
        .sigma
        .iter()
        .take_while(|&&s| s > cutoff && s > 0.0)
        .count();
    Ok(Svd {
        u: columns_to_matrix(&full.u_cols[..r], m.rows()),
        s: full.sigma[..r].to_vec(),
        v: columns_to_matrix(&full.v_cols[..r], m.cols()),
    })
}

/// Moore-Penrose pseudoinverse `V diag(1/S) U^H` from the truncated SVD.
pub fn pinv_matrix(m: &UnfoldedMatrix, tol: f64) -> Result<UnfoldedMatrix> {
    let d = svd(m, tol)?;
    let (rows, cols) = (m.cols(), m.rows());
    let mut data = vec![ZERO; rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            let mut acc = ZERO;
            for (k, &s) in d.s.iter().enumerate() {
                acc += d.v.get(i, k) * d.u.get(j, k).conj() / s;
            }
            data[i * cols + j] = acc;
        }
    }
    Ok(UnfoldedMatrix::from_raw(rows, cols, data))
}

/// Inverse of a square, numerically full-rank matrix.
///
/// Rank is decided by the default SVD threshold; the inverse itself comes
/// from Gauss-Jordan elimination with partial pivoting.
pub fn inv_matrix(m: &UnfoldedMatrix) -> Result<UnfoldedMatrix> {
    let n = m.rows();
    if m.cols() != n {
        return Err(Error::shape(format!(
            "cannot invert a {}x{} matrix",
            n,
            m.cols()
        )));
    }
    let sv = singular_values(m)?;
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let cutoff = rank_cutoff(sigma_max, n, n, 1.0);
    let rank = sv.iter().filter(|&&s| s > cutoff).count();
    if rank < n {
        return Err(Error::SingularMatrix {
            rank,
            size: n,
            sigma_min: sv.last().copied().unwrap_or(0.0),
        });
    }
    Ok(gauss_jordan(m))
}

fn gauss_jordan(m: &UnfoldedMatrix) -> UnfoldedMatrix {
    let n = m.rows();
    let mut a = m.entries().to_vec();
    let mut inv = UnfoldedMatrix::identity(n).into_entries();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm()))
            .unwrap_or(col);
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
                inv.swap(col * n + k, piv * n + k);
            }
        }
        let d = a[col * n + col];
        for k in 0..n {
            a[col * n + k] /= d;
            inv[col * n + k] /= d;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r * n + col];
            if f == ZERO {
                continue;
            }
            for k in 0..n {
                let (ak, ik) = (a[col * n + k], inv[col * n + k]);
                a[r * n + k] -= f * ak;
                inv[r * n + k] -= f * ik;
            }
        }
    }
    UnfoldedMatrix::from_raw(n, n, inv)
}
