//! The index map `phi` and the unfolding isomorphism between paired-mode
//! tensors and matrices.
//!
//! `phi(i, I) = i1 + sum_{m>=2} (i_m - 1) * I1 * ... * I_{m-1}` (1-based, first
//! mode varies fastest). A tensor entry `a[i; j]` lives at row `phi(i, I)` and
//! column `phi(j, J)` of the unfolding. Since [`EinsteinTensor`] stores exactly
//! that row-major matrix, [`unfold`] and [`fold`] only relabel the buffer.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matkernel;
use crate::shape::PairedShape;
use crate::tensor::EinsteinTensor;

/// A 1-based multi-index together with the dimensions it ranges over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiIndex {
    idx: Vec<usize>,
    dims: Vec<usize>,
}

impl MultiIndex {
    pub fn new(idx: impl Into<Vec<usize>>, dims: impl Into<Vec<usize>>) -> Result<Self> {
        let idx = idx.into();
        let dims = dims.into();
        if idx.len() != dims.len() {
            return Err(Error::Index(format!(
                "index {idx:?} has {} components but dims {dims:?} has {}",
                idx.len(),
                dims.len()
            )));
        }
        if let Some(k) = (0..idx.len()).find(|&k| idx[k] == 0 || idx[k] > dims[k]) {
            return Err(Error::Index(format!(
                "component {} of {idx:?} is outside 1..={}",
                k + 1,
                dims[k]
            )));
        }
        Ok(MultiIndex { idx, dims })
    }

    pub fn idx(&self) -> &[usize] {
        &self.idx
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
}

/// 1-based flat position of a multi-index.
pub fn phi_index(m: &MultiIndex) -> usize {
    offset_of(&m.idx, &m.dims, 1) + 1
}

/// Inverse of [`phi_index`].
pub fn phi_inverse(flat: usize, dims: &[usize]) -> Result<MultiIndex> {
    let total: usize = dims.iter().product();
    if flat == 0 || flat > total {
        return Err(Error::Index(format!(
            "flat index {flat} outside 1..={total}"
        )));
    }
    let mut idx = vec![0; dims.len()];
    index_of(flat - 1, dims, &mut idx);
    for i in &mut idx {
        *i += 1;
    }
    Ok(MultiIndex {
        idx,
        dims: dims.to_vec(),
    })
}

/// 0-based offset of `idx` (with the given base) under the `phi` ordering.
pub(crate) fn offset_of(idx: &[usize], dims: &[usize], base: usize) -> usize {
    let mut off = 0;
    let mut stride = 1;
    for (&i, &d) in idx.iter().zip(dims) {
        off += (i - base) * stride;
        stride *= d;
    }
    off
}

/// 0-based multi-index of a 0-based offset.
pub(crate) fn index_of(mut off: usize, dims: &[usize], out: &mut [usize]) {
    for (o, &d) in out.iter_mut().zip(dims) {
        *o = off % d;
        off /= d;
    }
}

/// Dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnfoldedMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl UnfoldedMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows.checked_mul(cols) != Some(data.len()) {
            return Err(Error::shape(format!(
                "{} entries do not fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(offset) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite { offset });
        }
        Ok(UnfoldedMatrix { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        UnfoldedMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(rows * cols, data.len());
        UnfoldedMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.data
    }

    /// 0-based entry access.
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn matmul(&self, other: &UnfoldedMatrix) -> Result<UnfoldedMatrix> {
        if self.cols != other.rows {
            return Err(Error::shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = matkernel::gemm(&self.data, &other.data, self.rows, self.cols, other.cols);
        Ok(UnfoldedMatrix::from_raw(self.rows, other.cols, data))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> UnfoldedMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.data[r * self.cols + c].conj());
            }
        }
        UnfoldedMatrix::from_raw(self.cols, self.rows, data)
    }

    pub fn sub(&self, other: &UnfoldedMatrix) -> Result<UnfoldedMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::shape("matrix dimensions differ"));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(UnfoldedMatrix::from_raw(self.rows, self.cols, data))
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// The unfolding `phi(A)`: a `row_size x col_size` matrix.
pub fn unfold(a: &EinsteinTensor) -> UnfoldedMatrix {
    let s = a.shape();
    UnfoldedMatrix::from_raw(s.row_size(), s.col_size(), a.entries().to_vec())
}

/// Inverse of [`unfold`] for the given paired shape.
pub fn fold(m: &UnfoldedMatrix, shape: &PairedShape) -> Result<EinsteinTensor> {
    if m.rows != shape.row_size() || m.cols != shape.col_size() {
        return Err(Error::shape(format!(
            "a {}x{} matrix does not fold into {shape}",
            m.rows, m.cols
        )));
    }
    EinsteinTensor::from_entries(shape.clone(), m.data.clone())
}

/// Numerical unfolding rank with full-row/full-column flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnfoldingRank {
    pub rank: usize,
    pub full_row_rank: bool,
    pub full_col_rank: bool,
    pub sigma_max: f64,
    /// Smallest singular value of the unfolding (zero-padded when it has
    /// fewer computed values than `min(rows, cols)`).
    pub sigma_min: f64,
}

/// Rank of `unfold(A)`: singular values above `tol * sigma_max * max(rows, cols) * 2^-52`.
pub fn unfold_rank(a: &EinsteinTensor, tol: f64) -> Result<UnfoldingRank> {
    let m = unfold(a);
    let sv = matkernel::singular_values(&m)?;
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let cutoff = matkernel::rank_cutoff(sigma_max, m.rows, m.cols, tol);
    let rank = sv.iter().filter(|&&s| s > cutoff).count();
    Ok(UnfoldingRank {
        rank,
        full_row_rank: rank == m.rows,
        full_col_rank: rank == m.cols,
        sigma_max,
        sigma_min: sv.last().copied().unwrap_or(0.0),
    })
}

/// A square tensor is invertible iff its unfolding has full rank.
pub fn is_invertible(a: &EinsteinTensor, tol: f64) -> Result<bool> {
    if !a.shape().is_square() {
        return Err(Error::shape(format!(
            "{} is not a square tensor",
            a.shape()
        )));
    }
    Ok(unfold_rank(a, tol)?.rank == a.shape().row_size())
}
