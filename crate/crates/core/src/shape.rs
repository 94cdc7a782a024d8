use std::fmt;

use crate::error::{Error, Result};

/// Row-mode / column-mode signature `(I1..IM | J1..JN)` of an Einstein-product operand.
///
/// Either side may be empty (a tensor with no column modes is a "column
/// tensor"), but not both, and every dimension is at least one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairedShape {
    row_dims: Vec<usize>,
    col_dims: Vec<usize>,
    row_size: usize,
    col_size: usize,
}

const MAX_ENTRIES: usize = isize::MAX as usize / 16;

fn checked_size(dims: &[usize]) -> Option<usize> {
    dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d))
}

impl PairedShape {
    pub fn new(row_dims: impl Into<Vec<usize>>, col_dims: impl Into<Vec<usize>>) -> Result<Self> {
        let row_dims = row_dims.into();
        let col_dims = col_dims.into();
        if row_dims.is_empty() && col_dims.is_empty() {
            return Err(Error::shape("a tensor needs at least one mode"));
        }
        if row_dims.iter().chain(&col_dims).any(|&d| d == 0) {
            return Err(Error::shape(format!(
                "zero-length mode in ({row_dims:?} | {col_dims:?})"
            )));
        }
        let overflow = || {
            Error::shape(format!(
                "({row_dims:?} | {col_dims:?}) is too large to address"
            ))
        };
        let row_size = checked_size(&row_dims).ok_or_else(overflow)?;
        let col_size = checked_size(&col_dims).ok_or_else(overflow)?;
        match row_size.checked_mul(col_size) {
            Some(n) if n <= MAX_ENTRIES => {}
            _ => return Err(overflow()),
        }
        Ok(PairedShape {
            row_dims,
            col_dims,
            row_size,
            col_size,
        })
    }

    /// The square shape `(dims | dims)`.
    pub fn square(dims: impl Into<Vec<usize>>) -> Result<Self> {
        let dims = dims.into();
        Self::new(dims.clone(), dims)
    }

    pub fn row_dims(&self) -> &[usize] {
        &self.row_dims
    }

    pub fn col_dims(&self) -> &[usize] {
        &self.col_dims
    }

    /// `I1 * ... * IM`, the number of rows of the unfolding.
    pub fn row_size(&self) -> usize {
        self.row_size
    }

    /// `J1 * ... * JN`, the number of columns of the unfolding.
    pub fn col_size(&self) -> usize {
        self.col_size
    }

    pub fn num_entries(&self) -> usize {
        self.row_size * self.col_size
    }

    pub fn num_modes(&self) -> usize {
        self.row_dims.len() + self.col_dims.len()
    }

    /// `(J | I)` for a shape `(I | J)`.
    pub fn transposed(&self) -> PairedShape {
        PairedShape {
            row_dims: self.col_dims.clone(),
            col_dims: self.row_dims.clone(),
            row_size: self.col_size,
            col_size: self.row_size,
        }
    }

    /// Row modes equal column modes.
    pub fn is_square(&self) -> bool {
        self.row_dims == self.col_dims
    }
}

impl fmt::Display for PairedShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |d: &[usize]| {
            d.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "({}|{})", join(&self.row_dims), join(&self.col_dims))
    }
}
