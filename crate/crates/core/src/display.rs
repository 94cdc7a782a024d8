//! Conversion between the 4x4 block display of `(I1,I2 | J1,J2)` tensors and
//! storage order.
//!
//! In the block display, entry `a[i1 i2; j1 j2]` sits at display row
//! `i1 + I1 (j1 - 1)` and display column `i2 + I2 (j2 - 1)` (1-based). The
//! display is an `I1 J1 x I2 J2` matrix. This is not the unfolding: the
//! unfolding puts `(i1, i2)` on the rows and `(j1, j2)` on the columns.

use crate::error::{Error, Result};
use crate::shape::PairedShape;
use crate::tensor::{EinsteinTensor, Scalar};

fn check(shape: &PairedShape) -> Result<(usize, usize, usize, usize)> {
    match (shape.row_dims(), shape.col_dims()) {
        (&[i1, i2], &[j1, j2]) => Ok((i1, i2, j1, j2)),
        _ => Err(Error::shape(format!(
            "block display needs two row and two column modes, got {shape}"
        ))),
    }
}

/// Builds a tensor from its block display, given as rows of real values.
pub fn from_block_display(shape: PairedShape, display: &[&[f64]]) -> Result<EinsteinTensor> {
    let (i1d, i2d, j1d, j2d) = check(&shape)?;
    if display.len() != i1d * j1d || display.iter().any(|r| r.len() != i2d * j2d) {
        return Err(Error::shape(format!(
            "block display of {shape} must be {}x{}",
            i1d * j1d,
            i2d * j2d
        )));
    }
    EinsteinTensor::from_fn(shape, |i, j| {
        let r = i[0] + i1d * (j[0] - 1);
        let c = i[1] + i2d * (j[1] - 1);
        Scalar::new(display[r - 1][c - 1], 0.0)
    })
}

/// The block display of a tensor, row by row.
pub fn to_block_display(t: &EinsteinTensor) -> Result<Vec<Vec<Scalar>>> {
    let (i1d, i2d, j1d, j2d) = check(t.shape())?;
    let mut out = vec![vec![Scalar::new(0.0, 0.0); i2d * j2d]; i1d * j1d];
    for i1 in 1..=i1d {
        for i2 in 1..=i2d {
            for j1 in 1..=j1d {
                for j2 in 1..=j2d {
                    out[i1 + i1d * (j1 - 1) - 1][i2 + i2d * (j2 - 1) - 1] =
                        t.get(&[i1, i2], &[j1, j2])?;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_positions() {
        let s = PairedShape::square(vec![2, 2]).unwrap();
        let rows: Vec<Vec<f64>> = (0..4)
            .map(|r| (0..4).map(|c| (10 * r + c) as f64).collect())
            .collect();
        let view: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
        let t = from_block_display(s, &view).unwrap();
        // a[2 1; 2 2] sits at display row 2 + 2 = 4, column 1 + 2 = 3
        assert_eq!(t.get(&[2, 1], &[2, 2]).unwrap().re, 32.0);
        let back = to_block_display(&t).unwrap();
        assert_eq!(back[3][2].re, 32.0);
    }

    #[test]
    fn column_and_row_tensors() {
        let col = PairedShape::new(vec![2, 2], vec![1, 1]).unwrap();
        let t = from_block_display(col, &[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        assert_eq!(t.get(&[1, 2], &[1, 1]).unwrap().re, 2.0);
        let row = PairedShape::new(vec![1, 1], vec![2, 2]).unwrap();
        let t = from_block_display(row, &[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        assert_eq!(t.get(&[1, 1], &[2, 1]).unwrap().re, 3.0);
        let bad = PairedShape::new(vec![4], vec![4]).unwrap();
        assert!(from_block_display(bad, &[&[0.0]]).is_err());
    }
}
