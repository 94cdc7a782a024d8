//! The dense complex tensor type and its basic algebra.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matkernel;
use crate::shape::PairedShape;
use crate::unfold::{index_of, offset_of};

/// Complex scalar, `re + i*im` in double precision.
pub type Scalar = Complex64;

const ZERO: Scalar = Complex64::new(0.0, 0.0);
const ONE: Scalar = Complex64::new(1.0, 0.0);

/// Dense tensor with a paired shape `(I1..IM | J1..JN)`.
///
/// Entries are stored as the row-major unfolded matrix: `a[i; j]` sits at
/// `(phi(i) - 1) * col_size + (phi(j) - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EinsteinTensor {
    shape: PairedShape,
    data: Vec<Scalar>,
}

fn check_finite(data: &[Scalar]) -> Result<()> {
    match data
        .iter()
        .position(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        Some(offset) => Err(Error::NonFinite { offset }),
        None => Ok(()),
    }
}

impl EinsteinTensor {
    /// Builds a tensor from entries in storage order.
    pub fn from_entries(shape: PairedShape, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != shape.num_entries() {
            return Err(Error::shape(format!(
                "{} entries given for shape {shape} which needs {}",
                data.len(),
                shape.num_entries()
            )));
        }
        check_finite(&data)?;
        Ok(EinsteinTensor { shape, data })
    }

    pub fn from_real(shape: PairedShape, data: &[f64]) -> Result<Self> {
        Self::from_entries(
            shape,
            data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// Builds a tensor entry by entry; `f` receives 1-based row and column multi-indices.
    pub fn from_fn(
        shape: PairedShape,
        mut f: impl FnMut(&[usize], &[usize]) -> Scalar,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(shape.num_entries());
        let mut i = vec![0; shape.row_dims().len()];
        let mut j = vec![0; shape.col_dims().len()];
        for r in 0..shape.row_size() {
            index_of(r, shape.row_dims(), &mut i);
            let i1: Vec<usize> = i.iter().map(|x| x + 1).collect();
            for c in 0..shape.col_size() {
                index_of(c, shape.col_dims(), &mut j);
                let j1: Vec<usize> = j.iter().map(|x| x + 1).collect();
                data.push(f(&i1, &j1));
            }
        }
        Self::from_entries(shape, data)
    }

    pub(crate) fn from_raw(shape: PairedShape, data: Vec<Scalar>) -> Self {
        debug_assert_eq!(shape.num_entries(), data.len());
        EinsteinTensor { shape, data }
    }

    pub fn zeros(shape: PairedShape) -> Self {
        let n = shape.num_entries();
        EinsteinTensor {
            shape,
            data: vec![ZERO; n],
        }
    }

    /// The identity tensor of shape `(dims | dims)`.
    pub fn identity(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::shape("identity needs at least one mode"));
        }
        let shape = PairedShape::square(dims.to_vec())?;
        let n = shape.row_size();
        let mut t = Self::zeros(shape);
        for k in 0..n {
            t.data[k * n + k] = ONE;
        }
        Ok(t)
    }

    pub fn shape(&self) -> &PairedShape {
        &self.shape
    }

    /// Entries in storage order (the row-major unfolding).
    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.data
    }

    /// Entry `a[i; j]` for 1-based multi-indices.
    pub fn get(&self, i: &[usize], j: &[usize]) -> Result<Scalar> {
        let s = &self.shape;
        let valid = |idx: &[usize], dims: &[usize]| {
            idx.len() == dims.len() && idx.iter().zip(dims).all(|(&x, &d)| x >= 1 && x <= d)
        };
        if !valid(i, s.row_dims()) || !valid(j, s.col_dims()) {
            return Err(Error::Index(format!(
                "({i:?}; {j:?}) is not an index of {s}"
            )));
        }
        let r = offset_of(i, s.row_dims(), 1);
        let c = offset_of(j, s.col_dims(), 1);
        Ok(self.data[r * s.col_size() + c])
    }

    fn same_shape(&self, other: &Self, op: &str) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::shape(format!(
                "{op} needs equal shapes, got {} and {}",
                self.shape, other.shape
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "addition")?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self::from_raw(self.shape.clone(), data))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "subtraction")?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self::from_raw(self.shape.clone(), data))
    }

    pub fn scale(&self, c: Scalar) -> Self {
        Self::from_raw(
            self.shape.clone(),
            self.data.iter().map(|z| z * c).collect(),
        )
    }

    /// Einstein product contracting all column modes of `self`.
    pub fn star(&self, other: &Self) -> Result<Self> {
        einstein_product(self, other, self.shape.col_dims().len())
    }

    /// Conjugate transpose `A^H`, of shape `(J | I)`.
    pub fn conj_transpose(&self) -> Self {
        self.transpose_with(|z| z.conj())
    }

    /// Transpose without conjugation.
    pub fn transpose(&self) -> Self {
        self.transpose_with(|z| z)
    }

    fn transpose_with(&self, f: impl Fn(Scalar) -> Scalar) -> Self {
        let (rows, cols) = (self.shape.row_size(), self.shape.col_size());
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..cols {
            for r in 0..rows {
                data.push(f(self.data[r * cols + c]));
            }
        }
        Self::from_raw(self.shape.transposed(), data)
    }

    /// Kronecker product: shape `(I ++ P | J ++ Q)` with entry `a[i; j] * b[p; q]`.
    pub fn kronecker(&self, other: &Self) -> Result<Self> {
        let cat = |a: &[usize], b: &[usize]| [a, b].concat();
        let shape = PairedShape::new(
            cat(self.shape.row_dims(), other.shape.row_dims()),
            cat(self.shape.col_dims(), other.shape.col_dims()),
        )?;
        let (ra, ca) = (self.shape.row_size(), self.shape.col_size());
        let (rb, cb) = (other.shape.row_size(), other.shape.col_size());
        let cols = shape.col_size();
        let mut data = vec![ZERO; shape.num_entries()];
        // The first factor's modes come first, so they vary fastest.
        for p in 0..rb {
            for i in 0..ra {
                let row = i + p * ra;
                for q in 0..cb {
                    let b = other.data[p * cb + q];
                    for j in 0..ca {
                        data[row * cols + j + q * ca] = self.data[i * ca + j] * b;
                    }
                }
            }
        }
        Ok(Self::from_raw(shape, data))
    }

    /// Same entries, with the first `k` of the modes `row_dims ++ col_dims` as row modes.
    pub fn repartition(&self, k: usize) -> Result<Self> {
        let all = [self.shape.row_dims(), self.shape.col_dims()].concat();
        if k > all.len() {
            return Err(Error::shape(format!(
                "cannot split {} at mode {k}",
                self.shape
            )));
        }
        let shape = PairedShape::new(all[..k].to_vec(), all[k..].to_vec())?;
        let (m, old_cols, new_cols) = (
            self.shape.row_dims().len(),
            self.shape.col_size(),
            shape.col_size(),
        );
        let mut idx = vec![0; all.len()];
        let mut data = vec![ZERO; self.data.len()];
        for (off, &z) in self.data.iter().enumerate() {
            let (r, c) = (off / old_cols, off % old_cols);
            index_of(r, &all[..m], &mut idx[..m]);
            index_of(c, &all[m..], &mut idx[m..]);
            let nr = offset_of(&idx[..k], &all[..k], 0);
            let nc = offset_of(&idx[k..], &all[k..], 0);
            data[nr * new_cols + nc] = z;
        }
        Ok(Self::from_raw(shape, data))
    }

    /// Sum of the diagonal entries of a square tensor.
    pub fn trace(&self) -> Result<Scalar> {
        if !self.shape.is_square() {
            return Err(Error::shape(format!(
                "trace of non-square tensor {}",
                self.shape
            )));
        }
        let n = self.shape.row_size();
        Ok((0..n).map(|k| self.data[k * n + k]).sum())
    }

    /// `Tr(A^H * B)`.
    pub fn inner(&self, other: &Self) -> Result<Scalar> {
        self.same_shape(other, "inner product")?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|A - A^H| <= tol * max(1, |A|)` for a square tensor.
    pub fn is_hermitian(&self, tol: f64) -> Result<bool> {
        if !self.shape.is_square() {
            return Err(Error::shape(format!(
                "{} is not a square tensor",
                self.shape
            )));
        }
        let diff = self.sub(&self.conj_transpose())?.fro_norm();
        Ok(diff <= tol * self.fro_norm().max(1.0))
    }
}

/// Einstein product `A *_N B`, contracting the `N` column modes of `A` with the row modes of `B`.
pub fn einstein_product(
    a: &EinsteinTensor,
    b: &EinsteinTensor,
    n: usize,
) -> Result<EinsteinTensor> {
    let (sa, sb) = (a.shape(), b.shape());
    if sa.col_dims().len() != n || sa.col_dims() != sb.row_dims() {
        return Err(Error::shape(format!("cannot form {sa} *_{n} {sb}")));
    }
    let shape = PairedShape::new(sa.row_dims().to_vec(), sb.col_dims().to_vec())?;
    let data = matkernel::gemm(
        &a.data,
        &b.data,
        sa.row_size(),
        sa.col_size(),
        sb.col_size(),
    );
    Ok(EinsteinTensor::from_raw(shape, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(r: &[usize], c: &[usize]) -> PairedShape {
        PairedShape::new(r.to_vec(), c.to_vec()).unwrap()
    }

    fn c(re: f64, im: f64) -> Scalar {
        Complex64::new(re, im)
    }

    #[test]
    fn zeros_and_identity() {
        let z = EinsteinTensor::zeros(shape(&[2, 2], &[2, 2]));
        assert_eq!(z.entries().len(), 16);
        assert_eq!(z.fro_norm(), 0.0);
        let i = EinsteinTensor::identity(&[2, 2]).unwrap();
        assert_eq!(i.trace().unwrap(), c(4.0, 0.0));
        assert_eq!(i.fro_norm(), 2.0);
        assert!(EinsteinTensor::identity(&[]).is_err());
    }

    #[test]
    fn rejects_bad_entries() {
        assert!(matches!(
            EinsteinTensor::from_real(shape(&[2], &[1]), &[1.0]),
            Err(Error::Shape(_))
        ));
        assert_eq!(
            EinsteinTensor::from_real(shape(&[2], &[1]), &[1.0, f64::NAN]),
            Err(Error::NonFinite { offset: 1 })
        );
    }

    #[test]
    fn get_uses_phi_layout() {
        let t = EinsteinTensor::from_fn(shape(&[2, 3], &[2]), |i, j| {
            c((i[0] * 100 + i[1] * 10 + j[0]) as f64, 0.0)
        })
        .unwrap();
        assert_eq!(t.get(&[2, 3], &[1]).unwrap(), c(231.0, 0.0));
        // row phi((2,3)) = 2 + 2*2 = 6, column 1
        assert_eq!(t.entries()[5 * 2], c(231.0, 0.0));
        assert!(t.get(&[3, 1], &[1]).is_err());
        assert!(t.get(&[1], &[1]).is_err());
    }

    #[test]
    fn product_shape_checks() {
        let a = EinsteinTensor::zeros(shape(&[2], &[3, 2]));
        let b = EinsteinTensor::zeros(shape(&[3, 2], &[4]));
        assert_eq!(
            einstein_product(&a, &b, 2).unwrap().shape(),
            &shape(&[2], &[4])
        );
        assert!(einstein_product(&a, &b, 1).is_err());
        assert!(einstein_product(&b, &a, 1).is_err());
    }

    #[test]
    fn transposes() {
        let t = EinsteinTensor::from_entries(shape(&[2], &[1]), vec![c(1.0, 2.0), c(3.0, -1.0)])
            .unwrap();
        let h = t.conj_transpose();
        assert_eq!(h.shape(), &shape(&[1], &[2]));
        assert_eq!(h.entries(), &[c(1.0, -2.0), c(3.0, 1.0)]);
        assert_eq!(t.transpose().entries(), &[c(1.0, 2.0), c(3.0, -1.0)]);
        assert_eq!(h.conj_transpose(), t);
    }

    #[test]
    fn kronecker_entries() {
        let a = EinsteinTensor::from_real(shape(&[2], &[1]), &[1.0, 2.0]).unwrap();
        let b = EinsteinTensor::from_real(shape(&[2], &[2]), &[1.0, 10.0, 100.0, 1000.0]).unwrap();
        let k = a.kronecker(&b).unwrap();
        assert_eq!(k.shape(), &shape(&[2, 2], &[1, 2]));
        for (i, p, q) in [(1, 1, 1), (2, 1, 2), (1, 2, 2), (2, 2, 1)] {
            let want = a.get(&[i], &[1]).unwrap() * b.get(&[p], &[q]).unwrap();
            assert_eq!(k.get(&[i, p], &[1, q]).unwrap(), want);
        }
        let one = EinsteinTensor::identity(&[1]).unwrap();
        assert_eq!(b.kronecker(&one).unwrap().entries(), b.entries());
    }

    #[test]
    fn repartition_keeps_entries() {
        let t = EinsteinTensor::from_fn(shape(&[2, 3], &[2]), |i, j| {
            c((i[0] + 3 * i[1] + 7 * j[0]) as f64, 0.0)
        })
        .unwrap();
        let r = t.repartition(1).unwrap();
        assert_eq!(r.shape(), &shape(&[2], &[3, 2]));
        assert_eq!(r.get(&[2], &[3, 1]).unwrap(), t.get(&[2, 3], &[1]).unwrap());
        assert_eq!(r.repartition(2).unwrap(), t);
        assert_eq!(t.repartition(3).unwrap().shape(), &shape(&[2, 3, 2], &[]));
        assert!(t.repartition(4).is_err());
    }

    #[test]
    fn trace_inner_hermitian() {
        let a = EinsteinTensor::from_entries(
            shape(&[2], &[2]),
            vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)],
        )
        .unwrap();
        assert_eq!(a.trace().unwrap(), c(3.0, 0.0));
        assert!(a.is_hermitian(0.0).unwrap());
        assert!((a.inner(&a).unwrap().re - a.fro_norm().powi(2)).abs() < 1e-14);
        let b = EinsteinTensor::zeros(shape(&[2], &[3]));
        assert!(b.trace().is_err());
        assert!(b.is_hermitian(1.0).is_err());
        assert!(a.inner(&b).is_err());
    }
}
