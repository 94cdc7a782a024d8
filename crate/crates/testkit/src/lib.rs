//! Random generators and independent oracles shared by the test suites.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tensor_woodbury::{pinv, EinsteinTensor, LowRankUpdate, PairedShape};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn shape(rows: &[usize], cols: &[usize]) -> PairedShape {
    PairedShape::new(rows.to_vec(), cols.to_vec()).expect("valid test shape")
}

/// Between `min_modes` and `max_modes` dimensions, each in `1..=max_dim`.
pub fn random_dims(
    rng: &mut TestRng,
    min_modes: usize,
    max_modes: usize,
    max_dim: usize,
) -> Vec<usize> {
    let n = rng.gen_range(min_modes..=max_modes);
    (0..n).map(|_| rng.gen_range(1..=max_dim)).collect()
}

/// Entries with real and imaginary parts uniform in `[-1, 1]`.
pub fn random_tensor(rng: &mut TestRng, s: &PairedShape) -> EinsteinTensor {
    let data = (0..s.num_entries())
        .map(|_| c(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
        .collect();
    EinsteinTensor::from_entries(s.clone(), data).unwrap()
}

pub fn random_real_tensor(rng: &mut TestRng, s: &PairedShape) -> EinsteinTensor {
    let data: Vec<f64> = (0..s.num_entries())
        .map(|_| rng.gen_range(-1.0..=1.0))
        .collect();
    EinsteinTensor::from_real(s.clone(), &data).unwrap()
}

fn int_matrix(rng: &mut TestRng, rows: usize, cols: usize, complex: bool) -> Vec<Complex64> {
    (0..rows * cols)
        .map(|_| {
            let im = if complex { rng.gen_range(-2..=2) } else { 0 };
            c(rng.gen_range(-3..=3) as f64, im as f64)
        })
        .collect()
}

/// Product of two small-integer factors of inner dimension `rank`.
///
/// The entries are exact, so the unfolding rank is at most `rank` with no
/// rounding noise in the trailing singular values.
pub fn low_rank_tensor(
    rng: &mut TestRng,
    s: &PairedShape,
    rank: usize,
    complex: bool,
) -> EinsteinTensor {
    let (m, n) = (s.row_size(), s.col_size());
    let f = int_matrix(rng, m, rank, complex);
    let g = int_matrix(rng, rank, n, complex);
    let mut data = vec![c(0.0, 0.0); m * n];
    for i in 0..m {
        for j in 0..n {
            data[i * n + j] = (0..rank).map(|k| f[i * rank + k] * g[k * n + j]).sum();
        }
    }
    EinsteinTensor::from_entries(s.clone(), data).unwrap()
}

fn multi_indices(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &d in dims {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=d).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

/// Einstein product by explicit summation over every multi-index, without the unfolding.
pub fn loop_product(a: &EinsteinTensor, b: &EinsteinTensor) -> EinsteinTensor {
    let (sa, sb) = (a.shape(), b.shape());
    assert_eq!(sa.col_dims(), sb.row_dims(), "non-conforming loop product");
    let shared = multi_indices(sa.col_dims());
    let out = shape(sa.row_dims(), sb.col_dims());
    EinsteinTensor::from_fn(out, |i, j| {
        shared
            .iter()
            .map(|k| a.get(i, k).unwrap() * b.get(k, j).unwrap())
            .sum()
    })
    .unwrap()
}

/// `|a - b| / max(|b|, 1e-300)`.
pub fn rel_err(a: &EinsteinTensor, b: &EinsteinTensor) -> f64 {
    a.sub(b).unwrap().fro_norm() / b.fro_norm().max(1e-300)
}

/// Least-squares solution of the `m x n` system `M X = R` (`m >= n`, full
/// column rank) by complex Householder QR. Row-major buffers.
fn householder_solve(
    mut mat: Vec<Complex64>,
    m: usize,
    n: usize,
    mut rhs: Vec<Complex64>,
    k: usize,
) -> Vec<Complex64> {
    for col in 0..n {
        let norm = (col..m)
            .map(|r| mat[r * n + col].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = mat[col * n + col];
        let phase = if x0.norm() == 0.0 {
            c(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (col..m).map(|r| mat[r * n + col]).collect();
        v[0] -= alpha;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if vn == 0.0 {
            continue;
        }
        // H = I - 2 v v^H / (v^H v)
        let reflect = |buf: &mut Vec<Complex64>, width: usize, from: usize| {
            for j in from..width {
                let dot: Complex64 = (col..m)
                    .map(|r| v[r - col].conj() * buf[r * width + j])
                    .sum();
                let f = dot * 2.0 / vn;
                for r in col..m {
                    buf[r * width + j] -= v[r - col] * f;
                }
            }
        };
        reflect(&mut mat, n, col);
        reflect(&mut rhs, k, 0);
    }
    let mut x = vec![c(0.0, 0.0); n * k];
    for j in 0..k {
        for i in (0..n).rev() {
            let s: Complex64 = (i + 1..n).map(|l| mat[i * n + l] * x[l * k + j]).sum();
            x[i * k + j] = (rhs[i * k + j] - s) / mat[i * n + i];
        }
    }
    x
}

/// `argmin |A X - I|^2 + lambda |X|^2` on the unfolding, via QR of `[A; sqrt(lambda) I]`.
pub fn tikhonov(a: &EinsteinTensor, lambda: f64) -> EinsteinTensor {
    let (m, n) = (a.shape().row_size(), a.shape().col_size());
    let rows = m + n;
    let mut mat = vec![c(0.0, 0.0); rows * n];
    mat[..m * n].copy_from_slice(a.entries());
    let mut rhs = vec![c(0.0, 0.0); rows * m];
    for i in 0..n {
        mat[(m + i) * n + i] = c(lambda.sqrt(), 0.0);
    }
    for i in 0..m {
        rhs[i * m + i] = c(1.0, 0.0);
    }
    let x = householder_solve(mat, rows, n, rhs, m);
    EinsteinTensor::from_entries(a.shape().transposed(), x).unwrap()
}

/// Pseudoinverse as the `lambda -> 0` limit of [`tikhonov`]: solves at
/// `lambda = 1e-5 ||A||^2 2^-k` for `k = 0..6` and extrapolates the results
/// to zero with Neville's scheme.
pub fn tikhonov_pinv(a: &EinsteinTensor) -> EinsteinTensor {
    let scale = a.fro_norm().powi(2).max(f64::MIN_POSITIVE);
    let lambdas: Vec<f64> = (0..6).map(|k| 1e-5 * scale * 0.5f64.powi(k)).collect();
    let mut table: Vec<EinsteinTensor> = lambdas.iter().map(|&l| tikhonov(a, l)).collect();
    for level in 1..lambdas.len() {
        for i in (level..lambdas.len()).rev() {
            let (li, lj) = (lambdas[i], lambdas[i - level]);
            // value at 0 of the line through (lj, T[i-1]) and (li, T[i])
            let wi = lj / (lj - li);
            let wj = -li / (lj - li);
            table[i] = table[i]
                .scale(c(wi, 0.0))
                .add(&table[i - 1].scale(c(wj, 0.0)))
                .unwrap();
        }
    }
    table.pop().unwrap()
}

/// `I - P` for a square projector `P`.
fn complement(p: &EinsteinTensor) -> EinsteinTensor {
    EinsteinTensor::identity(p.shape().row_dims())
        .unwrap()
        .sub(p)
        .unwrap()
}

/// A random update `U B V` for the base tensor `a` whose factors have a
/// component orthogonal to the column spaces of `A` and `A^H`, plus (when
/// `with_range_part`) a component inside them. `B` is a random invertible
/// tensor of shape `(k | k)`.
pub fn projector_update(
    rng: &mut TestRng,
    a: &EinsteinTensor,
    k: &[usize],
    with_range_part: bool,
    complex: bool,
) -> LowRankUpdate {
    let sa = a.shape();
    let ap = pinv(a, 1.0).unwrap();
    let p = a.star(&ap).unwrap();
    let q = ap.star(a).unwrap();
    let mut draw = |s: &PairedShape| {
        if complex {
            random_tensor(rng, s)
        } else {
            random_real_tensor(rng, s)
        }
    };
    let us = shape(sa.row_dims(), k);
    let vs = shape(sa.col_dims(), k);
    let mut u = complement(&p).star(&draw(&us)).unwrap();
    let mut vh = complement(&q).star(&draw(&vs)).unwrap();
    if with_range_part {
        u = u.add(&p.star(&draw(&us)).unwrap()).unwrap();
        vh = vh.add(&q.star(&draw(&vs)).unwrap()).unwrap();
    }
    let ksize: usize = k.iter().product();
    let b = draw(&shape(k, k))
        .add(
            &EinsteinTensor::identity(k)
                .unwrap()
                .scale(c(ksize as f64, 0.0)),
        )
        .unwrap();
    LowRankUpdate::new(u, b, vh.conj_transpose()).unwrap()
}

/// Eigenvalues of a Hermitian `n x n` matrix (row-major), descending.
///
/// Runs the classical two-sided Jacobi method on the real symmetric embedding
/// `[[Re, -Im], [Im, Re]]`, whose spectrum is that of the input with every
/// eigenvalue doubled.
pub fn hermitian_eigenvalues(h: &[Complex64], n: usize) -> Vec<f64> {
    let m = 2 * n;
    let mut a = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h[i * n + j];
            a[i * m + j] = z.re;
            a[(i + n) * m + j + n] = z.re;
            a[i * m + j + n] = -z.im;
            a[(i + n) * m + j] = z.im;
        }
    }
    for _ in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * m + j].powi(2))
            .sum();
        let total: f64 = a.iter().map(|x| x * x).sum();
        if off <= 1e-30 * total.max(1e-300) {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..m {
                    let (akp, akq) = (a[k * m + p], a[k * m + q]);
                    a[k * m + p] = cs * akp - sn * akq;
                    a[k * m + q] = sn * akp + cs * akq;
                }
                for k in 0..m {
                    let (apk, aqk) = (a[p * m + k], a[q * m + k]);
                    a[p * m + k] = cs * apk - sn * aqk;
                    a[q * m + k] = sn * apk + cs * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..m).map(|i| a[i * m + i]).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev.into_iter().step_by(2).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loop_product_matches_hand_computation() {
        let a = EinsteinTensor::from_real(shape(&[1], &[2]), &[1.0, 2.0]).unwrap();
        let b = EinsteinTensor::from_real(shape(&[2], &[1]), &[3.0, 4.0]).unwrap();
        assert_eq!(loop_product(&a, &b).entries(), &[c(11.0, 0.0)]);
    }

    #[test]
    fn tikhonov_pinv_of_diagonal() {
        let a =
            EinsteinTensor::from_real(shape(&[3], &[2]), &[2.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let want =
            EinsteinTensor::from_real(shape(&[2], &[3]), &[0.5, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let e = tikhonov_pinv(&a).sub(&want).unwrap().fro_norm();
        assert!(e < 1e-9, "{e}");
    }

    #[test]
    fn eigenvalues_of_hermitian_2x2() {
        // [[2, i], [-i, 2]] has eigenvalues 3 and 1
        let h = [c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)];
        let ev = hermitian_eigenvalues(&h, 2);
        assert!(
            (ev[0] - 3.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14,
            "{ev:?}"
        );
    }

    #[test]
    fn low_rank_has_requested_rank() {
        let mut r = rng(1);
        let t = low_rank_tensor(&mut r, &shape(&[2, 3], &[4]), 2, true);
        assert!(tensor_woodbury::unfold_rank(&t, 1.0).unwrap().rank <= 2);
    }
}
