//! Dense complex matrices for the small dimensions used by the teleportation
//! pipeline (2, 4, 8) and the block-property harness (up to 6, plus the 2r x 2r
//! dilation used by the concurrence routine).
//!
//! Storage is row-major. Every constructor rejects non-finite entries so that
//! NaN/Inf never enter a computation.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};

/// Absolute Hermiticity tolerance.
pub const TAU_HERM: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 60;
const JACOBI_REL_TOL: f64 = 1e-15;

pub type C64 = Complex64;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = r(1.0);
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = r(v);
        }
        m
    }

    /// Builds a matrix from a closure over `(row, col)`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    /// Row-major complex entries. Fails on a non-square length or non-finite entry.
    pub fn from_row_major(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: dim * dim,
                right: data.len(),
            });
        }
        let m = Self { dim, data };
        m.check_finite()?;
        Ok(m)
    }

    /// Row-major real entries.
    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::from_row_major(dim, data.iter().map(|&x| r(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn check_finite(&self) -> Result<()> {
        for (k, z) in self.data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite {
                    row: k / self.dim,
                    col: k % self.dim,
                });
            }
        }
        Ok(())
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, k: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * k).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    /// `u * self * u^dagger`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.matmul(self)?.matmul(&u.adjoint())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest `|m[i,j] - conj(m[j,i])|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn check_hermitian(&self) -> Result<()> {
        let deviation = self.hermitian_deviation();
        if deviation > TAU_HERM {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }

    /// Kronecker product; entry `(i*b+k, j*b+l) = a[i,j] * b[k,l]`.
    pub fn tensor(&self, other: &Self) -> Self {
        let (na, nb) = (self.dim, other.dim);
        let n = na * nb;
        let mut out = Self::zeros(n);
        for i in 0..na {
            for j in 0..na {
                let a = self.data[i * na + j];
                for k in 0..nb {
                    for l in 0..nb {
                        out.data[(i * nb + k) * n + (j * nb + l)] = a * other.data[k * nb + l];
                    }
                }
            }
        }
        out
    }

    /// Determinant by LU decomposition with partial pivoting.
    pub fn determinant(&self) -> C64 {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = r(1.0);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
                .expect("non-empty range");
            if a[pivot * n + col].norm() == 0.0 {
                return r(0.0);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for row in col + 1..n {
                let factor = a[row * n + col] / p;
                if factor == r(0.0) {
                    continue;
                }
                for j in col..n {
                    let v = a[col * n + j];
                    a[row * n + j] -= factor * v;
                }
            }
        }
        det
    }

    /// Real eigenvalues of a Hermitian matrix, descending.
    ///
    /// Dimension 2 uses the closed-form quadratic; larger matrices go through
    /// cyclic complex Jacobi.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        self.check_hermitian()?;
        if self.dim == 1 {
            return Ok(vec![self[(0, 0)].re]);
        }
        if self.dim == 2 {
            let (a, d) = (self[(0, 0)].re, self[(1, 1)].re);
            let b = (self[(0, 1)] + self[(1, 0)].conj()) * 0.5;
            let mean = 0.5 * (a + d);
            let half_gap = (0.5 * (a - d)).hypot(b.norm());
            return Ok(vec![mean + half_gap, mean - half_gap]);
        }
        Ok(jacobi(self).values)
    }

    /// Eigenvalues (descending) and the matching orthonormal eigenvectors as columns.
    pub fn hermitian_eigen(&self) -> Result<HermitianEigen> {
        self.check_hermitian()?;
        Ok(jacobi(self))
    }
}

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        let n = self.vectors.dim();
        (0..n).map(|i| self.vectors[(i, k)]).collect()
    }
}

/// Applies the unitary `g` (2x2, acting on indices p, q) as `a <- g^dagger a g`
/// and accumulates `v <- v g`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, g: [[C64; 2]; 2]) {
    let n = a.dim;
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * g[0][0] + akq * g[1][0];
        a[(k, q)] = akp * g[0][1] + akq * g[1][1];
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * g[0][0] + vkq * g[1][0];
        v[(k, q)] = vkp * g[0][1] + vkq * g[1][1];
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = g[0][0].conj() * apk + g[1][0].conj() * aqk;
        a[(q, k)] = g[0][1].conj() * apk + g[1][1].conj() * aqk;
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(m: &ComplexMatrix) -> HermitianEigen {
    let n = m.dim;
    // Symmetrize so that tiny Hermitian round-off does not bias the rotations.
    let mut a = ComplexMatrix::from_fn(n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off == 0.0 || off <= JACOBI_REL_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = apq / mag;
                let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + theta.hypot(1.0))
                };
                let cs = 1.0 / t.hypot(1.0);
                let sn = t * cs;
                // g = diag(1, conj(phase)) * [[c, s], [-s, c]]
                let g = [[r(cs), r(sn)], [phase.conj() * (-sn), phase.conj() * cs]];
                rotate(&mut a, &mut v, p, q, g);
                a[(p, q)] = r(0.0);
                a[(q, p)] = r(0.0);
                a[(p, p)] = r(a[(p, p)].re);
                a[(q, q)] = r(a[(q, q)].re);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, col| v[(i, order[col])]);
    HermitianEigen { values, vectors }
}

pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.tensor(b)
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(
            i < self.dim && j < self.dim,
            "index ({i}, {j}) out of bounds"
        );
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(
            i < self.dim && j < self.dim,
            "index ({i}, {j}) out of bounds"
        );
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Serialized as a list of rows, each entry an `[re, im]` pair.
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut rows = serializer.serialize_seq(Some(self.dim))?;
        for i in 0..self.dim {
            let row: Vec<[f64; 2]> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    [z.re, z.im]
                })
                .collect();
            rows.serialize_element(&row)?;
        }
        rows.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sigma_x_shifted() -> ComplexMatrix {
        ComplexMatrix::from_real(2, &[0.5, 0.5, 0.5, 0.5]).unwrap()
    }

    fn mems_rank4(p1: f64) -> ComplexMatrix {
        let a = (1.0 + 2.0 * p1) / 6.0;
        let b = (1.0 - p1) / 3.0;
        let e = (1.0 - 4.0 * p1) / 6.0;
        #[rustfmt::skip]
        let m = ComplexMatrix::from_real(4, &[
            a, 0.0, 0.0, e,
            0.0, b, 0.0, 0.0,
            0.0, 0.0, b, 0.0,
            e, 0.0, 0.0, a,
        ]).unwrap();
        m
    }

    #[test]
    fn identity_tensor_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.tensor(&i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn projector_tensor_embeds_top_left() {
        let p0 = ComplexMatrix::diag(&[1.0, 0.0]);
        let b = mems_rank4(0.7);
        let t = p0.tensor(&b);
        for i in 0..8 {
            for j in 0..8 {
                let expected = if i < 4 && j < 4 { b[(i, j)] } else { r(0.0) };
                assert_eq!(t[(i, j)], expected);
            }
        }
    }

    #[test]
    fn small_eigenvalues() {
        let ev = ComplexMatrix::diag(&[0.3, 0.7])
            .hermitian_eigenvalues()
            .unwrap();
        assert_abs_diff_eq!(ev[0], 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(ev[1], 0.3, epsilon = 1e-15);
        let ev = sigma_x_shifted().hermitian_eigenvalues().unwrap();
        assert_abs_diff_eq!(ev[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ev[1], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn mems_rank4_spectrum_and_determinant() {
        let m = mems_rank4(0.7);
        let ev = m.hermitian_eigenvalues().unwrap();
        for (got, want) in ev.iter().zip([0.7, 0.1, 0.1, 0.1]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-14);
        }
        let det = m.determinant();
        assert_abs_diff_eq!(det.re, 7e-4, epsilon = 1e-16);
        assert_abs_diff_eq!(det.im, 0.0, epsilon = 1e-18);
    }

    #[test]
    fn rank_one_determinant_is_zero() {
        #[rustfmt::skip]
        let meps = ComplexMatrix::from_real(4, &[
            0.5, 0.0, 0.0, -0.5,
            0.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 0.0,
            -0.5, 0.0, 0.0, 0.5,
        ]).unwrap();
        assert_abs_diff_eq!(meps.determinant().norm(), 0.0, epsilon = 1e-16);
        assert_eq!(ComplexMatrix::identity(4).trace(), r(4.0));
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let m = ComplexMatrix::from_real(2, &[1.0, 2.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            m.hermitian_eigenvalues(),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn dimension_mismatch() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(4);
        assert!(matches!(a.matmul(&b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(a.add(&b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn non_finite_rejected() {
        let err = ComplexMatrix::from_real(2, &[1.0, f64::NAN, 0.0, 1.0]).unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 0, col: 1 });
    }

    #[test]
    fn complex_eigenvectors_diagonalize() {
        let m = ComplexMatrix::from_fn(4, |i, j| {
            if i == j {
                r(i as f64 * 0.3 + 0.1)
            } else if i < j {
                c(0.1 * (i + j) as f64, 0.05 * (j - i) as f64)
            } else {
                c(0.1 * (i + j) as f64, -0.05 * (i - j) as f64)
            }
        });
        let eig = m.hermitian_eigen().unwrap();
        let d = m.conjugate_by(&eig.vectors.adjoint()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { r(eig.values[i]) } else { r(0.0) };
                assert_abs_diff_eq!((d[(i, j)] - want).norm(), 0.0, epsilon = 1e-13);
            }
        }
        let uu = eig.vectors.matmul(&eig.vectors.adjoint()).unwrap();
        assert!(uu.max_abs_diff(&ComplexMatrix::identity(4)).unwrap() < 1e-14);
    }
}
