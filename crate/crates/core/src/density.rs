//! Density matrices with declared bipartite structure.
//!
//! A bipartite matrix on `d_A x d_B` is read as a `d_A x d_A` grid of
//! `d_B x d_B` blocks: row-block index = subsystem-A basis index.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{r, ComplexMatrix, C64};

/// Eigenvalues down to `-TAU_PSD` are accepted as zero.
pub const TAU_PSD: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Subsystem {
    A,
    B,
}

/// How strictly a [`DensityMatrix`] was validated.
///
/// `Relaxed` skips the PSD check and exists only for out-of-range catalog
/// channels (for example the rank-3 family past `p1 = 1/2`), which are
/// still plotted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Validation {
    Strict,
    Relaxed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    dims: (usize, usize),
    validation: Validation,
}

impl DensityMatrix {
    /// Hermitian, unit-trace and PSD within tolerance.
    pub fn new(mat: ComplexMatrix, dims: (usize, usize)) -> Result<Self> {
        Self::with_validation(mat, dims, Validation::Strict)
    }

    /// Hermitian and unit trace; PSD is not checked.
    pub fn new_relaxed(mat: ComplexMatrix, dims: (usize, usize)) -> Result<Self> {
        Self::with_validation(mat, dims, Validation::Relaxed)
    }

    pub fn with_validation(
        mat: ComplexMatrix,
        dims: (usize, usize),
        validation: Validation,
    ) -> Result<Self> {
        let (d_a, d_b) = dims;
        if d_a == 0 || d_b == 0 || d_a * d_b != mat.dim() {
            return Err(Error::NotBipartite {
                dim: mat.dim(),
                d_a,
                d_b,
            });
        }
        mat.check_finite()?;
        mat.check_hermitian()?;
        let tr = mat.trace();
        if (tr - r(1.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!(
                "trace {:.3e}{:+.3e}i differs from 1",
                tr.re, tr.im
            )));
        }
        if validation == Validation::Strict {
            let min = *mat
                .hermitian_eigenvalues()?
                .last()
                .expect("non-empty spectrum");
            if min < -TAU_PSD {
                return Err(Error::InvalidState(format!(
                    "minimum eigenvalue {min:.3e} is negative"
                )));
            }
        }
        Ok(Self {
            mat,
            dims,
            validation,
        })
    }

    /// Single-system density matrix (`d_B = 1`).
    pub fn single(mat: ComplexMatrix) -> Result<Self> {
        let n = mat.dim();
        Self::new(mat, (n, 1))
    }

    pub fn from_qubit(q: &QubitState) -> DensityMatrix {
        // QubitState is validated on construction.
        Self {
            mat: q.matrix(),
            dims: (2, 1),
            validation: Validation::Strict,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn validation(&self) -> Validation {
        self.validation
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.mat
            .hermitian_eigenvalues()
            .expect("validated density matrix is Hermitian")
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
        self.mat.entries().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues().iter().filter(|&&v| v > tol).count()
    }

    fn require_bipartite(&self) -> Result<()> {
        let (d_a, d_b) = self.dims;
        if d_a < 2 || d_b < 2 {
            return Err(Error::NotBipartite {
                dim: self.dim(),
                d_a,
                d_b,
            });
        }
        Ok(())
    }

    pub fn partial_trace(&self, keep: Subsystem) -> Result<DensityMatrix> {
        self.require_bipartite()?;
        let reduced = partial_trace_matrix(&self.mat, self.dims, keep)?;
        let n = reduced.dim();
        DensityMatrix::with_validation(reduced, (n, 1), self.validation)
    }

    /// Transposes every `d_B x d_B` block in place (transpose on B).
    pub fn partial_transpose(&self) -> Result<ComplexMatrix> {
        self.require_bipartite()?;
        partial_transpose_matrix(&self.mat, self.dims)
    }
}

/// Serialized as the bare matrix.
impl Serialize for DensityMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.mat.serialize(s)
    }
}

fn check_dims(m: &ComplexMatrix, (d_a, d_b): (usize, usize)) -> Result<()> {
    if d_a == 0 || d_b == 0 || d_a * d_b != m.dim() {
        return Err(Error::NotBipartite {
            dim: m.dim(),
            d_a,
            d_b,
        });
    }
    Ok(())
}

/// The `(i, j)` block of a matrix partitioned into `d_b x d_b` blocks.
pub fn block(m: &ComplexMatrix, d_b: usize, i: usize, j: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d_b, |k, l| m[(i * d_b + k, j * d_b + l)])
}

/// Partial trace of an arbitrary (not necessarily normalized) matrix.
///
/// `keep = A` gives the matrix of block traces, `keep = B` the sum of the
/// diagonal blocks.
pub fn partial_trace_matrix(
    m: &ComplexMatrix,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    check_dims(m, dims)?;
    let (d_a, d_b) = dims;
    Ok(match keep {
        Subsystem::A => ComplexMatrix::from_fn(d_a, |i, j| {
            let mut s = r(0.0);
            for k in 0..d_b {
                s += m[(i * d_b + k, j * d_b + k)];
            }
            s
        }),
        Subsystem::B => ComplexMatrix::from_fn(d_b, |k, l| {
            let mut s = r(0.0);
            for i in 0..d_a {
                s += m[(i * d_b + k, i * d_b + l)];
            }
            s
        }),
    })
}

pub fn partial_transpose_matrix(m: &ComplexMatrix, dims: (usize, usize)) -> Result<ComplexMatrix> {
    check_dims(m, dims)?;
    let d_b = dims.1;
    Ok(ComplexMatrix::from_fn(m.dim(), |row, col| {
        let (i, k) = (row / d_b, row % d_b);
        let (j, l) = (col / d_b, col % d_b);
        m[(i * d_b + l, j * d_b + k)]
    }))
}

/// Single-qubit state `[[x, y], [conj(y), 1 - x]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitState {
    pub x: f64,
    #[serde(serialize_with = "serialize_complex")]
    pub y: C64,
}

fn serialize_complex<S: serde::Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

impl QubitState {
    pub fn new(x: f64, y: C64) -> Result<Self> {
        if !x.is_finite() || !y.re.is_finite() || !y.im.is_finite() {
            return Err(Error::InvalidState("non-finite qubit parameter".into()));
        }
        if !(-TAU_PSD..=1.0 + TAU_PSD).contains(&x) {
            return Err(Error::InvalidState(format!("x = {x} outside [0, 1]")));
        }
        let margin = x * (1.0 - x) - y.norm_sqr();
        if margin < -TAU_PSD {
            return Err(Error::InvalidState(format!(
                "x(1-x) - |y|^2 = {margin:.3e} < 0 (not positive semi-definite)"
            )));
        }
        Ok(Self { x, y })
    }

    /// The `x = 1/2` family with `|y| <= 1/2`.
    pub fn balanced(y: C64) -> Result<Self> {
        Self::new(0.5, y)
    }

    pub fn from_polar(x: f64, abs_y: f64, phase: f64) -> Result<Self> {
        Self::new(x, C64::from_polar(abs_y, phase))
    }

    pub fn abs_y(&self) -> f64 {
        self.y.norm()
    }

    pub fn is_balanced(&self) -> bool {
        self.x == 0.5 && self.y.norm() <= 0.5
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) => r(self.x),
            (0, 1) => self.y,
            (1, 0) => self.y.conj(),
            _ => r(1.0 - self.x),
        })
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_qubit(self)
    }
}
