//! Two-qubit concurrence, partial-transpose negativity test and linear entropy.

use serde::Serialize;

use crate::density::{DensityMatrix, Validation};
use crate::error::{Error, Result};
use crate::linalg::{r, ComplexMatrix, C64};

/// Eigenvalues of the state at or below this are treated as exact zeros when
/// factoring `rho = W W^dagger`.
const RANK_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Concurrence,
    MinPtEigenvalue,
    LinearEntropy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureValue {
    pub value: f64,
    pub measure: Measure,
}

pub fn evaluate(measure: Measure, rho: &DensityMatrix) -> Result<MeasureValue> {
    let value = match measure {
        Measure::Concurrence => concurrence(rho)?,
        Measure::MinPtEigenvalue => min_pt_eigenvalue(rho)?,
        Measure::LinearEntropy => linear_entropy(rho),
    };
    Ok(MeasureValue { value, measure })
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dims() != (2, 2) {
        return Err(Error::WrongShape(format!(
            "expected a two-qubit state, got dims {:?}",
            rho.dims()
        )));
    }
    Ok(())
}

/// `sigma_y (x) sigma_y`, which is real.
fn spin_flip() -> ComplexMatrix {
    let mut y = ComplexMatrix::zeros(4);
    y[(0, 3)] = r(-1.0);
    y[(1, 2)] = r(1.0);
    y[(2, 1)] = r(1.0);
    y[(3, 0)] = r(-1.0);
    y
}

/// Wootters concurrence `max(0, l1 - l2 - l3 - l4)`, where the `l_i` are the
/// descending square roots of the eigenvalues of `rho (sy x sy) rho* (sy x sy)`.
///
/// With `rho = W W^dagger` those square roots are the singular values of the
/// complex-symmetric `tau = W^T (sy x sy) W`, which are read off the Hermitian
/// dilation `[[0, tau], [tau^dagger, 0]]`. Exact zeros stay at round-off
/// level instead of being inflated by a square root.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    if rho.validation() == Validation::Relaxed {
        return Err(Error::InvalidState(
            "concurrence needs a positive semi-definite state".into(),
        ));
    }
    let eig = rho.matrix().hermitian_eigen()?;
    let kept: Vec<usize> = (0..4).filter(|&k| eig.values[k] > RANK_TOL).collect();
    let rank = kept.len();
    if rank == 0 {
        return Ok(0.0);
    }
    let flip = spin_flip();
    let columns: Vec<Vec<C64>> = kept
        .iter()
        .map(|&k| {
            let s = eig.values[k].sqrt();
            eig.vector(k).into_iter().map(|z| z * s).collect()
        })
        .collect();

    let mut tau = vec![vec![r(0.0); rank]; rank];
    for (k, wk) in columns.iter().enumerate() {
        for (l, wl) in columns.iter().enumerate() {
            let mut s = r(0.0);
            for i in 0..4 {
                for j in 0..4 {
                    let f = flip[(i, j)];
                    if f != r(0.0) {
                        s += wk[i] * f * wl[j];
                    }
                }
            }
            tau[k][l] = s;
        }
    }

    let dilation = ComplexMatrix::from_fn(2 * rank, |i, j| match (i < rank, j < rank) {
        (true, false) => tau[i][j - rank],
        (false, true) => tau[j][i - rank].conj(),
        _ => r(0.0),
    });
    let mut singular: Vec<f64> = dilation.hermitian_eigenvalues()?[..rank]
        .iter()
        .map(|&s| s.max(0.0))
        .collect();
    singular.resize(4, 0.0);
    Ok((singular[0] - singular[1] - singular[2] - singular[3]).max(0.0))
}

/// Smallest eigenvalue of the partial transpose; negative iff entangled (2x2).
pub fn min_pt_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let pt = rho.partial_transpose()?;
    Ok(*pt
        .hermitian_eigenvalues()?
        .last()
        .expect("non-empty spectrum"))
}

/// `(4/3)(1 - Tr rho^2)`, with the qubit prefactor kept for every dimension.
pub fn linear_entropy(rho: &DensityMatrix) -> f64 {
    4.0 / 3.0 * (1.0 - rho.purity())
}
