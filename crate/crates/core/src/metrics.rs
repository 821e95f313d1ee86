//! Teleportation distortion: the squared Hilbert-Schmidt distance between the
//! input and Bob's corrected state, and its closed forms for the catalog
//! channels.
//!
//! Closed forms, with `t = |y|^2`:
//!
//! | family | Phi branch | Psi branch |
//! |--------|------------|------------|
//! | rank 2 | `2 x^2 (1-p)^2 (x^2 + t) / N^2`, `N = x(1-p/2) + (1-x)p/2` | `2 (1-x)^2 (1-p)^2 ((1-x)^2 + t) / N1^2`, `N1 = 1 - N` |
//! | rank 3 | `2 (x^4 p^2 + t (1-2p+px)^2) / N^2`, `N = x(1+p)/2 + (1-x)(1-p)/2` | `2 ((1-x)^4 p^2 + t (1-p-xp)^2) / N1^2`, `N1 = 1 - N` |
//! | rank 4 | `8 (1-p)^2 ((2x-1)^2 + 4t) / 9` | same |
//!
//! At `x = 1/2`: `D12 = 2(1-p)^2 (1/4 + t)`, `D34 = p^2/2 + 8t(1 - 3p/2)^2`,
//! `D56 = 32 (1-p)^2 t / 9`, and for Werner channels `2 (1-r)^2 t`.

use serde::Serialize;

use crate::channels::{werner_to_mems_p1, ChannelSpec, Family};
use crate::density::{DensityMatrix, QubitState};
use crate::error::{Error, Result};
use crate::teleport::BellOutcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OutcomeClass {
    PhiBranch,
    PsiBranch,
    Uniform,
}

impl OutcomeClass {
    /// Branch class of a Bell outcome for a family; rank-4, Werner and the
    /// pure channel give one state for every outcome.
    pub fn of(family: Family, outcome: BellOutcome) -> OutcomeClass {
        match family {
            Family::MemsRank4 | Family::Werner | Family::Meps => OutcomeClass::Uniform,
            _ if outcome.is_phi() => OutcomeClass::PhiBranch,
            _ => OutcomeClass::PsiBranch,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            OutcomeClass::PhiBranch => "phi",
            OutcomeClass::PsiBranch => "psi",
            OutcomeClass::Uniform => "uniform",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DistortionRecord {
    pub channel: ChannelSpec,
    pub input: QubitState,
    pub outcome_class: OutcomeClass,
    pub value: f64,
}

/// `Tr((a - b)^2)`, summed entrywise as `sum |a_ij - b_ij|^2`.
pub fn hs_distance_sq(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    let diff = a.matrix().sub(b.matrix())?;
    Ok(diff.entries().iter().map(|z| z.norm_sqr()).sum())
}

fn unit(name: &'static str, v: f64) -> Result<()> {
    if !v.is_finite() || !(0.0..=1.0).contains(&v) {
        return Err(Error::OutOfRange {
            name,
            value: v,
            range: "[0, 1]",
        });
    }
    Ok(())
}

fn balanced_abs_y(abs_y: f64) -> Result<f64> {
    if !abs_y.is_finite() || !(0.0..=0.5).contains(&abs_y) {
        return Err(Error::OutOfRange {
            name: "|y|",
            value: abs_y,
            range: "[0, 1/2]",
        });
    }
    Ok(abs_y * abs_y)
}

fn normalizer(n: f64) -> Result<f64> {
    if n <= 0.0 {
        return Err(Error::DegenerateOutcome {
            probability: n / 2.0,
        });
    }
    Ok(n)
}

/// Rank-2 channel, balanced input.
pub fn d12(p1: f64, abs_y: f64) -> Result<f64> {
    unit("p1", p1)?;
    let t = balanced_abs_y(abs_y)?;
    Ok(2.0 * (1.0 - p1).powi(2) * (0.25 + t))
}

/// Rank-3 channel, balanced input.
pub fn d34(p1: f64, abs_y: f64) -> Result<f64> {
    unit("p1", p1)?;
    let t = balanced_abs_y(abs_y)?;
    Ok(4.0 * (p1 * p1 / 8.0 + 2.0 * t * (1.0 - 1.5 * p1).powi(2)))
}

/// Rank-4 channel, balanced input.
pub fn d56(p1: f64, abs_y: f64) -> Result<f64> {
    unit("p1", p1)?;
    let t = balanced_abs_y(abs_y)?;
    Ok(32.0 * (1.0 - p1).powi(2) * t / 9.0)
}

/// Werner channel, balanced input.
pub fn d56_werner(r: f64, abs_y: f64) -> Result<f64> {
    unit("r", r)?;
    let t = balanced_abs_y(abs_y)?;
    Ok(2.0 * (1.0 - r).powi(2) * t)
}

fn general_x_input(x: f64, abs_y: f64) -> Result<f64> {
    unit("x", x)?;
    let t = abs_y * abs_y;
    if !abs_y.is_finite() || abs_y < 0.0 || t > x * (1.0 - x) + 1e-12 {
        return Err(Error::OutOfRange {
            name: "|y|",
            value: abs_y,
            range: "[0, sqrt(x(1-x))]",
        });
    }
    Ok(t)
}

/// Rank-2 distortion for a general input, per branch.
pub fn rank2_general(branch: OutcomeClass, x: f64, abs_y: f64, p1: f64) -> Result<f64> {
    unit("p1", p1)?;
    let t = general_x_input(x, abs_y)?;
    let q = (1.0 - p1).powi(2);
    let n = normalizer(x * (1.0 - p1 / 2.0) + (1.0 - x) * p1 / 2.0);
    let n1 = normalizer(x * p1 / 2.0 + (1.0 - x) * (1.0 - p1 / 2.0));
    match branch {
        OutcomeClass::PhiBranch => Ok(2.0 / n?.powi(2) * x * x * q * (x * x + t)),
        OutcomeClass::PsiBranch => {
            let u = 1.0 - x;
            Ok(2.0 / n1?.powi(2) * u * u * q * (u * u + t))
        }
        OutcomeClass::Uniform => Err(Error::InvalidParams(
            "rank-2 distortion depends on the branch".into(),
        )),
    }
}

/// Rank-3 distortion for a general input, per branch.
pub fn rank3_general(branch: OutcomeClass, x: f64, abs_y: f64, p1: f64) -> Result<f64> {
    unit("p1", p1)?;
    let t = general_x_input(x, abs_y)?;
    match branch {
        OutcomeClass::PhiBranch => {
            let n = normalizer(x * (1.0 + p1) / 2.0 + (1.0 - x) * (1.0 - p1) / 2.0)?;
            Ok(2.0 / (n * n) * (x.powi(4) * p1 * p1 + t * (1.0 - 2.0 * p1 + p1 * x).powi(2)))
        }
        OutcomeClass::PsiBranch => {
            let n1 = normalizer(x * (1.0 - p1) / 2.0 + (1.0 - x) * (1.0 + p1) / 2.0)?;
            let u = 1.0 - x;
            Ok(2.0 / (n1 * n1) * (u.powi(4) * p1 * p1 + t * (1.0 - p1 - x * p1).powi(2)))
        }
        OutcomeClass::Uniform => Err(Error::InvalidParams(
            "rank-3 distortion depends on the branch".into(),
        )),
    }
}

/// Rank-4 distortion for a general input (identical on every branch).
pub fn rank4_general(x: f64, abs_y: f64, p1: f64) -> Result<f64> {
    unit("p1", p1)?;
    let t = general_x_input(x, abs_y)?;
    Ok(8.0 * (1.0 - p1).powi(2) * ((2.0 * x - 1.0).powi(2) + 4.0 * t) / 9.0)
}

/// Closed-form distortion for a catalog family. `param` is `p1` (or `r` for
/// Werner; ignored for the pure channel). `x = 1/2` uses the balanced-input
/// specializations.
pub fn closed_form(
    family: Family,
    branch: OutcomeClass,
    x: f64,
    abs_y: f64,
    param: f64,
) -> Result<f64> {
    let balanced = x == 0.5;
    match family {
        Family::Meps => {
            general_x_input(x, abs_y)?;
            Ok(0.0)
        }
        Family::MemsRank2 => {
            if balanced && branch != OutcomeClass::Uniform {
                d12(param, abs_y)
            } else {
                rank2_general(branch, x, abs_y, param)
            }
        }
        Family::MemsRank3 => {
            if balanced && branch != OutcomeClass::Uniform {
                d34(param, abs_y)
            } else {
                rank3_general(branch, x, abs_y, param)
            }
        }
        Family::MemsRank4 => {
            if balanced {
                d56(param, abs_y)
            } else {
                rank4_general(x, abs_y, param)
            }
        }
        Family::Werner => {
            if balanced {
                d56_werner(param, abs_y)
            } else {
                rank4_general(x, abs_y, werner_to_mems_p1(param)?)
            }
        }
        Family::GeneralXZ | Family::MemsGeneral => Err(Error::InvalidParams(format!(
            "no closed-form distortion for family {}",
            family.name()
        ))),
    }
}

/// The `|y|^2` at which `D12 = D34` for `p1` in `[0, 1/2]`:
/// `(1 - 2p1) / (4 (8p1^2 - 10p1 + 3)) = 1 / (4 (3 - 4p1))`.
///
/// Below it `D34 <= D12`, above it `D12 < D34`. At `p1 = 1/2` the two curves
/// coincide for every `|y|`; 0 is returned.
pub fn crossing_y2(p1: f64) -> Result<f64> {
    if !p1.is_finite() || !(0.0..=0.5).contains(&p1) {
        return Err(Error::OutOfRange {
            name: "p1",
            value: p1,
            range: "[0, 1/2]",
        });
    }
    if p1 == 0.5 {
        return Ok(0.0);
    }
    Ok((1.0 - 2.0 * p1) / (4.0 * (8.0 * p1 * p1 - 10.0 * p1 + 3.0)))
}

/// Composite Simpson rule on `[lo, hi]` with `intervals` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, intervals: usize) -> f64 {
    assert!(
        intervals >= 2 && intervals.is_multiple_of(2),
        "Simpson needs an even panel count"
    );
    let h = (hi - lo) / intervals as f64;
    let mut s = f(lo) + f(hi);
    for k in 1..intervals {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(lo + k as f64 * h);
    }
    s * h / 3.0
}

/// `(1 - r)^2 / 12`.
pub fn werner_average_closed_form(r: f64) -> Result<f64> {
    unit("r", r)?;
    Ok((1.0 - r).powi(2) / 12.0)
}

/// Werner distortion integrated over `|y|` in `[0, 1/2]` with unit weight
/// (not normalized by the interval length).
pub fn werner_average_distortion(r: f64) -> Result<f64> {
    unit("r", r)?;
    Ok(simpson(
        |abs_y| 2.0 * (1.0 - r).powi(2) * abs_y * abs_y,
        0.0,
        0.5,
        64,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;
    use approx::assert_abs_diff_eq;

    fn single(values: &[f64]) -> DensityMatrix {
        DensityMatrix::single(ComplexMatrix::diag(values)).unwrap()
    }

    #[test]
    fn hs_basics() {
        let a = single(&[1.0, 0.0]);
        let b = single(&[0.0, 1.0]);
        assert_eq!(hs_distance_sq(&a, &a).unwrap(), 0.0);
        assert_eq!(hs_distance_sq(&a, &b).unwrap(), 2.0);
        assert_eq!(hs_distance_sq(&b, &a).unwrap(), 2.0);
        let c = single(&[0.25, 0.25, 0.25, 0.25]);
        assert!(matches!(
            hs_distance_sq(&a, &c),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn closed_form_examples() {
        assert_abs_diff_eq!(d12(0.6, 0.3).unwrap(), 0.1088, epsilon = 1e-15);
        for y in [0.0, 0.2, 0.5] {
            assert_eq!(d12(1.0, y).unwrap(), 0.0);
        }
        assert_abs_diff_eq!(d34(0.4, 0.0).unwrap(), 0.08, epsilon = 1e-16);
        assert_abs_diff_eq!(d56_werner(0.0, 0.25).unwrap(), 0.125, epsilon = 1e-16);
        assert_abs_diff_eq!(d12(0.2, 0.0).unwrap(), 0.32, epsilon = 1e-15);
    }

    #[test]
    fn balanced_specializations_agree_with_general_forms() {
        for &p in &[0.35, 0.5, 0.6, 0.9] {
            for &y in &[0.0, 0.1, 0.37, 0.5] {
                for branch in [OutcomeClass::PhiBranch, OutcomeClass::PsiBranch] {
                    assert_abs_diff_eq!(
                        rank2_general(branch, 0.5, y, p).unwrap(),
                        d12(p, y).unwrap(),
                        epsilon = 1e-14
                    );
                    assert_abs_diff_eq!(
                        rank3_general(branch, 0.5, y, p).unwrap(),
                        d34(p, y).unwrap(),
                        epsilon = 1e-14
                    );
                }
                assert_abs_diff_eq!(
                    rank4_general(0.5, y, p).unwrap(),
                    d56(p, y).unwrap(),
                    epsilon = 1e-14
                );
            }
        }
    }

    #[test]
    fn werner_consistency() {
        for k in 0..=10 {
            let rr = k as f64 / 10.0;
            let p1 = werner_to_mems_p1(rr).unwrap();
            for y in [0.0, 0.2, 0.45] {
                assert_abs_diff_eq!(
                    d56(p1, y).unwrap(),
                    d56_werner(rr, y).unwrap(),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn crossing_examples() {
        assert_eq!(crossing_y2(0.5).unwrap(), 0.0);
        assert_abs_diff_eq!(crossing_y2(0.4).unwrap(), 1.0 / 5.6, epsilon = 1e-15);
        assert!(matches!(crossing_y2(0.7), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn crossing_separates_orderings() {
        for p in [0.1, 0.25, 0.4, 0.45] {
            let t0 = crossing_y2(p).unwrap();
            assert!((0.0..=0.25).contains(&t0));
            let below = (t0 * 0.9).sqrt();
            let above = ((t0 + 0.25) / 2.0).sqrt();
            assert!(d34(p, below).unwrap() <= d12(p, below).unwrap());
            assert!(d12(p, above).unwrap() < d34(p, above).unwrap());
        }
    }

    #[test]
    fn werner_average() {
        assert_eq!(werner_average_closed_form(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            werner_average_distortion(1.0).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            werner_average_distortion(0.0).unwrap(),
            1.0 / 12.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            werner_average_distortion(0.5).unwrap(),
            1.0 / 48.0,
            epsilon = 1e-12
        );
        assert!(werner_average_distortion(-0.5).is_err());
    }

    #[test]
    fn closed_form_dispatch_and_errors() {
        assert_eq!(
            closed_form(Family::Meps, OutcomeClass::Uniform, 0.3, 0.2, 0.0).unwrap(),
            0.0
        );
        assert!(matches!(
            closed_form(Family::MemsRank2, OutcomeClass::Uniform, 0.3, 0.2, 0.6),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            closed_form(Family::GeneralXZ, OutcomeClass::PhiBranch, 0.5, 0.2, 0.6),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            closed_form(Family::MemsRank4, OutcomeClass::Uniform, 0.9, 0.4, 0.6),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(d12(0.5, 0.6), Err(Error::OutOfRange { .. })));
        // Rank 2 at p1 = 0 with x = 0: the Phi branches carry no weight.
        assert!(matches!(
            rank2_general(OutcomeClass::PhiBranch, 0.0, 0.0, 0.0),
            Err(Error::DegenerateOutcome { .. })
        ));
    }
}
