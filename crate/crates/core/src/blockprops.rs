//! Executable block-matrix properties of bipartite density matrices and a
//! seeded randomized falsification harness.
//!
//! For `rho` partitioned into `d_A x d_A` blocks `rho_ij` of size `d_B`:
//!
//! * P1: `rho` PSD => every `rho_ii` PSD (forward); the converse is a claim
//!   under test and fails in general.
//! * P2: `det([det rho_ij]) <= det rho` (claim under test) and `[tr rho_ij]`
//!   PSD.
//! * P3 (`d_A = 2`): `tr(rho_01^dag rho_01) <= sqrt(tr rho_00^2 tr rho_11^2)
//!   <= tr rho_00 tr rho_11`, and `0 <= det rho_00 det rho_11 - |det rho_01|^2
//!   <= det rho <= det rho_00 det rho_11`.
//!
//! Each property is evaluated as a list of inequality links with a margin
//! (`rhs - lhs`); a link is violated when its margin is below `-SLACK`.
//! Only links flagged `asserted` can fail a suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::density::block;
use crate::error::{Error, Result};
use crate::linalg::{c, r, ComplexMatrix};

/// Absolute numerical allowance before a margin counts as a violation.
pub const SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PropertyId {
    #[serde(rename = "P1_forward")]
    P1Forward,
    #[serde(rename = "P1_converse")]
    P1Converse,
    #[serde(rename = "P2_det")]
    P2Det,
    #[serde(rename = "P2_trace")]
    P2Trace,
    #[serde(rename = "P3_trace_chain")]
    P3TraceChain,
    #[serde(rename = "P3_det_chain")]
    P3DetChain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Converse,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkMargin {
    pub link: &'static str,
    pub asserted: bool,
    pub margin: f64,
}

impl LinkMargin {
    pub fn violated(&self) -> bool {
        self.margin < -SLACK
    }
}

/// Evaluation of one property on one matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleCheck {
    pub property: PropertyId,
    pub links: Vec<LinkMargin>,
}

impl SampleCheck {
    pub fn holds(&self) -> bool {
        self.links.iter().all(|l| !l.violated())
    }

    pub fn worst_margin(&self) -> f64 {
        self.links
            .iter()
            .map(|l| l.margin)
            .fold(f64::INFINITY, f64::min)
    }
}

fn check_dims(m: &ComplexMatrix, (d_a, d_b): (usize, usize)) -> Result<()> {
    if d_a < 2 || d_b == 0 || d_a * d_b != m.dim() {
        return Err(Error::NotBipartite {
            dim: m.dim(),
            d_a,
            d_b,
        });
    }
    Ok(())
}

fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(*m
        .hermitian_eigenvalues()?
        .last()
        .expect("non-empty spectrum"))
}

/// P1 on a Hermitian block matrix.
///
/// Forward: margin is the smallest eigenvalue over the diagonal blocks.
/// Converse: when every diagonal block is PSD the margin is the smallest
/// eigenvalue of the whole matrix; otherwise the premise fails and the margin
/// is `+inf`.
pub fn check_p1(
    m: &ComplexMatrix,
    dims: (usize, usize),
    direction: Direction,
) -> Result<SampleCheck> {
    check_dims(m, dims)?;
    m.check_hermitian()?;
    let (d_a, d_b) = dims;
    let mut block_min = f64::INFINITY;
    for i in 0..d_a {
        block_min = block_min.min(min_eigenvalue(&block(m, d_b, i, i))?);
    }
    Ok(match direction {
        Direction::Forward => SampleCheck {
            property: PropertyId::P1Forward,
            links: vec![LinkMargin {
                link: "rho PSD => diagonal blocks PSD",
                asserted: true,
                margin: block_min,
            }],
        },
        Direction::Converse => {
            let margin = if block_min >= -SLACK {
                min_eigenvalue(m)?
            } else {
                f64::INFINITY
            };
            SampleCheck {
                property: PropertyId::P1Converse,
                links: vec![LinkMargin {
                    link: "diagonal blocks PSD => rho PSD",
                    asserted: false,
                    margin,
                }],
            }
        }
    })
}

/// `[tr rho_ij]`, summed in the same order as the partial trace over B.
pub fn block_trace_matrix(m: &ComplexMatrix, (d_a, d_b): (usize, usize)) -> ComplexMatrix {
    ComplexMatrix::from_fn(d_a, |i, j| {
        let mut s = r(0.0);
        for k in 0..d_b {
            s += m[(i * d_b + k, j * d_b + k)];
        }
        s
    })
}

/// `[det rho_ij]`.
pub fn block_det_matrix(m: &ComplexMatrix, (d_a, d_b): (usize, usize)) -> ComplexMatrix {
    ComplexMatrix::from_fn(d_a, |i, j| block(m, d_b, i, j).determinant())
}

/// P2 on a PSD block matrix: `[determinant claim, trace-matrix PSD]`.
pub fn check_p2(m: &ComplexMatrix, dims: (usize, usize)) -> Result<[SampleCheck; 2]> {
    check_dims(m, dims)?;
    m.check_hermitian()?;
    let det_of_dets = block_det_matrix(m, dims).determinant().re;
    let det = m.determinant().re;
    let traces = block_trace_matrix(m, dims);
    Ok([
        SampleCheck {
            property: PropertyId::P2Det,
            links: vec![LinkMargin {
                link: "det[det rho_ij] <= det rho",
                asserted: false,
                margin: det - det_of_dets,
            }],
        },
        SampleCheck {
            property: PropertyId::P2Trace,
            links: vec![LinkMargin {
                link: "[tr rho_ij] PSD",
                asserted: true,
                margin: min_eigenvalue(&traces)?,
            }],
        },
    ])
}

/// P3 on a PSD `2 x d` block matrix: `[trace chain, determinant chain]`.
pub fn check_p3(m: &ComplexMatrix, dims: (usize, usize)) -> Result<[SampleCheck; 2]> {
    if dims.0 != 2 {
        return Err(Error::WrongShape(format!(
            "P3 needs a 2 x d block matrix, got d_A = {}",
            dims.0
        )));
    }
    check_dims(m, dims)?;
    m.check_hermitian()?;
    let d_b = dims.1;
    let (b00, b01, b11) = (
        block(m, d_b, 0, 0),
        block(m, d_b, 0, 1),
        block(m, d_b, 1, 1),
    );

    let cross = b01.adjoint().matmul(&b01)?.trace().re;
    let sq = |b: &ComplexMatrix| b.entries().iter().map(|z| z.norm_sqr()).sum::<f64>();
    let geo = (sq(&b00) * sq(&b11)).sqrt();
    let prod_tr = b00.trace().re * b11.trace().re;

    let (det00, det11) = (b00.determinant().re, b11.determinant().re);
    let det01 = b01.determinant();
    let lower = det00 * det11 - det01.norm_sqr();
    let det = m.determinant().re;
    let fischer = det00 * det11;

    Ok([
        SampleCheck {
            property: PropertyId::P3TraceChain,
            links: vec![
                LinkMargin {
                    link: "tr(rho01^dag rho01) <= sqrt(tr rho00^2 tr rho11^2)",
                    asserted: true,
                    margin: geo - cross,
                },
                LinkMargin {
                    link: "sqrt(tr rho00^2 tr rho11^2) <= tr rho00 tr rho11",
                    asserted: true,
                    margin: prod_tr - geo,
                },
            ],
        },
        SampleCheck {
            property: PropertyId::P3DetChain,
            links: vec![
                LinkMargin {
                    link: "0 <= det rho00 det rho11 - |det rho01|^2",
                    asserted: false,
                    margin: lower,
                },
                LinkMargin {
                    link: "det rho00 det rho11 - |det rho01|^2 <= det rho",
                    asserted: false,
                    margin: det - lower,
                },
                LinkMargin {
                    link: "det rho <= det rho00 det rho11 (Fischer)",
                    asserted: true,
                    margin: fischer - det,
                },
            ],
        },
    ])
}

/// `[[1, 2], [2, 1]]` as a 2 x 1 block matrix: PSD 1x1 diagonal blocks,
/// eigenvalues 3 and -1.
pub fn p1_converse_witness() -> (ComplexMatrix, (usize, usize)) {
    (
        ComplexMatrix::from_real(2, &[1.0, 2.0, 2.0, 1.0]).expect("finite"),
        (2, 1),
    )
}

fn gaussian_matrix(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im)
    })
}

/// `G G^dagger / tr(G G^dagger)` with standard complex Gaussian `G`.
pub fn random_psd(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, dim);
    let w = g.matmul(&g.adjoint()).expect("same dim");
    let tr = w.trace().re;
    // Exactly Hermitian after scaling.
    let w = w.scale(r(1.0 / tr));
    ComplexMatrix::from_fn(dim, |i, j| {
        if i == j {
            r(w[(i, i)].re)
        } else if i < j {
            w[(i, j)]
        } else {
            w[(j, i)].conj()
        }
    })
}

/// Unit-trace Hermitian matrix with random PSD diagonal blocks and
/// unconstrained Gaussian off-diagonal blocks.
pub fn random_hermitian_with_psd_blocks(
    rng: &mut impl Rng,
    (d_a, d_b): (usize, usize),
) -> ComplexMatrix {
    let n = d_a * d_b;
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..d_a {
        let diag = random_psd(rng, d_b);
        for k in 0..d_b {
            for l in 0..d_b {
                m[(i * d_b + k, i * d_b + l)] = diag[(k, l)];
            }
        }
        for j in i + 1..d_a {
            let off = gaussian_matrix(rng, d_b).scale(r(0.5));
            for k in 0..d_b {
                for l in 0..d_b {
                    m[(i * d_b + k, j * d_b + l)] = off[(k, l)];
                    m[(j * d_b + l, i * d_b + k)] = off[(k, l)].conj();
                }
            }
        }
    }
    m.scale(r(1.0 / d_a as f64))
}

#[derive(Debug, Clone, Serialize)]
pub struct LinkReport {
    pub link: &'static str,
    pub asserted: bool,
    pub violations: usize,
    pub worst_margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub property_id: PropertyId,
    pub samples: usize,
    pub violations: usize,
    pub worst_margin: f64,
    /// First violating sample, by index.
    pub witness: Option<ComplexMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_dims: Option<(usize, usize)>,
    pub links: Vec<LinkReport>,
}

impl PropertyReport {
    fn from_checks(property_id: PropertyId, checks: Checked) -> Self {
        let mut links: Vec<LinkReport> = Vec::new();
        let mut violations = 0;
        let mut worst_margin = f64::INFINITY;
        let mut witness = None;
        let samples = checks.len();
        for (check, m, dims) in checks {
            if links.is_empty() {
                links = check
                    .links
                    .iter()
                    .map(|l| LinkReport {
                        link: l.link,
                        asserted: l.asserted,
                        violations: 0,
                        worst_margin: f64::INFINITY,
                    })
                    .collect();
            }
            for (report, l) in links.iter_mut().zip(&check.links) {
                report.worst_margin = report.worst_margin.min(l.margin);
                if l.violated() {
                    report.violations += 1;
                }
            }
            worst_margin = worst_margin.min(check.worst_margin());
            if !check.holds() {
                violations += 1;
                if witness.is_none() {
                    witness = Some((m, dims));
                }
            }
        }
        let (witness, witness_dims) = match witness {
            Some((m, d)) => (Some(m), Some(d)),
            None => (None, None),
        };
        PropertyReport {
            property_id,
            samples,
            violations,
            worst_margin,
            witness,
            witness_dims,
            links,
        }
    }

    /// Violations on asserted links.
    pub fn asserted_violations(&self) -> usize {
        self.links
            .iter()
            .filter(|l| l.asserted)
            .map(|l| l.violations)
            .sum()
    }

    pub fn link(&self, name_prefix: &str) -> Option<&LinkReport> {
        self.links.iter().find(|l| l.link.starts_with(name_prefix))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HarnessConfig {
    pub seed: u64,
    pub samples: usize,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            samples: 1000,
        }
    }
}

/// Independent, index-addressed stream per (property, sample).
fn sample_rng(seed: u64, salt: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(index as u64);
    rng
}

type Evaluated = Vec<(Vec<SampleCheck>, ComplexMatrix, (usize, usize))>;
type Checked = Vec<(SampleCheck, ComplexMatrix, (usize, usize))>;

fn sample_suite<G, E>(config: &HarnessConfig, salt: u64, generate: G, evaluate: E) -> Evaluated
where
    G: Fn(&mut ChaCha8Rng, usize) -> (ComplexMatrix, (usize, usize)) + Sync,
    E: Fn(&ComplexMatrix, (usize, usize)) -> Vec<SampleCheck> + Sync,
{
    (0..config.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(config.seed, salt, i);
            let (m, dims) = generate(&mut rng, i);
            (evaluate(&m, dims), m, dims)
        })
        .collect()
}

fn split(evaluated: Evaluated, ids: &[PropertyId]) -> Vec<PropertyReport> {
    let mut per: Vec<Checked> = vec![Vec::new(); ids.len()];
    for (checks, m, dims) in evaluated {
        for (k, check) in checks.into_iter().enumerate() {
            per[k].push((check, m.clone(), dims));
        }
    }
    ids.iter()
        .zip(per)
        .map(|(&id, checks)| PropertyReport::from_checks(id, checks))
        .collect()
}

/// Runs every property over `config.samples` seeded random matrices.
///
/// * P1 forward, P2: random PSD, alternating 2x2 and 3x2 block layouts.
/// * P1 converse: Hermitian 2x2 layouts with PSD diagonal blocks.
/// * P3: random PSD, alternating 2x2 and 2x3 block layouts.
///
/// Output is identical for a fixed seed regardless of thread count.
pub fn run_suite(config: &HarnessConfig) -> Vec<PropertyReport> {
    let psd_layout = |rng: &mut ChaCha8Rng, i: usize| {
        let dims = if i.is_multiple_of(2) { (2, 2) } else { (3, 2) };
        (random_psd(rng, dims.0 * dims.1), dims)
    };
    let p3_layout = |rng: &mut ChaCha8Rng, i: usize| {
        let dims = if i.is_multiple_of(2) { (2, 2) } else { (2, 3) };
        (random_psd(rng, dims.0 * dims.1), dims)
    };

    let mut reports = Vec::new();
    reports.extend(split(
        sample_suite(config, 1, psd_layout, |m, d| {
            let mut v = vec![check_p1(m, d, Direction::Forward).expect("valid layout")];
            v.extend(check_p2(m, d).expect("valid layout"));
            v
        }),
        &[
            PropertyId::P1Forward,
            PropertyId::P2Det,
            PropertyId::P2Trace,
        ],
    ));
    reports.extend(split(
        sample_suite(
            config,
            2,
            |rng, _| (random_hermitian_with_psd_blocks(rng, (2, 2)), (2, 2)),
            |m, d| vec![check_p1(m, d, Direction::Converse).expect("valid layout")],
        ),
        &[PropertyId::P1Converse],
    ));
    reports.extend(split(
        sample_suite(config, 3, p3_layout, |m, d| {
            check_p3(m, d).expect("valid layout").to_vec()
        }),
        &[PropertyId::P3TraceChain, PropertyId::P3DetChain],
    ));
    reports.sort_by_key(|r| r.property_id as u8);
    reports
}
