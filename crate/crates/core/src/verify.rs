//! End-to-end verification suites and their JSON report.
//!
//! Each check is either *asserted* (a failure fails the run) or a *claim
//! under test* whose outcome is reported without failing the run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::blockprops::{
    block_trace_matrix, p1_converse_witness, random_psd, run_suite, HarnessConfig, PropertyId,
    PropertyReport,
};
use crate::channels::{build, Channel, ChannelSpec};
use crate::density::{partial_trace_matrix, DensityMatrix, QubitState, Subsystem};
use crate::entanglement::{concurrence, linear_entropy, min_pt_eigenvalue};
use crate::error::{Error, Result};
use crate::figures::{check_landmarks, figures};
use crate::linalg::ComplexMatrix;
use crate::metrics::{
    closed_form, crossing_y2, d12, d34, d56, d56_werner, werner_average_closed_form,
    werner_average_distortion, OutcomeClass,
};
use crate::teleport::{run_channel, BellOutcome};

/// Where the suites obtain channel states. Swapping the source lets a
/// mutated channel be pushed through every suite.
pub trait ChannelSource: Sync {
    fn channel(&self, spec: &ChannelSpec) -> Result<Channel>;
}

/// The catalog constructors.
#[derive(Debug, Clone, Copy, Default)]
pub struct Catalog;

impl ChannelSource for Catalog {
    fn channel(&self, spec: &ChannelSpec) -> Result<Channel> {
        build(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub asserted: bool,
    pub passed: bool,
    /// Points, samples or parameter values examined.
    pub cases: usize,
    /// Largest error, or smallest margin, as fits the check.
    pub metric: f64,
    pub detail: String,
}

impl CheckResult {
    fn new(
        name: &str,
        asserted: bool,
        passed: bool,
        cases: usize,
        metric: f64,
        detail: String,
    ) -> Self {
        Self {
            name: name.to_string(),
            asserted,
            passed,
            cases,
            metric,
            detail,
        }
    }

    /// True unless an asserted check failed.
    pub fn ok(&self) -> bool {
        self.passed || !self.asserted
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        let h = HarnessConfig::default();
        Self {
            seed: h.seed,
            samples: h.samples,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub matrix: ComplexMatrix,
    pub dims: (usize, usize),
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: usize,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    pub properties: Vec<PropertyReport>,
    pub p1_converse_witness: Witness,
}

impl VerifyReport {
    pub fn failed_checks(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.ok()).collect()
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn rng(seed: u64, salt: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0xD1B5_4A32_D192_ED03));
    rng.set_stream(stream);
    rng
}

/// Uniform `x`, `|y|^2` uniform in `[0, x(1-x)]`, uniform phase.
pub fn random_qubit(rng: &mut impl Rng) -> QubitState {
    let x: f64 = rng.random();
    let u: f64 = rng.random();
    let phase = rng.random::<f64>() * std::f64::consts::TAU;
    QubitState::from_polar(x, (x * (1.0 - x) * u).sqrt(), phase).expect("inside the Bloch ball")
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Inputs teleported over the maximally entangled channel come back
/// unchanged on every branch (`hs_distance_sq < 1e-24`).
pub fn check_meps_exactness(
    source: &dyn ChannelSource,
    seed: u64,
    n: usize,
) -> Result<CheckResult> {
    let channel = source.channel(&ChannelSpec::Meps)?;
    let worst = (0..n)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let input = random_qubit(&mut rng(seed, 11, i as u64));
            let run = run_channel(&input, &channel)?;
            Ok(run
                .distortions()
                .iter()
                .map(|d| d.unwrap_or(f64::INFINITY))
                .fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(CheckResult::new(
        "meps_exactness",
        true,
        worst < 1e-24,
        n,
        worst,
        format!("max distortion over {n} random inputs and 4 branches: {worst:e}"),
    ))
}

/// Parameter ranges over which the closed forms are checked.
pub fn oracle_families() -> Vec<(ChannelSpec, f64, f64)> {
    vec![
        (ChannelSpec::MemsRank2 { p1: 0.5 }, 0.5, 1.0),
        (ChannelSpec::MemsRank3 { p1: 0.4 }, 1.0 / 3.0, 0.5),
        (ChannelSpec::MemsRank4 { p1: 0.5 }, 0.25, 1.0),
        (ChannelSpec::Werner { r: 0.5 }, 0.0, 1.0),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleGrid {
    pub xs: Vec<f64>,
    pub params: usize,
    /// `|y|` runs over `[0, sqrt(x (1 - x))]`.
    pub abs_ys: usize,
    pub phases: usize,
}

impl OracleGrid {
    /// 21 parameters x 21 `|y|` x 8 phases for the balanced input.
    pub fn balanced() -> Self {
        Self {
            xs: vec![0.5],
            params: 21,
            abs_ys: 21,
            phases: 8,
        }
    }

    /// Unbalanced inputs, where the branches differ.
    pub fn general() -> Self {
        Self {
            xs: vec![0.1, 0.3, 0.7, 0.9],
            params: 11,
            abs_ys: 11,
            phases: 2,
        }
    }

    fn points(&self) -> Vec<(ChannelSpec, f64, f64, f64)> {
        let mut specs = vec![ChannelSpec::Meps];
        for (template, lo, hi) in oracle_families() {
            for p in linspace(lo, hi, self.params) {
                specs.push(template.with_parameter(p).expect("single-parameter family"));
            }
        }
        let phases: Vec<f64> = (0..self.phases)
            .map(|k| k as f64 * std::f64::consts::TAU / self.phases as f64)
            .collect();
        let mut points = Vec::new();
        for spec in specs {
            for &x in &self.xs {
                for f in linspace(0.0, 1.0, self.abs_ys) {
                    let abs_y = f * (x * (1.0 - x)).sqrt();
                    for &phase in &phases {
                        points.push((spec, x, abs_y, phase));
                    }
                }
            }
        }
        points
    }
}

/// Pipeline distortion versus closed form on every branch of every grid
/// point, plus independence from the phase of `y`.
pub fn check_oracle(
    source: &dyn ChannelSource,
    name: &str,
    grid: &OracleGrid,
) -> Result<[CheckResult; 2]> {
    let points = grid.points();
    // Per point: (distortion, |error|) for each non-degenerate branch.
    let results = points
        .par_iter()
        .map(
            |&(spec, x, abs_y, phase)| -> Result<[Option<(f64, f64)>; 4]> {
                let input = QubitState::from_polar(x, abs_y, phase)?;
                let family = spec.family();
                let param = spec.parameter().expect("catalog family");
                let distortions = run_channel(&input, &source.channel(&spec)?)?.distortions();
                let mut out = [None; 4];
                for (k, outcome) in BellOutcome::ALL.into_iter().enumerate() {
                    let Some(d) = distortions[k] else { continue };
                    let expected =
                        closed_form(family, OutcomeClass::of(family, outcome), x, abs_y, param)?;
                    out[k] = Some((d, (d - expected).abs()));
                }
                Ok(out)
            },
        )
        .collect::<Result<Vec<_>>>()?;

    let mut worst = 0.0f64;
    let mut compared = 0;
    let mut worst_at = String::new();
    for (branches, (spec, x, abs_y, phase)) in results.iter().zip(&points) {
        for &(_, e) in branches.iter().flatten() {
            compared += 1;
            if e > worst || worst_at.is_empty() {
                worst = worst.max(e);
                worst_at = format!("{spec} x={x} |y|={abs_y:.4} arg={phase:.4}");
            }
        }
    }
    let oracle = CheckResult::new(
        name,
        true,
        worst <= 1e-12,
        points.len(),
        worst,
        format!(
            "{} points, {compared} branch comparisons, max |error| {worst:e} at {worst_at}",
            points.len()
        ),
    );

    // Points differ only in phase within consecutive runs of `grid.phases`.
    let mut spread = 0.0f64;
    for chunk in results.chunks(grid.phases.max(1)) {
        for k in 0..4 {
            let vals: Vec<f64> = chunk.iter().filter_map(|b| b[k].map(|(d, _)| d)).collect();
            if let (Some(lo), Some(hi)) = (
                vals.iter().cloned().reduce(f64::min),
                vals.iter().cloned().reduce(f64::max),
            ) {
                spread = spread.max(hi - lo);
            }
        }
    }
    let phase = CheckResult::new(
        &format!("{name}_phase_independence"),
        true,
        spread <= 1e-12,
        points.len(),
        spread,
        format!("max spread of distortion over arg(y): {spread:e}"),
    );
    Ok([oracle, phase])
}

fn balanced_abs_ys() -> Vec<f64> {
    linspace(0.0, 0.5, 51)
}

/// D12, D34, D56 nondecreasing in `|y|` at fixed `p1`.
pub fn check_monotone() -> Result<CheckResult> {
    let mut worst = f64::INFINITY;
    let mut cases = 0;
    for p1 in linspace(0.0, 1.0, 21) {
        for f in [d12, d34, d56] {
            let vals: Vec<f64> = balanced_abs_ys()
                .into_iter()
                .map(|y| f(p1, y))
                .collect::<Result<_>>()?;
            for w in vals.windows(2) {
                worst = worst.min(w[1] - w[0]);
                cases += 1;
            }
        }
    }
    Ok(CheckResult::new(
        "distortion_monotone_in_abs_y",
        true,
        worst >= -1e-12,
        cases,
        worst,
        format!("smallest successive difference {worst:e}"),
    ))
}

/// `D56 < D12 < D34` for `p1` above 1/2 and `|y| > 0`.
pub fn check_rank_ordering() -> Result<CheckResult> {
    let mut bad = Vec::new();
    let mut cases = 0;
    let mut margin = f64::INFINITY;
    for p1 in [0.55, 0.6, 0.7, 0.8, 0.9] {
        for y in balanced_abs_ys() {
            let (a, b, c) = (d56(p1, y)?, d12(p1, y)?, d34(p1, y)?);
            cases += 1;
            let ok = if y > 0.0 {
                a < b && b < c
            } else {
                a <= b && b < c
            };
            margin = margin.min(if y > 0.0 { (b - a).min(c - b) } else { c - b });
            if !ok {
                bad.push((p1, y));
            }
        }
    }
    Ok(CheckResult::new(
        "ordering_d56_d12_d34",
        true,
        bad.is_empty(),
        cases,
        margin,
        format!("violations at {bad:?}"),
    ))
}

/// Intercepts at `|y| = 0`: D12 = (1-p1)^2/2 decreasing, D34 = p1^2/2
/// increasing, D56 = 0; Werner consistency at `p1 = (1+3r)/4`.
pub fn check_intercepts_and_werner() -> Result<[CheckResult; 2]> {
    let ps = linspace(0.0, 1.0, 21);
    let mut err = 0.0f64;
    let mut monotone = true;
    let mut prev: Option<(f64, f64)> = None;
    for &p in &ps {
        let (a, b, c) = (d12(p, 0.0)?, d34(p, 0.0)?, d56(p, 0.0)?);
        err = err
            .max((a - (1.0 - p).powi(2) / 2.0).abs())
            .max((b - p * p / 2.0).abs())
            .max(c.abs());
        if let Some((pa, pb)) = prev {
            monotone &= a < pa && b > pb;
        }
        prev = Some((a, b));
    }
    let intercepts = CheckResult::new(
        "intercepts_at_zero_y",
        true,
        err <= 1e-15 && monotone,
        ps.len(),
        err,
        format!("max intercept error {err:e}; D12 decreasing and D34 increasing: {monotone}"),
    );

    let mut werr = 0.0f64;
    let rs = linspace(0.0, 1.0, 21);
    for &rv in &rs {
        for y in balanced_abs_ys() {
            werr = werr.max((d56((1.0 + 3.0 * rv) / 4.0, y)? - d56_werner(rv, y)?).abs());
        }
    }
    let werner = CheckResult::new(
        "werner_rank4_consistency",
        true,
        werr <= 1e-12,
        rs.len() * balanced_abs_ys().len(),
        werr,
        format!("max |D56(p1=(1+3r)/4) - 2(1-r)^2|y|^2| = {werr:e}"),
    );
    Ok([intercepts, werner])
}

/// `D12 - D34` as a function of `t = |y|^2` at `x = 1/2`.
fn d12_minus_d34(p1: f64, t: f64) -> Result<f64> {
    let y = t.sqrt();
    Ok(d12(p1, y)? - d34(p1, y)?)
}

/// Bisection root of `D12 - D34` in `t = |y|^2` on `[0, 1/4]`.
pub fn bisect_crossing(p1: f64) -> Result<f64> {
    let (mut lo, mut hi) = (0.0, 0.25);
    let (flo, fhi) = (d12_minus_d34(p1, lo)?, d12_minus_d34(p1, hi)?);
    if flo.signum() == fhi.signum() {
        return Err(Error::InvalidParams(format!(
            "D12 - D34 has no sign change for p1 = {p1}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (d12_minus_d34(p1, mid)? > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `(1 - 2p1) / (4 (8p1^2 - 4p1 + 3))`, a quoted form of the crossing that
/// does not solve `D12 = D34`.
pub fn printed_crossing_y2(p1: f64) -> f64 {
    (1.0 - 2.0 * p1) / (4.0 * (8.0 * p1 * p1 - 4.0 * p1 + 3.0))
}

pub const CROSSING_P1: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.45];

/// Bisection agrees with `crossing_y2`, and `D34 < D12` below the crossing,
/// `D12 < D34` above it. The printed variant is reported as a claim.
pub fn check_crossing() -> Result<[CheckResult; 2]> {
    let mut err = 0.0f64;
    let mut printed_err = 0.0f64;
    let mut order_bad = Vec::new();
    let mut details = Vec::new();
    for p1 in CROSSING_P1 {
        let root = bisect_crossing(p1)?;
        let formula = crossing_y2(p1)?;
        err = err.max((root - formula).abs());
        printed_err = printed_err.max((root - printed_crossing_y2(p1)).abs());
        details.push(format!(
            "p1={p1}: root {root:.12}, printed {:.6}",
            printed_crossing_y2(p1)
        ));
        for k in 0..=100 {
            let t = 0.25 * k as f64 / 100.0;
            if (t - root).abs() < 1e-9 {
                continue;
            }
            let (a, b) = (d12(p1, t.sqrt())?, d34(p1, t.sqrt())?);
            let ok = if t < root { b < a } else { a < b };
            if !ok {
                order_bad.push((p1, t));
            }
        }
    }
    Ok([
        CheckResult::new(
            "crossing_point",
            true,
            err <= 1e-10 && order_bad.is_empty(),
            CROSSING_P1.len(),
            err,
            format!(
                "max |bisection - (1-2p1)/(4(8p1^2-10p1+3))| = {err:e}; ordering violations {order_bad:?}"
            ),
        ),
        CheckResult::new(
            "crossing_point_printed_formula",
            false,
            printed_err <= 1e-10,
            CROSSING_P1.len(),
            printed_err,
            format!("max |bisection - (1-2p1)/(4(8p1^2-4p1+3))| = {printed_err:e}; {}", details.join("; ")),
        ),
    ])
}

/// Concurrence closed forms over 50 parameters per family, clamped at 0.
pub fn check_concurrence(source: &dyn ChannelSource) -> Result<CheckResult> {
    type Law = fn(f64) -> f64;
    let laws: [(ChannelSpec, f64, f64, Law); 3] = [
        (ChannelSpec::MemsRank2 { p1: 0.5 }, 0.5, 1.0, |p| p),
        (ChannelSpec::MemsRank3 { p1: 0.4 }, 1.0 / 3.0, 0.5, |p| {
            (3.0 * p - 1.0).max(0.0)
        }),
        (ChannelSpec::MemsRank4 { p1: 0.5 }, 0.25, 1.0, |p| {
            (2.0 * p - 1.0).max(0.0)
        }),
    ];
    let mut worst = 0.0f64;
    let mut at = String::new();
    let mut cases = 0;
    for (template, lo, hi, law) in laws {
        for p in linspace(lo, hi, 50) {
            let spec = template.with_parameter(p).expect("single-parameter family");
            let e = (concurrence(&source.channel(&spec)?.state)? - law(p)).abs();
            cases += 1;
            if e > worst {
                worst = e;
                at = spec.to_string();
            }
        }
    }
    let e = (concurrence(&source.channel(&ChannelSpec::Meps)?.state)? - 1.0).abs();
    cases += 1;
    if e > worst {
        worst = e;
        at = "meps".into();
    }
    Ok(CheckResult::new(
        "concurrence_identities",
        true,
        worst <= 1e-12,
        cases,
        worst,
        format!("max |C - closed form| = {worst:e} {at}"),
    ))
}

/// Linear entropy closed forms, the orderings on either side of `p1 = 1/2`
/// and their intersection at `(1/2, 2/3)`.
pub fn check_entropy(source: &dyn ChannelSource) -> Result<CheckResult> {
    let s =
        |spec: ChannelSpec| -> Result<f64> { Ok(linear_entropy(&source.channel(&spec)?.state)) };
    let mut err = 0.0f64;
    let mut order_bad = Vec::new();
    let grid = [0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.7, 0.8, 0.9];
    for p in grid {
        let (s2, s3, s4) = (
            s(ChannelSpec::MemsRank2 { p1: p })?,
            s(ChannelSpec::MemsRank3 { p1: p })?,
            s(ChannelSpec::MemsRank4 { p1: p })?,
        );
        err = err
            .max((s2 - 8.0 / 3.0 * p * (1.0 - p)).abs())
            .max((s3 - 8.0 / 3.0 * p * (2.0 - 3.0 * p)).abs())
            .max((s4 - 4.0 / 3.0 * (1.0 - p * p - (1.0 - p).powi(2) / 3.0)).abs());
        let ordered = if p < 0.5 {
            s2 < s3 && s3 < s4
        } else if p > 0.5 {
            s3 < s2 && s2 < s4
        } else {
            true
        };
        if !ordered {
            order_bad.push(p);
        }
    }
    let r2 = s(ChannelSpec::MemsRank2 { p1: 0.5 })?;
    let r3 = s(ChannelSpec::MemsRank3 { p1: 0.5 })?;
    let r_err = (r2 - 2.0 / 3.0).abs().max((r3 - 2.0 / 3.0).abs());
    Ok(CheckResult::new(
        "linear_entropy_identities",
        true,
        err <= 1e-12 && r_err <= 1e-12 && order_bad.is_empty(),
        grid.len(),
        err.max(r_err),
        format!(
            "max closed-form error {err:e}; R = (0.5, {r2}) and (0.5, {r3}); ordering violations {order_bad:?}"
        ),
    ))
}

const PH_TOL: f64 = 1e-10;

/// Concurrence is positive exactly when the partial transpose has a negative
/// eigenvalue, on the catalog and on random two-qubit states.
pub fn check_peres_horodecki(
    source: &dyn ChannelSource,
    seed: u64,
    n: usize,
) -> Result<CheckResult> {
    let agree = |rho: &DensityMatrix| -> Result<(bool, f64, f64)> {
        let c = concurrence(rho)?;
        let m = min_pt_eigenvalue(rho)?;
        Ok(((c > PH_TOL) == (m < -PH_TOL), c, m))
    };
    let mut specs = vec![ChannelSpec::Meps, ChannelSpec::Werner { r: 1.0 / 3.0 }];
    for (template, lo, hi) in oracle_families() {
        for p in linspace(lo, hi, 21) {
            specs.push(template.with_parameter(p).expect("single-parameter family"));
        }
    }
    let mut bad = Vec::new();
    for spec in &specs {
        let (ok, c, m) = agree(&source.channel(spec)?.state)?;
        if !ok {
            bad.push(format!("{spec}: C={c:e}, min PT eigenvalue={m:e}"));
        }
    }
    let random: Vec<(bool, f64, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let m = random_psd(&mut rng(seed, 13, i as u64), 4);
            agree(&DensityMatrix::new(m, (2, 2))?)
        })
        .collect::<Result<_>>()?;
    let entangled = random.iter().filter(|(_, c, _)| *c > PH_TOL).count();
    for (i, (ok, c, m)) in random.iter().enumerate() {
        if !ok {
            bad.push(format!("random #{i}: C={c:e}, min PT eigenvalue={m:e}"));
        }
    }
    Ok(CheckResult::new(
        "peres_horodecki_agreement",
        true,
        bad.is_empty(),
        specs.len() + n,
        bad.len() as f64,
        format!(
            "{} catalog channels, {n} random states ({entangled} entangled); disagreements {bad:?}",
            specs.len()
        ),
    ))
}

pub const WERNER_R: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Quadrature of the Werner distortion over `|y|` in `[0, 1/2]` versus
/// `(1-r)^2/12`.
pub fn check_werner_average() -> Result<CheckResult> {
    let mut err = 0.0f64;
    for rv in WERNER_R {
        err = err.max((werner_average_distortion(rv)? - werner_average_closed_form(rv)?).abs());
    }
    let at_zero = werner_average_distortion(0.0)?;
    Ok(CheckResult::new(
        "werner_average",
        true,
        err <= 1e-9 && (at_zero - 1.0 / 12.0).abs() <= 1e-9,
        WERNER_R.len(),
        err,
        format!("max |quadrature - (1-r)^2/12| = {err:e}; r=0 gives {at_zero}"),
    ))
}

/// One check per block property; claims report without failing.
pub fn property_checks(reports: &[PropertyReport]) -> Vec<CheckResult> {
    reports
        .iter()
        .map(|rep| {
            let asserted = rep.links.iter().any(|l| l.asserted);
            let passed = if asserted {
                rep.asserted_violations() == 0
            } else {
                rep.violations == 0
            };
            let links: Vec<String> = rep
                .links
                .iter()
                .map(|l| {
                    format!(
                        "[{}] {}: {} violations, worst margin {:e}",
                        if l.asserted { "asserted" } else { "claim" },
                        l.link,
                        l.violations,
                        l.worst_margin
                    )
                })
                .collect();
            let name = serde_json::to_value(rep.property_id)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default();
            CheckResult::new(
                &name,
                asserted,
                passed,
                rep.samples,
                rep.worst_margin,
                links.join("; "),
            )
        })
        .collect()
}

/// The converse-P1 witness: first random counterexample, else the canonical
/// `[[1, 2], [2, 1]]`.
pub fn converse_witness(reports: &[PropertyReport]) -> Result<Witness> {
    let (matrix, dims) = reports
        .iter()
        .find(|r| r.property_id == PropertyId::P1Converse)
        .and_then(|r| r.witness.clone().zip(r.witness_dims))
        .unwrap_or_else(p1_converse_witness);
    let min_eigenvalue = *matrix.hermitian_eigenvalues()?.last().expect("non-empty");
    Ok(Witness {
        matrix,
        dims,
        min_eigenvalue,
    })
}

/// `[tr rho_ij]` equals the partial trace over B bit for bit.
pub fn check_block_trace_is_partial_trace(seed: u64, n: usize) -> Result<CheckResult> {
    let mut mismatches = 0;
    for i in 0..n {
        let dims = if i % 2 == 0 { (2, 2) } else { (3, 2) };
        let m = random_psd(&mut rng(seed, 17, i as u64), dims.0 * dims.1);
        if block_trace_matrix(&m, dims) != partial_trace_matrix(&m, dims, Subsystem::A)? {
            mismatches += 1;
        }
    }
    Ok(CheckResult::new(
        "P2_trace_matrix_is_partial_trace",
        true,
        mismatches == 0,
        n,
        mismatches as f64,
        format!("{mismatches} of {n} samples differ"),
    ))
}

/// Runs every suite against `source`.
pub fn verify_with(config: &VerifyConfig, source: &dyn ChannelSource) -> Result<VerifyReport> {
    let mut checks = vec![check_meps_exactness(source, config.seed, 200)?];
    checks.extend(check_oracle(
        source,
        "oracle_balanced",
        &OracleGrid::balanced(),
    )?);
    checks.extend(check_oracle(
        source,
        "oracle_general_x",
        &OracleGrid::general(),
    )?);
    checks.push(check_monotone()?);
    checks.push(check_rank_ordering()?);
    checks.extend(check_intercepts_and_werner()?);
    checks.extend(check_crossing()?);
    checks.push(check_concurrence(source)?);
    checks.push(check_entropy(source)?);
    checks.push(check_peres_horodecki(source, config.seed, config.samples)?);
    checks.push(check_werner_average()?);

    let properties = run_suite(&HarnessConfig {
        seed: config.seed,
        samples: config.samples,
    });
    checks.extend(property_checks(&properties));
    checks.push(check_block_trace_is_partial_trace(
        config.seed,
        config.samples,
    )?);
    let witness = converse_witness(&properties)?;
    checks.push(CheckResult::new(
        "P1_converse_witness",
        true,
        witness.min_eigenvalue < 0.0,
        1,
        witness.min_eigenvalue,
        format!(
            "diagonal blocks PSD, full-matrix minimum eigenvalue {:e} (dims {:?})",
            witness.min_eigenvalue, witness.dims
        ),
    ));

    for l in check_landmarks(&figures()?)? {
        checks.push(CheckResult::new(
            &format!("figure_{}", l.name),
            true,
            l.passed,
            1,
            if l.passed { 0.0 } else { 1.0 },
            l.detail,
        ));
    }

    let passed = checks.iter().all(CheckResult::ok);
    Ok(VerifyReport {
        seed: config.seed,
        samples: config.samples,
        passed,
        checks,
        properties,
        p1_converse_witness: witness,
    })
}

/// Runs every suite against the catalog.
pub fn verify(config: &VerifyConfig) -> Result<VerifyReport> {
    verify_with(config, &Catalog)
}
