//! Grid sweeps comparing the simulated distortion with its closed form.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{ChannelSpec, Family};
use crate::density::QubitState;
use crate::error::{Error, Result};
use crate::figures::fmt_float;
use crate::metrics::{closed_form, OutcomeClass};
use crate::teleport::{run, BellOutcome};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    /// Family template; its parameter is replaced by each entry of `params`.
    pub channel: ChannelSpec,
    /// `p1` (or `r`) values; ignored for the pure channel.
    pub params: Vec<f64>,
    pub x: f64,
    pub abs_ys: Vec<f64>,
    /// Phases of `y` in radians.
    pub phases: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub family: Family,
    pub p1_or_r: f64,
    pub x: f64,
    pub abs_y: f64,
    pub arg_y: f64,
    pub branch: BellOutcome,
    pub d_pipeline: f64,
    pub d_closed_form: f64,
    pub abs_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Grid points skipped because `|y|` exceeds `sqrt(x (1 - x))`.
    pub skipped_inputs: usize,
    pub warnings: Vec<String>,
}

impl SweepResult {
    pub fn max_abs_err(&self) -> f64 {
        self.rows.iter().map(|r| r.abs_err).fold(0.0, f64::max)
    }

    /// Header `family,p1_or_r,abs_y,branch,D_pipeline,D_closed_form,abs_err`.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("family,p1_or_r,abs_y,branch,D_pipeline,D_closed_form,abs_err\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.family.name(),
                fmt_float(r.p1_or_r),
                fmt_float(r.abs_y),
                r.branch.label(),
                fmt_float(r.d_pipeline),
                fmt_float(r.d_closed_form),
                fmt_float(r.abs_err)
            )
            .expect("writing to a String");
        }
        out
    }
}

fn specs(config: &SweepConfig) -> Result<Vec<ChannelSpec>> {
    match config.channel.family() {
        Family::Meps => Ok(vec![ChannelSpec::Meps]),
        Family::GeneralXZ | Family::MemsGeneral => Err(Error::InvalidParams(format!(
            "family {} has no closed-form distortion to sweep against",
            config.channel.family().name()
        ))),
        _ => Ok(config
            .params
            .iter()
            .map(|&v| {
                config
                    .channel
                    .with_parameter(v)
                    .expect("single-parameter family")
            })
            .collect()),
    }
}

/// Runs the pipeline at every (parameter, `|y|`, phase) point and compares
/// each non-degenerate branch with its closed form. Rows come out in grid
/// order regardless of thread count.
pub fn sweep(config: &SweepConfig) -> Result<SweepResult> {
    let specs = specs(config)?;
    let mut warnings = Vec::new();
    for spec in &specs {
        if let Some(w) = spec.build()?.warning {
            warnings.push(format!("{spec}: {w}"));
        }
    }
    let points: Vec<(ChannelSpec, f64, f64)> = specs
        .iter()
        .flat_map(|&s| {
            config
                .abs_ys
                .iter()
                .flat_map(move |&a| config.phases.iter().map(move |&ph| (s, a, ph)))
        })
        .collect();

    let per_point: Vec<Result<Option<Vec<SweepRow>>>> = points
        .par_iter()
        .map(|&(spec, abs_y, phase)| {
            let input = match QubitState::from_polar(config.x, abs_y, phase) {
                Ok(q) => q,
                Err(Error::InvalidState(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            let family = spec.family();
            let param = spec.parameter().expect("catalog family");
            let teleported = run(&input, &spec)?;
            let distortions = teleported.distortions();
            let mut rows = Vec::with_capacity(4);
            for (k, outcome) in BellOutcome::ALL.into_iter().enumerate() {
                let Some(d_pipeline) = distortions[k] else {
                    continue;
                };
                let d_closed_form = closed_form(
                    family,
                    OutcomeClass::of(family, outcome),
                    config.x,
                    abs_y,
                    param,
                )?;
                rows.push(SweepRow {
                    family,
                    p1_or_r: param,
                    x: config.x,
                    abs_y,
                    arg_y: phase,
                    branch: outcome,
                    d_pipeline,
                    d_closed_form,
                    abs_err: (d_pipeline - d_closed_form).abs(),
                });
            }
            Ok(Some(rows))
        })
        .collect();

    let mut rows = Vec::new();
    let mut skipped_inputs = 0;
    for point in per_point {
        match point? {
            Some(r) => rows.extend(r),
            None => skipped_inputs += 1,
        }
    }
    Ok(SweepResult {
        rows,
        skipped_inputs,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(channel: ChannelSpec, x: f64) -> SweepConfig {
        SweepConfig {
            channel,
            params: vec![0.5, 0.6, 0.9],
            x,
            abs_ys: vec![0.0, 0.1, 0.3, 0.5],
            phases: vec![0.0, 1.0],
        }
    }

    #[test]
    fn rank2_balanced_matches() {
        let res = sweep(&config(ChannelSpec::MemsRank2 { p1: 0.6 }, 0.5)).unwrap();
        assert_eq!(res.rows.len(), 3 * 4 * 2 * 4);
        assert!(res.max_abs_err() < 1e-12);
        assert!(res.warnings.is_empty());
    }

    #[test]
    fn general_x_skips_impossible_inputs() {
        let res = sweep(&config(ChannelSpec::MemsRank3 { p1: 0.4 }, 0.8)).unwrap();
        // sqrt(0.16) = 0.4 excludes |y| = 0.5.
        assert_eq!(res.skipped_inputs, 3 * 2);
        assert!(res.max_abs_err() < 1e-12);
        assert_eq!(res.warnings.len(), 2);
    }

    #[test]
    fn csv_header_and_rows() {
        let res = sweep(&config(ChannelSpec::Meps, 0.5)).unwrap();
        let csv = res.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "family,p1_or_r,abs_y,branch,D_pipeline,D_closed_form,abs_err"
        );
        assert_eq!(lines.len(), 1 + 4 * 2 * 4);
        assert!(lines[1].starts_with("meps,1.0000000000000000e0,0.0000000000000000e0,phi+,"));
    }

    #[test]
    fn no_closed_form_family() {
        let c = config("xz:a=0.4,b=0.1,c=0,d=0.1,e=0.35".parse().unwrap(), 0.5);
        assert!(matches!(sweep(&c), Err(Error::InvalidParams(_))));
    }
}
