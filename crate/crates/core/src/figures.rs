//! Figure data: distortion curves against `|y|` and linear-entropy curves
//! against `p1`, written as CSV with a fixed `param,abs_y,series,value`
//! schema, plus automated landmark checks.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::channels::{build, ChannelSpec};
use crate::entanglement::linear_entropy;
use crate::error::{Error, Result};
use crate::metrics::{crossing_y2, d12, d34, d56};

/// Points per curve.
pub const GRID_POINTS: usize = 101;

/// `|y| = i / 200`, 101 points covering `[0, 1/2]`.
pub fn abs_y_grid() -> Vec<f64> {
    (0..GRID_POINTS).map(|i| i as f64 / 200.0).collect()
}

/// `p1 = i / 100`, 101 points covering `[0, 1]`.
pub fn p1_grid() -> Vec<f64> {
    (0..GRID_POINTS).map(|i| i as f64 / 100.0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigureRow {
    pub param: f64,
    pub abs_y: Option<f64>,
    pub series: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Figure {
    pub name: &'static str,
    pub rows: Vec<FigureRow>,
}

/// 17 significant digits, `.` decimal point.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

impl Figure {
    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("param,abs_y,series,value\n");
        for row in &self.rows {
            let abs_y = row.abs_y.map(fmt_float).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{}",
                fmt_float(row.param),
                abs_y,
                row.series,
                fmt_float(row.value)
            )
            .expect("writing to a String");
        }
        out
    }

    /// Values of one series, in row order.
    pub fn series(&self, name: &str) -> Vec<&FigureRow> {
        self.rows.iter().filter(|r| r.series == name).collect()
    }
}

type Curve = fn(f64, f64) -> Result<f64>;

fn distortion_figure(
    name: &'static str,
    p1: f64,
    curves: &[(&'static str, Curve)],
) -> Result<Figure> {
    let mut rows = Vec::with_capacity(curves.len() * GRID_POINTS);
    for &(series, f) in curves {
        for abs_y in abs_y_grid() {
            rows.push(FigureRow {
                param: p1,
                abs_y: Some(abs_y),
                series,
                value: f(p1, abs_y)?,
            });
        }
    }
    Ok(Figure { name, rows })
}

fn entropy_figure() -> Result<Figure> {
    type Ctor = fn(f64) -> ChannelSpec;
    let families: [(&'static str, Ctor); 3] = [
        ("S_L_r2", |p1| ChannelSpec::MemsRank2 { p1 }),
        ("S_L_r3", |p1| ChannelSpec::MemsRank3 { p1 }),
        ("S_L_r4", |p1| ChannelSpec::MemsRank4 { p1 }),
    ];
    let mut rows = Vec::with_capacity(3 * GRID_POINTS);
    for (series, ctor) in families {
        for p1 in p1_grid() {
            let channel = build(&ctor(p1))?;
            rows.push(FigureRow {
                param: p1,
                abs_y: None,
                series,
                value: linear_entropy(&channel.state),
            });
        }
    }
    Ok(Figure { name: "fig5", rows })
}

/// All five figures, in order.
pub fn figures() -> Result<Vec<Figure>> {
    let all: [(&'static str, Curve); 3] = [("D12", d12), ("D34", d34), ("D56", d56)];
    Ok(vec![
        distortion_figure("fig1", 0.2, &all[..1])?,
        distortion_figure("fig2", 0.4, &all[..2])?,
        distortion_figure("fig3", 0.6, &all)?,
        distortion_figure("fig4", 0.8, &all)?,
        entropy_figure()?,
    ])
}

/// Writes `fig1.csv` .. `fig5.csv` into `dir`, creating it if needed.
pub fn write_figures(dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths = Vec::new();
    for fig in figures()? {
        let path = dir.join(fig.file_name());
        fs::write(&path, fig.to_csv()).map_err(|e| Error::io(&path, e))?;
        paths.push(path);
    }
    Ok(paths)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Landmark {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn landmark(name: &'static str, passed: bool, detail: String) -> Landmark {
    Landmark {
        name,
        passed,
        detail,
    }
}

fn find<'a>(figs: &'a [Figure], name: &str) -> Result<&'a Figure> {
    figs.iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::InvalidState(format!("missing figure {name}")))
}

fn pointwise(fig: &Figure, series: &str) -> Vec<(f64, f64)> {
    fig.series(series)
        .into_iter()
        .map(|r| (r.abs_y.unwrap_or(r.param), r.value))
        .collect()
}

/// Landmarks read back from figure rows:
/// * fig1 intercept `D12(|y| = 0) = 0.32`;
/// * fig2 `D12 - D34` changes sign exactly once, between grid rows bracketing
///   the crossing `|y|^2 = crossing_y2(0.4)`;
/// * fig3, fig4 `D56 < D12 < D34` for `|y| > 0` (`<=` at 0);
/// * fig5 point R: `S_L_r2 = S_L_r3 = 2/3` at `p1 = 0.5`.
pub fn check_landmarks(figs: &[Figure]) -> Result<Vec<Landmark>> {
    let mut out = Vec::new();

    let fig1 = pointwise(find(figs, "fig1")?, "D12");
    let intercept = fig1.first().map(|&(_, v)| v).unwrap_or(f64::NAN);
    out.push(landmark(
        "fig1_intercept",
        (intercept - 0.32).abs() < 1e-12,
        format!("D12(|y|=0) = {intercept}"),
    ));

    let fig2 = find(figs, "fig2")?;
    let (a, b) = (pointwise(fig2, "D12"), pointwise(fig2, "D34"));
    let diff: Vec<(f64, f64)> = a
        .iter()
        .zip(&b)
        .map(|(&(y, u), &(_, v))| (y, u - v))
        .collect();
    let changes: Vec<(f64, f64)> = diff
        .windows(2)
        .filter(|w| (w[0].1 > 0.0) != (w[1].1 > 0.0))
        .map(|w| (w[0].0, w[1].0))
        .collect();
    let root = crossing_y2(0.4)?.sqrt();
    let bracketed = changes.len() == 1 && changes[0].0 <= root && root <= changes[0].1;
    out.push(landmark(
        "fig2_crossing",
        bracketed,
        format!("sign changes at |y| in {changes:?}; crossing |y| = {root}"),
    ));

    for name in ["fig3", "fig4"] {
        let fig = find(figs, name)?;
        let (s12, s34, s56) = (
            pointwise(fig, "D12"),
            pointwise(fig, "D34"),
            pointwise(fig, "D56"),
        );
        let mut bad = 0;
        for ((&(y, v12), &(_, v34)), &(_, v56)) in s12.iter().zip(&s34).zip(&s56) {
            let ok = if y > 0.0 {
                v56 < v12 && v12 < v34
            } else {
                v56 <= v12 && v12 < v34
            };
            if !ok {
                bad += 1;
            }
        }
        out.push(landmark(
            if name == "fig3" {
                "fig3_ordering"
            } else {
                "fig4_ordering"
            },
            bad == 0 && !s12.is_empty(),
            format!("{bad} rows violate D56 < D12 < D34"),
        ));
    }

    let fig5 = find(figs, "fig5")?;
    let at_half = |series: &str| {
        fig5.series(series)
            .into_iter()
            .find(|r| r.param == 0.5)
            .map(|r| r.value)
    };
    let (s2, s3) = (at_half("S_L_r2"), at_half("S_L_r3"));
    let r_ok = matches!((s2, s3), (Some(u), Some(v)) if (u - 2.0 / 3.0).abs() < 1e-12 && (v - 2.0 / 3.0).abs() < 1e-12);
    out.push(landmark(
        "fig5_point_r",
        r_ok,
        format!("S_L_r2(0.5) = {s2:?}, S_L_r3(0.5) = {s3:?}"),
    ));
    Ok(out)
}
